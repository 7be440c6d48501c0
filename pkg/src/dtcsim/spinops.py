"""Operators and observables for a dipolar-coupled pair of spin-1/2 particles.

All operators are dense 4x4 complex matrices in the product Zeeman basis
{|uu>, |ud>, |du>, |dd>}. Angular frequencies are stored in rad/ms and times
in ms throughout the package; configuration files quote frequencies in kHz
and are converted on ingest (1 kHz corresponds to 2*pi rad/ms).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

DIM = 4

# Tolerances for density-matrix sanity checks. The dissipator is of Lindblad
# form (completely positive), so positivity violations beyond roundoff
# indicate a construction bug rather than physics.
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
POSITIVITY_TOL = 1e-10


class SpinAxis(enum.Enum):
    """Cartesian spin axis."""

    X = "x"
    Y = "y"
    Z = "z"


_SIGMA = {
    SpinAxis.X: np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    SpinAxis.Y: np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    SpinAxis.Z: np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


def pauli(axis: SpinAxis) -> np.ndarray:
    """Standard 2x2 Pauli matrix for the given axis."""
    return _SIGMA[axis].copy()


def spin_half(axis: SpinAxis) -> np.ndarray:
    """Single spin-1/2 operator, one half of the Pauli matrix."""
    return pauli(axis) / 2.0


def collective_spin(axis: SpinAxis) -> np.ndarray:
    """Collective pair operator: the spin-1/2 operator summed over both spins."""
    s = spin_half(axis)
    eye = np.eye(2, dtype=complex)
    return np.kron(s, eye) + np.kron(eye, s)


def pair_product(axis_a: SpinAxis, axis_b: SpinAxis) -> np.ndarray:
    """Two-spin product operator: spin-1/2 operator a on spin 1, b on spin 2."""
    return np.kron(spin_half(axis_a), spin_half(axis_b))


def dipolar_hamiltonian(omega_d0: float) -> np.ndarray:
    """Secular dipolar coupling of the pair, strength ``omega_d0`` in rad/ms.

    The operator is ``omega_d0 * (2 Iz.Iz - Ix.Ix - Iy.Iy)`` acting on the
    two-spin space. It is traceless and commutes with the collective z spin.
    """
    if not np.isfinite(omega_d0):
        raise ValueError(f"dipolar coupling must be finite, got {omega_d0}")
    x, y, z = SpinAxis.X, SpinAxis.Y, SpinAxis.Z
    return omega_d0 * (
        2.0 * pair_product(z, z) - pair_product(x, x) - pair_product(y, y)
    )


def drive_hamiltonian(omega: float, axis: SpinAxis) -> np.ndarray:
    """Resonant drive along ``axis``: ``omega`` times the collective spin."""
    if not np.isfinite(omega):
        raise ValueError(f"drive strength must be finite, got {omega}")
    return omega * collective_spin(axis)


def initial_state_plus_x() -> np.ndarray:
    """Pure product state with both spins polarised along +x.

    This is the state prepared by a pi/2 pulse from thermal z polarisation;
    its collective x magnetisation is exactly 1.
    """
    plus = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
    psi = np.kron(plus, plus)
    return np.outer(psi, psi.conj())


def check_density_matrix(rho: np.ndarray) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity of a 4x4 state.

    Returns the validated array (as complex ndarray). Raises ``ValueError``
    when any invariant is violated beyond the module tolerances.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (DIM, DIM):
        raise ValueError(f"density matrix must be {DIM}x{DIM}, got {rho.shape}")
    herm_defect = float(np.max(np.abs(rho - rho.conj().T)))
    if herm_defect > HERMITICITY_TOL:
        raise ValueError(f"density matrix not Hermitian (defect {herm_defect:.3e})")
    trace_defect = abs(np.trace(rho) - 1.0)
    if trace_defect > TRACE_TOL:
        raise ValueError(f"density matrix trace differs from 1 by {trace_defect:.3e}")
    min_eig = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2.0).min())
    if min_eig < -POSITIVITY_TOL:
        raise ValueError(f"density matrix not positive (min eigenvalue {min_eig:.3e})")
    return rho


@dataclass(frozen=True)
class ObservableSet:
    """The nine symmetric observables of the spin pair.

    ``m_x, m_y, m_z`` are collective single-spin magnetisations (trace against
    the collective spin operators), ``m_xx, m_yy, m_zz`` the diagonal two-spin
    correlations (trace against the plain product operators), and
    ``m_xy, m_yz, m_xz`` the symmetrised cross correlations.
    """

    m_x: float
    m_y: float
    m_z: float
    m_xx: float
    m_yy: float
    m_zz: float
    m_xy: float
    m_yz: float
    m_xz: float

    NAMES = ("m_x", "m_y", "m_z", "m_xx", "m_yy", "m_zz", "m_xy", "m_yz", "m_xz")

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in self.NAMES])

    @classmethod
    def from_array(cls, values) -> "ObservableSet":
        values = np.asarray(values, dtype=float)
        if values.shape != (9,):
            raise ValueError(f"expected 9 observable values, got shape {values.shape}")
        return cls(*values.tolist())


def _symmetrised(axis_a: SpinAxis, axis_b: SpinAxis) -> np.ndarray:
    return pair_product(axis_a, axis_b) + pair_product(axis_b, axis_a)


def _observable_stack() -> np.ndarray:
    x, y, z = SpinAxis.X, SpinAxis.Y, SpinAxis.Z
    ops = [
        collective_spin(x),
        collective_spin(y),
        collective_spin(z),
        pair_product(x, x),
        pair_product(y, y),
        pair_product(z, z),
        _symmetrised(x, y),
        _symmetrised(y, z),
        _symmetrised(x, z),
    ]
    return np.stack(ops)


# Stacked in ObservableSet.NAMES order; contracted against states in one shot.
_OBSERVABLE_OPS = _observable_stack()
_OBSERVABLE_OPS.setflags(write=False)


def observable_operators() -> np.ndarray:
    """Stack of the nine observable operators, shape (9, 4, 4), read only."""
    return _OBSERVABLE_OPS


def observables_from_states(states: np.ndarray) -> np.ndarray:
    """Trace the nine observables out of a stack of states.

    ``states`` has shape (n, 4, 4); the result has shape (n, 9) in
    ``ObservableSet.NAMES`` order. Values are real for Hermitian input.
    """
    states = np.asarray(states, dtype=complex)
    return np.einsum("kij,nji->nk", _OBSERVABLE_OPS, states).real


def extract_observables(rho: np.ndarray) -> ObservableSet:
    """Nine symmetric observables of a single density matrix."""
    rho = np.asarray(rho, dtype=complex)
    values = np.einsum("kij,ji->k", _OBSERVABLE_OPS, rho).real
    return ObservableSet.from_array(values)
