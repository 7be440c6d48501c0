"""Superoperator construction and Floquet-cycle propagation in Liouville space.

Density matrices are vectorised by column stacking, so ``vec(A rho B) =
(B^T kron A) vec(rho)``. The convention is internal: everything downstream
goes through :func:`apply_superop` semantics, so it could be swapped without
touching callers. All superoperators are dense 16x16 complex matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .spinops import (
    DIM,
    HERMITICITY_TOL,
    SpinAxis,
    dipolar_hamiltonian,
    drive_hamiltonian,
)

LIOUVILLE_DIM = DIM * DIM


class NumericalError(RuntimeError):
    """Raised when a propagation step produces non-finite numbers."""


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Column-stack a 4x4 matrix into a length-16 vector."""
    return np.asarray(rho, dtype=complex).reshape(LIOUVILLE_DIM, order="F")


def unvectorize(vec: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    return np.asarray(vec, dtype=complex).reshape(DIM, DIM, order="F")


def apply_superop(superop: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Apply a 16x16 superoperator to a 4x4 density matrix."""
    return unvectorize(superop @ vectorize(rho))


def _require_hermitian(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.shape != (DIM, DIM):
        raise ValueError(f"Hamiltonian must be {DIM}x{DIM}, got {h.shape}")
    defect = float(np.max(np.abs(h - h.conj().T)))
    if defect > HERMITICITY_TOL:
        raise ValueError(f"Hamiltonian not Hermitian (defect {defect:.3e})")
    return h


def _adjoint_commutator(h: np.ndarray) -> np.ndarray:
    """Superoperator for rho -> [H, rho] (no prefactor)."""
    eye = np.eye(DIM)
    return np.kron(eye, h) - np.kron(h.T, eye)


def commutator_superop(h: np.ndarray) -> np.ndarray:
    """Superoperator for the unitary generator rho -> -i [H, rho]."""
    return -1j * _adjoint_commutator(_require_hermitian(h))


def double_commutator_superop(h: np.ndarray, tau_c: float) -> np.ndarray:
    """Superoperator for the dissipator rho -> -tau_c [H, [H, rho]].

    Algebraically a Lindblad dissipator with Hermitian jump operator
    ``sqrt(2 tau_c) H``, so it is trace preserving and completely positive.
    """
    if tau_c < 0:
        raise ValueError(f"correlation time must be nonnegative, got {tau_c}")
    c = _adjoint_commutator(_require_hermitian(h))
    return -tau_c * (c @ c)


def secular_liouvillian(omega_1: float, omega_d0: float, tau_c: float) -> np.ndarray:
    """Generator of the spin-lock segment.

    First-order commutator plus the fluctuation-regulated second-order double
    commutator of the x drive and the secular dipolar coupling.
    """
    h = drive_hamiltonian(omega_1, SpinAxis.X) + dipolar_hamiltonian(omega_d0)
    return commutator_superop(h) + double_commutator_superop(h, tau_c)


def rotation_liouvillian(omega_2: float) -> np.ndarray:
    """Generator of the y-axis rotation pulse, strictly first order.

    Dissipation is neglected during the pulse (it is short compared to the
    spin-lock segment). Rotation sense: evolving for time t turns +x
    magnetisation towards +z, i.e. M_x -> M_x cos(omega_2 t) and
    M_z -> M_x sin(omega_2 t).
    """
    return commutator_superop(drive_hamiltonian(-omega_2, SpinAxis.Y))


def matrix_exponential(superop: np.ndarray, t: float) -> np.ndarray:
    """Propagator exp(S t) of a superoperator over a nonnegative time.

    Uses scaling and squaring with Pade approximation (degree up to 13),
    which needs no diagonalisability assumption; the generator is non-normal
    whenever the dissipator is active.
    """
    if t < 0:
        raise ValueError(f"propagation time must be nonnegative, got {t}")
    superop = np.asarray(superop, dtype=complex)
    if not np.all(np.isfinite(superop)):
        raise NumericalError("superoperator contains non-finite entries")
    result = scipy.linalg.expm(superop * t)
    if not np.all(np.isfinite(result)):
        raise NumericalError(f"matrix exponential overflowed at t={t}")
    return result


@lru_cache(maxsize=512)
def _spinlock_exponential(
    omega_1: float, omega_d0: float, tau_c: float, t: float
) -> np.ndarray:
    e = matrix_exponential(secular_liouvillian(omega_1, omega_d0, tau_c), t)
    e.setflags(write=False)
    return e


@lru_cache(maxsize=512)
def _rotation_exponential(omega_2: float, t: float) -> np.ndarray:
    e = matrix_exponential(rotation_liouvillian(omega_2), t)
    e.setflags(write=False)
    return e


def spinlock_propagator(
    omega_1: float, omega_d0: float, tau_c: float, t: float
) -> np.ndarray:
    """Cached exp of the spin-lock generator over time ``t``. Read only."""
    return _spinlock_exponential(float(omega_1), float(omega_d0), float(tau_c), float(t))


def rotation_propagator(omega_2: float, t: float) -> np.ndarray:
    """Cached exp of the rotation generator over time ``t``. Read only."""
    return _rotation_exponential(float(omega_2), float(t))


@dataclass(frozen=True)
class CyclePropagator:
    """Single Floquet-cycle map: rotation exponential times spin-lock exponential."""

    matrix: np.ndarray
    tau_1: float
    tau_2: float

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return apply_superop(self.matrix, rho)


def cycle_propagator(cfg) -> CyclePropagator:
    """Build the one-cycle propagator for a protocol configuration.

    ``cfg`` needs attributes omega_1, omega_2, omega_d0, tau_c, tau_1, tau_2.
    The two exponentials are cached on their own parameter tuples, so sweeps
    that move only one pulse axis rebuild only one factor.
    """
    e1 = spinlock_propagator(cfg.omega_1, cfg.omega_d0, cfg.tau_c, cfg.tau_1)
    e2 = rotation_propagator(cfg.omega_2, cfg.tau_2)
    return CyclePropagator(matrix=e2 @ e1, tau_1=float(cfg.tau_1), tau_2=float(cfg.tau_2))
