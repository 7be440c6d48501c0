"""Reduced observable dynamics, closed-form solutions, and spectral analysis.

Under the spin-lock generator the nine symmetric observables split into two
decoupled four-component blocks, {M_x, M_zz, M_yy, M_yz} and
{M_z, M_y, M_xz, M_xy}. The block ODEs integrated here are deliberately
independent of the Liouville-space machinery and serve as oracles for it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class ObservableGroup(enum.Enum):
    """The two decoupled observable blocks of the spin-lock dynamics."""

    GROUP1 = ("m_x", "m_zz", "m_yy", "m_yz")
    GROUP2 = ("m_z", "m_y", "m_xz", "m_xy")

    @property
    def components(self) -> tuple[str, ...]:
        return self.value


@dataclass(frozen=True)
class ReducedState4:
    """Four observables of one block, tagged with their group."""

    values: np.ndarray
    group: ObservableGroup

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (4,):
            raise ValueError(f"reduced state needs 4 components, got {values.shape}")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class SpinLockParams:
    """Spin-lock parameters entering the reduced blocks (rad/ms, rad/ms, ms)."""

    omega_1: float
    omega_d0: float
    tau_c: float


def kappa_1(omega_1: float, omega_d0: float) -> float:
    """Characteristic spin-lock frequency, kappa_1^2 = 4 w1^2 + (9/4) wd^2."""
    return math.sqrt(4.0 * omega_1**2 + 2.25 * omega_d0**2)


def group1_generator(omega_1: float, omega_d0: float, tau_c: float) -> np.ndarray:
    """Linear generator of the (M_x, M_zz, M_yy, M_yz) block."""
    w1, wd, tc = omega_1, omega_d0, tau_c
    k2 = 4.0 * w1**2 + 2.25 * wd**2
    return np.array(
        [
            [-2.25 * wd**2 * tc, 6.0 * w1 * wd * tc, -6.0 * w1 * wd * tc, -3.0 * wd],
            [0.75 * w1 * wd * tc, -2.0 * w1**2 * tc, 2.0 * w1**2 * tc, w1],
            [-0.75 * w1 * wd * tc, 2.0 * w1**2 * tc, -2.0 * w1**2 * tc, -w1],
            [0.75 * wd, -2.0 * w1, 2.0 * w1, -k2 * tc],
        ]
    )


def group2_generator(omega_1: float, omega_d0: float, tau_c: float) -> np.ndarray:
    """Linear generator of the (M_z, M_y, M_xz, M_xy) block.

    The M_xy row couples to M_xz with -omega_1; that coupling is what keeps
    the block closed, and it matches the full 16-dimensional generator.
    """
    w1, wd, tc = omega_1, omega_d0, tau_c
    g2 = (w1**2 + 2.25 * wd**2) * tc
    return np.array(
        [
            [-(w1**2) * tc, w1, 3.0 * w1 * wd * tc, 0.0],
            [-w1, -g2, 3.0 * wd, 3.0 * w1 * wd * tc],
            [0.75 * w1 * wd * tc, -0.75 * wd, -g2, w1],
            [0.0, 0.75 * w1 * wd * tc, -w1, -(w1**2) * tc],
        ]
    )


_GENERATORS = {
    ObservableGroup.GROUP1: group1_generator,
    ObservableGroup.GROUP2: group2_generator,
}


def _rhs(state: ReducedState4, group: ObservableGroup, omega_1, omega_d0, tau_c):
    if state.group is not group:
        raise ValueError(f"state is tagged {state.group.name}, expected {group.name}")
    gen = _GENERATORS[group](omega_1, omega_d0, tau_c)
    return ReducedState4(gen @ state.values, group)


def group1_rhs(state: ReducedState4, omega_1: float, omega_d0: float, tau_c: float):
    """Time derivative of a group-1 state."""
    return _rhs(state, ObservableGroup.GROUP1, omega_1, omega_d0, tau_c)


def group2_rhs(state: ReducedState4, omega_1: float, omega_d0: float, tau_c: float):
    """Time derivative of a group-2 state."""
    return _rhs(state, ObservableGroup.GROUP2, omega_1, omega_d0, tau_c)


def max_stable_step(omega_1: float, omega_d0: float) -> float:
    """Largest integration step admitted for the reduced blocks."""
    scale = max(abs(omega_1), kappa_1(omega_1, omega_d0))
    if scale == 0.0:
        return math.inf
    return 0.01 / scale


def _rk4_step(gen: np.ndarray, v: np.ndarray, h: float) -> np.ndarray:
    k1 = gen @ v
    k2 = gen @ (v + 0.5 * h * k1)
    k3 = gen @ (v + 0.5 * h * k2)
    k4 = gen @ (v + h * k3)
    return v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_reduced(
    state0: ReducedState4, params, t: float, dt: float | None = None
) -> ReducedState4:
    """Classic fixed-step RK4 integration of a reduced block over time ``t``.

    ``params`` is anything exposing omega_1, omega_d0 and tau_c attributes.
    The step must satisfy dt <= 0.01 / max(omega_1, kappa_1); fixed stepping
    keeps the oracle bit-reproducible across runs.
    """
    if t < 0:
        raise ValueError(f"integration time must be nonnegative, got {t}")
    limit = max_stable_step(params.omega_1, params.omega_d0)
    if dt is None:
        dt = min(limit, t) if t > 0 else limit
    if dt <= 0:
        raise ValueError(f"step size must be positive, got {dt}")
    if dt > limit * (1.0 + 1e-12):
        raise ValueError(f"step size {dt:.3e} exceeds stability limit {limit:.3e}")
    gen = _GENERATORS[state0.group](params.omega_1, params.omega_d0, params.tau_c)
    v = state0.values.copy()
    if t == 0.0:
        return ReducedState4(v, state0.group)
    n_full = int(t / dt)
    for _ in range(n_full):
        v = _rk4_step(gen, v, dt)
    rem = t - n_full * dt
    if rem > 1e-12 * dt:
        v = _rk4_step(gen, v, rem)
    return ReducedState4(v, state0.group)


def integrate_reduced_trajectory(
    state0: ReducedState4, params, times, dt: float | None = None
) -> np.ndarray:
    """Reduced-block values at a nondecreasing list of times, shape (len, 4)."""
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) < 0):
        raise ValueError("sample times must be nondecreasing")
    out = np.empty((times.size, 4))
    state = state0
    prev = 0.0
    for i, t in enumerate(times):
        state = integrate_reduced(state, params, t - prev, dt=dt)
        out[i] = state.values
        prev = t
    return out


def mx_pre_oracle(m0: float, t: float, params, dt: float | None = None) -> float:
    """Spin-locked M_x(t) from (m0, 0, 0, 0), by group-1 integration."""
    state0 = ReducedState4(np.array([m0, 0.0, 0.0, 0.0]), ObservableGroup.GROUP1)
    return float(integrate_reduced(state0, params, t, dt=dt).values[0])


def mz_pre_oracle(m0: float, t: float, params, dt: float | None = None) -> float:
    """Spin-locked M_z(t) from (m0, 0, 0, 0), by group-2 integration."""
    state0 = ReducedState4(np.array([m0, 0.0, 0.0, 0.0]), ObservableGroup.GROUP2)
    return float(integrate_reduced(state0, params, t, dt=dt).values[0])


def analytic_mx_pre(
    m0: float, t: float, omega_1: float, omega_d0: float, tau_c: float
) -> float:
    """Closed-form spin-locked M_x(t): plateau plus damped cosine.

    Valid in the strong-drive regime omega_1 >> omega_d0; the caller is
    responsible for staying there. The t -> inf plateau 4 w1^2 / kappa_1^2 is
    exact for any parameters (it is pinned by the conserved quantities).
    """
    k2 = 4.0 * omega_1**2 + 2.25 * omega_d0**2
    if k2 == 0.0:
        return m0
    k1 = math.sqrt(k2)
    plateau = 4.0 * omega_1**2 / k2
    ringing = 2.25 * omega_d0**2 / k2
    return m0 * (plateau + ringing * math.cos(k1 * t) * math.exp(-k2 * t * tau_c))


def analytic_mz_pre(m_alpha: float, t: float, omega_1: float, tau_c: float) -> float:
    """Closed-form spin-locked M_z(t): cosine under a drive-induced envelope.

    Strong-drive approximation (omega_1 >> omega_d0); evaluates unconditionally.
    """
    return m_alpha * math.cos(omega_1 * t) * math.exp(-(omega_1**2) * tau_c * t)


def compose_2tau(m0: float, theta: float, tau_1: float, params) -> float:
    """M_x after two full cycles, composed from the reduced-block oracles.

    Each cycle is a spin-lock segment followed by a rotation through ``theta``
    about y. The rotation maps (M_x, M_z) -> (M_x cos - M_z sin,
    M_x sin + M_z cos); composing two cycles from a pure-x start gives

        M_x(2 tau) = cos^2(theta) * Mx_pre(Mx_pre(m0)) - sin^2(theta) * Mz_pre(Mx_pre(m0))

    with both pre maps integrated over ``tau_1``. Near theta = pi the second
    term is the delta^2 imperfection term; it dies with the Mz_pre envelope.
    """
    p1 = mx_pre_oracle(m0, tau_1, params)
    q = mx_pre_oracle(p1, tau_1, params)
    r = mz_pre_oracle(p1, tau_1, params)
    c, s = math.cos(theta), math.sin(theta)
    return c * c * q - s * s * r


@dataclass(frozen=True)
class SpectrumResult:
    """DFT magnitudes of a stroboscopic series on the grid nu_k = k/n."""

    frequencies: np.ndarray
    power: np.ndarray
    crystalline_fraction: float

    @property
    def omega_rad(self) -> np.ndarray:
        """Same bins on the radians-per-cycle axis (nu = 0.5 maps to pi)."""
        return 2.0 * np.pi * self.frequencies


def spectrum(series, n: int | None = None) -> SpectrumResult:
    """Normalised DFT power of a real stroboscopic series.

    ``S(nu_k) = (1/n) sum_j series_j exp(-2 pi i nu_k j)`` with nu_k = k/n, so
    a pure alternating series puts unit magnitude at nu = 0.5 regardless of n.
    ``n`` must be even so the half-harmonic lies exactly on the grid.
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"series must be one dimensional, got shape {x.shape}")
    if n is None:
        n = x.size
    if n != x.size:
        raise ValueError(f"series has {x.size} samples, expected n={n}")
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    if n % 2 != 0:
        raise ValueError(
            f"n={n} is odd so nu=0.5 is off the frequency grid; use an even n_cycles"
        )
    amplitudes = np.fft.fft(x) / n
    power = np.abs(amplitudes) ** 2
    total = power.sum()
    # All-zero input carries no spectral weight anywhere; report fraction 0.
    fraction = float(power[n // 2] / total) if total > 0 else 0.0
    return SpectrumResult(
        frequencies=np.arange(n) / n, power=power, crystalline_fraction=fraction
    )


def crystalline_fraction(spec: SpectrumResult) -> float:
    """Spectral weight at the half harmonic relative to the total weight.

    Values of 0.1 and above mark the time-crystalline phase.
    """
    total = float(spec.power.sum())
    if total <= 0.0:
        raise ValueError("spectrum carries no power; crystalline fraction undefined")
    idx = int(np.argmin(np.abs(spec.frequencies - 0.5)))
    if not math.isclose(float(spec.frequencies[idx]), 0.5, abs_tol=1e-12):
        raise ValueError("nu = 0.5 is not on the frequency grid (odd sample count?)")
    return float(spec.power[idx] / total)


DTC_PHASE_BOUNDARY = 0.1
