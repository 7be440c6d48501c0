"""Two-pulse Floquet protocol: n cycles of spin-lock followed by a y rotation."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import liouville
from .spinops import (
    ObservableSet,
    SpinAxis,
    check_density_matrix,
    collective_spin,
    initial_state_plus_x,
    observables_from_states,
)


class SamplePoint(enum.Enum):
    """Instant within each cycle at which observables are recorded."""

    AFTER_SPINLOCK = "after_spinlock"
    AFTER_ROTATION = "after_rotation"
    DENSE = "dense"


@dataclass(frozen=True)
class ProtocolConfig:
    """Physical and pulse parameters of the two-pulse protocol.

    Frequencies are angular (rad/ms), times in ms. ``theta = omega_2 * tau_2``
    is the rotation angle; the imperfection ``delta = theta - pi`` is always
    derived from it, never stored separately.
    """

    omega_1: float
    omega_2: float
    omega_d0: float
    tau_c: float
    tau_1: float
    tau_2: float
    n_cycles: int

    def __post_init__(self):
        for name in ("omega_1", "omega_2", "omega_d0", "tau_c", "tau_1", "tau_2"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
        for name in ("tau_c", "tau_1", "tau_2"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative, got {getattr(self, name)}")
        if self.n_cycles < 1:
            raise ValueError(f"n_cycles must be at least 1, got {self.n_cycles}")

    @property
    def theta(self) -> float:
        return self.omega_2 * self.tau_2

    @property
    def delta(self) -> float:
        return self.theta - math.pi

    @property
    def tau(self) -> float:
        return self.tau_1 + self.tau_2


@dataclass(frozen=True)
class TimeSeries:
    """Observables recorded along a protocol run.

    ``values`` holds one row per sample in ``ObservableSet.NAMES`` order;
    entry 0 is always the initial state. For dense runs ``in_spinlock`` marks
    the samples taken inside spin-lock segments (the rotation endpoint and
    the initial point are unmarked).
    """

    cycle_index: np.ndarray
    time_ms: np.ndarray
    values: np.ndarray
    sample_point: SamplePoint
    final_state: np.ndarray
    in_spinlock: np.ndarray | None = None

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def observables(self) -> tuple[ObservableSet, ...]:
        return tuple(ObservableSet.from_array(row) for row in self.values)

    def column(self, name: str) -> np.ndarray:
        return self.values[:, ObservableSet.NAMES.index(name)]

    @property
    def mx(self) -> np.ndarray:
        return self.column("m_x")

    @property
    def my(self) -> np.ndarray:
        return self.column("m_y")

    @property
    def mz(self) -> np.ndarray:
        return self.column("m_z")


def _propagators(cfg: ProtocolConfig):
    spinlock = liouville.spinlock_propagator(
        cfg.omega_1, cfg.omega_d0, cfg.tau_c, cfg.tau_1
    )
    rotation = liouville.rotation_propagator(cfg.omega_2, cfg.tau_2)
    return spinlock, rotation


def _check_finite(vec: np.ndarray, cycle: int):
    if not np.all(np.isfinite(vec)):
        raise liouville.NumericalError(f"state became non-finite at cycle {cycle}")


def run_protocol(
    cfg: ProtocolConfig,
    rho0: np.ndarray | None = None,
    sample_point: SamplePoint = SamplePoint.AFTER_ROTATION,
) -> TimeSeries:
    """Run the protocol for n cycles, sampling once per cycle.

    Sampling defaults to the end of each full cycle; the end of the spin-lock
    segment is available because the two instants bracket the rotation pulse.
    The returned series has n_cycles + 1 entries including the initial point,
    and its ``final_state`` equals the one-cycle propagator applied n times.
    """
    if sample_point is SamplePoint.DENSE:
        raise ValueError("dense sampling lives in run_protocol_dense")
    if rho0 is None:
        rho0 = initial_state_plus_x()
    rho0 = check_density_matrix(rho0)
    spinlock, rotation = _propagators(cfg)
    v = liouville.vectorize(rho0)
    vecs = [v]
    times = [0.0]
    for k in range(1, cfg.n_cycles + 1):
        v = spinlock @ v
        if sample_point is SamplePoint.AFTER_SPINLOCK:
            vecs.append(v)
            times.append((k - 1) * cfg.tau + cfg.tau_1)
        v = rotation @ v
        if sample_point is SamplePoint.AFTER_ROTATION:
            vecs.append(v)
            times.append(k * cfg.tau)
        _check_finite(v, k)
    states = np.stack([liouville.unvectorize(w) for w in vecs])
    return TimeSeries(
        cycle_index=np.arange(cfg.n_cycles + 1),
        time_ms=np.array(times),
        values=observables_from_states(states),
        sample_point=sample_point,
        final_state=liouville.unvectorize(v),
    )


def run_protocol_dense(
    cfg: ProtocolConfig, rho0: np.ndarray | None = None, substeps: int = 1
) -> TimeSeries:
    """Run the protocol with intra-cycle resolution.

    Each spin-lock segment is sampled at ``substeps`` evenly spaced times;
    the rotation segment contributes only its endpoint. With substeps = 1 the
    in-segment samples coincide with AFTER_SPINLOCK sampling of
    :func:`run_protocol`.
    """
    if substeps < 1:
        raise ValueError(f"substeps must be at least 1, got {substeps}")
    if rho0 is None:
        rho0 = initial_state_plus_x()
    rho0 = check_density_matrix(rho0)
    sub = liouville.spinlock_propagator(
        cfg.omega_1, cfg.omega_d0, cfg.tau_c, cfg.tau_1 / substeps
    )
    rotation = liouville.rotation_propagator(cfg.omega_2, cfg.tau_2)
    v = liouville.vectorize(rho0)
    vecs = [v]
    times = [0.0]
    cycles = [0]
    marks = [False]
    for k in range(1, cfg.n_cycles + 1):
        start = (k - 1) * cfg.tau
        for j in range(1, substeps + 1):
            v = sub @ v
            vecs.append(v)
            times.append(start + j * cfg.tau_1 / substeps)
            cycles.append(k)
            marks.append(True)
        v = rotation @ v
        vecs.append(v)
        times.append(k * cfg.tau)
        cycles.append(k)
        marks.append(False)
        _check_finite(v, k)
    states = np.stack([liouville.unvectorize(w) for w in vecs])
    return TimeSeries(
        cycle_index=np.array(cycles),
        time_ms=np.array(times),
        values=observables_from_states(states),
        sample_point=SamplePoint.DENSE,
        final_state=liouville.unvectorize(v),
        in_spinlock=np.array(marks),
    )


_MX_WEIGHT = liouville.vectorize(collective_spin(SpinAxis.X).T)


def stroboscopic_mx(cfg: ProtocolConfig, rho0: np.ndarray | None = None) -> np.ndarray:
    """M_x after each full cycle, cycles 1..n. Lean path for sweeps/spectra."""
    if rho0 is None:
        rho0 = initial_state_plus_x()
    cycle = liouville.cycle_propagator(cfg).matrix
    v = liouville.vectorize(rho0)
    out = np.empty(cfg.n_cycles)
    for k in range(cfg.n_cycles):
        v = cycle @ v
        out[k] = (_MX_WEIGHT @ v).real
    if not np.all(np.isfinite(out)):
        raise liouville.NumericalError("stroboscopic M_x became non-finite")
    return out
