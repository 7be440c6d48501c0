"""Simulator and analysis toolkit for discrete time-crystalline phases of a
dissipative dipolar-coupled spin pair driven by a two-pulse Floquet protocol."""

from .analytics import (
    ObservableGroup,
    ReducedState4,
    SpectrumResult,
    SpinLockParams,
    analytic_mx_pre,
    analytic_mz_pre,
    compose_2tau,
    crystalline_fraction,
    group1_rhs,
    group2_rhs,
    integrate_reduced,
    kappa_1,
    spectrum,
)
from .liouville import (
    CyclePropagator,
    NumericalError,
    commutator_superop,
    cycle_propagator,
    double_commutator_superop,
    matrix_exponential,
    rotation_liouvillian,
    secular_liouvillian,
)
from .protocol import (
    ProtocolConfig,
    SamplePoint,
    TimeSeries,
    run_protocol,
    run_protocol_dense,
    stroboscopic_mx,
)
from .spinops import (
    ObservableSet,
    SpinAxis,
    check_density_matrix,
    collective_spin,
    dipolar_hamiltonian,
    drive_hamiltonian,
    extract_observables,
    initial_state_plus_x,
    pauli,
)

__version__ = "0.1.0"
