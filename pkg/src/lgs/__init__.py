"""Simulator for photon-atom hybrid quantum gates in a single-sided cavity.

The photon's polarization is the flying control qubit; atoms trapped in
cavities hold the stationary qubits.  Gates are optical circuits whose
cavity visits follow either the ideal strong-coupling scattering rules or
the finite-rate reflection coefficients, so truth tables, fidelities, and
efficiencies can be evaluated for both.
"""

from .cavity import (
    CavityParams,
    PulseResult,
    ScatterCoeffs,
    cold_coeff,
    hot_coeffs,
    integrate_pulse,
    scatter_coeffs,
    scatter_ideal,
    scatter_real,
)
from .circuits import (
    Circuit,
    GateKind,
    build_cnot,
    build_fredkin,
    build_gate,
    build_toffoli,
    circuit_text,
    element_count,
    matches_target,
    run_circuit,
    table_permutation,
    target_ket,
    truth_table,
)
from .elements import (
    CavityVisit,
    Hwp,
    Mirror,
    PbsMerge,
    PbsSplit,
    WiringError,
    hwp,
    mirror,
    pbs_merge,
    pbs_split,
)
from .literals import format_state, parse_state_literal
from .metrics import (
    MetricConfig,
    SweepResult,
    efficiency,
    efficiency_at,
    fidelity,
    fidelity_at,
    ideal_reference,
    run_regression,
    sweep,
)
from .state import (
    AtomGround,
    BasisKet,
    HybridState,
    Polarization,
    apply_polarization_map,
    equal_up_to_global_phase,
    inner_product,
    make_product_state,
    norm_squared,
)

__version__ = "0.1.0"
