"""Multi-receiver magnetic resonant coupling wireless power transfer."""

from ._core import (  # noqa: F401
    BatchSummary,
    FeasibilityVerdict,
    InvalidScenario,
    NoFeasibleTrials,
    OptimizationResult,
    PowerReport,
    ProtocolConfig,
    ProtocolTrace,
    ReceiverSpec,
    ScenarioError,
    SingularMatrix,
    SystemScenario,
    TransmitterSpec,
    audit_violations,
    batch_run,
    bundled_scenario,
    check_feasibility,
    impedance_determinant,
    impedance_matrix,
    load_scenario,
    minimize_ptx,
    parse_scenario,
    peak_load,
    run_protocol,
    solve_closed_form,
    solve_oracle,
    sum_peak_load,
    sweep,
    verify,
)

__version__ = "0.1.0"
