from .scenario import (
    ScenarioKind,
    Segment,
    Scenario,
    load_scenarios,
    validate_scenarios,
    sample_indices,
    compose_utterance,
)
from .harness import (
    FILLER,
    ScriptedCaller,
    EmulationReport,
    CurvePoint,
    ReplayRun,
    ShiftSummary,
    run_session,
    replay_scenario,
    run_shift_scenarios,
    shift_summary,
    run_emulation,
    mean_saved_by_size,
    accuracy_by_size,
    write_emulation_csv,
    write_curves_csv,
)

__all__ = [
    # Scenarios
    "ScenarioKind",
    "Segment",
    "Scenario",
    "load_scenarios",
    "validate_scenarios",
    "sample_indices",
    "compose_utterance",
    # Harness
    "FILLER",
    "ScriptedCaller",
    "EmulationReport",
    "CurvePoint",
    "ReplayRun",
    "ShiftSummary",
    "run_session",
    "replay_scenario",
    "run_shift_scenarios",
    "shift_summary",
    "run_emulation",
    "mean_saved_by_size",
    "accuracy_by_size",
    "write_emulation_csv",
    "write_curves_csv",
]
