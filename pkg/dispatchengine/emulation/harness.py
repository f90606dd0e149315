"""Emulated calls against a DispatchEngine.

Cooperative scenarios open with a composed utterance of ``size`` segments
and then answer each question from their tagged segments; saved turns count
the report fields that were filled without being asked. Shift and control
scenarios replay one segment per caller turn and record the per-turn
positive-vote share of their incident types.
"""

import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from dispatchengine.core.engine import DispatchEngine
from dispatchengine.core.interface import ActionKind, SystemAction
from dispatchengine.core.session import Session
from dispatchengine.emulation.scenario import Scenario, ScenarioKind, sample_indices

logger = logging.getLogger(__name__)

FILLER = "I'm not sure."
SHIFT_WINDOW = 3  # Turns after the shift segment allowed for the report to follow


class ScriptedCaller:
    """Answers questions from a scenario's tagged segments.

    A question is answered with the first unspoken segment tagged with the
    asked field, falling back to an already spoken one, then to a filler.
    """

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.spoken: Set[int] = set()

    def open(self, size: int, seed: int) -> str:
        indices = sample_indices(self.scenario, size, seed)
        self.spoken.update(indices)
        return " ".join(self.scenario.segments[i].text for i in indices)

    def reply(self, action: Optional[SystemAction]) -> str:
        if action is None or action.kind not in (ActionKind.ASK, ActionKind.CLARIFY):
            return FILLER
        tagged = [
            i for i, seg in enumerate(self.scenario.segments) if action.field_id in seg.answers
        ]
        if not tagged:
            return FILLER
        fresh = [i for i in tagged if i not in self.spoken]
        choice = fresh[0] if fresh else tagged[0]
        self.spoken.add(choice)
        return self.scenario.segments[choice].text


@dataclass(frozen=True)
class EmulationReport:
    """Outcome of one emulated call"""

    scenario_id: str
    utterance_size: int
    seed: int
    saved_turns: int
    asked_turns: int
    baseline_question_count: int
    type_correct: bool
    terminated: bool
    termination_reason: Optional[str] = None
    caller_turns: int = 0


@dataclass(frozen=True)
class CurvePoint:
    scenario_id: str
    turn: int
    type_id: str
    conf: float


@dataclass
class ReplayRun:
    """A shift or control scenario replayed one segment per turn"""

    scenario: Scenario
    curves: List[CurvePoint] = field(default_factory=list)
    confirmed_by_turn: Dict[int, Set[str]] = field(default_factory=dict)
    termination_reason: Optional[str] = None


@dataclass(frozen=True)
class ShiftSummary:
    scenario_id: str
    shift_turn: Optional[int]
    confirmed_turn: Optional[int]  # First turn the expected types were all confirmed
    demoted_turn: Optional[int]  # First turn at or after the shift with no old type confirmed
    stable: bool  # Expected types stayed confirmed after their first confirmation

    @property
    def handled(self) -> bool:
        """The report followed the shift within SHIFT_WINDOW turns."""
        if self.shift_turn is None:
            return self.confirmed_turn is not None and self.stable
        limit = self.shift_turn + SHIFT_WINDOW
        return (
            self.confirmed_turn is not None
            and self.demoted_turn is not None
            and self.confirmed_turn <= limit
            and self.demoted_turn <= limit
        )


def _summarize_session(
    session: Session, scenario: Scenario, size: int, seed: int
) -> EmulationReport:
    report = session.report
    asked = set(session.asked_fields)
    saved = sum(1 for fid in report.done_fields() if fid not in asked)
    return EmulationReport(
        scenario_id=scenario.id,
        utterance_size=size,
        seed=seed,
        saved_turns=saved,
        asked_turns=len(asked),
        baseline_question_count=len(report.slots),
        type_correct=set(report.confirmed_types) == scenario.label_types,
        terminated=not session.active,
        termination_reason=session.termination_reason,
        caller_turns=session.caller_turns,
    )


def run_session(
    scenario: Scenario,
    size: int,
    engine: DispatchEngine,
    seed: int,
    transcript_dir: Optional[Union[str, Path]] = None,
) -> EmulationReport:
    """Emulate one call opening with a composed utterance of ``size`` segments."""
    caller = ScriptedCaller(scenario)
    text = caller.open(size, seed)
    session = engine.start_session(f"{scenario.id}-s{size}-r{seed}")
    max_steps = engine.policy.turn_bound(len(engine.tree.fields)) + 1
    try:
        for _ in range(max_steps):
            if not session.active:
                break
            engine.step(session, text)
            text = caller.reply(session.last_action)
        if session.active:
            logger.error(f"Emulated session {session.session_id} did not terminate")
        if transcript_dir is not None:
            session.write_transcript(Path(transcript_dir) / f"{session.session_id}.ndjson")
        return _summarize_session(session, scenario, size, seed)
    finally:
        engine.remove_session(session.session_id)


def replay_scenario(scenario: Scenario, engine: DispatchEngine) -> ReplayRun:
    """Speak the scenario's segments in order, one per caller turn."""
    session = engine.start_session(f"{scenario.id}-replay")
    run = ReplayRun(scenario)
    try:
        for segment in scenario.segments:
            if not session.active:
                break
            engine.step(session, segment.text)
            run.confirmed_by_turn[session.caller_turns] = set(session.report.confirmed_types)

        tracked = sorted(scenario.label_types | scenario.shift_from)
        history = session.report.type_confidence_history
        run.curves = [
            CurvePoint(scenario.id, turn, type_id, conf)
            for type_id in tracked
            for turn, conf in history.get(type_id, [])
        ]
        run.curves.sort(key=lambda p: (p.turn, p.type_id))
        run.termination_reason = session.termination_reason
        return run
    finally:
        engine.remove_session(session.session_id)


def run_shift_scenarios(
    scenarios: Iterable[Scenario], engine: DispatchEngine
) -> Tuple[List[ReplayRun], List[CurvePoint]]:
    """Replay every shift and control scenario; returns the runs and their curve rows."""
    runs = [
        replay_scenario(sc, engine)
        for sc in scenarios
        if sc.kind in (ScenarioKind.SHIFT, ScenarioKind.CONTROL)
    ]
    curves = [point for run in runs for point in run.curves]
    logger.info(f"Replayed {len(runs)} shift/control scenarios ({len(curves)} curve points)")
    return runs, curves


def shift_summary(run: ReplayRun) -> ShiftSummary:
    scenario = run.scenario
    start = scenario.shift_turn or 1
    turns = sorted(run.confirmed_by_turn)

    confirmed_turn = next(
        (t for t in turns if t >= start and scenario.label_types <= run.confirmed_by_turn[t]),
        None,
    )
    demoted_turn = None
    if scenario.shift_from:
        demoted_turn = next(
            (t for t in turns if t >= start and not scenario.shift_from & run.confirmed_by_turn[t]),
            None,
        )
    stable = confirmed_turn is not None and all(
        scenario.label_types <= run.confirmed_by_turn[t] for t in turns if t >= confirmed_turn
    )
    return ShiftSummary(scenario.id, scenario.shift_turn, confirmed_turn, demoted_turn, stable)


def run_emulation(
    engine: DispatchEngine,
    scenarios: Iterable[Scenario],
    sizes: Sequence[int],
    runs: int,
    workers: int = 4,
    transcript_dir: Optional[Union[str, Path]] = None,
) -> List[EmulationReport]:
    """Run every (cooperative scenario, size, seed) job on a bounded worker pool.

    Sizes larger than a scenario's segment count are skipped for that
    scenario. Seeds that sample the same opening segments replay the same
    call, so each distinct opening is emulated once and its report is
    copied to the other seeds; with ``transcript_dir`` every seed runs so
    each gets its own transcript. Results are sorted by (scenario, size,
    seed), so the output does not depend on scheduling.
    """
    if any(size <= 0 for size in sizes):
        raise ValueError("utterance sizes must be positive")
    if runs <= 0:
        raise ValueError("runs must be positive")

    openings: Dict[Tuple[object, ...], List[Tuple[Scenario, int, int]]] = {}
    for sc in scenarios:
        if sc.kind is not ScenarioKind.COOPERATIVE:
            continue
        for size in sizes:
            if size > len(sc.segments):
                logger.warning(f"Skipping size {size} for '{sc.id}' ({len(sc.segments)} segments)")
                continue
            for seed in range(runs):
                key: Tuple[object, ...] = (sc.id, size, tuple(sample_indices(sc, size, seed)))
                if transcript_dir is not None:
                    key += (seed,)
                openings.setdefault(key, []).append((sc, size, seed))

    n_jobs = sum(len(group) for group in openings.values())
    logger.info(
        f"Running {n_jobs} emulated sessions ({len(openings)} distinct openings) on {workers} workers"
    )

    def emulate(group: List[Tuple[Scenario, int, int]]) -> EmulationReport:
        scenario, size, seed = group[0]
        return run_session(scenario, size, engine, seed, transcript_dir)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        first = list(executor.map(emulate, openings.values()))
    reports = [
        replace(report, seed=seed)
        for report, group in zip(first, openings.values())
        for _, _, seed in group
    ]
    reports.sort(key=lambda r: (r.scenario_id, r.utterance_size, r.seed))
    return reports


def mean_saved_by_size(reports: Iterable[EmulationReport]) -> Dict[int, float]:
    by_size: Dict[int, List[int]] = {}
    for r in reports:
        by_size.setdefault(r.utterance_size, []).append(r.saved_turns)
    return {size: float(np.mean(vals)) for size, vals in sorted(by_size.items())}


def accuracy_by_size(reports: Iterable[EmulationReport]) -> Dict[int, float]:
    by_size: Dict[int, List[bool]] = {}
    for r in reports:
        by_size.setdefault(r.utterance_size, []).append(r.type_correct)
    return {size: float(np.mean(vals)) for size, vals in sorted(by_size.items())}


def write_emulation_csv(reports: Iterable[EmulationReport], path: Union[str, Path]) -> None:
    columns = [
        "scenario_id",
        "utterance_size",
        "seed",
        "saved_turns",
        "asked_turns",
        "baseline_question_count",
        "type_correct",
        "terminated",
        "termination_reason",
    ]
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=columns, extrasaction="ignore")
        writer.writeheader()
        for r in reports:
            writer.writerow(asdict(r))


def write_curves_csv(points: Iterable[CurvePoint], path: Union[str, Path]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["scenario_id", "turn", "type", "conf"])
        for p in points:
            writer.writerow([p.scenario_id, p.turn, p.type_id, f"{p.conf:.4f}"])
