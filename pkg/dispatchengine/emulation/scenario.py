import logging
from enum import Enum
from pathlib import Path
from typing import List, Optional, Set, Union

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from dispatchengine.core.errors import ConfigError
from dispatchengine.models.phone_tree import PhoneTree, format_validation_error, read_json
from dispatchengine.utils.utils import derive_seed, resolve_config_path

logger = logging.getLogger(__name__)

SCENARIOS_FILE = "scenarios.json"


class ScenarioKind(Enum):
    COOPERATIVE = "cooperative"  # Composed-utterance saved-turns runs
    SHIFT = "shift"  # Incident type changes at shift_turn
    CONTROL = "control"  # Replayed like a shift scenario, without a shift


class Segment(BaseModel):
    """A piece of caller speech tagged with the fields it answers"""

    text: str = Field(min_length=1, description="Caller text")
    answers: List[str] = Field(default_factory=list, description="Field ids this segment answers")


class Scenario(BaseModel):
    """A scripted caller for emulated sessions"""

    id: str = Field(min_length=1, description="Scenario key")
    kind: ScenarioKind = Field(default=ScenarioKind.COOPERATIVE, description="Scenario role")
    label_types: Set[str] = Field(description="Incident types the call should end with")
    shift_from: Set[str] = Field(
        default_factory=set, description="Incident types the call starts as, for shift scenarios"
    )
    shift_turn: Optional[int] = Field(
        default=None, gt=0, description="1-based caller turn of the segment that shifts the type"
    )
    segments: List[Segment] = Field(min_length=1, description="Caller segments in order")

    @field_validator("label_types")
    @classmethod
    def _not_empty(cls, v: Set[str]) -> Set[str]:
        if not v:
            raise ValueError("label_types must not be empty")
        return v

    @model_validator(mode="after")
    def _shift_consistent(self) -> "Scenario":
        if self.kind is ScenarioKind.SHIFT:
            if self.shift_turn is None or not self.shift_from:
                raise ValueError(f"shift scenario '{self.id}' needs shift_turn and shift_from")
            if self.shift_turn > len(self.segments):
                raise ValueError(
                    f"shift_turn {self.shift_turn} of '{self.id}' is past its "
                    f"{len(self.segments)} segments"
                )
        return self

    def tagged_fields(self) -> Set[str]:
        return {fid for seg in self.segments for fid in seg.answers}


class ScenarioFile(BaseModel):
    scenarios: List[Scenario] = Field(description="Shipped scenarios")


def validate_scenarios(scenarios: List[Scenario], tree: PhoneTree) -> List[Scenario]:
    """Check every scenario against the phone tree, collecting all problems.

    Raises:
        ConfigError: On duplicate ids, unknown incident types or unknown field tags
    """
    errors: List[str] = []
    known_types = set(tree.type_ids())
    known_fields = {f.id for f in tree.fields}
    seen: Set[str] = set()
    for sc in scenarios:
        if sc.id in seen:
            errors.append(f"duplicate scenario id '{sc.id}'")
        seen.add(sc.id)
        for type_id in sorted((sc.label_types | sc.shift_from) - known_types):
            errors.append(f"scenario '{sc.id}' names unknown incident type '{type_id}'")
        for field_id in sorted(sc.tagged_fields() - known_fields):
            errors.append(f"scenario '{sc.id}' tags unknown field '{field_id}'")
    if errors:
        raise ConfigError("Invalid scenarios", errors)
    return scenarios


def load_scenarios(
    tree: PhoneTree, path: Optional[Union[str, Path]] = None
) -> List[Scenario]:
    """Load scenarios, falling back to the shipped set, and validate them against ``tree``."""
    resolved = resolve_config_path(path, SCENARIOS_FILE)
    logger.debug(f"Loading scenarios from {resolved}")
    try:
        parsed = ScenarioFile.model_validate(read_json(resolved))
    except ValidationError as e:
        raise ConfigError(f"Invalid scenario file {resolved}", format_validation_error(e)) from e
    return validate_scenarios(parsed.scenarios, tree)


def sample_indices(scenario: Scenario, size: int, seed: int) -> List[int]:
    """Indices of ``size`` segments picked by ``seed``, in ascending order."""
    n = len(scenario.segments)
    if size <= 0:
        raise ValueError("utterance size must be positive")
    if size > n:
        raise ValueError(f"utterance size {size} exceeds the {n} segments of '{scenario.id}'")
    ranked = sorted(range(n), key=lambda i: derive_seed(seed, scenario.id, size, i))
    return sorted(ranked[:size])


def sample_segments(scenario: Scenario, size: int, seed: int) -> List[Segment]:
    return [scenario.segments[i] for i in sample_indices(scenario, size, seed)]


def compose_utterance(scenario: Scenario, size: int, seed: int) -> str:
    """Join ``size`` seed-sampled segments into one caller utterance."""
    return " ".join(seg.text for seg in sample_segments(scenario, size, seed))
