import json
import logging
from collections import Counter
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_serializer

from dispatchengine.core.errors import ConfigError
from dispatchengine.core.interface import FieldKind, FieldTier
from dispatchengine.utils.utils import resolve_config_path

logger = logging.getLogger(__name__)

PHONE_TREE_FILE = "phone_tree.json"


def format_validation_error(exc: ValidationError) -> List[str]:
    """Flatten a pydantic ValidationError into "<location>: <message>" strings."""
    messages = []
    for err in exc.errors():
        loc = ".".join(str(part) for part in err["loc"]) or "<root>"
        messages.append(f"{loc}: {err['msg']}")
    return messages


class IncidentType(BaseModel):
    """A non-emergency incident category"""

    model_config = ConfigDict(frozen=True)

    id: str = Field(min_length=1, description="Stable type key, e.g. lost-stolen")
    display_name: str = Field(description="Human readable name")
    cascade_rank: int = Field(gt=0, description="Cascade position, 1 = most frequent")


class FieldSpec(BaseModel):
    """A case-report field and the question that fills it"""

    model_config = ConfigDict(frozen=True)

    id: str = Field(min_length=1, description="Field key, e.g. caller-phone")
    kind: FieldKind = Field(description="narrative or binary")
    tier: FieldTier = Field(description="basic, shared or type_specific")
    prompt: str = Field(description="Question asked to fill the field")
    applies_to: FrozenSet[str] = Field(
        default_factory=frozenset,
        description="Incident type ids this field belongs to; empty means universal",
    )

    @field_serializer("applies_to")
    def _sorted_applies_to(self, value: FrozenSet[str]) -> List[str]:
        return sorted(value)

    @property
    def universal(self) -> bool:
        return not self.applies_to


class PhoneTree(BaseModel):
    """Incident types, their report fields and the opening questions"""

    model_config = ConfigDict(frozen=True)

    incident_types: List[IncidentType] = Field(description="Configured incident types")
    fields: List[FieldSpec] = Field(description="Report fields in declaration order")
    opening_questions: List[str] = Field(
        default_factory=list, description="Field ids asked first, in order"
    )

    def field(self, field_id: str) -> FieldSpec:
        for spec in self.fields:
            if spec.id == field_id:
                return spec
        raise KeyError(f"Unknown field '{field_id}'")

    def incident_type(self, type_id: str) -> IncidentType:
        for itype in self.incident_types:
            if itype.id == type_id:
                return itype
        raise KeyError(f"Unknown incident type '{type_id}'")

    def type_ids(self) -> List[str]:
        return [t.id for t in self.incident_types]

    def ranked_types(self) -> List[IncidentType]:
        return sorted(self.incident_types, key=lambda t: t.cascade_rank)

    def basic_fields(self) -> List[FieldSpec]:
        return [f for f in self.fields if f.tier is FieldTier.BASIC]

    def fields_for_type(self, type_id: str) -> List[FieldSpec]:
        """Non-basic fields that belong to ``type_id``, in declaration order."""
        return [f for f in self.fields if type_id in f.applies_to]


def _check_invariants(tree: PhoneTree) -> List[str]:
    errors: List[str] = []

    if not tree.incident_types:
        errors.append("empty incident type list")

    for type_id, n in Counter(t.id for t in tree.incident_types).items():
        if n > 1:
            errors.append(f"duplicate incident type id '{type_id}'")
    for field_id, n in Counter(f.id for f in tree.fields).items():
        if n > 1:
            errors.append(f"duplicate field id '{field_id}'")

    by_rank: Dict[int, List[str]] = {}
    for itype in tree.incident_types:
        by_rank.setdefault(itype.cascade_rank, []).append(itype.id)
    for rank, ids in sorted(by_rank.items()):
        if len(ids) > 1:
            errors.append(f"incident types {', '.join(ids)} share cascade_rank {rank}")
    ranks = sorted(by_rank)
    if ranks and ranks != list(range(1, len(ranks) + 1)):
        errors.append(f"cascade ranks must be contiguous from 1, got {ranks}")

    known_types = set(tree.type_ids())
    for spec in tree.fields:
        for type_id in sorted(spec.applies_to - known_types):
            errors.append(f"field '{spec.id}' applies_to unknown incident type '{type_id}'")
        if spec.tier is FieldTier.BASIC and spec.applies_to:
            errors.append(f"basic field '{spec.id}' must be universal (empty applies_to)")
        if spec.tier is not FieldTier.BASIC and not spec.applies_to:
            errors.append(f"{spec.tier.value} field '{spec.id}' needs a non-empty applies_to")

    fields_by_id = {f.id: f for f in tree.fields}
    for field_id in tree.opening_questions:
        spec = fields_by_id.get(field_id)
        if spec is None:
            errors.append(f"opening question '{field_id}' is not a configured field")
        elif spec.tier is not FieldTier.BASIC:
            errors.append(f"opening question '{field_id}' is not a basic field")

    return errors


def validate_phone_tree(config: Union[PhoneTree, Mapping[str, Any]]) -> PhoneTree:
    """Validate a phone tree, reporting every violation at once.

    Args:
        config: A parsed JSON document or an already built PhoneTree

    Returns:
        PhoneTree: the validated, immutable tree

    Raises:
        ConfigError: With the complete list of violations
    """
    if isinstance(config, PhoneTree):
        tree = config
    else:
        try:
            tree = PhoneTree.model_validate(config)
        except ValidationError as e:
            raise ConfigError("Invalid phone tree", format_validation_error(e)) from e

    errors = _check_invariants(tree)
    if errors:
        raise ConfigError("Invalid phone tree", errors)
    return tree


def read_json(path: Union[str, Path]) -> Any:
    """Read a JSON config file, converting I/O and syntax errors to ConfigError."""
    p = Path(path)
    try:
        with p.open("r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"Config file not found: {p}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file {p} is not valid JSON", [str(e)]) from e


def load_phone_tree(path: Optional[Union[str, Path]] = None) -> PhoneTree:
    """Load and validate a phone tree, falling back to the shipped default."""
    resolved = resolve_config_path(path, PHONE_TREE_FILE)
    logger.debug(f"Loading phone tree from {resolved}")
    return validate_phone_tree(read_json(resolved))
