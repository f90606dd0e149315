import hashlib
import json
from typing import Dict, List, Optional, Set, Tuple, Union

from pydantic import BaseModel, Field, field_serializer

from dispatchengine.core.interface import SlotStatus
from dispatchengine.models.phone_tree import FieldSpec

SlotValue = Union[bool, str]


class FieldSlot(BaseModel):
    """One entry of the case report"""

    spec: FieldSpec = Field(description="Field this slot fills")
    value: Optional[SlotValue] = Field(
        default=None, description="Quoted text for narrative fields, boolean for binary fields"
    )
    confidence: Optional[float] = Field(
        default=None, ge=0.0, le=1.0, description="conf_1 of the current value"
    )
    status: SlotStatus = Field(default=SlotStatus.EMPTY, description="empty, tentative or done")
    clarification_count: int = Field(default=0, ge=0, description="Clarifications asked so far")
    evidence: Optional[str] = Field(
        default=None, description="Utterance supporting a binary answer"
    )
    updated_turn: Optional[int] = Field(default=None, description="Caller turn of the last update")

    @property
    def field_id(self) -> str:
        return self.spec.id

    @property
    def answered(self) -> bool:
        return self.status is not SlotStatus.EMPTY


class CaseReport(BaseModel):
    """Confirmed incident types and the field slots built during a call"""

    confirmed_types: Set[str] = Field(default_factory=set, description="Confirmed incident type ids")
    type_confidence_history: Dict[str, List[Tuple[int, float]]] = Field(
        default_factory=dict, description="Per-type (caller turn, conf_2) series"
    )
    slots: Dict[str, FieldSlot] = Field(
        default_factory=dict, description="Field id -> slot, in creation order"
    )

    @field_serializer("confirmed_types")
    def _sorted_types(self, value: Set[str]) -> List[str]:
        return sorted(value)

    def add_slot(self, spec: FieldSpec) -> FieldSlot:
        """Create the slot for ``spec`` unless it already exists."""
        if spec.id not in self.slots:
            self.slots[spec.id] = FieldSlot(spec=spec)
        return self.slots[spec.id]

    def slot(self, field_id: str) -> Optional[FieldSlot]:
        return self.slots.get(field_id)

    def done_fields(self) -> List[str]:
        return [fid for fid, s in self.slots.items() if s.status is SlotStatus.DONE]

    def record_confidence(self, type_id: str, turn: int, confidence: float) -> None:
        self.type_confidence_history.setdefault(type_id, []).append((turn, confidence))

    def to_json(self, indent: Optional[int] = 2) -> str:
        return self.model_dump_json(indent=indent)

    @classmethod
    def from_json(cls, data: str) -> "CaseReport":
        return cls.model_validate_json(data)

    def snapshot_hash(self) -> str:
        """SHA-256 of the canonical JSON form; equal reports hash equally."""
        canonical = json.dumps(
            self.model_dump(mode="json"), sort_keys=True, separators=(",", ":")
        )
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
