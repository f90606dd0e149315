import json
import logging
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Union

from pydantic import BaseModel, Field

from dispatchengine.core.handover import HandoverState
from dispatchengine.core.interface import (
    DialogueContext,
    SessionStatus,
    Speaker,
    SystemAction,
    Utterance,
)
from dispatchengine.core.report import CaseReport
from dispatchengine.models.phone_tree import PhoneTree
from dispatchengine.models.policy import ConfidencePolicy

logger = logging.getLogger(__name__)


class TranscriptRecord(BaseModel):
    """One NDJSON line of a session transcript"""

    turn: int = Field(description="Utterance turn index")
    speaker: Speaker = Field(description="caller or system")
    text: str = Field(description="Utterance text")
    action: Optional[str] = Field(default=None, description="System action, e.g. ask(caller-name)")
    report_snapshot_hash: str = Field(description="Report hash after this utterance")


@dataclass
class Session:
    """State of one call"""

    session_id: str
    tree: PhoneTree
    policy: ConfidencePolicy
    context: DialogueContext = field(default_factory=DialogueContext)
    report: CaseReport = field(default_factory=CaseReport)
    question_list: List[str] = field(default_factory=list)
    handover_state: HandoverState = field(default_factory=HandoverState)
    status: SessionStatus = SessionStatus.ACTIVE
    last_action: Optional[SystemAction] = None
    asked_fields: List[str] = field(default_factory=list)  # Distinct, in first-asked order
    caller_turns: int = 0
    termination_reason: Optional[str] = None
    transcript: List[TranscriptRecord] = field(default_factory=list)

    @property
    def active(self) -> bool:
        return self.status is SessionStatus.ACTIVE

    @property
    def last_asked(self) -> Optional[str]:
        """Field the caller is currently answering, if any."""
        return self.last_action.field_id if self.last_action is not None else None

    def record(self, utterance: Utterance, action: Optional[SystemAction] = None) -> None:
        self.transcript.append(
            TranscriptRecord(
                turn=utterance.turn_index,
                speaker=utterance.speaker,
                text=utterance.text,
                action=str(action) if action is not None else None,
                report_snapshot_hash=self.report.snapshot_hash(),
            )
        )

    def say(self, text: str, action: SystemAction) -> Utterance:
        """Append a system utterance carrying ``action``."""
        utterance = self.context.append(Speaker.SYSTEM, text)
        self.last_action = action
        if action.field_id is not None and action.field_id not in self.asked_fields:
            self.asked_fields.append(action.field_id)
        self.record(utterance, action)
        return utterance

    def finish(self, status: SessionStatus, reason: str) -> None:
        self.status = status
        self.termination_reason = reason
        self.question_list = []
        logger.info(f"Session {self.session_id} finished: {reason}")

    def transcript_ndjson(self) -> str:
        return "".join(
            json.dumps(r.model_dump(mode="json"), sort_keys=True) + "\n" for r in self.transcript
        )

    def write_transcript(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.transcript_ndjson(), encoding="utf-8")


def new_session(
    tree: PhoneTree, policy: ConfidencePolicy, session_id: Optional[str] = None
) -> Session:
    """Fresh session with the basic slots and the opening questions queued."""
    session = Session(
        session_id=session_id or str(uuid.uuid4()),
        tree=tree,
        policy=policy,
        question_list=list(tree.opening_questions),
    )
    for spec in tree.basic_fields():
        session.report.add_slot(spec)
    logger.debug(f"New session {session.session_id} with {len(session.report.slots)} basic slots")
    return session
