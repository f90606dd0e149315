import logging
import re
from pathlib import Path
from typing import Dict, List, Optional, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from dispatchengine.core.errors import ConfigError
from dispatchengine.core.interface import PatternCategory, PosTag
from dispatchengine.models.phone_tree import format_validation_error, read_json
from dispatchengine.utils.utils import resolve_config_path

logger = logging.getLogger(__name__)

HANDOVER_FILE = "handover.json"
STUBS_FILE = "stubs.json"


class PatternElement(BaseModel):
    """One slot of a handover pattern"""

    model_config = ConfigDict(frozen=True)

    tag: PosTag = Field(description="Coarse POS tag the phrase must carry")
    star: bool = Field(default=False, description="Phrase head must be a sensitive lemma")
    words: Optional[List[str]] = Field(
        default=None,
        description="Head lemmas this starred element accepts instead of the category lexicon",
    )

    @field_validator("tag", mode="before")
    @classmethod
    def _upper_tag(cls, v: object) -> object:
        return v.upper() if isinstance(v, str) else v

    @field_validator("words")
    @classmethod
    def _lowercase_words(cls, v: Optional[List[str]]) -> Optional[List[str]]:
        if v is None:
            return None
        cleaned = [w.strip().lower() for w in v if w.strip()]
        if not cleaned:
            raise ValueError("words must name at least one lemma")
        return cleaned

    @model_validator(mode="after")
    def _words_need_star(self) -> "PatternElement":
        if self.words is not None and not self.star:
            raise ValueError(f"[{self.tag.value}] lists head words but is not starred")
        return self

    def __str__(self) -> str:
        return f"[{self.tag.value}{'*' if self.star else ''}]"


class Pattern(BaseModel):
    """Sequence of tagged phrases that triggers handover"""

    model_config = ConfigDict(frozen=True)

    id: str = Field(description="Pattern id")
    elements: List[PatternElement] = Field(min_length=1, description="Ordered elements")
    category: PatternCategory = Field(description="human_request or urgency")


class HandoverConfig(BaseModel):
    """Patterns plus the per-category sensitive lexicon"""

    model_config = ConfigDict(frozen=True)

    patterns: List[Pattern] = Field(description="Handover patterns")
    lexicon: Dict[PatternCategory, List[str]] = Field(
        description="Sensitive words per category, lowercase"
    )

    @field_validator("lexicon")
    @classmethod
    def _lowercase_lexicon(
        cls, v: Dict[PatternCategory, List[str]]
    ) -> Dict[PatternCategory, List[str]]:
        return {cat: [w.strip().lower() for w in words if w.strip()] for cat, words in v.items()}

    @model_validator(mode="after")
    def _ids_unique(self) -> "HandoverConfig":
        seen = set()
        for p in self.patterns:
            if p.id in seen:
                raise ValueError(f"duplicate pattern id '{p.id}'")
            seen.add(p.id)
        return self


class ExtractionRule(BaseModel):
    """Keyword/regex anchor plus a token window around it"""

    model_config = ConfigDict(frozen=True)

    anchor_regex: str = Field(
        description="Regex locating the answer core; group 1, when present, is the core"
    )
    window_before: int = Field(default=0, ge=0, description="Tokens kept before the core")
    window_after: int = Field(default=0, ge=0, description="Tokens kept after the core")

    @field_validator("anchor_regex")
    @classmethod
    def _compiles(cls, v: str) -> str:
        try:
            re.compile(v)
        except re.error as e:
            raise ValueError(f"anchor_regex does not compile: {e}") from e
        return v


class BinaryCues(BaseModel):
    model_config = ConfigDict(frozen=True)

    yes: List[str] = Field(default_factory=list, description="Cues for a yes answer")
    no: List[str] = Field(default_factory=list, description="Cues for a no answer")


class StubConfig(BaseModel):
    """Config of the lexicon classifier and pattern extractor stubs"""

    model_config = ConfigDict(frozen=True)

    cues: Dict[str, List[str]] = Field(description="Incident type id -> cue words")
    counter_cues: Dict[str, List[str]] = Field(
        default_factory=dict, description="Incident type id -> words that argue against it"
    )
    binary_cues: Dict[str, BinaryCues] = Field(
        default_factory=dict, description="Binary field id -> yes/no cues"
    )
    epsilon: float = Field(default=0.2, ge=0.0, le=0.5, description="Per-trial noise amplitude")
    cue_weight: float = Field(default=2.0, gt=0.0, description="Logit per net cue hit")
    absence_penalty: float = Field(
        default=1.0, ge=0.0, description="Logit offset when a label has cues but none hit"
    )
    extraction_rules: Dict[str, ExtractionRule] = Field(
        default_factory=dict, description="Narrative field id -> extraction rule"
    )
    jitter: int = Field(default=1, ge=0, description="Max tokens a span boundary may move per trial")
    seed: int = Field(default=0, description="Base seed mixed into every trial seed")

    @field_validator("cues", "counter_cues")
    @classmethod
    def _lowercase_cues(cls, v: Dict[str, List[str]]) -> Dict[str, List[str]]:
        return {label: [c.strip().lower() for c in cues if c.strip()] for label, cues in v.items()}

    @model_validator(mode="after")
    def _counter_cues_disjoint(self) -> "StubConfig":
        for label, counters in self.counter_cues.items():
            overlap = sorted(set(counters) & set(self.cues.get(label, [])))
            if overlap:
                raise ValueError(
                    f"counter_cues of '{label}' repeat its own cues: {', '.join(overlap)}"
                )
        return self


def load_handover_config(path: Optional[Union[str, Path]] = None) -> HandoverConfig:
    """Load handover patterns and lexicon, falling back to the shipped default."""
    resolved = resolve_config_path(path, HANDOVER_FILE)
    logger.debug(f"Loading handover config from {resolved}")
    try:
        return HandoverConfig.model_validate(read_json(resolved))
    except ValidationError as e:
        raise ConfigError(f"Invalid handover config {resolved}", format_validation_error(e)) from e


def load_stub_config(path: Optional[Union[str, Path]] = None) -> StubConfig:
    """Load stub backend config, falling back to the shipped default."""
    resolved = resolve_config_path(path, STUBS_FILE)
    logger.debug(f"Loading stub config from {resolved}")
    try:
        return StubConfig.model_validate(read_json(resolved))
    except ValidationError as e:
        raise ConfigError(f"Invalid stub config {resolved}", format_validation_error(e)) from e
