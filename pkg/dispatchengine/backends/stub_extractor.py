import logging
import re
from typing import Dict, Mapping, Optional, Pattern

from dispatchengine.models.config import ExtractionRule, StubConfig
from dispatchengine.utils.text import tokenize
from dispatchengine.utils.utils import seeded_uniform

logger = logging.getLogger(__name__)


class StubPatternExtractor:
    """Regex-anchored span extractor with seeded boundary jitter.

    The anchor match (group 1 if the regex has one) is the answer core. The
    span is the core widened by the rule's token windows; each trial then
    moves both boundaries by up to ``jitter`` tokens, never cutting into
    the core. The result is always a verbatim slice of the utterance.
    """

    def __init__(self, rules: Mapping[str, ExtractionRule], jitter: int = 1, seed: int = 0):
        self.rules: Dict[str, ExtractionRule] = dict(rules)
        self._compiled: Dict[str, Pattern[str]] = {
            field_id: re.compile(rule.anchor_regex) for field_id, rule in self.rules.items()
        }
        self.jitter = jitter
        self.seed = seed

    @classmethod
    def from_config(cls, config: StubConfig) -> "StubPatternExtractor":
        return cls(config.extraction_rules, jitter=config.jitter, seed=config.seed)

    def extract(
        self, field_id: str, question: str, utterance: str, trial_seed: int
    ) -> Optional[str]:
        regex = self._compiled.get(field_id)
        if regex is None:
            logger.debug(f"No extraction rule for field '{field_id}'")
            return None
        match = regex.search(utterance)
        if match is None:
            return None

        if match.re.groups and match.group(1) is not None:
            core_start, core_end = match.span(1)
        else:
            core_start, core_end = match.span(0)

        tokens = tokenize(utterance)
        core = [i for i, t in enumerate(tokens) if t.end > core_start and t.start < core_end]
        if not core:
            return None
        first, last = core[0], core[-1]

        rule = self.rules[field_id]
        start = first - rule.window_before
        end = last + rule.window_after
        if self.jitter > 0:
            width = 2 * self.jitter + 1
            start += int(seeded_uniform(self.seed, field_id, utterance, trial_seed, "start") * width) - self.jitter
            end += int(seeded_uniform(self.seed, field_id, utterance, trial_seed, "end") * width) - self.jitter
        start = min(max(start, 0), first)
        end = max(min(end, len(tokens) - 1), last)

        return utterance[tokens[start].start : tokens[end].end]

    def __str__(self) -> str:
        return f"StubPatternExtractor(rules={len(self.rules)}, jitter={self.jitter})"
