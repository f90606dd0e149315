import logging
import math
from functools import lru_cache
from typing import Dict, FrozenSet, Mapping, Optional, Sequence, Tuple

from dispatchengine.core.errors import UnknownLabelError
from dispatchengine.models.config import StubConfig
from dispatchengine.utils.text import words
from dispatchengine.utils.utils import seeded_uniform

logger = logging.getLogger(__name__)


class StubLexiconClassifier:
    """Cue-counting stand-in for a dropout-active binary classifier.

    The base probability is ``sigmoid(cue_weight * (hits - counter_hits) -
    absence_penalty)``; the penalty only applies to labels that have cues.
    Each trial adds uniform noise in ``[-epsilon, epsilon]`` seeded from
    ``(seed, label, text, trial_seed)``. Cue hits of labels in ``exclude``
    are masked, which is how deeper cascade layers skip already identified
    types. Counter cues are never masked.
    """

    def __init__(
        self,
        cues: Mapping[str, Sequence[str]],
        counter_cues: Optional[Mapping[str, Sequence[str]]] = None,
        epsilon: float = 0.2,
        cue_weight: float = 2.0,
        absence_penalty: float = 1.0,
        seed: int = 0,
        name: str = "stub-classifier",
    ):
        self.name = name
        self.cues: Dict[str, FrozenSet[str]] = {
            label: frozenset(c.lower() for c in cs) for label, cs in cues.items()
        }
        self.counter_cues: Dict[str, FrozenSet[str]] = {
            label: frozenset(c.lower() for c in cs)
            for label, cs in (counter_cues or {}).items()
        }
        self.epsilon = epsilon
        self.cue_weight = cue_weight
        self.absence_penalty = absence_penalty
        self.seed = seed
        self._base_cached = lru_cache(maxsize=65536)(self._base_probability)

    @classmethod
    def for_incident_types(cls, config: StubConfig) -> "StubLexiconClassifier":
        return cls(
            cues=config.cues,
            counter_cues=config.counter_cues,
            epsilon=config.epsilon,
            cue_weight=config.cue_weight,
            absence_penalty=config.absence_penalty,
            seed=config.seed,
            name="stub-type-classifier",
        )

    @classmethod
    def for_binary_fields(cls, config: StubConfig) -> "StubLexiconClassifier":
        return cls(
            cues={fid: c.yes for fid, c in config.binary_cues.items()},
            counter_cues={fid: c.no for fid, c in config.binary_cues.items()},
            epsilon=config.epsilon,
            cue_weight=config.cue_weight,
            absence_penalty=config.absence_penalty,
            seed=config.seed,
            name="stub-binary-classifier",
        )

    def labels(self) -> FrozenSet[str]:
        return frozenset(self.cues)

    def base_probability(self, text: str, label: str, exclude: Sequence[str] = ()) -> float:
        """Noise-free probability of ``label``."""
        if label not in self.cues:
            raise UnknownLabelError(f"No cue lexicon for label '{label}'")
        return self._base_cached(text, label, tuple(sorted(exclude)))

    def _base_probability(self, text: str, label: str, exclude: Tuple[str, ...]) -> float:
        cue_set = self.cues[label]
        counter_set = self.counter_cues.get(label, frozenset())
        masked = frozenset().union(*(self.cues.get(other, frozenset()) for other in exclude))

        tokens = words(text)
        hits = sum(1 for w in tokens if w in cue_set and w not in masked)
        counter_hits = sum(1 for w in tokens if w in counter_set)

        logit = self.cue_weight * (hits - counter_hits)
        if cue_set:
            logit -= self.absence_penalty
        return 1.0 / (1.0 + math.exp(-logit))

    def classify(
        self,
        text: str,
        label: str,
        trial_seed: int,
        exclude: Sequence[str] = (),
    ) -> float:
        p = self.base_probability(text, label, exclude)
        if self.epsilon > 0:
            u = seeded_uniform(self.seed, label, text, trial_seed)
            p += self.epsilon * (2.0 * u - 1.0)
        return min(max(p, 0.0), 1.0)

    def __str__(self) -> str:
        return f"{self.name}(labels={len(self.cues)}, epsilon={self.epsilon})"
