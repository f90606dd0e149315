"""Tokenization, stopwords and the suffix-stripping stemmer shared by the
handover rules, the stub backends and the consistency metric."""

import re
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List

# Words joined by internal hyphens or apostrophes stay one token, so
# "615-555-0100" and "it's" are single tokens.
_TOKEN_RE = re.compile(r"\w+(?:['\-]\w+)*")
_SENTENCE_END_RE = re.compile(r"[.!?]+")

_STEM_SUFFIXES = ("ing", "ed", "es", "s")

STOPWORDS: FrozenSet[str] = frozenset(
    """
    a about above after again against all am an and any are as at be because
    been before being below between both but by can could did do does doing
    down during each few for from further had has have having he her here hers
    herself him himself his how i if in into is it its itself just me more most
    my myself no nor not now of off on once only or other our ours ourselves
    out over own same she should so some such than that the their theirs them
    themselves then there these they this those through to too under until up
    very was we were what when where which while who whom why will with would
    you your yours yourself yourselves it's i'm he's she's that's there's
    they're we're you're i've i'd i'll isn't wasn't don't didn't can't won't
    um uh oh okay ok yeah yes well like maybe just also
    """.split()
)


@dataclass(frozen=True)
class Token:
    """A token with its character offsets in the source text."""

    text: str
    start: int
    end: int
    sentence: int = 0

    @property
    def lower(self) -> str:
        return self.text.lower()


def tokenize(text: str) -> List[Token]:
    """Split text into word tokens, tagging each with its sentence index.

    A new sentence starts after any run of ``.``, ``!`` or ``?``.
    """
    boundaries = [m.end() for m in _SENTENCE_END_RE.finditer(text)]
    tokens: List[Token] = []
    sentence = 0
    b = 0
    for match in _TOKEN_RE.finditer(text):
        while b < len(boundaries) and boundaries[b] <= match.start():
            sentence += 1
            b += 1
        tokens.append(Token(match.group(0), match.start(), match.end(), sentence))
    return tokens


def words(text: str) -> List[str]:
    """Lowercased token strings of ``text``."""
    return [t.lower for t in tokenize(text)]


def content_words(text: str) -> List[str]:
    """Lowercased tokens with stopwords removed."""
    return [w for w in words(text) if w not in STOPWORDS]


def stem(word: str) -> str:
    """Strip the first matching suffix of ing/ed/es/s.

    The suffix is removed only when at least three characters remain.
    """
    w = word.lower()
    for suffix in _STEM_SUFFIXES:
        if w.endswith(suffix) and len(w) - len(suffix) >= 3:
            return w[: -len(suffix)]
    return w


def stem_all(items: Iterable[str]) -> FrozenSet[str]:
    return frozenset(stem(i) for i in items)

