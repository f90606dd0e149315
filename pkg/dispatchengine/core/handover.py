"""Always-on handover rules.

Utterances are tagged with a closed-class lexicon tagger, grouped into
phrases, and matched against configured patterns of coarse tags. Starred
pattern elements only match phrases whose head is a sensitive lemma.
"""

import logging
import re
from dataclasses import dataclass, replace
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from dispatchengine.core.interface import (
    HandoverReason,
    PatternCategory,
    PosTag,
    Speaker,
    Utterance,
)
from dispatchengine.models.config import (
    HandoverConfig,
    Pattern,
    PatternElement,
    load_handover_config,
)
from dispatchengine.utils.text import stem, stem_all, tokenize

logger = logging.getLogger(__name__)

TaggedToken = Tuple[str, PosTag]

_BE = frozenset({"am", "is", "are", "was", "were", "be", "been", "being"})
_PRONOUNS = frozenset(
    """
    i you he she it we they me him her us them my your his its our their mine
    yours hers ours theirs myself yourself himself herself itself ourselves
    themselves someone somebody anyone anybody everyone nobody
    """.split()
)
_PREPOSITIONS = frozenset(
    """
    in on at by for with from to of into onto over under near behind across
    along around between through about after before during outside inside off
    up down out against
    """.split()
)
_DETERMINERS = frozenset(
    "a an the this that these those my your his her its our their some any every each another".split()
)
_FUNCTION_WORDS = _DETERMINERS | frozenset(
    """
    and or but so because if then than can could will would shall should may
    might must do does did have has had not no yes oh um uh hello hi okay ok
    please just also there here very really too what when where who why how
    """.split()
)
_VERBS = frozenset(
    """
    want need end talk transfer speak connect hang help get put take make let
    see saw go come call know think hear look stop send give tell
    """.split()
)
_ADJECTIVES = frozenset(
    "dead hurt injured sick ill alive awake asleep unconscious unresponsive".split()
)
_ADJ_SUFFIXES = ("ive", "ous", "less", "ful", "able")
_CONTENT_TAGS = (PosTag.NP, PosTag.VP, PosTag.ADJP)
# "he's" is tagged as "he" PRP followed by "'s" BE.
_CLITIC_RE = re.compile(r"^(he|she|it|i|they|we|you)('(?:s|re|m))$", re.IGNORECASE)


def _tag_token(word: str, index: int, prev: Optional[str]) -> PosTag:
    w = word.lower()
    if w in _BE:
        return PosTag.BE
    if w in _PRONOUNS:
        return PosTag.PRP
    if w in _PREPOSITIONS:
        return PosTag.PP
    if w in _FUNCTION_WORDS:
        return PosTag.OTHER
    if word[0].isdigit():
        return PosTag.NP
    if index > 0 and word[0].isupper():
        return PosTag.NP
    if prev is not None and prev in _DETERMINERS:
        if w in _ADJECTIVES or w.endswith(_ADJ_SUFFIXES):
            return PosTag.ADJP
        return PosTag.NP
    if w in _VERBS:
        return PosTag.VP
    if w in _ADJECTIVES:
        return PosTag.ADJP
    if len(w) > 4 and w.endswith(("ed", "ing")):
        return PosTag.VP
    if w.endswith(_ADJ_SUFFIXES):
        return PosTag.ADJP
    return PosTag.NP


def pos_tag(text: str) -> List[TaggedToken]:
    """Tag every token with a coarse tag; deterministic for fixed input."""
    tagged: List[TaggedToken] = []
    prev: Optional[str] = None
    for token in tokenize(text.replace("’", "'")):
        clitic = _CLITIC_RE.match(token.text)
        if clitic:
            tagged.append((clitic.group(1), PosTag.PRP))
            tagged.append((clitic.group(2), PosTag.BE))
            prev = clitic.group(2).lower()
            continue
        tagged.append((token.text, _tag_token(token.text, len(tagged), prev)))
        prev = token.lower
    return tagged


@dataclass(frozen=True)
class Phrase:
    tag: PosTag
    tokens: Tuple[str, ...]

    @property
    def head(self) -> str:
        # Verb phrases are headed by their first verb, noun/adjective phrases by the last word.
        return self.tokens[0] if self.tag is PosTag.VP else self.tokens[-1]


def chunk(tags: Sequence[TaggedToken]) -> List[Phrase]:
    """Group runs of the same content tag into phrases; other tokens stand alone."""
    phrases: List[Phrase] = []
    for token, tag in tags:
        if phrases and tag in _CONTENT_TAGS and phrases[-1].tag is tag:
            phrases[-1] = Phrase(tag, phrases[-1].tokens + (token,))
        else:
            phrases.append(Phrase(tag, (token,)))
    return phrases


@dataclass(frozen=True)
class SensitiveLexicon:
    """Per-category sets of stemmed sensitive lemmas"""

    lemmas: Dict[PatternCategory, FrozenSet[str]]

    @classmethod
    def from_words(cls, words: Dict[PatternCategory, Sequence[str]]) -> "SensitiveLexicon":
        return cls({cat: stem_all(ws) for cat, ws in words.items()})

    def contains(self, category: PatternCategory, word: str) -> bool:
        return stem(word) in self.lemmas.get(category, frozenset())


def _head_matches(
    element: PatternElement, phrase: Phrase, p: Pattern, lex: SensitiveLexicon
) -> bool:
    if not element.star:
        return True
    if element.words is not None:
        return stem(phrase.head) in stem_all(element.words)
    return lex.contains(p.category, phrase.head)


def match_pattern(tags: Sequence[TaggedToken], p: Pattern, lex: SensitiveLexicon) -> bool:
    """True iff a contiguous run of phrases matches every element of ``p``.

    A starred element with its own head words checks those instead of the
    category lexicon.
    """
    phrases = chunk(tags)
    n = len(p.elements)
    for start in range(len(phrases) - n + 1):
        window = phrases[start : start + n]
        if all(
            phrase.tag is element.tag and _head_matches(element, phrase, p, lex)
            for phrase, element in zip(window, p.elements)
        ):
            return True
    return False


@dataclass(frozen=True)
class HandoverState:
    """Per-session handover counters; never decrease"""

    human_request_count: int = 0
    exception_flag: bool = False

    def with_exception(self) -> "HandoverState":
        return replace(self, exception_flag=True)


def is_trigger(
    utterance: Utterance,
    patterns: Sequence[Pattern],
    lex: SensitiveLexicon,
    state: HandoverState,
    human_request_repeats: int = 2,
) -> Tuple[bool, HandoverState, Optional[HandoverReason]]:
    """Decide whether a caller utterance hands the call to a human.

    Urgency triggers immediately. A human request increments the request
    count (at most once per utterance) and triggers once the count reaches
    ``human_request_repeats``. An exception flag set by the dialogue loop
    triggers with reason exception.

    Returns:
        Tuple of (triggered, updated state, reason or None)
    """
    if utterance.speaker is not Speaker.CALLER:
        return False, state, None

    tags = pos_tag(utterance.text)
    matched = {
        p.category for p in patterns if match_pattern(tags, p, lex)
    }

    if PatternCategory.URGENCY in matched:
        return True, state, HandoverReason.URGENCY

    if PatternCategory.HUMAN_REQUEST in matched:
        state = replace(state, human_request_count=state.human_request_count + 1)
        logger.debug(f"Human request #{state.human_request_count} in turn {utterance.turn_index}")
        if state.human_request_count >= human_request_repeats:
            return True, state, HandoverReason.HUMAN_REQUEST

    if state.exception_flag:
        return True, state, HandoverReason.EXCEPTION

    return False, state, None


class HandoverControl:
    """Loaded patterns and lexicon, shareable across sessions"""

    def __init__(self, config: HandoverConfig):
        self.config = config
        self.patterns: List[Pattern] = list(config.patterns)
        self.lexicon = SensitiveLexicon.from_words(dict(config.lexicon))

    @classmethod
    def from_file(cls, path: Optional[str] = None) -> "HandoverControl":
        return cls(load_handover_config(path))

    def check(
        self, utterance: Utterance, state: HandoverState, human_request_repeats: int = 2
    ) -> Tuple[bool, HandoverState, Optional[HandoverReason]]:
        return is_trigger(utterance, self.patterns, self.lexicon, state, human_request_repeats)

    def __str__(self) -> str:
        return f"HandoverControl(patterns={len(self.patterns)})"
