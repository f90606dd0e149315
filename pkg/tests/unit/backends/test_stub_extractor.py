import random
import unittest

from dispatchengine.backends.stub_extractor import StubPatternExtractor
from dispatchengine.emulation.scenario import load_scenarios
from dispatchengine.models.config import ExtractionRule, load_stub_config
from dispatchengine.models.phone_tree import load_phone_tree


class TestStubPatternExtractor(unittest.TestCase):
    """Regex-anchored extraction with seeded jitter"""

    @classmethod
    def setUpClass(cls):
        cls.extractor = StubPatternExtractor.from_config(load_stub_config())

    def test_spans_keep_the_core(self):
        text = "Somebody took it from 2525 West End Ave near the light."
        spans = {
            self.extractor.extract("incident-location", "Where?", text, seed) for seed in range(1, 31)
        }
        for span in spans:
            self.assertIn("2525 West End Ave", span)
            self.assertIn(span, text)
        self.assertGreater(len(spans), 1)

    def test_deterministic(self):
        text = "My name is Dana Reyes and I live nearby"
        self.assertEqual(
            self.extractor.extract("caller-name", "Name?", text, 4),
            self.extractor.extract("caller-name", "Name?", text, 4),
        )

    def test_no_match(self):
        self.assertIsNone(self.extractor.extract("caller-phone", "Number?", "I'm not sure.", 1))

    def test_no_rule(self):
        self.assertIsNone(self.extractor.extract("property-owned", "Yours?", "Yes it is mine", 1))

    def test_without_jitter(self):
        extractor = StubPatternExtractor(load_stub_config().extraction_rules, jitter=0)
        text = "You can reach me at 615-555-0100 after five."
        for seed in range(1, 6):
            self.assertEqual(extractor.extract("caller-phone", "Number?", text, seed), "615-555-0100")

    def test_window_and_whole_match(self):
        extractor = StubPatternExtractor(
            {"noise-source": ExtractionRule(anchor_regex=r"(?i)music", window_before=1, window_after=1)},
            jitter=0,
        )
        text = "There is loud music playing all night"
        self.assertEqual(extractor.extract("noise-source", "What?", text, 1), "loud music playing")

    def test_window_clipped_at_edges(self):
        extractor = StubPatternExtractor(
            {"noise-source": ExtractionRule(anchor_regex=r"(?i)music", window_before=3, window_after=3)},
            jitter=0,
        )
        self.assertEqual(extractor.extract("noise-source", "What?", "Loud music", 1), "Loud music")

    def test_random_utterances_give_substrings(self):
        texts = [seg.text for sc in load_scenarios(load_phone_tree()) for seg in sc.segments]
        fields = sorted(self.extractor.rules)
        rng = random.Random(5)
        for _ in range(500):
            pieces = rng.sample(texts, rng.randint(1, 3))
            words = " ".join(pieces).split()
            # Drop and repeat words so anchors land next to arbitrary neighbours
            kept = []
            for w in words:
                if rng.random() > 0.2:
                    kept.extend([w] * rng.randint(1, 2))
            utterance = " ".join(kept)
            if not utterance:
                continue
            for field_id in fields:
                for seed in (1, 2, 3):
                    span = self.extractor.extract(field_id, "?", utterance, seed)
                    if span is not None:
                        self.assertIn(span, utterance, (field_id, utterance))
