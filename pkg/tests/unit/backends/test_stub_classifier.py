import math
import unittest

from dispatchengine.backends.stub_classifier import StubLexiconClassifier
from dispatchengine.core.errors import UnknownLabelError
from dispatchengine.models.config import load_stub_config


def sigmoid(x):
    return 1.0 / (1.0 + math.exp(-x))


class TestStubLexiconClassifier(unittest.TestCase):
    """Cue-counting classifier"""

    @classmethod
    def setUpClass(cls):
        cls.stubs = load_stub_config()
        cls.classifier = StubLexiconClassifier.for_incident_types(cls.stubs)

    def test_one_cue_hit(self):
        p = self.classifier.base_probability("my wallet is gone", "lost-stolen")
        self.assertAlmostEqual(p, sigmoid(1.0))

    def test_no_cue_hit(self):
        p = self.classifier.base_probability("my wallet is gone", "noise-violation")
        self.assertAlmostEqual(p, sigmoid(-1.0))

    def test_counter_cue(self):
        p = self.classifier.base_probability("they busted it but the car is fine", "damaged-property")
        self.assertAlmostEqual(p, sigmoid(-1.0))

    def test_cues_match_whole_words(self):
        p = self.classifier.base_probability("a goner", "lost-stolen")
        self.assertAlmostEqual(p, sigmoid(-1.0))

    def test_label_without_cues_is_neutral(self):
        coin = StubLexiconClassifier(cues={"coin": []})
        self.assertEqual(coin.base_probability("anything at all", "coin"), 0.5)

    def test_exclusions_mask_cues(self):
        classifier = StubLexiconClassifier(cues={"crash": ["car"], "hazard": ["car", "debris"]})
        self.assertAlmostEqual(classifier.base_probability("car", "hazard"), sigmoid(1.0))
        self.assertAlmostEqual(
            classifier.base_probability("car", "hazard", exclude=["crash"]), sigmoid(-1.0)
        )

    def test_counter_cues_not_masked(self):
        classifier = StubLexiconClassifier(
            cues={"ok": ["fine"], "damage": ["dent"]}, counter_cues={"damage": ["fine"]}
        )
        p = classifier.base_probability("a dent but fine", "damage", exclude=["ok"])
        self.assertAlmostEqual(p, sigmoid(-1.0))

    def test_noise_bounded_and_seeded(self):
        text = "my wallet is gone"
        base = self.classifier.base_probability(text, "lost-stolen")
        trials = [self.classifier.classify(text, "lost-stolen", seed) for seed in range(1, 51)]
        for p in trials:
            self.assertLessEqual(abs(p - base), self.stubs.epsilon + 1e-12)
        self.assertGreater(len(set(trials)), 1)
        self.assertEqual(trials, [self.classifier.classify(text, "lost-stolen", s) for s in range(1, 51)])

    def test_base_seed_changes_noise(self):
        other = StubLexiconClassifier(cues=self.stubs.cues, seed=99)
        self.assertNotEqual(
            self.classifier.classify("my wallet is gone", "lost-stolen", 1),
            other.classify("my wallet is gone", "lost-stolen", 1),
        )

    def test_clamped_to_unit_interval(self):
        p = self.classifier.classify("stolen stolen stolen stolen", "lost-stolen", 3)
        self.assertLessEqual(p, 1.0)
        q = self.classifier.classify("fine fine fine fine", "damaged-property", 3)
        self.assertGreaterEqual(q, 0.0)

    def test_no_noise(self):
        quiet = StubLexiconClassifier(cues=self.stubs.cues, epsilon=0.0)
        self.assertEqual(
            quiet.classify("my wallet is gone", "lost-stolen", 5),
            quiet.base_probability("my wallet is gone", "lost-stolen"),
        )

    def test_unknown_label(self):
        with self.assertRaises(UnknownLabelError):
            self.classifier.classify("text", "space-invasion", 1)
        with self.assertRaises(KeyError):
            self.classifier.base_probability("text", "space-invasion")

    def test_binary_field_classifier(self):
        binary = StubLexiconClassifier.for_binary_fields(self.stubs)
        self.assertIn("property-owned", binary.labels())
        self.assertGreater(binary.base_probability("yes it is mine", "property-owned"), 0.9)
        self.assertLess(binary.base_probability("no it is not", "property-owned"), 0.1)
