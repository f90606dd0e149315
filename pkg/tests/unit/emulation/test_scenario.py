import unittest

from pydantic import ValidationError

from dispatchengine.core.errors import ConfigError
from dispatchengine.emulation.scenario import (
    Scenario,
    ScenarioKind,
    Segment,
    compose_utterance,
    load_scenarios,
    sample_indices,
    validate_scenarios,
)
from dispatchengine.models.phone_tree import load_phone_tree


class TestLoadScenarios(unittest.TestCase):
    """Shipped scenario file"""

    @classmethod
    def setUpClass(cls):
        cls.tree = load_phone_tree()
        cls.scenarios = load_scenarios(cls.tree)

    def test_counts(self):
        kinds = [sc.kind for sc in self.scenarios]
        self.assertEqual(len(self.scenarios), 20)
        self.assertEqual(kinds.count(ScenarioKind.COOPERATIVE), 15)
        self.assertEqual(kinds.count(ScenarioKind.SHIFT), 4)
        self.assertEqual(kinds.count(ScenarioKind.CONTROL), 1)

    def test_every_type_is_covered(self):
        covered = set().union(*(sc.label_types for sc in self.scenarios))
        self.assertEqual(covered, set(self.tree.type_ids()))

    def test_shift_scenarios(self):
        for sc in self.scenarios:
            if sc.kind is ScenarioKind.SHIFT:
                self.assertEqual(sc.shift_turn, 4)
                self.assertTrue(sc.shift_from.isdisjoint(sc.label_types))

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            load_scenarios(self.tree, "/nonexistent/scenarios.json")


class TestScenarioModel(unittest.TestCase):
    """Scenario validation"""

    def test_shift_needs_turn_and_origin(self):
        with self.assertRaises(ValidationError):
            Scenario(
                id="s",
                kind=ScenarioKind.SHIFT,
                label_types={"lost-stolen"},
                segments=[Segment(text="My wallet is gone.")],
            )

    def test_shift_turn_within_segments(self):
        with self.assertRaises(ValidationError):
            Scenario(
                id="s",
                kind=ScenarioKind.SHIFT,
                label_types={"lost-stolen"},
                shift_from={"damaged-property"},
                shift_turn=3,
                segments=[Segment(text="My wallet is gone.")],
            )

    def test_label_types_required(self):
        with self.assertRaises(ValidationError):
            Scenario(id="s", label_types=set(), segments=[Segment(text="Hello")])

    def test_segments_required(self):
        with self.assertRaises(ValidationError):
            Scenario(id="s", label_types={"lost-stolen"}, segments=[])

    def test_unknown_names_collected(self):
        scenarios = [
            Scenario(
                id="a",
                label_types={"space-invasion"},
                segments=[Segment(text="Hi", answers=["favorite-color"])],
            ),
            Scenario(id="a", label_types={"lost-stolen"}, segments=[Segment(text="Hi")]),
        ]
        with self.assertRaises(ConfigError) as ctx:
            validate_scenarios(scenarios, load_phone_tree())
        self.assertEqual(len(ctx.exception.errors), 3)


class TestComposeUtterance(unittest.TestCase):
    """Seeded segment sampling"""

    @classmethod
    def setUpClass(cls):
        scenarios = {sc.id: sc for sc in load_scenarios(load_phone_tree())}
        cls.bike = scenarios["stolen-bike"]

    def test_deterministic(self):
        self.assertEqual(compose_utterance(self.bike, 3, 7), compose_utterance(self.bike, 3, 7))

    def test_indices_sorted_and_sized(self):
        for seed in range(10):
            indices = sample_indices(self.bike, 3, seed)
            self.assertEqual(len(indices), 3)
            self.assertEqual(indices, sorted(set(indices)))

    def test_seeds_vary_the_sample(self):
        samples = {tuple(sample_indices(self.bike, 3, seed)) for seed in range(20)}
        self.assertGreater(len(samples), 1)

    def test_full_size_keeps_order(self):
        self.assertEqual(
            compose_utterance(self.bike, len(self.bike.segments), 0),
            " ".join(seg.text for seg in self.bike.segments),
        )

    def test_tagged_fields_of_sample(self):
        indices = sample_indices(self.bike, 3, 1)
        tagged = {fid for i in indices for fid in self.bike.segments[i].answers}
        self.assertGreaterEqual(len(tagged), 2)

    def test_invalid_sizes(self):
        with self.assertRaises(ValueError):
            sample_indices(self.bike, 0, 1)
        with self.assertRaises(ValueError):
            sample_indices(self.bike, len(self.bike.segments) + 1, 1)
