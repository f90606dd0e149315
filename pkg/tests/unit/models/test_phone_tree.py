import copy
import json
import unittest
from pathlib import Path
from tempfile import TemporaryDirectory

from dispatchengine.core.errors import ConfigError
from dispatchengine.core.interface import FieldKind, FieldTier
from dispatchengine.models.phone_tree import load_phone_tree, validate_phone_tree


def minimal_tree():
    return {
        "incident_types": [
            {"id": "lost-stolen", "display_name": "Lost or Stolen", "cascade_rank": 1},
            {"id": "minor-crash", "display_name": "Minor Crash", "cascade_rank": 2},
        ],
        "fields": [
            {"id": "incident-location", "kind": "narrative", "tier": "basic", "prompt": "Where?"},
            {
                "id": "property-desc",
                "kind": "narrative",
                "tier": "shared",
                "prompt": "Describe it?",
                "applies_to": ["lost-stolen", "minor-crash"],
            },
        ],
        "opening_questions": ["incident-location"],
    }


class TestShippedPhoneTree(unittest.TestCase):
    """The packaged phone tree"""

    @classmethod
    def setUpClass(cls):
        cls.tree = load_phone_tree()

    def test_incident_types(self):
        self.assertEqual(len(self.tree.incident_types), 11)
        ranks = [t.cascade_rank for t in self.tree.ranked_types()]
        self.assertEqual(ranks, list(range(1, 12)))
        self.assertEqual(self.tree.ranked_types()[0].id, "minor-crash")

    def test_fields(self):
        self.assertEqual(len(self.tree.fields), 21)
        self.assertEqual(
            [f.id for f in self.tree.basic_fields()],
            ["incident-location", "caller-name", "caller-phone"],
        )
        self.assertEqual(self.tree.opening_questions, ["incident-location", "caller-name", "caller-phone"])

    def test_lookups(self):
        owned = self.tree.field("property-owned")
        self.assertIs(owned.kind, FieldKind.BINARY)
        self.assertIs(owned.tier, FieldTier.SHARED)
        self.assertEqual(owned.applies_to, frozenset({"lost-stolen", "damaged-property"}))
        self.assertEqual(self.tree.incident_type("found-property").cascade_rank, 11)
        self.assertIn("lost-stolen-last-seen", [f.id for f in self.tree.fields_for_type("lost-stolen")])
        with self.assertRaises(KeyError):
            self.tree.field("no-such-field")

    def test_every_type_has_a_specific_field(self):
        for itype in self.tree.incident_types:
            specific = [
                f for f in self.tree.fields_for_type(itype.id) if f.tier is FieldTier.TYPE_SPECIFIC
            ]
            self.assertTrue(specific, itype.id)

    def test_basic_fields_are_universal(self):
        for spec in self.tree.basic_fields():
            self.assertTrue(spec.universal)

    def test_tree_is_frozen(self):
        with self.assertRaises(Exception):
            self.tree.opening_questions = []


class TestValidatePhoneTree(unittest.TestCase):
    """Phone tree invariants"""

    def test_minimal_tree(self):
        tree = validate_phone_tree(minimal_tree())
        self.assertEqual(tree.type_ids(), ["lost-stolen", "minor-crash"])

    def test_reports_every_violation(self):
        config = minimal_tree()
        config["incident_types"].append(
            {"id": "lost-stolen", "display_name": "Again", "cascade_rank": 2}
        )
        config["fields"][1]["applies_to"] = ["lost-stolen", "unknown-type"]
        config["opening_questions"].append("missing-field")

        with self.assertRaises(ConfigError) as ctx:
            validate_phone_tree(config)
        errors = ctx.exception.errors
        self.assertTrue(any("duplicate incident type id 'lost-stolen'" in e for e in errors))
        self.assertTrue(any("share cascade_rank 2" in e for e in errors))
        self.assertTrue(any("unknown incident type 'unknown-type'" in e for e in errors))
        self.assertTrue(any("'missing-field' is not a configured field" in e for e in errors))

    def test_rank_gap(self):
        config = minimal_tree()
        config["incident_types"][1]["cascade_rank"] = 3
        with self.assertRaises(ConfigError) as ctx:
            validate_phone_tree(config)
        self.assertIn("contiguous", str(ctx.exception))

    def test_basic_field_with_applies_to(self):
        config = minimal_tree()
        config["fields"][0]["applies_to"] = ["lost-stolen"]
        with self.assertRaises(ConfigError) as ctx:
            validate_phone_tree(config)
        self.assertIn("must be universal", str(ctx.exception))

    def test_shared_field_without_types(self):
        config = minimal_tree()
        config["fields"][1]["applies_to"] = []
        with self.assertRaises(ConfigError):
            validate_phone_tree(config)

    def test_empty_type_list(self):
        config = minimal_tree()
        config["incident_types"] = []
        config["fields"] = config["fields"][:1]
        with self.assertRaises(ConfigError) as ctx:
            validate_phone_tree(config)
        self.assertIn("empty incident type list", ctx.exception.errors)

    def test_schema_errors_become_config_errors(self):
        config = minimal_tree()
        config["fields"][0]["kind"] = "multiple-choice"
        with self.assertRaises(ConfigError) as ctx:
            validate_phone_tree(config)
        self.assertTrue(any(e.startswith("fields.0.kind") for e in ctx.exception.errors))

    def test_does_not_mutate_input(self):
        config = minimal_tree()
        snapshot = copy.deepcopy(config)
        validate_phone_tree(config)
        self.assertEqual(config, snapshot)


class TestLoadPhoneTree(unittest.TestCase):
    def test_missing_file(self):
        with self.assertRaises(ConfigError) as ctx:
            load_phone_tree("/nonexistent/phone_tree.json")
        self.assertIn("/nonexistent/phone_tree.json", str(ctx.exception))

    def test_invalid_json(self):
        with TemporaryDirectory() as tmp:
            path = Path(tmp) / "tree.json"
            path.write_text("{not json", encoding="utf-8")
            with self.assertRaises(ConfigError):
                load_phone_tree(path)

    def test_load_from_file(self):
        with TemporaryDirectory() as tmp:
            path = Path(tmp) / "tree.json"
            path.write_text(json.dumps(minimal_tree()), encoding="utf-8")
            self.assertEqual(len(load_phone_tree(path).fields), 2)
