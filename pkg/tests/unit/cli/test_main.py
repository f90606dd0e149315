import csv
import json
import unittest
from pathlib import Path
from tempfile import TemporaryDirectory

from click.testing import CliRunner

from dispatchengine.cli.main import EXIT_CONFIG_ERROR, cli, parse_sizes
from dispatchengine.core.errors import ConfigError
from dispatchengine.utils.utils import default_data_path


def small_scenario_file(directory):
    """Write the stolen-bike and control scenarios to a file of their own."""
    with open(default_data_path("scenarios.json"), encoding="utf-8") as f:
        data = json.load(f)
    keep = {"stolen-bike", "control-stolen-purse"}
    data["scenarios"] = [sc for sc in data["scenarios"] if sc["id"] in keep]
    path = Path(directory) / "scenarios.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


class TestParseSizes(unittest.TestCase):
    def test_ranges_and_lists(self):
        self.assertEqual(parse_sizes("1-3"), [1, 2, 3])
        self.assertEqual(parse_sizes("1,4, 6"), [1, 4, 6])
        self.assertEqual(parse_sizes("1-2,5"), [1, 2, 5])

    def test_invalid(self):
        for value in ("0", "a-b", "", "2,-1"):
            with self.assertRaises(ConfigError, msg=value):
                parse_sizes(value)


class TestCli(unittest.TestCase):
    """Subcommands run through click's test runner"""

    def setUp(self):
        self.runner = CliRunner()

    def test_check(self):
        result = self.runner.invoke(cli, ["check"])
        self.assertEqual(result.exit_code, 0)
        self.assertIn("successfully installed", result.output)

    def test_metric_table(self):
        result = self.runner.invoke(cli, ["metric"])
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn("consistency monotone: True", result.output)

    def test_metric_json(self):
        result = self.runner.invoke(cli, ["metric", "--json"])
        self.assertEqual(result.exit_code, 0, result.output)
        table = json.loads(result.output)
        self.assertEqual(sorted(table), ["1", "2", "3"])
        self.assertLess(table["1"]["consistency"], table["3"]["consistency"])

    def test_metric_empty_corpus(self):
        with TemporaryDirectory() as tmp:
            path = Path(tmp) / "empty.tsv"
            path.write_text("", encoding="utf-8")
            result = self.runner.invoke(cli, ["metric", "--corpus", str(path)])
        self.assertEqual(result.exit_code, EXIT_CONFIG_ERROR)

    def test_session_urgency(self):
        result = self.runner.invoke(cli, ["session"], input="he is unresponsive\n")
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertTrue(result.output.startswith("System: "))
        self.assertIn("termination: handover:urgency", result.output)

    def test_session_disconnect(self):
        result = self.runner.invoke(cli, ["session"], input="My wallet was stolen.\n")
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn("termination: caller disconnected", result.output)

    def test_session_writes_files(self):
        with TemporaryDirectory() as tmp:
            transcript = Path(tmp) / "call.ndjson"
            report = Path(tmp) / "report.json"
            result = self.runner.invoke(
                cli,
                ["session", "--transcript", str(transcript), "--report", str(report)],
                input="he is unresponsive\n",
            )
            self.assertEqual(result.exit_code, 0, result.output)
            self.assertEqual(len(transcript.read_text(encoding="utf-8").splitlines()), 3)
            self.assertIn("slots", json.loads(report.read_text(encoding="utf-8")))

    def test_missing_tree(self):
        result = self.runner.invoke(cli, ["session", "--tree", "/nonexistent/tree.json"], input="")
        self.assertEqual(result.exit_code, EXIT_CONFIG_ERROR)

    def test_bad_policy_override(self):
        result = self.runner.invoke(cli, ["validate-config", "--lambda1", "1.5"])
        self.assertEqual(result.exit_code, EXIT_CONFIG_ERROR)

    def test_validate_config(self):
        result = self.runner.invoke(cli, ["validate-config"])
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn("11 incident types, 21 fields", result.output)
        self.assertIn("20 scenarios", result.output)

    def test_emulate_rejects_zero_size(self):
        with TemporaryDirectory() as tmp:
            result = self.runner.invoke(cli, ["emulate", "--sizes", "0", "--out", tmp])
        self.assertEqual(result.exit_code, EXIT_CONFIG_ERROR)

    def test_emulate_writes_csvs(self):
        with TemporaryDirectory() as tmp:
            scenarios = small_scenario_file(tmp)
            out = Path(tmp) / "out"
            result = self.runner.invoke(
                cli,
                [
                    "emulate",
                    "--scenarios", str(scenarios),
                    "--sizes", "1,8",
                    "--runs", "2",
                    "--workers", "2",
                    "--shift",
                    "--out", str(out),
                ],
            )
            self.assertEqual(result.exit_code, 0, result.output)
            self.assertIn("control-stolen-purse: shift=None confirmed=1", result.output)

            with open(out / "emulation.csv", newline="", encoding="utf-8") as f:
                rows = list(csv.DictReader(f))
            self.assertEqual(len(rows), 4)
            self.assertEqual({row["termination_reason"] for row in rows}, {"close"})
            self.assertTrue((out / "confidence_curves.csv").is_file())
