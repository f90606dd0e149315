import unittest

import numpy as np

from dispatchengine.core.interface import (
    ActionKind,
    DialogueContext,
    Embedder,
    HandoverReason,
    ItemizationResult,
    SessionStatus,
    SlotStatus,
    Speaker,
    StochasticBinaryClassifier,
    StochasticExtractor,
    SystemAction,
    Utterance,
)


class TestEnums(unittest.TestCase):
    """String values of the engine enums"""

    def test_values(self):
        self.assertEqual(SlotStatus.EMPTY.value, "empty")
        self.assertEqual(SlotStatus.TENTATIVE.value, "tentative")
        self.assertEqual(SlotStatus.DONE.value, "done")
        self.assertEqual(SessionStatus.HANDED_OVER.value, "handed_over")
        self.assertEqual(HandoverReason.HUMAN_REQUEST.value, "human_request")
        self.assertEqual(ActionKind.CLARIFY.value, "clarify")


class TestUtterance(unittest.TestCase):
    """Utterance validation"""

    def test_blank_caller_text_rejected(self):
        with self.assertRaises(ValueError):
            Utterance(Speaker.CALLER, "   ", 0)

    def test_blank_system_text_allowed(self):
        self.assertEqual(Utterance(Speaker.SYSTEM, "", 0).text, "")

    def test_negative_turn_rejected(self):
        with self.assertRaises(ValueError):
            Utterance(Speaker.SYSTEM, "hello", -1)


class TestDialogueContext(unittest.TestCase):
    """Turn indices and context views"""

    def test_turn_indices_increase(self):
        context = DialogueContext()
        first = context.append(Speaker.SYSTEM, "What is the location of the incident?")
        second = context.append(Speaker.CALLER, "My wallet is gone.")
        self.assertEqual((first.turn_index, second.turn_index), (0, 1))

    def test_full_context_joins_caller_turns(self):
        context = DialogueContext()
        context.append(Speaker.SYSTEM, "Where?")
        context.append(Speaker.CALLER, "My bike was stolen.")
        context.append(Speaker.SYSTEM, "Name?")
        context.append(Speaker.CALLER, "Dana Reyes.")
        self.assertEqual(context.full_context(), "My bike was stolen. Dana Reyes.")
        self.assertEqual(context.latest().text, "Dana Reyes.")
        self.assertEqual(len(context.caller_utterances()), 2)

    def test_latest_without_caller(self):
        self.assertIsNone(DialogueContext().latest())


class TestSystemAction(unittest.TestCase):
    """Action constructors and their rendering"""

    def test_str(self):
        self.assertEqual(str(SystemAction.ask("caller-name")), "ask(caller-name)")
        self.assertEqual(str(SystemAction.clarify("caller-phone")), "clarify(caller-phone)")
        self.assertEqual(str(SystemAction.handover(HandoverReason.URGENCY)), "handover(urgency)")
        self.assertEqual(str(SystemAction.close()), "close")

    def test_equality(self):
        self.assertEqual(SystemAction.ask("caller-name"), SystemAction.ask("caller-name"))
        self.assertNotEqual(SystemAction.ask("caller-name"), SystemAction.clarify("caller-name"))


class TestResults(unittest.TestCase):
    def test_absent_item(self):
        self.assertTrue(ItemizationResult("caller-name", None, 0.0).absent)
        self.assertFalse(ItemizationResult("property-owned", False, 1.0).absent)


class TestProtocols(unittest.TestCase):
    """Backends are recognized structurally"""

    def test_classifier_protocol(self):
        class Constant:
            def classify(self, text, label, trial_seed, exclude=()):
                return 0.5

        self.assertIsInstance(Constant(), StochasticBinaryClassifier)
        self.assertNotIsInstance(Constant(), StochasticExtractor)

    def test_extractor_protocol(self):
        class Echo:
            def extract(self, field_id, question, utterance, trial_seed):
                return utterance

        self.assertIsInstance(Echo(), StochasticExtractor)

    def test_embedder_protocol(self):
        class Zero:
            def embed(self, text):
                return np.zeros(4)

        self.assertIsInstance(Zero(), Embedder)
