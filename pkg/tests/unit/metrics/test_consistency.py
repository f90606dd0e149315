import unittest

import numpy as np

from dispatchengine.metrics.consistency import (
    ConsistencyMetric,
    mean_pairwise_consistency,
    pairwise_consistency,
)
from dispatchengine.metrics.embedding import HashedTrigramEmbedder, semantic_similarity


class TestSemanticSimilarity(unittest.TestCase):
    """Latent-space similarity"""

    def test_embedding_shape_and_norm(self):
        vec = HashedTrigramEmbedder().embed("Silver Camaro")
        self.assertEqual(vec.shape, (256,))
        self.assertAlmostEqual(float(np.linalg.norm(vec)), 1.0)

    def test_identical(self):
        self.assertEqual(semantic_similarity("Jane Doe", "Jane Doe"), 1.0)

    def test_stopwords_ignored(self):
        self.assertAlmostEqual(semantic_similarity("on the 2525 West End Ave", "2525 West End Ave"), 1.0)

    def test_empty_text_is_neutral(self):
        self.assertEqual(semantic_similarity("", "Jane Doe"), 0.5)

    def test_range(self):
        for a, b in [("Silver Camaro", "65 South exit 92"), ("Jane Doe", "Jane Smith")]:
            s = semantic_similarity(a, b)
            self.assertGreaterEqual(s, 0.0)
            self.assertLessEqual(s, 1.0)


class TestConsistencyMetric(unittest.TestCase):
    """Weighted keyword and latent consistency"""

    @classmethod
    def setUpClass(cls):
        cls.metric = ConsistencyMetric()

    def test_near_identical_answers(self):
        self.assertGreaterEqual(round(self.metric("on the 2525 West End Ave", "2525 West End Ave"), 6), 0.8)

    def test_unrelated_answers(self):
        self.assertLess(self.metric("65 South exit 92", "Silver Camaro"), 0.3)

    def test_identical(self):
        self.assertEqual(self.metric("Silver Camaro", "Silver Camaro"), 1.0)

    def test_symmetric(self):
        a, b = "a silver Camaro", "a silver Camaro with a dented bumper"
        self.assertEqual(self.metric.score(a, b), self.metric.score(b, a))

    def test_components(self):
        score = pairwise_consistency("Jane Doe", "it is Jane Doe")
        self.assertAlmostEqual(
            score.value, 0.2 * score.keyword_overlap + 0.8 * score.semantic_similarity
        )

    def test_keyword_weight(self):
        keywords_only = ConsistencyMetric(keyword_weight=1.0)
        score = keywords_only.score("Silver Camaro", "a silver Camaro")
        self.assertEqual(score.value, score.keyword_overlap)
        with self.assertRaises(ValueError):
            ConsistencyMetric(keyword_weight=1.5)

    def test_mean_pairwise(self):
        self.assertEqual(self.metric.mean_pairwise(["Dana Reyes"]), 1.0)
        self.assertEqual(self.metric.mean_pairwise(["Dana Reyes", "Dana Reyes", "Dana Reyes"]), 1.0)
        mixed = self.metric.mean_pairwise(["Dana Reyes", "Dana Reyes", "Silver Camaro"])
        expected = (1.0 + 2 * self.metric("Dana Reyes", "Silver Camaro")) / 3
        self.assertAlmostEqual(mixed, expected)
        self.assertAlmostEqual(mean_pairwise_consistency(["Dana Reyes", "Silver Camaro"]), self.metric("Dana Reyes", "Silver Camaro"))

    def test_medoid(self):
        outputs = ["Silver Camaro", "2525 West End Ave", "at 2525 West End Ave", "2525 West End Ave"]
        value, score = self.metric.medoid(outputs)
        self.assertEqual(value, "2525 West End Ave")
        self.assertGreater(score, 0.5)

    def test_medoid_tie_goes_to_first(self):
        value, _ = self.metric.medoid(["Dana Reyes", "Silver Camaro"])
        self.assertEqual(value, "Dana Reyes")

    def test_medoid_empty(self):
        with self.assertRaises(ValueError):
            self.metric.medoid([])
