"""
## Consistency metric (metrics)

tests/unit/metrics/test_keywords.py
- Keyword extraction and soft keyword overlap

tests/unit/metrics/test_consistency.py
- Latent similarity, pairwise consistency, medoid and mean pairwise score

tests/unit/metrics/test_baselines.py
- BLEU, Damerau-Levenshtein and ROUGE-1 baselines

tests/unit/metrics/test_validation.py
- Metric corpus loading and the three-group comparison

tests/unit/metrics/test_properties.py
- Symmetry, identity and range of the metric and baselines on random texts
- Keywords are substrings of their text
"""
