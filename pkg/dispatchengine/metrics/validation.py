import csv
import json
import logging
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Sequence, Union

import numpy as np

from dispatchengine.core.errors import ConfigError
from dispatchengine.metrics.baselines import BASELINES
from dispatchengine.metrics.consistency import KEYWORD_WEIGHT, ConsistencyMetric
from dispatchengine.utils.utils import resolve_config_path

logger = logging.getLogger(__name__)

METRIC_CORPUS_FILE = "metric_corpus.tsv"
GROUPS = (1, 2, 3)
METRIC_NAMES = ("consistency", "consistency_swapped", "bleu", "dld", "rouge1")


class MetricPair(NamedTuple):
    group: int
    text_a: str
    text_b: str


def load_metric_corpus(path: Optional[Union[str, Path]] = None) -> List[MetricPair]:
    """Read a ``group<TAB>text_a<TAB>text_b`` corpus with a header row.

    Raises:
        ConfigError: Missing file, malformed row, or no pairs at all
    """
    resolved = resolve_config_path(path, METRIC_CORPUS_FILE)
    if not resolved.is_file():
        raise ConfigError(f"Metric corpus not found: {resolved}")

    pairs: List[MetricPair] = []
    errors: List[str] = []
    with open(resolved, encoding="utf-8", newline="") as f:
        reader = csv.reader(f, delimiter="\t")
        header = next(reader, None)
        if header is None:
            raise ConfigError(f"Metric corpus is empty: {resolved}")
        if [h.strip().lower() for h in header] != ["group", "text_a", "text_b"]:
            errors.append(f"line 1: expected header group, text_a, text_b, got {header}")
        for line_no, row in enumerate(reader, start=2):
            if not row or not any(cell.strip() for cell in row):
                continue
            if len(row) != 3:
                errors.append(f"line {line_no}: expected 3 columns, got {len(row)}")
                continue
            try:
                group = int(row[0])
            except ValueError:
                errors.append(f"line {line_no}: group '{row[0]}' is not an integer")
                continue
            if group not in GROUPS:
                errors.append(f"line {line_no}: group {group} not in {list(GROUPS)}")
                continue
            pairs.append(MetricPair(group, row[1], row[2]))

    if errors:
        raise ConfigError(f"Invalid metric corpus {resolved}", errors)
    if not pairs:
        raise ConfigError(f"Metric corpus is empty: {resolved}")
    logger.debug(f"Loaded {len(pairs)} metric pairs from {resolved}")
    return pairs


def run_metric_validation(
    pairs: Sequence[MetricPair],
    keyword_weight: float = KEYWORD_WEIGHT,
) -> Dict[int, Dict[str, float]]:
    """Mean score of every metric per group.

    ``consistency_swapped`` applies ``keyword_weight`` to the semantic
    component instead of the keyword component.

    Raises:
        ConfigError: A group has no pairs
    """
    empty = [g for g in GROUPS if not any(p.group == g for p in pairs)]
    if empty:
        raise ConfigError(f"Metric corpus has no pairs for group(s) {empty}")

    metrics = {
        "consistency": ConsistencyMetric(keyword_weight=keyword_weight),
        "consistency_swapped": ConsistencyMetric(keyword_weight=1.0 - keyword_weight),
    }
    table: Dict[int, Dict[str, float]] = {}
    for group in GROUPS:
        scores: Dict[str, List[float]] = {name: [] for name in METRIC_NAMES}
        for pair in (p for p in pairs if p.group == group):
            for name, metric in metrics.items():
                scores[name].append(metric(pair.text_a, pair.text_b))
            for name, fn in BASELINES.items():
                scores[name].append(fn(pair.text_a, pair.text_b))
        table[group] = {name: float(np.mean(values)) for name, values in scores.items()}
        logger.debug(f"Group {group}: {table[group]}")
    return table


def format_validation_table(table: Dict[int, Dict[str, float]]) -> str:
    header = f"{'group':<6}" + "".join(f"{name:>21}" for name in METRIC_NAMES)
    lines = [header, "-" * len(header)]
    for group in sorted(table):
        row = table[group]
        lines.append(f"{group:<6}" + "".join(f"{row[name]:>21.4f}" for name in METRIC_NAMES))
    return "\n".join(lines)


def validation_table_json(table: Dict[int, Dict[str, float]]) -> str:
    return json.dumps({str(g): table[g] for g in sorted(table)}, indent=2, sort_keys=True)


def is_monotone(table: Dict[int, Dict[str, float]], metric: str = "consistency") -> bool:
    """True when the metric's group means strictly increase from group 1 to 3."""
    means = [table[g][metric] for g in GROUPS]
    return all(a < b for a, b in zip(means, means[1:]))
