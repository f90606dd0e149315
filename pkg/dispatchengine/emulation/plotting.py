import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from dispatchengine.emulation.harness import CurvePoint, EmulationReport, mean_saved_by_size

logger = logging.getLogger(__name__)


def _pyplot() -> Any:
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError as e:
        raise ImportError(
            "Plotting requires matplotlib. Install it with: pip install dispatch-engine[plot]"
        ) from e
    return plt


def plot_saved_turns(
    reports: Iterable[EmulationReport],
    path: Union[str, Path],
    average_size: Optional[float] = None,
    maximum_size: Optional[float] = None,
) -> None:
    """Mean saved turns per utterance size, with optional real-world size markers."""
    plt = _pyplot()
    means = mean_saved_by_size(reports)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(list(means), list(means.values()), marker="o", color="tab:blue")
    if average_size is not None:
        ax.axvline(average_size, color="green", linestyle="--", label="average utterance size")
    if maximum_size is not None:
        ax.axvline(maximum_size, color="red", linestyle="--", label="maximum utterance size")
    if average_size is not None or maximum_size is not None:
        ax.legend()
    ax.set_xlabel("Utterance size (segments)")
    ax.set_ylabel("Mean saved turns")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    logger.info(f"Saved-turns plot written to {path}")


def plot_confidence_curves(
    points: Iterable[CurvePoint],
    path: Union[str, Path],
    threshold: Optional[float] = None,
) -> None:
    """One panel per scenario with the per-turn positive-vote share of each type."""
    plt = _pyplot()
    grouped: Dict[str, Dict[str, List[CurvePoint]]] = {}
    for p in points:
        grouped.setdefault(p.scenario_id, {}).setdefault(p.type_id, []).append(p)
    if not grouped:
        logger.warning("No confidence curve points to plot")
        return

    fig, axes = plt.subplots(
        1, len(grouped), figsize=(3.5 * len(grouped), 3), squeeze=False, sharey=True
    )
    for ax, (scenario_id, series) in zip(axes[0], sorted(grouped.items())):
        for type_id, pts in sorted(series.items()):
            pts = sorted(pts, key=lambda p: p.turn)
            ax.plot([p.turn for p in pts], [p.conf for p in pts], marker=".", label=type_id)
        if threshold is not None:
            ax.axhline(threshold, color="gray", linestyle=":")
        ax.set_title(scenario_id, fontsize=8)
        ax.set_xlabel("Caller turn")
        ax.set_ylim(-0.05, 1.05)
        ax.legend(fontsize=6)
    axes[0][0].set_ylabel("Positive-vote share")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    logger.info(f"Confidence curve plot written to {path}")
