"""
Sweep summaries for the scheduling lab.
Reduces sweep rows to the worst observed ratio per notice level.
"""

import logging
from typing import List, Sequence

import pandas as pd

from core.models import format_rational

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = ["t", "trials", "min_ratio", "min_greedy_ratio", "bound", "violations"]


def summarize_sweep(rows: Sequence) -> pd.DataFrame:
    """Per-t minimum ratio of the algorithm and of greedy, with bound violations counted.

    Args:
        rows: SweepRow objects

    Returns:
        DataFrame with one row per t, ordered by t
    """
    if not rows:
        return pd.DataFrame(columns=SUMMARY_COLUMNS)
    rows = sorted(rows, key=lambda row: row.t)
    frame = pd.DataFrame({
        "t": [format_rational(row.t) for row in rows],
        "ratio": [float(row.ratio) for row in rows],
        "greedy_ratio": [float(row.greedy_ratio) for row in rows],
        "bound": [float(row.bound) for row in rows],
        "violation": [not row.ok for row in rows],
    })
    summary = (frame.groupby("t", sort=False)
               .agg(trials=("ratio", "size"),
                    min_ratio=("ratio", "min"),
                    min_greedy_ratio=("greedy_ratio", "min"),
                    bound=("bound", "first"),
                    violations=("violation", "sum"))
               .reset_index())
    return summary[SUMMARY_COLUMNS]


def format_summary(summary: pd.DataFrame) -> List[str]:
    """One printable line per t."""
    lines = []
    for record in summary.to_dict("records"):
        lines.append(f"t={record['t']}: {record['trials']} trials, min ratio {float(record['min_ratio']):.6f} "
                     f"(greedy {float(record['min_greedy_ratio']):.6f}), bound {float(record['bound']):.6f}, "
                     f"violations {int(record['violations'])}")
    for line in lines:
        logger.info(f"Sweep summary: {line}")
    return lines
