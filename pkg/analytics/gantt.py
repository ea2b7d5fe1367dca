"""
Gantt rendering for the scheduling lab.
Draws one lane per schedule (ALG above OPT) as an SVG, or as plain text.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from core.models import Instance, Schedule  # noqa: E402

logger = logging.getLogger(__name__)

Lane = Tuple[str, Schedule]


@dataclass
class GanttStyle:
    """Figure size and colors, overridable from config/harness.yaml."""
    width: float = 10.0
    height: float = 3.0
    colors: Dict[str, str] = field(default_factory=lambda: {
        "ALG": "#4c72b0",
        "OPT": "#dd8452",
        "announce": "#555555",
        "release": "#2ca02c",
        "charge": "#c44e52",
    })

    def color(self, key: str, default: str = "#8c8c8c") -> str:
        return self.colors.get(key, default)


def _horizon(instance: Instance, lanes: Sequence[Lane]) -> Fraction:
    ends = [Fraction(1)]
    for _, schedule in lanes:
        ends.extend(end for _, _, end in schedule.intervals(instance))
        ends.extend(instance.job(job_id).r for job_id in schedule.job_ids())
    return max(ends)


def render_gantt(instance: Instance, lanes: Sequence[Lane], out_path: Union[str, Path],
                 charges: Optional[Sequence] = None, style: Optional[GanttStyle] = None) -> Path:
    """Write an SVG Gantt chart; identical inputs give identical bytes.

    Args:
        instance: Jobs referenced by the schedules
        lanes: (label, schedule) pairs drawn top to bottom
        out_path: Destination SVG path
        charges: Optional charges drawn as arrows from OPT jobs to ALG jobs
        style: Figure size and colors

    Returns:
        The written path
    """
    style = style or GanttStyle()
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    plt.rcParams["svg.hashsalt"] = "sched-lab"

    fig, ax = plt.subplots(figsize=(style.width, style.height))
    centers: Dict[Tuple[str, int], Tuple[float, float]] = {}
    for row, (label, schedule) in enumerate(lanes):
        y = len(lanes) - row - 1
        color = style.color(label)
        bars = [(float(start), float(end - start)) for _, start, end in schedule.intervals(instance)]
        if bars:
            ax.broken_barh(bars, (y - 0.35, 0.7), facecolors=color, edgecolor="black", linewidth=0.5)
        for job_id, start, end in schedule.intervals(instance):
            middle = float(start + end) / 2
            centers[(label, job_id)] = (middle, y)
            ax.text(middle, y, str(job_id), ha="center", va="center", fontsize=8, color="white")
            job = instance.job(job_id)
            ax.plot([float(job.a)], [y - 0.42], marker="v", markersize=4, color=style.color("announce"))
            ax.plot([float(job.r)], [y - 0.42], marker="|", markersize=8, color=style.color("release"))

    if charges:
        for charge in charges:
            source = centers.get(("OPT", charge.opt_job_id))
            target = centers.get(("ALG", charge.alg_job_id))
            if source is None or target is None:
                continue
            ax.annotate("", xy=target, xytext=source,
                        arrowprops={"arrowstyle": "->", "color": style.color("charge"), "linewidth": 0.8})

    ax.set_xlim(0, float(_horizon(instance, lanes)) * 1.02)
    ax.set_ylim(-0.6, max(len(lanes), 1) - 0.4)
    ax.set_yticks(range(len(lanes)))
    ax.set_yticklabels([label for label, _ in reversed(lanes)])
    ax.set_xlabel("Time")
    ax.grid(True, axis="x", alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)
    logger.info(f"Gantt chart saved to {out_path}")
    return out_path


def render_gantt_text(instance: Instance, lanes: Sequence[Lane], width: int = 72) -> str:
    """Plain-text Gantt chart; each job is drawn with the last digit of its id."""
    horizon = _horizon(instance, lanes)
    label_width = max([len(label) for label, _ in lanes] + [4])
    lines: List[str] = []
    for label, schedule in lanes:
        cells = ["."] * width
        for job_id, start, end in schedule.intervals(instance):
            first = int(start * width / horizon)
            last = max(first + 1, int(end * width / horizon))
            for i in range(first, min(last, width)):
                cells[i] = str(job_id)[-1]
        lines.append(f"{label.ljust(label_width)} |{''.join(cells)}|")
    lines.append(f"{'time'.ljust(label_width)}  0{str(horizon).rjust(width - 1)}")
    return "\n".join(lines) + "\n"
