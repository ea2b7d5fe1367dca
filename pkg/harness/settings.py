"""
Harness settings for the scheduling lab.
Loads config/harness.yaml, falling back to built-in defaults.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Tuple

import yaml

from analytics.gantt import GanttStyle
from core.models import to_time

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = str(Path(__file__).resolve().parent.parent / "config" / "harness.yaml")


@dataclass
class GeneratorSettings:
    """Parameters handed to random_instance."""
    horizon: Fraction = Fraction(10)
    p_range: Tuple[Fraction, Fraction] = (Fraction(1, 2), Fraction(3))
    slack_range: Tuple[Fraction, Fraction] = (Fraction(0), Fraction(2))
    denominator: int = 100


@dataclass
class HarnessSettings:
    """Defaults for every harness command."""
    t_values: List[Fraction] = field(default_factory=lambda: [
        Fraction(1, 10), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)])
    trials: int = 100
    max_n: int = 8
    base_seed: int = 0
    workers: int = 1
    output_dir: str = "results"
    generator: GeneratorSettings = field(default_factory=GeneratorSettings)
    gantt: GanttStyle = field(default_factory=GanttStyle)


def _pair(values: Any, default: Tuple[Fraction, Fraction]) -> Tuple[Fraction, Fraction]:
    if values is None:
        return default
    low, high = values
    return to_time(str(low)), to_time(str(high))


def load_settings(config_path: str = DEFAULT_CONFIG_PATH) -> HarnessSettings:
    """Load harness settings from YAML.

    Args:
        config_path: Path to the YAML file

    Returns:
        HarnessSettings; defaults if the file is missing or unreadable
    """
    try:
        with open(config_path, 'r') as file:
            config: Dict[str, Any] = yaml.safe_load(file) or {}

        defaults = HarnessSettings()
        sweep = config.get('sweep', {})
        gen = config.get('generator', {})
        gantt = config.get('gantt', {})
        base_gen = GeneratorSettings()
        base_style = GanttStyle()

        return HarnessSettings(
            t_values=[to_time(str(t)) for t in sweep.get('t_values', defaults.t_values)],
            trials=int(sweep.get('trials', defaults.trials)),
            max_n=int(sweep.get('max_n', defaults.max_n)),
            base_seed=int(sweep.get('base_seed', defaults.base_seed)),
            workers=int(sweep.get('workers', defaults.workers)),
            output_dir=str(config.get('output', {}).get('directory', defaults.output_dir)),
            generator=GeneratorSettings(
                horizon=to_time(str(gen.get('horizon', base_gen.horizon))),
                p_range=_pair(gen.get('p_range'), base_gen.p_range),
                slack_range=_pair(gen.get('slack_range'), base_gen.slack_range),
                denominator=int(gen.get('denominator', base_gen.denominator)),
            ),
            gantt=GanttStyle(
                width=float(gantt.get('width', base_style.width)),
                height=float(gantt.get('height', base_style.height)),
                colors={**base_style.colors, **gantt.get('colors', {})},
            ),
        )

    except Exception as e:
        logger.warning(f"Error loading harness settings from {config_path}, using defaults: {e}")
        return HarnessSettings()
