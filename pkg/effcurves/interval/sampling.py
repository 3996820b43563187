"""
Randomised counterexample search with the high-precision point oracle.

Used to cross-examine the certifier: a Proved verdict on an inequality for
which sampling finds a negative value would be a soundness bug.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np

from ..errors import DomainError
from .evaluate import Box, eval_point
from .expr import Expr, variables

logger = logging.getLogger(__name__)


def sample_points(box: Box, samples: int, seed: int = 0) -> List[Dict[str, Fraction]]:
    """Corners of the box followed by uniform random points (reproducible by seed)."""
    rng = np.random.default_rng(seed)
    names = box.names()
    points: List[Dict[str, Fraction]] = [
        {n: box[n].lo_fraction for n in names},
        {n: box[n].hi_fraction for n in names},
    ]
    if not names:
        return points[:1]
    lows = np.array([float(box[n].lo_fraction) for n in names])
    highs = np.array([float(box[n].hi_fraction) for n in names])
    draws = rng.uniform(lows, highs, size=(samples, len(names)))
    for row in draws:
        point = {}
        for n, value in zip(names, row):
            q = Fraction(float(value))
            point[n] = min(max(q, box[n].lo_fraction), box[n].hi_fraction)
        points.append(point)
    return points


def find_counterexample(e: Expr, box: Box, samples: int = 256, seed: int = 0,
                        precision: int = 512) -> Optional[Dict[str, Fraction]]:
    """
    Look for a point of box where e evaluates below zero.

    Points where e is undefined are skipped.

    Returns:
        The first such point, or None
    """
    names = variables(e)
    for point in sample_points(box, samples, seed):
        try:
            value = eval_point(e, {n: point[n] for n in names}, precision)
        except DomainError:
            continue
        if value < 0:
            logger.info("counterexample for %s at %s", e, point)
            return point
    return None
