"""Piecewise Hough transform for elliptic cubic curves y^2 = m(x-n)^3 - a(x-n) - b.

Grids, detector configurations and results are plain dicts with the same
layout as the JSON documents written by the ``phough`` command-line tool.
"""

import json

from . import _core
from ._core import (
    PhoughError,
    canny_edges,
    concave_hull,
    curve_residual,
    load_pgm,
    same_curve,
    sample_curve,
    vertebra_profile,
)

__all__ = [
    "PhoughError",
    "bench",
    "canny_edges",
    "concave_hull",
    "curve_residual",
    "detect",
    "load_pgm",
    "profile_grid",
    "render",
    "same_curve",
    "sample_curve",
    "vertebra_profile",
    "vote_counts",
]


def _text(doc):
    if doc is None:
        return ""
    return doc if isinstance(doc, str) else json.dumps(doc)


def profile_grid():
    """Default 324135-cell grid sized for vertebra_profile()."""
    return json.loads(_core.profile_grid())


def vote_counts(points, grid):
    return _core.vote_counts(points, _text(grid))


def detect(points, grid, config=None, strategy="subtraction"):
    """Run the detector; returns the result document as a dict."""
    return json.loads(_core.detect(points, _text(grid), _text(config), strategy))


def bench(points, grid, config=None):
    """Update counts of layered subtraction versus re-voting."""
    return json.loads(_core.bench(points, _text(grid), _text(config)))


def render(points, result):
    """SVG overlay text for a result document."""
    return _core.render(points, _text(result))
