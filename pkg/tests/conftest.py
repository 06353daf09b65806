"""Shared design builders for the test suite."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gridmixer import GridDesign, parse_design


def make_design(
    rows: int,
    cols: int,
    vertical=(),
    horizontal=(),
    inlets=(),
    outlets=(),
    **extra,
) -> GridDesign:
    """Build a design from terse channel/inlet tuples."""
    raw = {
        "rows": rows,
        "cols": cols,
        "verticalChannels": [list(k) for k in vertical],
        "horizontalChannels": [list(k) for k in horizontal],
        "inlets": [
            {"col": c, "concentration": conc, "velocity": v} for c, conc, v in inlets
        ],
        "outlets": list(outlets),
    }
    raw.update(extra)
    return parse_design(json.dumps(raw))


@pytest.fixture
def minimal_design() -> GridDesign:
    """1x1 grid, one vertical channel, inlet c=1 v=1 at col 0, outlet col 0."""
    return make_design(
        1, 1, vertical=[(0, 0)], inlets=[(0, 1.0, 1.0)], outlets=[0]
    )


@pytest.fixture
def fig4_design() -> GridDesign:
    """Two inlets converge into a join, straight channel down, then a split."""
    return make_design(
        2,
        2,
        vertical=[(0, 0), (0, 2), (1, 1)],
        horizontal=[(1, 0), (1, 1), (2, 0), (2, 1)],
        inlets=[(0, 1.0, 1.0), (2, 0.0, 1.0)],
        outlets=[0, 2],
    )


@pytest.fixture
def benchmark_3x3() -> GridDesign:
    """Symmetric 3x3 benchmark: two bypasses, center join, bottom split."""
    return make_design(
        3,
        3,
        vertical=[(0, 0), (0, 2), (1, 0), (2, 0), (1, 1), (2, 1), (1, 2), (2, 2)],
        horizontal=[(1, 0), (1, 1), (3, 0), (3, 1)],
        inlets=[(0, 1.0, 1.0), (2, 0.0, 1.0)],
        outlets=[0, 2],
    )
