"""
Family sweeps. Deselected by default; run with ``pytest -m slow``.
"""

import pytest

from app.catalog import digraph_family
from app.models import CheckStatus
from app.services import SweepService


def failures(report) -> list[str]:
    return [f"{c.name}: {c.detail}" for c in report.checks if c.status == CheckStatus.FAIL]


@pytest.mark.slow
@pytest.mark.parametrize("family", SweepService.FAMILIES)
def test_family_sweep_prefix_has_no_failures(family):
    report = SweepService.run(family, limit=60, seed=0)
    assert report.values["instances"] > 0
    assert failures(report) == []


@pytest.mark.slow
@pytest.mark.parametrize("family", SweepService.FAMILIES)
def test_full_family_sweep_passes(family):
    report = SweepService.run(family, limit=None, seed=0)
    assert report.values["instances"] > 0
    assert all(c.status == CheckStatus.PASS for c in report.checks), failures(report)


@pytest.mark.slow
def test_digraph_family_covers_five_vertices_and_eight_edges():
    graphs = digraph_family()
    assert len(graphs) >= 500
    assert all(G.n <= 5 and G.m <= 8 for G in graphs)
    assert max(G.n for G in graphs) == 5
    assert any(G.n == 1 and G.m > 0 for G in graphs)

