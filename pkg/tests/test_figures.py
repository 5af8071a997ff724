from pathlib import Path

import pytest

from srs.figures import FIGURES, phash_distance, render_figure

GOLDEN = Path(__file__).parent / "golden"
THRESHOLD = 8  # of 64 perceptual-hash bits


def test_goldens_are_mutually_distinct():
    names = sorted(FIGURES)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            assert phash_distance(GOLDEN / f"{a}.png", GOLDEN / f"{b}.png") > THRESHOLD


@pytest.mark.parametrize("name", ["fig1-twin-dragon", "fig1-point-tile", "fig4"])
def test_fast_figures_match_golden(name, tmp_path):
    out = tmp_path / f"{name}.png"
    render_figure(name, out)
    assert phash_distance(out, GOLDEN / f"{name}.png") <= THRESHOLD
