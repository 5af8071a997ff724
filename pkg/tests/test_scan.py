import csv
from fractions import Fraction as F

from PIL import Image

from srs.scan import FINITE, NONREDUCED, NOT_FINITE, OUTSIDE, UNKNOWN, classify, grid_axis, scan_d2, verdict_at, \
    write_scan_csv, write_scan_png


def test_known_cells():
    assert classify(F(1, 2), F(-1, 2)) == FINITE
    assert classify(F(9, 10), F(-11, 20)) == NOT_FINITE
    assert classify(F(3, 4), F(1)) == FINITE
    assert classify(F(0), F(1, 2)) == NONREDUCED
    assert classify(F(-1), F(0)) == OUTSIDE


def test_caps_give_unknown():
    assert classify(F(9, 10), F(-11, 20), point_cap=10) == UNKNOWN


def test_grid_axis():
    assert grid_axis(F(-1), F(1), F(1, 2)) == [F(-1), F(-1, 2), F(0), F(1, 2), F(1)]
    assert grid_axis(F(-1, 3), F(1, 3), F(1, 4)) == [F(-1, 4), F(0), F(1, 4)]


def test_coarse_scan_outputs(tmp_path):
    res = scan_d2(F(1, 4))
    assert verdict_at(res, F(1, 2), F(-1, 2)) == FINITE
    assert verdict_at(res, F(3, 4), 1) == FINITE
    # every finite cell lies in the closed triangle of spectral radius <= 1
    for (x, y), v in res["cells"].items():
        if v == FINITE:
            assert abs(x) <= 1 and abs(y) <= 1 + x
    write_scan_csv(res, tmp_path / "s.csv")
    rows = list(csv.reader(open(tmp_path / "s.csv")))
    assert rows[0] == ["r0", "r1", "verdict"] and len(rows) == 1 + len(res["cells"])
    write_scan_png(res, tmp_path / "a.png")
    write_scan_png(res, tmp_path / "b.png")
    assert (tmp_path / "a.png").read_bytes() == (tmp_path / "b.png").read_bytes()
    assert Image.open(tmp_path / "a.png").size == (6 * len(res["xs"]), 6 * len(res["ys"]))
