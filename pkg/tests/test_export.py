import json
from fractions import Fraction as F

import numpy as np
from PIL import Image

from srs.export import export_tile, raster, read_csv, write_csv, write_png, write_svg
from srs.tiles import tile_approx
from conftest import param


def test_csv_roundtrip(tmp_path):
    pts = [(F(1, 3), F(-2)), (F(0), F(5, 7))]
    write_csv(pts, tmp_path / "p.csv")
    assert read_csv(tmp_path / "p.csv") == pts


def test_singleton_png_has_one_disc(tmp_path, r311):
    t = tile_approx(r311, (-1, -1), 3)
    meta = write_png(t.array(), tmp_path / "one.png", radius=0.5, size=64)
    img = np.array(Image.open(tmp_path / "one.png").convert("L")) < 128
    from scipy.ndimage import label
    assert label(img)[1] == 1
    assert json.loads(Image.open(tmp_path / "one.png").text["srs-axes"])["disc_radius"] == 0.5


def test_png_deterministic(tmp_path, rhalf):
    t = tile_approx(rhalf, (0, 0), 8)
    export_tile(t, "png", tmp_path / "a.png", radius=0.02)
    export_tile(t, "png", tmp_path / "b.png", radius=0.02)
    assert (tmp_path / "a.png").read_bytes() == (tmp_path / "b.png").read_bytes()


def test_svg_and_json(tmp_path, rhalf):
    t = tile_approx(rhalf, (0, 0), 3)
    export_tile(t, "svg", tmp_path / "t.svg")
    assert (tmp_path / "t.svg").read_text().count("<circle") == 8
    export_tile(t, "json", tmp_path / "t.json")
    payload = json.loads((tmp_path / "t.json").read_text())
    assert len(payload["points"]) == 8 and payload["level"] == 3


def test_raster_frame():
    mask, meta = raster([[0, 0], [1, 1]], 0.0, size=11, pad=0.0)
    assert mask.shape == (11, 11) and mask[0, 10] and mask[10, 0]
