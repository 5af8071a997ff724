"""Point clouds and deterministic renders for the reference figures."""

from __future__ import annotations

import itertools
import json
from fractions import Fraction

import numpy as np
from PIL import Image
from PIL.PngImagePlugin import PngInfo

from .beta import integral_beta_tile_approx, pisot_spec
from .cns import IntPolynomial, self_affine_tile_approx
from .export import raster
from .params import SrsParameter
from .tiles import tile_approx

PALETTE = [
    (31, 119, 180), (255, 127, 14), (44, 160, 44), (214, 39, 40), (148, 103, 189),
    (140, 86, 75), (227, 119, 194), (127, 127, 127), (188, 189, 34), (23, 190, 207),
]


def twin_dragon(n: int = 14) -> list:
    pts = self_affine_tile_approx(IntPolynomial((2, 2, 1)), n)
    return [np.array([[float(c) for c in p] for p in pts])]


def _beta_central(minpoly, n):
    spec = pisot_spec(minpoly)
    t = integral_beta_tile_approx(spec, (0,) * spec.d, n, route="b")
    return [t.route_b]


def rauzy(n: int = 16) -> list:
    return _beta_central((-1, -1, -1, 1), n)


def hokkaido(n: int = 30) -> list:
    return _beta_central((-1, -1, 0, 1), n)


def cubic_beta_tile(n: int = 10) -> list:
    """Central integral beta-tile for beta^3 = 3 beta^2 - 1."""
    return _beta_central((1, 0, -3, 1), n)


def point_tile(n: int = 70) -> list:
    r = SrsParameter([Fraction(9, 10), Fraction(-11, 20)])
    return [tile_approx(r, (0, 0), n).array()]


def patch(r: SrsParameter, reach: int, n: int) -> list:
    """Tiles T_r(x) for all x with max-norm <= reach, one layer each."""
    out = []
    for x in itertools.product(range(-reach, reach + 1), repeat=r.d):
        out.append(tile_approx(r, x, n).array())
    return out


def half_patch(n: int = 12) -> list:
    return patch(SrsParameter([Fraction(1, 2), Fraction(-1, 2)]), 1, n)


FIGURES = {
    "fig1-twin-dragon": twin_dragon,
    "fig1-rauzy": rauzy,
    "fig1-hokkaido": hokkaido,
    "fig1-point-tile": point_tile,
    "fig4": half_patch,
    "fig6-right": cubic_beta_tile,
}


def render_layers(layers, path, size: int = 256, dot_px: float = 1.5) -> dict:
    """Render point sets in palette colours on a shared frame; later layers on top."""
    allpts = np.vstack(layers)
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    span = float(max(hi - lo))
    pad = 0.02 * span
    bounds = (lo[0] - pad, lo[1] - pad, hi[0] + pad, hi[1] + pad)
    ppu = (size - 1) / (span + 2 * pad)
    radius = dot_px / ppu
    img = None
    meta = None
    for i, pts in enumerate(layers):
        mask, meta = raster(pts, radius, ppu=ppu, bounds=bounds)
        if img is None:
            img = np.full(mask.shape + (3,), 255, dtype=np.uint8)
        img[mask] = PALETTE[i % len(PALETTE)] if len(layers) > 1 else (0, 0, 0)
    info = PngInfo()
    info.add_text("srs-axes", json.dumps(meta, sort_keys=True))
    Image.fromarray(img, "RGB").save(path, format="PNG", pnginfo=info, optimize=False)
    return meta


def render_figure(name: str, path, size: int = 256) -> dict:
    if name not in FIGURES:
        raise ValueError(f"unknown figure {name!r}; choose from {sorted(FIGURES)}")
    return render_layers(FIGURES[name](), path, size)


def phash_distance(a, b) -> int:
    import imagehash

    return imagehash.phash(Image.open(a)) - imagehash.phash(Image.open(b))
