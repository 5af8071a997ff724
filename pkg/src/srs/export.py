"""Deterministic CSV / JSON / PNG / SVG output for point clouds."""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np
from PIL import Image
from PIL.PngImagePlugin import PngInfo
from scipy.ndimage import distance_transform_edt

MAX_PIXELS = 8192 * 8192


def _fmt(c, decimals):
    if decimals is None:
        c = Fraction(c)
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return f"{float(c):.{decimals}f}"


def write_csv(points: Sequence, path, decimals: int | None = None) -> None:
    """One point per line; exact "num/den" unless ``decimals`` is given."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for p in points:
            w.writerow([_fmt(c, decimals) for c in p])


def read_csv(path) -> list[tuple]:
    with open(path, newline="") as fh:
        return [tuple(Fraction(c) for c in row) for row in csv.reader(fh) if row]


def write_json(payload: dict, path) -> None:
    Path(path).write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")


def raster(points, radius: float = 0.0, *, size: int = 512, ppu: float | None = None,
           bounds=None, axes=(0, 1), pad: float = 0.02):
    """Boolean image of the union of discs of ``radius`` (data units) around the points.

    Returns (mask, meta) where mask[row, col] has row 0 at the top (largest y).
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[0] == 0:
        raise ValueError("nothing to render")
    if pts.shape[1] == 1:
        pts = np.column_stack([pts[:, 0], np.zeros(len(pts))])
    else:
        pts = pts[:, list(axes)]
    if bounds is None:
        lo = pts.min(axis=0) - radius
        hi = pts.max(axis=0) + radius
        span = np.maximum(hi - lo, 1e-9)
        lo, hi = lo - pad * span, hi + pad * span
    else:
        lo = np.array(bounds[:2], dtype=float)
        hi = np.array(bounds[2:], dtype=float)
    span = hi - lo
    if ppu is None:
        ppu = (size - 1) / float(max(span))
    w = int(math.floor(span[0] * ppu)) + 1
    h = int(math.floor(span[1] * ppu)) + 1
    if w * h > MAX_PIXELS:
        raise ValueError(f"raster of {w}x{h} pixels exceeds the cap; lower --ppu or --size")
    cols = np.floor((pts[:, 0] - lo[0]) * ppu + 0.5).astype(int)
    rows = np.floor((hi[1] - pts[:, 1]) * ppu + 0.5).astype(int)
    ok = (cols >= 0) & (cols < w) & (rows >= 0) & (rows < h)
    mask = np.zeros((h, w), dtype=bool)
    mask[rows[ok], cols[ok]] = True
    rpx = radius * ppu
    if rpx >= 1:
        mask = distance_transform_edt(~mask) <= rpx
    meta = {"xmin": float(lo[0]), "ymin": float(lo[1]), "xmax": float(hi[0]), "ymax": float(hi[1]),
            "pixels_per_unit": float(ppu), "disc_radius": float(radius), "axes": list(axes)}
    return mask, meta


def write_png(points, path, radius: float = 0.0, *, fg=(0, 0, 0), bg=(255, 255, 255), **kw) -> dict:
    mask, meta = raster(points, radius, **kw)
    img = np.empty(mask.shape + (3,), dtype=np.uint8)
    img[:] = bg
    img[mask] = fg
    info = PngInfo()
    info.add_text("srs-axes", json.dumps(meta, sort_keys=True))
    Image.fromarray(img, "RGB").save(path, format="PNG", pnginfo=info, optimize=False)
    return meta


def write_svg(points, path, radius: float = 0.0, *, axes=(0, 1), color="#000000", decimals: int = 6) -> None:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1 or pts.shape[1] == 1:
        pts = np.column_stack([pts.reshape(-1), np.zeros(pts.shape[0])])
    else:
        pts = pts[:, list(axes)]
    r = radius if radius > 0 else 1e-3 * float(max(np.ptp(pts, axis=0).max(), 1e-9))
    lo = pts.min(axis=0) - r
    hi = pts.max(axis=0) + r
    f = f"{{:.{decimals}f}}"
    out = io.StringIO()
    out.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    out.write(f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{f.format(lo[0])} {f.format(-hi[1])} '
              f'{f.format(hi[0] - lo[0])} {f.format(hi[1] - lo[1])}">\n')
    out.write(f'<desc>axes={list(axes)} disc_radius={f.format(radius)}</desc>\n')
    out.write(f'<g fill="{color}">\n')
    for x, y in pts:
        out.write(f'<circle cx="{f.format(x)}" cy="{f.format(-y)}" r="{f.format(r)}"/>\n')
    out.write("</g>\n</svg>\n")
    Path(path).write_text(out.getvalue())


def export_tile(approx, fmt: str, path, **options):
    """Write a TileApprox; PNG/SVG discs have radius eps_n unless overridden."""
    fmt = fmt.lower()
    radius = options.pop("radius", None)
    if radius is None:
        radius = float(approx.error_bound)
    if fmt == "csv":
        write_csv(approx.points, path, options.get("decimals"))
    elif fmt == "json":
        write_json(approx.to_json(), path)
    elif fmt == "png":
        return write_png(approx.array(), path, radius, **options)
    elif fmt == "svg":
        write_svg(approx.array(), path, radius, **options)
    else:
        raise ValueError(f"unknown format {fmt!r}")
