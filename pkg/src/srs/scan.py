"""Rational-grid scan of the parameter plane for d = 2 (finiteness region)."""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Sequence

import numpy as np
from PIL import Image, ImageDraw
from PIL.PngImagePlugin import PngInfo

from .dynamics import decide_finiteness
from .errors import InconclusiveError, NotInteriorError, UndecidableError
from .params import SrsParameter, is_interior_Dd

FINITE, NOT_FINITE, OUTSIDE, UNKNOWN, NONREDUCED = "finite", "not_finite", "outside", "unknown", "nonreduced"

COLORS = {
    FINITE: (0, 0, 0),
    NOT_FINITE: (200, 200, 200),
    OUTSIDE: (255, 255, 255),
    UNKNOWN: (220, 40, 40),
    NONREDUCED: (255, 255, 255),
}


def classify(r0: Fraction, r1: Fraction, step_cap: int = 10**5, point_cap: int = 40000) -> str:
    """Verdict for one grid cell; caps turn into "unknown", never a guess."""
    if r0 == 0:
        return NONREDUCED
    r = SrsParameter([Fraction(r0), Fraction(r1)])
    if not is_interior_Dd(r):
        return OUTSIDE
    try:
        return FINITE if decide_finiteness(r, step_cap, point_cap) else NOT_FINITE
    except (InconclusiveError, UndecidableError, NotInteriorError):
        return UNKNOWN


def _classify_args(args):
    return classify(*args)


def grid_axis(lo: Fraction, hi: Fraction, step: Fraction) -> list[Fraction]:
    out = []
    k = -((-lo) // step)  # ceil(lo / step)
    x = k * step
    while x <= hi:
        out.append(Fraction(x))
        k += 1
        x = k * step
    return out


def scan_d2(step: Fraction = Fraction(1, 20), box=(-1, 1, -2, 2), step_cap: int = 10**5,
            point_cap: int = 40000, threads: int = 1) -> dict:
    """Classify every grid point (r0, r1) in box = (r0_min, r0_max, r1_min, r1_max)."""
    step = Fraction(step)
    xs = grid_axis(Fraction(box[0]), Fraction(box[1]), step)
    ys = grid_axis(Fraction(box[2]), Fraction(box[3]), step)
    cells = [(x, y, step_cap, point_cap) for y in ys for x in xs]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            verdicts = list(pool.map(_classify_args, cells, chunksize=16))
    else:
        verdicts = [_classify_args(c) for c in cells]
    table = {(c[0], c[1]): v for c, v in zip(cells, verdicts)}
    return {"step": step, "box": tuple(Fraction(b) for b in box), "xs": xs, "ys": ys, "cells": table}


def write_scan_csv(result: dict, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["r0", "r1", "verdict"])
        for y in result["ys"]:
            for x in result["xs"]:
                w.writerow([str(x), str(y), result["cells"][(x, y)]])


def write_scan_png(result: dict, path, cell_px: int = 6) -> None:
    """One square per cell (r0 to the right, r1 upwards) plus the outline of
    the region where the spectral radius is < 1 (the open triangle
    |r0| < 1, |r1| < 1 + r0)."""
    xs, ys = result["xs"], result["ys"]
    w, h = len(xs) * cell_px, len(ys) * cell_px
    img = np.full((h, w, 3), 255, dtype=np.uint8)
    for j, y in enumerate(ys):
        row = (len(ys) - 1 - j) * cell_px
        for i, x in enumerate(xs):
            img[row:row + cell_px, i * cell_px:(i + 1) * cell_px] = COLORS[result["cells"][(x, y)]]
    pil = Image.fromarray(img, "RGB")
    draw = ImageDraw.Draw(pil)
    step = float(result["step"])
    x0, y0 = float(xs[0]), float(ys[-1])

    def px(a, b):
        return ((a - x0) / step * cell_px + cell_px / 2, (y0 - b) / step * cell_px + cell_px / 2)

    tri = [px(-1, 0), px(1, 2), px(1, -2), px(-1, 0)]
    draw.line(tri, fill=(30, 80, 220), width=1)
    info = PngInfo()
    info.add_text("srs-scan", json.dumps({"step": str(result["step"]),
                                         "box": [str(b) for b in result["box"]]}))
    pil.save(path, format="PNG", pnginfo=info)


def verdict_at(result: dict, r0, r1) -> str:
    return result["cells"][(Fraction(r0), Fraction(r1))]
