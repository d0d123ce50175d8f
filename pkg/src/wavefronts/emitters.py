"""Deterministic CSV and SVG output.

Floats are formatted with 9 significant digits so identical inputs always
produce byte-identical files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .errors import IoError

STROKE_CLASSES = ("front", "caustic", "maxwell", "delta")

_STYLE = (
    ".front{stroke:#1f77b4;fill:none}"
    ".caustic{stroke:#d62728;fill:none}"
    ".maxwell{stroke:#2ca02c;fill:none}"
    ".delta{stroke:#9467bd;fill:none}"
)


def fmt(x: float) -> str:
    """9-significant-digit shortest decimal; '-0' is normalized to '0'."""
    if not np.isfinite(x):
        raise IoError(f"non-finite coordinate {x!r}")
    s = format(float(x), ".9g")
    return "0" if s in ("-0", "-0.0") else s


def csv_header(n: int, k: int) -> str:
    return ",".join(
        ["t"] + [f"x{j + 1}" for j in range(n)] + [f"q{i + 1}" for i in range(k)] + ["label"]
    )


def emit_csv(rows: Iterable, n: int, k: int, path) -> None:
    """Write labeled samples; each row is (t, x (len n), q (len k), label)."""
    lines = [csv_header(n, k)]
    for t, x, q, label in rows:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        q = np.atleast_1d(np.asarray(q, dtype=float))
        if x.size != n or q.size != k:
            raise IoError(f"row shape mismatch: expected {n} x and {k} q values")
        cells = [fmt(t)] + [fmt(v) for v in x] + [fmt(v) for v in q] + [str(label)]
        lines.append(",".join(cells))
    try:
        Path(path).write_text("\n".join(lines) + "\n")
    except OSError as e:  # pragma: no cover - environment dependent
        raise IoError(str(e)) from e


def emit_svg(
    curves: Sequence[Tuple[np.ndarray, str]],
    path,
    size: int = 640,
    margin_frac: float = 0.05,
) -> None:
    """One <polyline> per curve; classes select stroke colors.

    The y axis points up (plot orientation), so world y is negated into SVG
    user units.
    """
    for _, cls in curves:
        if cls not in STROKE_CLASSES:
            raise IoError(f"unknown stroke class {cls!r}")
    pts_all = [np.asarray(p, dtype=float) for p, _ in curves if len(p)]
    if pts_all:
        allp = np.vstack(pts_all)
        if not np.all(np.isfinite(allp)):
            raise IoError("non-finite coordinate in SVG input")
        lo = allp.min(axis=0)
        hi = allp.max(axis=0)
    else:
        lo = np.array([0.0, 0.0])
        hi = np.array([1.0, 1.0])
    span = np.maximum(hi - lo, 1e-9)
    pad = margin_frac * span.max()
    # world -> user units: y negated, so the viewBox covers [-hi_y, -lo_y]
    vb = (lo[0] - pad, -(hi[1] + pad), span[0] + 2 * pad, span[1] + 2 * pad)
    stroke = 0.004 * max(span[0], span[1])
    lines: List[str] = []
    lines.append('<?xml version="1.0" encoding="UTF-8"?>')
    lines.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" '
        f'viewBox="{fmt(vb[0])} {fmt(vb[1])} {fmt(vb[2])} {fmt(vb[3])}">'
    )
    lines.append(f"<style>{_STYLE} polyline{{stroke-width:{fmt(stroke)}}}</style>")
    for pts, cls in curves:
        pts = np.asarray(pts, dtype=float)
        if len(pts) == 0:
            continue
        coords = " ".join(f"{fmt(p[0])},{fmt(-p[1])}" for p in pts)
        lines.append(f'<polyline class="{cls}" points="{coords}"/>')
    lines.append("</svg>")
    try:
        Path(path).write_text("\n".join(lines) + "\n")
    except OSError as e:  # pragma: no cover - environment dependent
        raise IoError(str(e)) from e
