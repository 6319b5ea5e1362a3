"""Plain-text renderings of space-time diagrams and density traces."""

from __future__ import annotations

import numpy as np

__all__ = ["to_pbm", "read_pbm", "to_ascii", "density_csv"]

_PBM_LINE = 70


def _comment_lines(comments) -> list[str]:
    return [f"# {c}" for c in comments]


def to_pbm(rows, comments=()) -> str:
    """Plain (P1) portable bitmap; 1 is a filled cell, one image row per step."""
    rows = np.asarray(rows, dtype=np.uint8)
    if rows.ndim != 2:
        raise ValueError("expected a 2-D array of cell states")
    h, w = rows.shape
    out = ["P1", *_comment_lines(comments), f"{w} {h}"]
    per_line = _PBM_LINE // 2
    for row in rows:
        for k in range(0, w, per_line):
            out.append(" ".join(str(int(b)) for b in row[k : k + per_line]))
    return "\n".join(out) + "\n"


def read_pbm(text: str) -> np.ndarray:
    tokens = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(line.split())
    if not tokens or tokens[0] != "P1":
        raise ValueError("not a plain PBM (P1) image")
    w, h = int(tokens[1]), int(tokens[2])
    # P1 pixels may also be packed without separators
    bits = "".join(tokens[3:])
    if len(bits) != w * h or set(bits) - {"0", "1"}:
        raise ValueError(f"expected {w * h} pixels, got {len(bits)}")
    return np.frombuffer(bits.encode(), dtype=np.uint8).reshape(h, w) - ord("0")


def to_ascii(rows, on: str = "#", off: str = ".") -> str:
    rows = np.asarray(rows, dtype=np.uint8)
    return "\n".join("".join(on if b else off for b in row) for row in rows) + "\n"


def density_csv(trace, comments=()) -> str:
    out = _comment_lines(comments)
    out.append("step,density")
    for t, d in enumerate(trace):
        out.append(f"{t},{float(d):.6f}")
    return "\n".join(out) + "\n"
