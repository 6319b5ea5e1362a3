"""Configurations on a periodic ring of binary cells.

Integer codes are big-endian: cell 0 is the most significant bit, so the
code of ``"0011"`` is 3 and strings read left to right as written.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .rules import EcaRule, is_rmt_active

__all__ = [
    "MIN_CELLS",
    "Configuration",
    "Region",
    "density",
    "rmt_at",
    "regions",
    "is_point_attractor",
    "complement",
    "mirror",
]

MIN_CELLS = 3


@dataclass(frozen=True)
class Configuration:
    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if len(bits) < MIN_CELLS:
            raise ValueError(f"a ring needs at least {MIN_CELLS} cells, got {len(bits)}")
        if any(b not in (0, 1) for b in bits):
            raise ValueError("cell states must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_string(cls, text: str) -> Configuration:
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"configuration string must contain only '0'/'1': {text!r}")
        return cls(tuple(int(ch) for ch in text))

    @classmethod
    def from_code(cls, code: int, n: int) -> Configuration:
        if n < MIN_CELLS:
            raise ValueError(f"a ring needs at least {MIN_CELLS} cells, got {n}")
        if not 0 <= code < (1 << n):
            raise ValueError(f"code {code} out of range for n={n}")
        return cls(tuple((code >> (n - 1 - i)) & 1 for i in range(n)))

    @classmethod
    def from_array(cls, arr: Iterable[int]) -> Configuration:
        return cls(tuple(int(b) for b in arr))

    @classmethod
    def uniform(cls, state: int, n: int) -> Configuration:
        return cls((state,) * n)

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def code(self) -> int:
        c = 0
        for b in self.bits:
            c = (c << 1) | b
        return c

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, i: int) -> int:
        return self.bits[i % len(self.bits)]

    def __str__(self) -> str:
        return "".join(map(str, self.bits))

    def to_array(self) -> np.ndarray:
        return np.array(self.bits, dtype=np.uint8)


@dataclass(frozen=True)
class Region:
    """A maximal run of equal cells; ``start + length`` may wrap around."""

    state: int
    start: int
    length: int


def _as_config(x) -> Configuration:
    if isinstance(x, Configuration):
        return x
    if isinstance(x, str):
        return Configuration.from_string(x)
    return Configuration.from_array(x)


def density(x) -> float:
    x = _as_config(x)
    return sum(x.bits) / x.n


def rmt_at(x, i: int) -> int:
    x = _as_config(x)
    if not 0 <= i < x.n:
        raise IndexError(f"cell {i} out of range for n={x.n}")
    return 4 * x[i - 1] + 2 * x[i] + x[i + 1]


def regions(x) -> list[Region]:
    """Maximal runs in ring order, starting from the first run boundary.

    A run that crosses the wrap point is reported once, with its true start.
    """
    x = _as_config(x)
    n = x.n
    if len(set(x.bits)) == 1:
        return [Region(x.bits[0], 0, n)]
    # first index whose left neighbour differs: a run boundary
    first = next(i for i in range(n) if x[i] != x[i - 1])
    out: list[Region] = []
    start, length = first, 1
    for k in range(1, n):
        i = (first + k) % n
        if x.bits[i] == x[i - 1]:
            length += 1
        else:
            out.append(Region(x.bits[start], start, length))
            start, length = i, 1
    out.append(Region(x.bits[start], start, length))
    return out


def is_point_attractor(rule, x) -> bool:
    """All RMTs of ``x`` are passive, so no update selection can change it."""
    x = _as_config(x)
    rule = rule if isinstance(rule, EcaRule) else EcaRule(rule)
    return not any(is_rmt_active(rule, rmt_at(x, i)) for i in range(x.n))


def complement(x) -> Configuration:
    x = _as_config(x)
    return Configuration(tuple(1 - b for b in x.bits))


def mirror(x) -> Configuration:
    """Reverse the ring orientation (cell i -> cell n-1-i)."""
    x = _as_config(x)
    return Configuration(x.bits[::-1])
