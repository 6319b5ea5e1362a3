"""Elementary CA local rules, RMT activity and the reflection/conjugation orbits."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

__all__ = [
    "EcaRule",
    "rmt_index",
    "rmt_bits",
    "apply_local",
    "is_rmt_active",
    "transform",
    "minimal_representative",
    "orbit",
    "MINIMAL_RULES",
]


def rmt_index(left: int, center: int, right: int) -> int:
    """Rule-min-term index of a neighbourhood, ``4*left + 2*center + right``."""
    return 4 * left + 2 * center + right


def rmt_bits(rmt: int) -> tuple[int, int, int]:
    if not 0 <= rmt <= 7:
        raise ValueError(f"RMT index must be in 0..7, got {rmt}")
    return (rmt >> 2) & 1, (rmt >> 1) & 1, rmt & 1


@dataclass(frozen=True)
class EcaRule:
    """An elementary rule identified by its Wolfram number.

    Bit ``r`` of ``number`` is the output for RMT ``r``, so RMT 7
    (neighbourhood 111) is the most significant bit.
    """

    number: int
    table: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        number = int(self.number)
        if not 0 <= number <= 255:
            raise ValueError(f"rule number must be in 0..255, got {self.number}")
        object.__setattr__(self, "number", number)
        object.__setattr__(self, "table", tuple((number >> r) & 1 for r in range(8)))

    @classmethod
    def from_table(cls, table) -> EcaRule:
        table = list(table)
        if len(table) != 8 or any(b not in (0, 1) for b in table):
            raise ValueError("table must hold 8 binary outputs indexed by RMT")
        return cls(sum(b << r for r, b in enumerate(table)))

    def __call__(self, left: int, center: int, right: int) -> int:
        return self.table[rmt_index(left, center, right)]

    def __int__(self) -> int:
        return self.number

    @property
    def active_rmts(self) -> frozenset[int]:
        return frozenset(r for r in range(8) if is_rmt_active(self, r))

    @property
    def passive_rmts(self) -> frozenset[int]:
        return frozenset(range(8)) - self.active_rmts

    def as_array(self) -> np.ndarray:
        """Lookup table as ``uint8[8]`` indexed by RMT, for the numeric kernels."""
        return np.array(self.table, dtype=np.uint8)


def _as_rule(rule) -> EcaRule:
    return rule if isinstance(rule, EcaRule) else EcaRule(rule)


def apply_local(rule, left: int, center: int, right: int) -> int:
    return _as_rule(rule).table[rmt_index(left, center, right)]


def is_rmt_active(rule, rmt: int) -> bool:
    """True when the rule changes the centre cell of neighbourhood ``rmt``."""
    rule = _as_rule(rule)
    _, center, _ = rmt_bits(rmt)
    return rule.table[rmt] != center


def transform(rule, kind: Literal["reflect", "conjugate"]) -> EcaRule:
    """Left-right reflection ``g(x,y,z) = f(z,y,x)`` or 0/1 conjugation
    ``g(x,y,z) = 1 - f(1-x,1-y,1-z)``."""
    rule = _as_rule(rule)
    table = [0] * 8
    for r in range(8):
        x, y, z = rmt_bits(r)
        if kind == "reflect":
            table[r] = rule.table[rmt_index(z, y, x)]
        elif kind == "conjugate":
            table[r] = 1 - rule.table[7 - r]
        else:
            raise ValueError(f"unknown transform {kind!r}")
    return EcaRule.from_table(table)


def _orbit_numbers(number: int) -> frozenset[int]:
    f = EcaRule(number)
    r = transform(f, "reflect")
    c = transform(f, "conjugate")
    rc = transform(r, "conjugate")
    return frozenset(g.number for g in (f, r, c, rc))


_ORBITS: dict[int, frozenset[int]] = {k: _orbit_numbers(k) for k in range(256)}

MINIMAL_RULES: tuple[int, ...] = tuple(sorted({min(o) for o in _ORBITS.values()}))


def orbit(rule) -> frozenset[int]:
    """Rule numbers equivalent to ``rule`` under reflection and conjugation."""
    return _ORBITS[_as_rule(rule).number]


def minimal_representative(rule) -> EcaRule:
    return EcaRule(min(orbit(rule)))
