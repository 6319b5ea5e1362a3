"""Update schemes: one-step application, stochastic selection, exact successors.

Random streams come from numpy's PCG64 bit generator, seeded through a
``SeedSequence`` so that independent trials can be split off with
``SeedSequence.spawn`` and every run is reproducible from one integer seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _kernels
from .lattice import Configuration, _as_config
from .rules import EcaRule

__all__ = [
    "Scheme",
    "UpdateScheme",
    "Selection",
    "TrajectoryRecord",
    "ALPHA_EXACT_LIMIT",
    "EnumerationLimitError",
    "make_rng",
    "spawn_rngs",
    "step",
    "sample_selection",
    "successors",
    "trajectory",
    "space_time",
    "updates_per_step",
]

ALPHA_EXACT_LIMIT = 12


class EnumerationLimitError(ValueError):
    """Exact enumeration was requested beyond the configured size limit."""


class Scheme(str, Enum):
    SYNC = "sync"
    FULLY = "fully"
    ALPHA = "alpha"
    SKEW = "skew"


_KERNEL_KIND = {
    Scheme.SYNC: _kernels.SYNC,
    Scheme.FULLY: _kernels.FULLY,
    Scheme.SKEW: _kernels.SKEW,
    Scheme.ALPHA: _kernels.ALPHA,
}


@dataclass(frozen=True)
class UpdateScheme:
    kind: Scheme
    alpha: float | None = None

    def __post_init__(self):
        kind = Scheme(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is Scheme.ALPHA:
            if self.alpha is None:
                raise ValueError("alpha-asynchronous scheme needs an alpha value")
            alpha = float(self.alpha)
            if alpha >= 1.0:
                raise ValueError("alpha = 1 is the synchronous scheme; use Scheme.SYNC")
            if alpha <= 0.0:
                raise ValueError("alpha must be > 0 (alpha = 0 has no dynamics)")
            object.__setattr__(self, "alpha", alpha)
        elif self.alpha is not None:
            raise ValueError(f"{kind.value} scheme takes no alpha")

    @classmethod
    def parse(cls, name: str, alpha: float | None = None) -> UpdateScheme:
        kind = Scheme(name)
        if kind is Scheme.ALPHA and alpha is None:
            alpha = 0.5
        return cls(kind, alpha if kind is Scheme.ALPHA else None)

    @property
    def kernel_kind(self) -> int:
        return _KERNEL_KIND[self.kind]

    def __str__(self) -> str:
        if self.kind is Scheme.ALPHA:
            return f"alpha({self.alpha:g})"
        return self.kind.value


def _as_scheme(scheme) -> UpdateScheme:
    if isinstance(scheme, UpdateScheme):
        return scheme
    return UpdateScheme.parse(str(scheme.value if isinstance(scheme, Scheme) else scheme))


@dataclass(frozen=True)
class Selection:
    cells: frozenset[int]

    def __init__(self, cells):
        object.__setattr__(self, "cells", frozenset(int(c) for c in cells))

    def mask(self, n: int) -> np.ndarray:
        m = np.zeros(n, dtype=bool)
        m[list(self.cells)] = True
        return m

    def is_valid_for(self, scheme, n: int) -> bool:
        scheme = _as_scheme(scheme)
        if any(not 0 <= c < n for c in self.cells):
            return False
        if scheme.kind is Scheme.SYNC:
            return self.cells == frozenset(range(n))
        if scheme.kind is Scheme.FULLY:
            return len(self.cells) == 1
        if scheme.kind is Scheme.SKEW:
            return any(self.cells == {i, (i + 1) % n} for i in range(n))
        return True


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Independent child streams, one per trial."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.PCG64(s)) for s in children]


def step(rule, x, sel) -> Configuration:
    """Update the selected cells simultaneously from the pre-step state."""
    rule = rule if isinstance(rule, EcaRule) else EcaRule(rule)
    x = _as_config(x)
    cells = sel.cells if isinstance(sel, Selection) else frozenset(sel)
    n = x.n
    for c in cells:
        if not 0 <= c < n:
            raise IndexError(f"selected cell {c} out of range for n={n}")
    bits = list(x.bits)
    for i in cells:
        bits[i] = rule(x[i - 1], x[i], x[i + 1])
    return Configuration(tuple(bits))


def sample_selection(scheme, n: int, rng: np.random.Generator) -> Selection:
    scheme = _as_scheme(scheme)
    if scheme.kind is Scheme.SYNC:
        return Selection(range(n))
    if scheme.kind is Scheme.FULLY:
        return Selection((int(rng.integers(n)),))
    if scheme.kind is Scheme.SKEW:
        i = int(rng.integers(n))
        return Selection((i, (i + 1) % n))
    return Selection(np.flatnonzero(rng.random(n) < scheme.alpha))


def successors(rule, x, scheme, *, alpha_limit: int = ALPHA_EXACT_LIMIT) -> set[Configuration]:
    """Exact set of one-step successors (including ``x`` when a selection
    can leave it unchanged).

    The alpha-asynchronous relation is the same for every alpha in (0, 1):
    any subset of cells, the empty one included, may update.
    """
    rule = rule if isinstance(rule, EcaRule) else EcaRule(rule)
    x = _as_config(x)
    scheme = _as_scheme(scheme)
    n = x.n
    if scheme.kind is Scheme.SYNC:
        return {step(rule, x, range(n))}
    if scheme.kind is Scheme.FULLY:
        return {step(rule, x, (i,)) for i in range(n)}
    if scheme.kind is Scheme.SKEW:
        return {step(rule, x, (i, (i + 1) % n)) for i in range(n)}
    if n > alpha_limit:
        raise EnumerationLimitError(
            f"alpha-asynchronous enumeration limited to n <= {alpha_limit}, got n={n}"
        )
    sync = step(rule, x, range(n))
    active = [i for i in range(n) if sync.bits[i] != x.bits[i]]
    out = set()
    for mask in range(1 << len(active)):
        bits = list(x.bits)
        for k, i in enumerate(active):
            if mask >> k & 1:
                bits[i] = sync.bits[i]
        out.add(Configuration(tuple(bits)))
    return out


def updates_per_step(scheme, n: int) -> int:
    """Scheme updates making one normalized time step: 1 sweep for synchronous
    and alpha, n single-cell updates for fully, ceil(n/2) pair updates for skew."""
    scheme = _as_scheme(scheme)
    if scheme.kind is Scheme.FULLY:
        return n
    if scheme.kind is Scheme.SKEW:
        return math.ceil(n / 2)
    return 1


def draw_masks(scheme, n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` selections as a boolean ``(count, n)`` matrix."""
    scheme = _as_scheme(scheme)
    masks = np.zeros((count, n), dtype=bool)
    if scheme.kind is Scheme.SYNC:
        masks[:] = True
    elif scheme.kind is Scheme.ALPHA:
        masks[:] = rng.random((count, n)) < scheme.alpha
    else:
        idx = rng.integers(0, n, size=count)
        rows = np.arange(count)
        masks[rows, idx] = True
        if scheme.kind is Scheme.SKEW:
            masks[rows, (idx + 1) % n] = True
    return masks


@dataclass
class TrajectoryRecord:
    rule: int
    scheme: UpdateScheme
    seed: int
    steps: int
    configurations: np.ndarray = field(repr=False)
    """``(steps + 1, n)`` uint8 array, row t is x^t."""
    selections: np.ndarray = field(repr=False)
    """``(steps, n)`` boolean array, row t is the selection applied to x^t."""

    def configuration(self, t: int) -> Configuration:
        return Configuration.from_array(self.configurations[t])

    def selection(self, t: int) -> Selection:
        return Selection(np.flatnonzero(self.selections[t]))

    @property
    def final(self) -> Configuration:
        return self.configuration(self.steps)


def trajectory(rule, x0, scheme, steps: int, seed: int) -> TrajectoryRecord:
    """Sample ``steps`` selections from a seeded stream and record the run."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    rule = rule if isinstance(rule, EcaRule) else EcaRule(rule)
    x0 = _as_config(x0)
    scheme = _as_scheme(scheme)
    rng = make_rng(seed)
    masks = draw_masks(scheme, x0.n, steps, rng)
    states = _kernels.replay(rule.as_array(), x0.to_array(), masks)
    return TrajectoryRecord(rule.number, scheme, seed, steps, states, masks)


def space_time(rule, x0, scheme, steps: int, rng: np.random.Generator,
               *, chunk: int = 1 << 16) -> np.ndarray:
    """States after each normalized time step: ``(steps + 1, n)`` uint8.

    Selections are drawn in chunks so long fully/skew runs never hold every
    intermediate state in memory.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    rule = rule if isinstance(rule, EcaRule) else EcaRule(rule)
    x = _as_config(x0).to_array()
    scheme = _as_scheme(scheme)
    n = x.shape[0]
    every = updates_per_step(scheme, n)
    table = rule.as_array()
    rows = np.empty((steps + 1, n), dtype=np.uint8)
    rows[0] = x
    per_chunk = max(1, chunk // every)
    done = 0
    while done < steps:
        k = min(per_chunk, steps - done)
        masks = draw_masks(scheme, n, k * every, rng)
        states = _kernels.replay(table, x, masks)
        rows[done + 1 : done + 1 + k] = states[every::every]
        x = states[-1].copy()
        done += k
    return rows
