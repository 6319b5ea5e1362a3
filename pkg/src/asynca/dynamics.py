"""Exact and empirical classification of ECA dynamics under an update scheme.

The exact path condenses the full ``2**n``-node transition graph into
strongly connected components. A configuration is recurrent iff its
component is closed (no edge leaves it); closed components are the
communication classes.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .lattice import Configuration
from .rules import MINIMAL_RULES, EcaRule
from .schemes import (
    ALPHA_EXACT_LIMIT,
    EnumerationLimitError,
    Scheme,
    UpdateScheme,
    _as_scheme,
    spawn_rngs,
    updates_per_step,
)

logger = logging.getLogger(__name__)

__all__ = [
    "EXACT_LIMIT",
    "DynamicsClass",
    "TransitionSummary",
    "CommClass",
    "CommClasses",
    "TrialOutcome",
    "EmpiricalReport",
    "ScanRow",
    "classify_exact",
    "communication_classes",
    "classify_empirical",
    "scan_minimal",
    "rows_to_csv",
    "rows_to_json",
]

EXACT_LIMIT = 24


@dataclass(frozen=True)
class DynamicsClass:
    convergent: bool
    recurrent: bool
    num_point_attractors: int
    num_closed_classes: int

    @property
    def label(self) -> str:
        if self.convergent and self.recurrent:
            return "Convergent+Recurrent"
        if self.convergent:
            return "Convergent"
        if self.recurrent:
            return "Recurrent"
        return "NcNr"

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class CommClass:
    members: np.ndarray = field(repr=False)
    """Sorted configuration codes."""

    @property
    def size(self) -> int:
        return int(self.members.shape[0])

    def configurations(self, n: int) -> list[Configuration]:
        return [Configuration.from_code(int(c), n) for c in self.members]

    def __contains__(self, code) -> bool:
        i = np.searchsorted(self.members, code)
        return bool(i < self.members.shape[0] and self.members[i] == code)


class CommClasses(list):
    """Closed classes; ``complete`` is False when transient configurations exist."""

    def __init__(self, classes, complete: bool):
        super().__init__(classes)
        self.complete = complete


@dataclass
class TransitionSummary:
    rule: int
    n: int
    scheme: UpdateScheme
    component: np.ndarray = field(repr=False)
    """Component id per configuration code."""
    closed: np.ndarray = field(repr=False)
    """Closed flag per component id."""
    sizes: np.ndarray = field(repr=False)
    point_attractors: np.ndarray = field(repr=False)
    dynamics: DynamicsClass
    _sync: np.ndarray = field(repr=False, default=None)

    @property
    def num_components(self) -> int:
        return int(self.closed.shape[0])

    @property
    def recurrent_mask(self) -> np.ndarray:
        return self.closed[self.component]

    def transient_configurations(self) -> np.ndarray:
        return np.flatnonzero(~self.recurrent_mask)

    def closed_classes(self) -> CommClasses:
        order = np.argsort(self.component, kind="stable")
        bounds = np.cumsum(self.sizes)[:-1]
        groups = np.split(order, bounds)
        classes = [CommClass(np.sort(groups[c])) for c in np.flatnonzero(self.closed)]
        classes.sort(key=lambda k: (-k.size, int(k.members[0])))
        return CommClasses(classes, complete=bool(self.closed.all()))

    def reachable_to(self, target: int) -> np.ndarray:
        """Per configuration: can it reach configuration code ``target``?"""
        return _kernels.reaches_target(
            self._sync, self.n, self.scheme.kernel_kind,
            self.component, self.num_components, int(target),
        )

    def reachable_to_any(self, targets) -> np.ndarray:
        return _kernels.reaches_any(
            self._sync, self.n, self.scheme.kernel_kind,
            self.component, self.num_components, np.asarray(targets, dtype=np.int64),
        )

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "n": self.n,
            "scheme": self.scheme.kind.value,
            "class": self.dynamics.label,
            "convergent": self.dynamics.convergent,
            "recurrent": self.dynamics.recurrent,
            "num_point_attractors": self.dynamics.num_point_attractors,
            "num_closed_classes": self.dynamics.num_closed_classes,
            "point_attractors": [
                str(Configuration.from_code(int(c), self.n)) for c in self.point_attractors
            ],
            "proven": True,
        }


def _check_limits(n: int, scheme: UpdateScheme, alpha_limit: int) -> None:
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    limit = alpha_limit if scheme.kind is Scheme.ALPHA else EXACT_LIMIT
    if n > limit:
        raise EnumerationLimitError(
            f"exact {scheme.kind.value} analysis limited to n <= {limit}, got n={n}"
        )


def classify_exact(rule, n: int, scheme, *, alpha_limit: int = ALPHA_EXACT_LIMIT) -> TransitionSummary:
    rule = rule if isinstance(rule, EcaRule) else EcaRule(rule)
    scheme = _as_scheme(scheme)
    _check_limits(n, scheme, alpha_limit)
    kind = scheme.kernel_kind
    sync = _kernels.sync_image_all(rule.as_array(), n)
    comp, ncomp = _kernels.tarjan_scc(sync, n, kind)
    closed, sizes = _kernels.closed_components(sync, n, kind, comp, ncomp)
    codes = np.arange(1 << n, dtype=np.uint32)
    fixed = np.flatnonzero(sync == codes)
    closed_sizes = sizes[closed]
    num_closed = int(closed.sum())
    # every closed class is a singleton fixed point <=> closed classes == point attractors
    convergent = num_closed == fixed.shape[0] and bool(np.all(closed_sizes == 1))
    recurrent = bool(closed.all())
    dyn = DynamicsClass(convergent, recurrent, int(fixed.shape[0]), num_closed)
    return TransitionSummary(rule.number, n, scheme, comp, closed, sizes, fixed, dyn, sync)


def communication_classes(rule, n: int, scheme="fully", **kw) -> CommClasses:
    """Closed classes sorted by size (descending), then smallest member."""
    summary = classify_exact(rule, n, scheme, **kw)
    classes = summary.closed_classes()
    if not classes.complete:
        logger.info("rule %d n=%d %s is not recurrent; returning closed classes only",
                    summary.rule, n, summary.scheme)
    return classes


# -- empirical --------------------------------------------------------------


@dataclass
class TrialOutcome:
    outcome: str
    """``point_attractor``, ``returned`` or ``exhausted``."""
    attractor: str | None
    updates: int
    first_return: int | None
    initial: str
    trace: np.ndarray = field(repr=False)
    """Density after each normalized time step, starting with the initial one."""


@dataclass
class EmpiricalReport:
    rule: int
    n: int
    scheme: UpdateScheme
    seed: int
    max_updates: int
    trials: list[TrialOutcome]
    proven: bool = False

    @property
    def fraction_converged(self) -> float:
        return sum(t.outcome == "point_attractor" for t in self.trials) / len(self.trials)

    @property
    def attractor_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for t in self.trials:
            if t.attractor is not None:
                counts[t.attractor] = counts.get(t.attractor, 0) + 1
        return dict(sorted(counts.items()))

    @property
    def label(self) -> str:
        """Observed label; witnesses only, never a proof."""
        if all(t.outcome == "point_attractor" for t in self.trials):
            return "Convergent"
        if all(t.first_return is not None for t in self.trials):
            return "Recurrent"
        if any(t.outcome == "point_attractor" for t in self.trials):
            return "Mixed"
        return "Undetermined"

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "n": self.n,
            "scheme": self.scheme.kind.value,
            "class": self.label,
            "proven": self.proven,
            "trials": len(self.trials),
            "fraction_converged": self.fraction_converged,
            "attractors": self.attractor_counts,
            "returned": sum(t.first_return is not None for t in self.trials),
            "exhausted": sum(t.outcome == "exhausted" for t in self.trials),
        }


def random_configuration(n: int, d_ini: float, rng: np.random.Generator) -> np.ndarray:
    """Exactly ``round(d_ini * n)`` ones at uniformly random positions."""
    x = np.zeros(n, dtype=np.uint8)
    x[rng.permutation(n)[: int(round(d_ini * n))]] = 1
    return x


_CHUNK = 1 << 15


def run_trial(table: np.ndarray, x0: np.ndarray, scheme: UpdateScheme,
              max_updates: int, rng: np.random.Generator) -> TrialOutcome:
    n = x0.shape[0]
    kind = scheme.kernel_kind
    every = updates_per_step(scheme, n)
    trace = np.full(max_updates // every + 1, np.nan)
    x = x0.copy()
    active = _kernels.init_active(table, x)
    ones = int(x.sum())
    trace[0] = ones / n
    status = np.array([0, 0, 0, -1, int(active.sum()), -1, ones], dtype=np.int64)
    empty_sel = np.zeros(0, dtype=np.int64)
    empty_masks = np.zeros((0, n), dtype=np.bool_)
    while status[0] < max_updates and status[4] > 0:
        chunk = int(min(_CHUNK, max_updates - status[0]))
        if kind == _kernels.ALPHA:
            sel, masks = empty_sel, rng.random((chunk, n)) < scheme.alpha
        elif kind == _kernels.SYNC:
            sel, masks = np.zeros(chunk, dtype=np.int64), empty_masks
        else:
            sel, masks = rng.integers(0, n, size=chunk), empty_masks
        _kernels.advance(table, x, active, x0, status, kind, sel, masks, every, trace, max_updates)
    if status[4] == 0 and status[5] < 0:
        status[5] = status[0]
    updates = int(status[0])
    trace = trace[: updates // every + 1]
    first_return = int(status[3]) if status[3] >= 0 else None
    if status[4] == 0:
        outcome, attractor = "point_attractor", "".join(map(str, x))
    elif first_return is not None:
        outcome, attractor = "returned", None
    else:
        outcome, attractor = "exhausted", None
    return TrialOutcome(outcome, attractor, updates, first_return,
                        "".join(map(str, x0)), trace)


def classify_empirical(rule, n: int, scheme, trials: int, max_updates: int, seed: int,
                       *, d_ini: float = 0.5, initial=None) -> EmpiricalReport:
    """Simulate ``trials`` seeded runs of at most ``max_updates`` scheme updates.

    Each trial keeps running after returning to its start (that event is only
    recorded as a recurrence witness) until it hits a point attractor or the
    budget runs out.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rule = rule if isinstance(rule, EcaRule) else EcaRule(rule)
    scheme = _as_scheme(scheme)
    table = rule.as_array()
    outcomes = []
    for rng in spawn_rngs(seed, trials):
        if initial is not None:
            x0 = np.asarray(Configuration.from_string(str(initial)).to_array()
                            if isinstance(initial, (str, Configuration)) else initial,
                            dtype=np.uint8)
        else:
            x0 = random_configuration(n, d_ini, rng)
        outcomes.append(run_trial(table, x0, scheme, max_updates, rng))
    return EmpiricalReport(rule.number, n, scheme, seed, max_updates, outcomes)


# -- scans ------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    rule: int
    n: int
    scheme: str
    dynamics: str
    num_point_attractors: int
    num_closed_classes: int
    proven: bool

    def as_dict(self) -> dict:
        return {
            "rule": self.rule,
            "n": self.n,
            "scheme": self.scheme,
            "class": self.dynamics,
            "num_point_attractors": self.num_point_attractors,
            "num_closed_classes": self.num_closed_classes,
            "proven": self.proven,
        }


def scan_minimal(scheme, n_range, mode: str = "exact", *, rules=MINIMAL_RULES,
                 trials: int = 20, max_updates: int = 100_000, seed: int = 0) -> list[ScanRow]:
    """One row per rule per lattice size, ordered by (rule, n)."""
    scheme = _as_scheme(scheme)
    rows = []
    for rule in sorted(rules):
        for n in n_range:
            if mode == "exact":
                s = classify_exact(rule, n, scheme)
                rows.append(ScanRow(rule, n, scheme.kind.value, s.dynamics.label,
                                    s.dynamics.num_point_attractors,
                                    s.dynamics.num_closed_classes, True))
            elif mode == "empirical":
                r = classify_empirical(rule, n, scheme, trials, max_updates, seed)
                rows.append(ScanRow(rule, n, scheme.kind.value, r.label,
                                    len(r.attractor_counts), -1, False))
            else:
                raise ValueError(f"mode must be 'exact' or 'empirical', got {mode!r}")
    return rows


_CSV_FIELDS = ["rule", "n", "scheme", "class", "num_point_attractors", "num_closed_classes"]


def rows_to_csv(rows: list[ScanRow]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=_CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.as_dict())
    return buf.getvalue()


def rows_to_json(rows: list[ScanRow]) -> str:
    return json.dumps([r.as_dict() for r in rows], indent=2)
