"""RMT-activity conditions for skew-asynchronous convergence to a homogeneous
point attractor, plus an exhaustive cross-check against exact reachability.

The conditions are sufficient only; ``classify_exact`` stays the ground truth.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .dynamics import classify_exact
from .lattice import Configuration
from .rules import MINIMAL_RULES, EcaRule

__all__ = [
    "ConvergenceVerdict",
    "DirectionCheck",
    "SkewValidation",
    "skew_convergence_conditions",
    "convergent_minimal_rules",
    "both_attractor_rules",
    "validate_skew_convergence",
    "verdicts_to_json",
]


def _zero_conditions(rule: EcaRule) -> tuple[int, ...]:
    """Which of the two all-0 conditions hold (as 1/2)."""
    act = rule.active_rmts
    fired = []
    if 0 not in act and 2 in act and (1 not in act or 4 not in act):
        fired.append(1)
    if 0 not in act and 3 in act and 6 in act:
        fired.append(2)
    return tuple(fired)


def _one_conditions(rule: EcaRule) -> tuple[int, ...]:
    act = rule.active_rmts
    fired = []
    if 7 not in act and 5 in act and (3 not in act or 6 not in act):
        fired.append(1)
    if 7 not in act and 1 in act and 4 in act:
        fired.append(2)
    return tuple(fired)


@dataclass(frozen=True)
class ConvergenceVerdict:
    rule: int
    zero_conditions: tuple[int, ...]
    one_conditions: tuple[int, ...]

    @property
    def to_zero(self) -> bool:
        return bool(self.zero_conditions)

    @property
    def to_one(self) -> bool:
        return bool(self.one_conditions)

    @property
    def holds(self) -> bool:
        return self.to_zero or self.to_one

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "to_zero": self.to_zero,
            "to_one": self.to_one,
            "condition": {
                "zero": list(self.zero_conditions),
                "one": list(self.one_conditions),
            },
        }


def skew_convergence_conditions(rule) -> ConvergenceVerdict:
    rule = rule if isinstance(rule, EcaRule) else EcaRule(rule)
    return ConvergenceVerdict(rule.number, _zero_conditions(rule), _one_conditions(rule))


def convergent_minimal_rules(*, all_rules: bool = False) -> list[int]:
    """Rules (minimal representatives unless ``all_rules``) meeting either direction."""
    pool = range(256) if all_rules else MINIMAL_RULES
    return sorted(r for r in pool if skew_convergence_conditions(r).holds)


def both_attractor_rules(*, all_rules: bool = False) -> list[int]:
    pool = range(256) if all_rules else MINIMAL_RULES
    out = []
    for r in pool:
        v = skew_convergence_conditions(r)
        if v.to_zero and v.to_one:
            out.append(r)
    return sorted(out)


@dataclass
class DirectionCheck:
    n: int
    target: str
    is_point_attractor: bool
    unique_point_attractor: bool
    reached_from: int
    """Configurations (out of ``2**n``) that can reach the target."""
    num_unreached: int = 0
    unreached: list[str] = field(default_factory=list)
    """Witnesses: not point attractors, yet no path to the target."""

    @property
    def ok(self) -> bool:
        return self.is_point_attractor and self.num_unreached == 0


@dataclass
class SkewValidation:
    rule: int
    verdict: ConvergenceVerdict
    checks: list[DirectionCheck]
    stuck: dict[int, list[str]]
    """Per n: configurations from which no point attractor is reachable."""

    @property
    def applicable(self) -> bool:
        return self.verdict.holds

    @property
    def counterexamples(self) -> list[DirectionCheck]:
        return [c for c in self.checks if not c.ok]

    @property
    def ok(self) -> bool:
        return self.applicable and not self.counterexamples

    @property
    def convergent_everywhere(self) -> bool:
        """Weaker reading: every configuration reaches some point attractor."""
        return not any(self.stuck.values())

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "verdict": self.verdict.to_dict(),
            "ok": self.ok,
            "checks": [
                {
                    "n": c.n,
                    "target": c.target,
                    "is_point_attractor": c.is_point_attractor,
                    "unique_point_attractor": c.unique_point_attractor,
                    "reached_from": c.reached_from,
                    "num_unreached": c.num_unreached,
                    "unreached": c.unreached,
                }
                for c in self.checks
            ],
            "stuck": {str(n): v for n, v in self.stuck.items()},
        }


def validate_skew_convergence(rule, n_range, *, max_witnesses: int = 8) -> SkewValidation:
    """Check each claimed homogeneous attractor by exact skew reachability.

    A claim fails at size n when the homogeneous configuration is not fixed, or
    when some configuration that is not itself a point attractor has no path
    to it. Rules meeting neither condition get an empty, non-applicable report.
    """
    rule = rule if isinstance(rule, EcaRule) else EcaRule(rule)
    verdict = skew_convergence_conditions(rule)
    checks: list[DirectionCheck] = []
    stuck: dict[int, list[str]] = {}
    if not verdict.holds:
        return SkewValidation(rule.number, verdict, checks, stuck)
    for n in n_range:
        summary = classify_exact(rule, n, "skew")
        fixed = np.zeros(1 << n, dtype=bool)
        fixed[summary.point_attractors] = True
        no_pa = ~summary.reachable_to_any(summary.point_attractors)
        stuck[n] = [str(Configuration.from_code(int(c), n))
                    for c in np.flatnonzero(no_pa)[:max_witnesses]]
        for label, wanted, target in (
            ("0" * n, verdict.to_zero, 0),
            ("1" * n, verdict.to_one, (1 << n) - 1),
        ):
            if not wanted:
                continue
            reach = summary.reachable_to(target)
            bad = np.flatnonzero(~reach & ~fixed)
            checks.append(DirectionCheck(
                n=n,
                target=label,
                is_point_attractor=bool(fixed[target]),
                unique_point_attractor=bool(fixed[target]) and int(fixed.sum()) == 1,
                reached_from=int(reach.sum()),
                num_unreached=int(bad.shape[0]),
                unreached=[str(Configuration.from_code(int(c), n)) for c in bad[:max_witnesses]],
            ))
    return SkewValidation(rule.number, verdict, checks, stuck)


def verdicts_to_json(rules) -> str:
    return json.dumps([skew_convergence_conditions(r).to_dict() for r in rules], indent=2)
