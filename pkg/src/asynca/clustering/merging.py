"""Level-wise merging of clusters through fully-asynchronous communication classes.

Objects whose configurations share a communication class of the chosen rule
are considered close. A level computes, for every current cluster, the
percentage of its objects lying in each class ("degree of participation")
and merges clusters through the class they participate in most.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.cluster.hierarchy import DisjointSet
from sklearn.base import BaseEstimator, ClusterMixin

from ..dynamics import classify_exact
from ..schemes import make_rng
from .encoding import Dataset, EncodedDataset, EncodingSpec, build_encoding, encode

logger = logging.getLogger(__name__)

__all__ = [
    "RULE_FAMILY",
    "RULE_PAIRS",
    "RULE_SINGLES",
    "RulePool",
    "ClusterLevel",
    "ClusteringResult",
    "candidate_rules",
    "class_labels",
    "participation_matrix",
    "merge_by_participation",
    "cluster_level",
    "iterative_cluster",
    "CAClusterer",
]

# identical communication classes across the family; pairs differ at some sizes
RULE_FAMILY = (134, 142, 148, 150, 158, 212, 214)
RULE_PAIRS = ((108, 201), (156, 198))
RULE_SINGLES = (105,)


@dataclass(frozen=True)
class RulePool:
    family: tuple[int, ...] = RULE_FAMILY
    pairs: tuple[tuple[int, int], ...] = RULE_PAIRS
    singles: tuple[int, ...] = RULE_SINGLES

    @property
    def rules(self) -> tuple[int, ...]:
        flat = list(self.family) + [r for p in self.pairs for r in p] + list(self.singles)
        return tuple(sorted(flat))

    def __iter__(self):
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __contains__(self, rule) -> bool:
        return int(rule) in self.rules


def candidate_rules() -> RulePool:
    return RulePool()


@lru_cache(maxsize=32)
def _components(rule: int, n: int) -> np.ndarray:
    s = classify_exact(rule, n, "fully")
    if not s.dynamics.recurrent:
        logger.warning("rule %d is not recurrent at n=%d; transient configurations "
                       "are grouped by their own component", rule, n)
    comp = s.component
    comp.setflags(write=False)
    return comp


def class_labels(rule: int, codes, n: int) -> np.ndarray:
    """Communication-class id of each configuration code."""
    return _components(int(rule), n)[np.asarray(codes, dtype=np.int64)]


def participation_matrix(clusters: list[list[int]], labels: np.ndarray):
    """``(classes, matrix)``: the classes touched (first-seen order) and the
    percentage of each cluster's objects per class, shape ``(classes, clusters)``."""
    order: dict[int, int] = {}
    for members in clusters:
        for obj in members:
            order.setdefault(int(labels[obj]), len(order))
    A = np.zeros((len(order), len(clusters)))
    for j, members in enumerate(clusters):
        for obj in members:
            A[order[int(labels[obj])], j] += 1
        A[:, j] *= 100.0 / len(members)
    return list(order), A


def merge_by_participation(A: np.ndarray) -> list[list[int]]:
    """Group previous clusters (columns of ``A``).

    Each cluster j looks up the class t it participates in most, then joins
    the other cluster with the highest participation in t, provided that is
    non-zero. Ties go to the lower index. Groups are ordered by smallest member.
    """
    m = A.shape[1]
    ds = DisjointSet(range(m))
    for j in range(m):
        t = int(np.argmax(A[:, j]))
        row = A[t].copy()
        row[j] = -1.0
        partner = int(np.argmax(row))
        if m > 1 and row[partner] > 0:
            ds.merge(j, partner)
    groups = [sorted(g) for g in ds.subsets()]
    groups.sort(key=lambda g: g[0])
    return groups


@dataclass
class ClusterLevel:
    level: int
    clusters: list[list[int]]
    """Object indices per cluster, each sorted; clusters ordered by first object."""
    rule: int | None
    participation: np.ndarray = field(repr=False)
    classes: list[int] = field(default_factory=list, repr=False)
    merged_from: list[list[int]] = field(default_factory=list, repr=False)
    """Previous-level cluster indices forming each new cluster."""
    fallback: bool = False

    @property
    def num_clusters(self) -> int:
        return len(self.clusters)

    def labels(self, num_objects: int) -> np.ndarray:
        out = np.full(num_objects, -1, dtype=np.int64)
        for k, members in enumerate(self.clusters):
            out[members] = k
        return out

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "rule": self.rule,
            "fallback": self.fallback,
            "clusters": self.clusters,
            "merged_from": self.merged_from,
            "classes": self.classes,
            "participation": np.round(self.participation, 6).tolist(),
        }


def _combine(clusters, groups):
    return [sorted(o for j in g for o in clusters[j]) for g in groups]


def cluster_level(clusters: list[list[int]], encoded: EncodedDataset, rule, *, level: int = 1) -> ClusterLevel:
    rule = int(rule)
    labels = class_labels(rule, encoded.codes(), encoded.width)
    classes, A = participation_matrix(clusters, labels)
    groups = merge_by_participation(A)
    return ClusterLevel(level, _combine(clusters, groups), rule, A, classes, groups)


def _hamming_merge(clusters, encoded, level) -> ClusterLevel:
    """Merge the pair of clusters whose configuration sets are closest on
    average (mean pairwise Hamming distance)."""
    useful_bits = np.array([[int(c) for c in s] for s in encoded.useful], dtype=np.int8)
    sets = [np.unique(encoded.index[c]) for c in clusters]
    best, pair = None, (0, 1)
    for a in range(len(sets)):
        for b in range(a + 1, len(sets)):
            d = (useful_bits[sets[a]][:, None, :] != useful_bits[sets[b]][None, :, :]).sum(-1)
            mean = float(d.mean())
            if best is None or mean < best:
                best, pair = mean, (a, b)
    groups = [[j] for j in range(len(clusters)) if j not in pair]
    groups.append(list(pair))
    groups.sort(key=lambda g: g[0])
    return ClusterLevel(level, _combine(clusters, groups), None,
                        np.zeros((0, len(clusters))), [], groups, fallback=True)


@dataclass
class ClusteringResult:
    levels: list[ClusterLevel]
    num_objects: int
    draws: list[int] = field(default_factory=list)
    """Every rule drawn, including the ones whose level was discarded."""

    @property
    def final(self) -> ClusterLevel:
        return self.levels[-1]

    @property
    def labels(self) -> np.ndarray:
        return self.final.labels(self.num_objects)

    def to_dict(self) -> dict:
        return {"draws": self.draws, "levels": [lv.to_dict() for lv in self.levels]}


def iterative_cluster(encoded: EncodedDataset, k: int, rules=None, seed: int = 0,
                      *, stall_limit: int = 5) -> ClusteringResult:
    """Merge level by level until exactly ``k`` clusters remain.

    Rules are drawn uniformly, with replacement, from ``rules`` by a seeded
    stream. A level that removes no cluster, or that would leave fewer than
    ``k``, is discarded and counts as a stall; after ``stall_limit``
    consecutive stalls the closest pair by mean Hamming distance is merged.
    """
    pool = tuple(candidate_rules() if rules is None else (int(r) for r in rules))
    if not pool:
        raise ValueError("rule pool is empty")
    n_useful = len(encoded.useful)
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > n_useful:
        raise ValueError(f"k={k} exceeds the number of useful configurations ({n_useful})")
    clusters = [sorted(np.flatnonzero(encoded.index == u).tolist()) for u in range(n_useful)]
    clusters.sort(key=lambda c: c[0])
    levels = [ClusterLevel(0, clusters, None, np.zeros((0, 0)))]
    rng = make_rng(seed)
    draws = []
    stalls = 0
    while levels[-1].num_clusters > k:
        current = levels[-1]
        if stalls >= stall_limit:
            levels.append(_hamming_merge(current.clusters, encoded, len(levels)))
            stalls = 0
            continue
        rule = pool[int(rng.integers(len(pool)))]
        draws.append(rule)
        nxt = cluster_level(current.clusters, encoded, rule, level=len(levels))
        if k <= nxt.num_clusters < current.num_clusters:
            levels.append(nxt)
            stalls = 0
        else:
            stalls += 1
    return ClusteringResult(levels, len(encoded), draws)


class CAClusterer(ClusterMixin, BaseEstimator):
    """Cluster objects by communication classes of reversible fully
    asynchronous rules.

    ``X`` may be a :class:`Dataset` (mixed attribute kinds) or a numeric array.
    """

    def __init__(self, n_clusters=3, rules=None, seed=0, encoding=None, stall_limit=5):
        self.n_clusters = n_clusters
        self.rules = rules
        self.seed = seed
        self.encoding = encoding
        self.stall_limit = stall_limit

    def fit(self, X, y=None):
        ds = X if isinstance(X, Dataset) else Dataset.from_array(X)
        if self.encoding is None:
            self.encoding_ = build_encoding(ds)
        elif isinstance(self.encoding, EncodingSpec):
            self.encoding_ = self.encoding
        else:
            self.encoding_ = EncodingSpec.from_dict(self.encoding)
        self.encoded_ = encode(ds, self.encoding_)
        self.result_ = iterative_cluster(self.encoded_, self.n_clusters, self.rules,
                                         self.seed, stall_limit=self.stall_limit)
        self.levels_ = self.result_.levels
        self.labels_ = self.result_.labels
        self.n_features_in_ = len(ds.attributes)
        return self
