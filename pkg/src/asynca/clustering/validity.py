"""Internal cluster-validity indices on the original numeric attributes."""

from __future__ import annotations

import sys
import warnings
from dataclasses import asdict, dataclass

import numpy as np
from scipy.spatial.distance import cdist, pdist, squareform
from sklearn.metrics import calinski_harabasz_score, silhouette_score

from .encoding import Dataset

__all__ = ["DUNN_SENTINEL", "ValidityReport", "validity_indices", "dunn_index", "davies_bouldin"]

# stands in for an infinite Dunn index (all clusters have zero diameter)
DUNN_SENTINEL = sys.float_info.max


@dataclass(frozen=True)
class ValidityReport:
    silhouette: float
    dunn: float
    davies_bouldin: float
    calinski_harabasz: float

    def to_dict(self) -> dict:
        return asdict(self)


def dunn_index(X: np.ndarray, labels: np.ndarray) -> float:
    """Smallest between-cluster point distance over the largest cluster diameter."""
    ks = np.unique(labels)
    groups = [X[labels == k] for k in ks]
    diam = max((pdist(g).max() if len(g) > 1 else 0.0) for g in groups)
    sep = min(
        cdist(groups[a], groups[b]).min()
        for a in range(len(groups))
        for b in range(a + 1, len(groups))
    )
    if diam == 0.0:
        warnings.warn("every cluster has zero diameter; Dunn index reported as a sentinel",
                      stacklevel=2)
        return DUNN_SENTINEL
    return float(sep / diam)


def davies_bouldin(X: np.ndarray, labels: np.ndarray) -> float:
    """Mean over clusters of the worst (scatter_a + scatter_b) / centroid gap."""
    ks = np.unique(labels)
    cents = np.array([X[labels == k].mean(axis=0) for k in ks])
    scatter = np.array([
        np.linalg.norm(X[labels == k] - c, axis=1).mean() for k, c in zip(ks, cents)
    ])
    gap = squareform(pdist(cents))
    np.fill_diagonal(gap, np.inf)
    with np.errstate(divide="ignore"):
        # coinciding centroids give an infinite ratio
        ratio = (scatter[:, None] + scatter[None, :]) / gap
    return float(ratio.max(axis=1).mean())


def _zscore(X: np.ndarray) -> np.ndarray:
    sd = X.std(axis=0)
    sd[sd == 0] = 1.0
    return (X - X.mean(axis=0)) / sd


def validity_indices(data, labels, *, normalize: bool = True, n_clusters: int | None = None) -> ValidityReport:
    """Silhouette, Dunn, Davies-Bouldin and Calinski-Harabasz for ``labels``.

    ``data`` is a :class:`Dataset` (its quantitative attributes are used) or a
    numeric array. Features are z-scored unless ``normalize`` is False. When
    ``n_clusters`` is given, labels must be ``0..n_clusters-1`` with none empty.
    """
    X = data.numeric_matrix() if isinstance(data, Dataset) else np.asarray(data, dtype=float)
    if X.ndim != 2 or X.shape[1] == 0:
        raise ValueError("need a 2-D array with at least one numeric attribute")
    labels = np.asarray(labels)
    if labels.shape != (X.shape[0],):
        raise ValueError(f"got {labels.shape[0]} labels for {X.shape[0]} objects")
    present = np.unique(labels)
    if n_clusters is not None:
        missing = sorted(set(range(n_clusters)) - set(present.tolist()))
        if missing:
            raise ValueError(f"cluster(s) {missing} are empty")
        extra = sorted(set(present.tolist()) - set(range(n_clusters)))
        if extra:
            raise ValueError(f"labels {extra} outside 0..{n_clusters - 1}")
    if not 2 <= present.shape[0] < X.shape[0]:
        raise ValueError(
            f"validity indices need between 2 and {X.shape[0] - 1} clusters, got {present.shape[0]}"
        )
    if normalize:
        X = _zscore(X)
    # exact distances; the default euclidean kernel loses ~1e-8 to cancellation
    D = squareform(pdist(X))
    return ValidityReport(
        silhouette=float(silhouette_score(D, labels, metric="precomputed")),
        dunn=dunn_index(X, labels),
        davies_bouldin=davies_bouldin(X, labels),
        calinski_harabasz=float(calinski_harabasz_score(X, labels)),
    )
