import itertools
import warnings

import numpy as np
import pytest

from asynca.clustering import DUNN_SENTINEL, Dataset, dunn_index, validity_indices

from . import oracles
from .fixtures import FOUR_POINTS, VALIDITY_CASES


def test_four_point_fixture():
    pts, lab = FOUR_POINTS
    r = validity_indices(np.array(pts, float), lab, normalize=False)
    assert r.silhouette == pytest.approx(0.9002487577582194, abs=1e-12)
    assert r.dunn == pytest.approx(10.0)
    assert r.davies_bouldin == pytest.approx(0.1)
    assert r.calinski_harabasz == pytest.approx(200.0)


@pytest.mark.parametrize("normalize", [False, True])
@pytest.mark.parametrize("case", range(len(VALIDITY_CASES)))
def test_matches_bruteforce(case, normalize):
    pts, lab = VALIDITY_CASES[case]
    ref_pts = oracles.zscore(pts) if normalize else [tuple(map(float, p)) for p in pts]
    r = validity_indices(np.array(pts, float), lab, normalize=normalize)
    assert r.silhouette == pytest.approx(oracles.silhouette(ref_pts, lab), abs=1e-9)
    assert r.dunn == pytest.approx(oracles.dunn(ref_pts, lab), abs=1e-9)
    assert r.davies_bouldin == pytest.approx(oracles.davies_bouldin(ref_pts, lab), abs=1e-9)
    assert r.calinski_harabasz == pytest.approx(oracles.calinski_harabasz(ref_pts, lab), rel=1e-9)


def test_label_permutation_invariance():
    pts, lab = VALIDITY_CASES[1]
    X = np.array(pts, float)
    base = validity_indices(X, lab)
    for perm in itertools.permutations(range(3)):
        other = validity_indices(X, [perm[k] for k in lab])
        for a, b in zip(base.to_dict().values(), other.to_dict().values()):
            assert a == pytest.approx(b, abs=1e-12)


def test_dunn_sentinel_warns():
    X = np.array([[0.0], [0.0], [1.0], [1.0]])
    with pytest.warns(UserWarning, match="zero diameter"):
        assert dunn_index(X, np.array([0, 0, 1, 1])) == DUNN_SENTINEL


def test_dataset_input_uses_quantitative_attributes():
    ds = Dataset.from_array(np.array(VALIDITY_CASES[0][0], float))
    r = validity_indices(ds, VALIDITY_CASES[0][1], normalize=False)
    assert r.dunn == pytest.approx(10.0)


def test_errors():
    X = np.zeros((4, 2))
    with pytest.raises(ValueError, match="between 2 and 3"):
        validity_indices(X, [0, 0, 0, 0])
    with pytest.raises(ValueError, match="got 4"):
        validity_indices(X, [0, 1, 2, 3])
    with pytest.raises(ValueError, match="labels for"):
        validity_indices(X, [0, 1])
    with pytest.raises(ValueError, match="empty"):
        validity_indices(X, [0, 0, 2, 2], n_clusters=3)
    with pytest.raises(ValueError, match="outside"):
        validity_indices(X, [0, 0, 1, 5], n_clusters=2)
