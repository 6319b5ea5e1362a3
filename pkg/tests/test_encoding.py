import warnings
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sklearn.base import clone

from asynca.clustering import (
    AttributeCode,
    AttributeEncoder,
    DataFormatError,
    Dataset,
    EncodingSpec,
    build_encoding,
    encode,
    load_csv,
)

DATA = Path(__file__).parent / "data"


@pytest.fixture
def books():
    return load_csv(DATA / "books.csv", id_column="book")


def test_books_reproduce_with_supplied_spec(books):
    spec = EncodingSpec.load(DATA / "books_encoding.json")
    expected = (DATA / "books_expected.txt").read_text().split()
    with pytest.warns(UserWarning, match="319"):
        enc = encode(books, spec)
    assert enc.strings == expected
    assert enc.ids[:2] == ["1", "2"]
    # books 4 and 10 share a configuration
    assert len(enc.useful) == 9
    assert enc.index[3] == enc.index[9]


def test_load_csv_kinds(books):
    assert [a.kind for a in books.attributes] == ["quantitative", "quantitative", "qualitative-binary"]
    assert books.column("binding")[:2] == ["soft", "hard"]


def _write(tmp_path, text):
    p = tmp_path / "d.csv"
    p.write_text(text)
    return p


@pytest.mark.parametrize("text,match", [
    ("", "empty"),
    ("a,b\n", "no data rows"),
    ("a,b\n1,2\n3\n", ":3: ragged"),
    ("a,b\n1,2\nx,3\n4,5\n", "cannot parse 'x'"),
    ("a\nr\ng\nb\n", "3 categories"),
])
def test_load_csv_errors(tmp_path, text, match):
    with pytest.raises(DataFormatError, match=match):
        load_csv(_write(tmp_path, text))


def test_load_csv_unknown_column(tmp_path):
    with pytest.raises(DataFormatError, match="no such column"):
        load_csv(_write(tmp_path, "a,b\n1,2\n"), drop=["c"])


def test_equal_frequency_bins():
    ds = Dataset.from_array(np.arange(9.0).reshape(9, 1).repeat(2, axis=1), names=["a", "b"])
    spec = build_encoding(ds)
    assert spec.attributes[0].intervals == [(0, 2), (3, 5), (6, 8)]
    # exactly three distinct values still give three bins
    ds3 = Dataset.from_array(np.array([[1, 1], [2, 2], [3, 3], [3, 3]], float))
    assert build_encoding(ds3).attributes[0].intervals == [(1, 1), (2, 2), (3, 3)]


def test_ties_stay_in_one_bin():
    vals = np.array([1, 1, 1, 1, 2, 3, 4, 4, 5], float)
    spec = build_encoding(Dataset.from_array(np.c_[vals, vals]))
    for lo, hi in spec.attributes[0].intervals:
        assert lo <= hi
    assert spec.attributes[0].intervals[0] == (1, 1)


def test_degenerate_attributes_rejected():
    with pytest.raises(ValueError, match="constant"):
        build_encoding(Dataset.from_array(np.array([[1, 0], [1, 1], [1, 2]], float)))
    with pytest.raises(ValueError, match="2 distinct"):
        build_encoding(Dataset.from_array(np.array([[1, 0], [2, 1], [1, 2]], float)))
    with pytest.raises(ValueError, match="minimum ring size"):
        build_encoding(Dataset.from_array(np.array([[1], [2], [3]], float)))


def test_width_is_two_bits_per_attribute():
    X = np.random.default_rng(0).normal(size=(30, 5))
    spec = build_encoding(Dataset.from_array(X))
    assert spec.width == 10
    assert EncodingSpec.from_dict(spec.to_dict()) == spec


def test_bad_codes():
    with pytest.raises(ValueError):
        AttributeCode("x", "quantitative", intervals=[(0, 1), (2, 3)])
    with pytest.raises(ValueError):
        AttributeCode("x", "quantitative", intervals=[(0, 2), (1, 3), (4, 5)])
    with pytest.raises(ValueError, match="unknown category"):
        AttributeCode("x", "qualitative-binary", categories=["a", "b"]).code("c")


@given(st.floats(-5, 15, allow_nan=False), st.floats(-5, 15, allow_nan=False))
def test_order_preserving_codes(u, v):
    # neighbouring bins differ in one bit and bin order follows value order
    code = AttributeCode("x", "quantitative", intervals=[(0, 3), (4, 6), (7, 10)])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cu, cv = code.code(u), code.code(v)
    rank = {"00": 0, "01": 1, "11": 2}
    if u <= v:
        assert rank[cu] <= rank[cv]
    if abs(rank[cu] - rank[cv]) == 1:
        assert sum(a != b for a, b in zip(cu, cv)) == 1


def test_attribute_encoder_estimator():
    X = np.random.default_rng(1).normal(size=(40, 3))
    enc = AttributeEncoder()
    assert clone(enc).get_params() == {"spec": None}
    bits = enc.fit_transform(X)
    assert bits.shape == (40, 6) and bits.dtype == np.uint8
    assert enc.n_features_in_ == 3
    # a fitted spec passed as a dict gives the same result
    again = AttributeEncoder(spec=enc.spec_.to_dict()).fit(X).transform(X)
    assert np.array_equal(bits, again)
    with pytest.raises(Exception, match="not fitted"):
        AttributeEncoder().transform(X)
