"""Dataset ingestion and the 2-bit-per-attribute binary encoding.

Quantitative attributes are cut into three ordered intervals coded
``00``, ``01``, ``11`` so that neighbouring intervals sit at Hamming distance 1.
Two-valued qualitative attributes get ``01`` / ``10``.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ..lattice import MIN_CELLS

__all__ = [
    "QUANTITATIVE",
    "QUALITATIVE",
    "QUANT_CODES",
    "QUAL_CODES",
    "Attribute",
    "Dataset",
    "AttributeCode",
    "EncodingSpec",
    "EncodedDataset",
    "DataFormatError",
    "load_csv",
    "build_encoding",
    "encode",
    "AttributeEncoder",
]

QUANTITATIVE = "quantitative"
QUALITATIVE = "qualitative-binary"
QUANT_CODES = ("00", "01", "11")
QUAL_CODES = ("01", "10")


class DataFormatError(ValueError):
    """Malformed input table."""


@dataclass(frozen=True)
class Attribute:
    name: str
    kind: str

    def __post_init__(self):
        if self.kind not in (QUANTITATIVE, QUALITATIVE):
            raise ValueError(f"unknown attribute kind {self.kind!r}")


@dataclass
class Dataset:
    attributes: list[Attribute]
    records: list[tuple]
    ids: list[str] = field(default_factory=list)

    def __post_init__(self):
        width = len(self.attributes)
        for i, rec in enumerate(self.records):
            if len(rec) != width:
                raise DataFormatError(
                    f"object {i} has {len(rec)} values, expected {width}"
                )
        if not self.ids:
            self.ids = [str(i) for i in range(len(self.records))]
        elif len(self.ids) != len(self.records):
            raise DataFormatError("ids and records differ in length")

    def __len__(self) -> int:
        return len(self.records)

    @property
    def names(self) -> list[str]:
        return [a.name for a in self.attributes]

    def column(self, name: str) -> list:
        j = self.names.index(name)
        return [rec[j] for rec in self.records]

    def numeric_matrix(self) -> np.ndarray:
        """Quantitative columns as a float array, in attribute order."""
        cols = [j for j, a in enumerate(self.attributes) if a.kind == QUANTITATIVE]
        if not cols:
            return np.zeros((len(self.records), 0))
        return np.array([[float(rec[j]) for j in cols] for rec in self.records], dtype=float)

    @classmethod
    def from_array(cls, X, names=None) -> Dataset:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2:
            raise DataFormatError("expected a 2-D array")
        names = list(names) if names is not None else [f"x{j}" for j in range(X.shape[1])]
        attrs = [Attribute(nm, QUANTITATIVE) for nm in names]
        return cls(attrs, [tuple(row) for row in X.tolist()])


def _parse_float(text: str):
    try:
        v = float(text)
    except ValueError:
        return None
    return v if math.isfinite(v) else None


def load_csv(path, *, id_column: str | None = None, drop=()) -> Dataset:
    """Read a headed CSV. Numeric columns become quantitative; a non-numeric
    column with at most two distinct values becomes qualitative-binary."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if any(cell.strip() for cell in r)]
    if not rows:
        raise DataFormatError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    body = rows[1:]
    if not body:
        raise DataFormatError(f"{path}: header but no data rows")
    for lineno, r in enumerate(body, start=2):
        if len(r) != len(header):
            raise DataFormatError(
                f"{path}:{lineno}: ragged row with {len(r)} fields, header has {len(header)}"
            )
    drop = set(drop)
    unknown = (drop | ({id_column} if id_column else set())) - set(header)
    if unknown:
        raise DataFormatError(f"{path}: no such column(s): {', '.join(sorted(unknown))}")
    ids = [r[header.index(id_column)].strip() for r in body] if id_column else []
    attrs: list[Attribute] = []
    columns = []
    for j, name in enumerate(header):
        if name in drop or name == id_column:
            continue
        raw = [r[j].strip() for r in body]
        parsed = [_parse_float(v) for v in raw]
        n_numeric = sum(p is not None for p in parsed)
        if n_numeric == len(raw):
            attrs.append(Attribute(name, QUANTITATIVE))
            columns.append(parsed)
            continue
        if n_numeric > len(raw) // 2:
            bad = next(i for i, p in enumerate(parsed) if p is None)
            raise DataFormatError(
                f"{path}:{bad + 2}: column {name!r}: cannot parse {raw[bad]!r} as a number"
            )
        cats = list(dict.fromkeys(raw))
        if len(cats) > 2:
            raise DataFormatError(
                f"{path}: column {name!r} has {len(cats)} categories; only two-valued "
                "qualitative attributes are supported (drop it or recode)"
            )
        attrs.append(Attribute(name, QUALITATIVE))
        columns.append(raw)
    if not attrs:
        raise DataFormatError(f"{path}: no attribute columns left")
    records = [tuple(col[i] for col in columns) for i in range(len(body))]
    return Dataset(attrs, records, ids)


@dataclass
class AttributeCode:
    """Per-attribute encoding: three closed intervals, or two categories."""

    name: str
    kind: str
    intervals: list[tuple[float, float]] = field(default_factory=list)
    categories: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.kind == QUANTITATIVE:
            self.intervals = [(float(lo), float(hi)) for lo, hi in self.intervals]
            if len(self.intervals) != 3:
                raise ValueError(f"{self.name}: need exactly 3 intervals")
            flat = [v for iv in self.intervals for v in iv]
            if any(a > b for a, b in zip(flat, flat[1:])):
                raise ValueError(f"{self.name}: intervals must be ordered and disjoint")
        elif self.kind == QUALITATIVE:
            self.categories = [str(c) for c in self.categories]
            if not 1 <= len(self.categories) <= 2:
                raise ValueError(f"{self.name}: need one or two categories")
        else:
            raise ValueError(f"unknown attribute kind {self.kind!r}")

    def code(self, value) -> str:
        if self.kind == QUALITATIVE:
            value = str(value).strip()
            if value not in self.categories:
                raise ValueError(f"{self.name}: unknown category {value!r}")
            return QUAL_CODES[self.categories.index(value)]
        v = float(value)
        for k, (lo, hi) in enumerate(self.intervals):
            if lo <= v <= hi:
                return QUANT_CODES[k]
        dist = [lo - v if v < lo else v - hi for lo, hi in self.intervals]
        k = int(np.argmin(dist))
        warnings.warn(
            f"{self.name}: value {v:g} lies outside every interval; clamped to bin {k}",
            stacklevel=3,
        )
        return QUANT_CODES[k]

    def to_dict(self) -> dict:
        d = {"name": self.name, "kind": self.kind}
        if self.kind == QUANTITATIVE:
            d["intervals"] = [list(iv) for iv in self.intervals]
            d["codes"] = list(QUANT_CODES)
        else:
            d["categories"] = list(self.categories)
            d["codes"] = list(QUAL_CODES[: len(self.categories)])
        return d


@dataclass
class EncodingSpec:
    attributes: list[AttributeCode]

    @property
    def width(self) -> int:
        return 2 * len(self.attributes)

    def to_dict(self) -> dict:
        return {"width": self.width, "attributes": [a.to_dict() for a in self.attributes]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> EncodingSpec:
        attrs = []
        for a in d["attributes"]:
            attrs.append(AttributeCode(
                a["name"], a["kind"],
                intervals=[tuple(iv) for iv in a.get("intervals", [])],
                categories=a.get("categories", []),
            ))
        return cls(attrs)

    @classmethod
    def load(cls, path) -> EncodingSpec:
        return cls.from_dict(json.loads(Path(path).read_text()))


def _equal_frequency(values: list[float], name: str) -> list[tuple[float, float]]:
    """Three bins of near-equal counts; ties never straddle a boundary."""
    v = np.sort(np.asarray(values, dtype=float))
    uniq, counts = np.unique(v, return_counts=True)
    if uniq.shape[0] < 3:
        if uniq.shape[0] == 1:
            raise ValueError(f"attribute {name!r} is constant; remove it before encoding")
        raise ValueError(
            f"attribute {name!r} has only {uniq.shape[0]} distinct values; need at least 3"
        )
    total = v.shape[0]
    cum = np.cumsum(counts)
    d = uniq.shape[0]
    # cut after uniq[c]; c1 in [0, d-3], c2 in [c1+1, d-2]
    c1 = int(np.argmin(np.abs(cum[: d - 2] - total / 3)))
    c2 = c1 + 1 + int(np.argmin(np.abs(cum[c1 + 1 : d - 1] - 2 * total / 3)))
    return [
        (float(uniq[0]), float(uniq[c1])),
        (float(uniq[c1 + 1]), float(uniq[c2])),
        (float(uniq[c2 + 1]), float(uniq[-1])),
    ]


def build_encoding(dataset: Dataset, bins: int = 3) -> EncodingSpec:
    if bins != 3:
        raise ValueError("only 3 bins (2-bit codes) are supported")
    attrs = []
    for j, a in enumerate(dataset.attributes):
        col = [rec[j] for rec in dataset.records]
        if a.kind == QUANTITATIVE:
            attrs.append(AttributeCode(a.name, a.kind, intervals=_equal_frequency(col, a.name)))
        else:
            cats = list(dict.fromkeys(str(c).strip() for c in col))
            if len(cats) < 2:
                raise ValueError(f"attribute {a.name!r} is constant; remove it before encoding")
            attrs.append(AttributeCode(a.name, a.kind, categories=cats))
    spec = EncodingSpec(attrs)
    if spec.width < MIN_CELLS:
        raise ValueError(f"encoding width {spec.width} is below the minimum ring size {MIN_CELLS}")
    return spec


@dataclass
class EncodedDataset:
    ids: list[str]
    strings: list[str]
    """Encoded configuration per object."""
    useful: list[str]
    """Distinct configurations in first-seen order."""
    index: np.ndarray
    """Per object: position of its configuration in ``useful``."""

    @property
    def width(self) -> int:
        return len(self.useful[0]) if self.useful else 0

    def __len__(self) -> int:
        return len(self.strings)

    @property
    def pairs(self) -> list[tuple[str, str]]:
        return list(zip(self.ids, self.strings))

    def codes(self) -> np.ndarray:
        return np.array([int(s, 2) for s in self.strings], dtype=np.int64)


def encode(dataset: Dataset, spec: EncodingSpec) -> EncodedDataset:
    names = [a.name for a in spec.attributes]
    if names != dataset.names:
        raise ValueError(f"encoding covers {names}, dataset has {dataset.names}")
    if spec.width < MIN_CELLS:
        raise ValueError(f"encoding width {spec.width} is below the minimum ring size {MIN_CELLS}")
    strings = []
    for rec in dataset.records:
        strings.append("".join(code.code(v) for code, v in zip(spec.attributes, rec)))
    useful = list(dict.fromkeys(strings))
    pos = {s: i for i, s in enumerate(useful)}
    index = np.array([pos[s] for s in strings], dtype=np.int64)
    return EncodedDataset(list(dataset.ids), strings, useful, index)


class AttributeEncoder(TransformerMixin, BaseEstimator):
    """Fit interval boundaries (or use a supplied spec) and emit bit matrices.

    ``X`` may be a :class:`Dataset` or a numeric 2-D array.
    """

    def __init__(self, spec=None):
        self.spec = spec

    def _dataset(self, X) -> Dataset:
        return X if isinstance(X, Dataset) else Dataset.from_array(X)

    def fit(self, X, y=None):
        ds = self._dataset(X)
        if self.spec is None:
            self.spec_ = build_encoding(ds)
        elif isinstance(self.spec, EncodingSpec):
            self.spec_ = self.spec
        else:
            self.spec_ = EncodingSpec.from_dict(self.spec)
        if isinstance(X, Dataset):
            self.feature_names_in_ = np.array(ds.names, dtype=object)
        self.n_features_in_ = len(ds.attributes)
        return self

    def transform(self, X):
        check_is_fitted(self, "spec_")
        if isinstance(X, Dataset):
            ds = X
        else:
            # plain arrays carry no names; adopt the fitted ones
            ds = Dataset.from_array(X, names=[a.name for a in self.spec_.attributes])
        enc = encode(ds, self.spec_)
        return np.array([[int(ch) for ch in s] for s in enc.strings], dtype=np.uint8)
