import pytest
from hypothesis import given
from hypothesis import strategies as st

from asynca.lattice import (
    Configuration,
    Region,
    complement,
    density,
    is_point_attractor,
    mirror,
    regions,
    rmt_at,
)

from . import oracles

configs = st.lists(st.integers(0, 1), min_size=3, max_size=16).map(Configuration.from_array)


def test_string_and_code_are_big_endian():
    x = Configuration.from_string("0011")
    assert x.code == 3
    assert Configuration.from_code(3, 4) == x
    assert str(Configuration.from_code(8, 4)) == "1000"


def test_bad_inputs():
    with pytest.raises(ValueError):
        Configuration.from_string("01a1")
    with pytest.raises(ValueError):
        Configuration.from_string("01")
    with pytest.raises(ValueError):
        Configuration.from_code(16, 4)
    with pytest.raises(ValueError):
        Configuration((0, 2, 1))


def test_periodic_indexing():
    x = Configuration.from_string("1000")
    assert x[-1] == 0 and x[4] == 1


def test_rmt_at_wraps():
    x = Configuration.from_string("10010")
    assert rmt_at(x, 0) == 0b010  # left neighbour is cell 4
    assert rmt_at(x, 4) == 0b101
    with pytest.raises(IndexError):
        rmt_at(x, 5)


def test_density():
    assert density("0110") == 0.5
    assert density(Configuration.uniform(1, 5)) == 1.0


def test_regions_wrap():
    assert regions("1001") == [Region(0, 1, 2), Region(1, 3, 2)]
    assert regions("0000") == [Region(0, 0, 4)]
    assert regions("0101") == [Region(0, 0, 1), Region(1, 1, 1), Region(0, 2, 1), Region(1, 3, 1)]


def test_point_attractors():
    assert is_point_attractor(0, "000")
    assert not is_point_attractor(0, "010")
    assert all(is_point_attractor(204, Configuration.from_code(c, 5)) for c in range(32))
    assert is_point_attractor(142, "0101")


@given(configs)
def test_regions_reconstruct(x):
    rs = regions(x)
    assert sum(r.length for r in rs) == x.n
    cells = [None] * x.n
    for r in rs:
        for k in range(r.length):
            cells[(r.start + k) % x.n] = r.state
    assert tuple(cells) == x.bits
    if len(rs) > 1:
        assert all(a.state != b.state for a, b in zip(rs, rs[1:] + rs[:1]))


@given(configs)
def test_density_of_complement(x):
    assert density(complement(x)) == pytest.approx(1 - density(x))
    assert complement(complement(x)) == x
    assert mirror(mirror(x)) == x


@given(configs, st.integers(0, 255))
def test_point_attractor_matches_oracle(x, rule):
    expected = oracles.succ(rule, x.bits, "fully") == {x.bits}
    assert is_point_attractor(rule, x) == expected


def test_small_examples():
    x = Configuration.from_string("11001")
    assert density(x) == pytest.approx(0.6)
    assert density(Configuration.uniform(0, 10)) == 0.0
    assert rmt_at(x, 0) == 7
    assert rmt_at("0001", 2) == 1
    assert rmt_at(Configuration.uniform(0, 6), 3) == 0
    assert regions("11111") == [Region(1, 0, 5)]
    assert sorted((r.state, r.length) for r in regions(x)) == [(0, 2), (1, 3)]
    assert is_point_attractor(142, "1010")
    assert not is_point_attractor(30, "1111")
