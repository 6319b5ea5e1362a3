import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from asynca.lattice import Configuration, complement, mirror
from asynca.rules import transform
from asynca.schemes import (
    EnumerationLimitError,
    Scheme,
    Selection,
    UpdateScheme,
    draw_masks,
    make_rng,
    sample_selection,
    space_time,
    spawn_rngs,
    step,
    successors,
    trajectory,
    updates_per_step,
)

from . import oracles

small = st.lists(st.integers(0, 1), min_size=3, max_size=9).map(Configuration.from_array)
schemes = st.sampled_from(["sync", "fully", "skew", "alpha"])


def test_rule_90_alpha_rows():
    x = Configuration.from_string("11001")
    x1 = step(90, x, {0, 1})
    assert str(x1) == "01001"
    x2 = step(90, x1, {0, 2, 3})
    assert str(x2) == "01111"
    x3 = step(90, x2, {2})
    assert str(x3) == "01011"
    assert str(step(90, x3, range(5))) == "00011"


def test_step_reads_pre_step_state():
    # both cells of the pair see the old neighbourhood
    x = Configuration.from_string("0110")
    assert str(step(0, x, {1, 2})) == "0000"
    assert str(step(204, x, {0, 1, 2, 3})) == "0110"


def test_step_rejects_bad_cell():
    with pytest.raises(IndexError):
        step(90, "11001", {5})


def test_scheme_validation():
    with pytest.raises(ValueError):
        UpdateScheme(Scheme.ALPHA, 1.0)
    with pytest.raises(ValueError):
        UpdateScheme(Scheme.ALPHA, 0.0)
    with pytest.raises(ValueError):
        UpdateScheme(Scheme.FULLY, 0.5)
    with pytest.raises(ValueError):
        UpdateScheme.parse("random")
    assert UpdateScheme.parse("alpha").alpha == 0.5
    assert str(UpdateScheme.parse("alpha", 0.25)) == "alpha(0.25)"


def test_updates_per_step():
    assert updates_per_step("sync", 7) == 1
    assert updates_per_step("alpha", 7) == 1
    assert updates_per_step("fully", 7) == 7
    assert updates_per_step("skew", 7) == 4
    assert updates_per_step("skew", 8) == 4


@given(st.integers(3, 12), schemes, st.integers(0, 2**32))
def test_sampled_selection_is_valid(n, scheme, seed):
    sel = sample_selection(scheme, n, make_rng(seed))
    assert sel.is_valid_for(scheme, n)


def test_selection_validity():
    assert Selection({4, 0}).is_valid_for("skew", 5)
    assert not Selection({0, 2}).is_valid_for("skew", 5)
    assert not Selection({0, 1}).is_valid_for("fully", 5)
    assert Selection(range(5)).is_valid_for("sync", 5)
    assert Selection(()).is_valid_for("alpha", 5)
    assert not Selection({7}).is_valid_for("alpha", 5)


@given(small, st.integers(0, 255), schemes)
def test_successors_match_oracle(x, rule, scheme):
    got = {c.bits for c in successors(rule, x, scheme)}
    assert got == oracles.succ(rule, x.bits, scheme)


def test_alpha_enumeration_limit():
    with pytest.raises(EnumerationLimitError):
        successors(90, Configuration.uniform(1, 13), "alpha")
    # allowed when the caller raises the limit
    one = Configuration.from_string("1" + "0" * 12)
    assert len(successors(0, one, "alpha", alpha_limit=13)) == 2


@given(small, st.integers(0, 255), schemes)
def test_conjugation_equivariance(x, rule, scheme):
    conj = transform(rule, "conjugate")
    lhs = {complement(c) for c in successors(rule, x, scheme)}
    assert lhs == successors(conj, complement(x), scheme)


@given(small, st.integers(0, 255), schemes)
def test_reflection_equivariance(x, rule, scheme):
    refl = transform(rule, "reflect")
    lhs = {mirror(c) for c in successors(rule, x, scheme)}
    assert lhs == successors(refl, mirror(x), scheme)


@given(small, st.integers(0, 255))
def test_point_attractor_iff_no_successor_moves(x, rule):
    from asynca.lattice import is_point_attractor

    assert is_point_attractor(rule, x) == (successors(rule, x, "fully") == {x})
    assert is_point_attractor(rule, x) == (successors(rule, x, "alpha") == {x})


def test_trajectory_is_reproducible_and_consistent():
    a = trajectory(110, "0010110101", "alpha", 50, seed=9)
    b = trajectory(110, "0010110101", "alpha", 50, seed=9)
    assert np.array_equal(a.configurations, b.configurations)
    for t in range(a.steps):
        assert step(110, a.configuration(t), a.selection(t)) == a.configuration(t + 1)
    c = trajectory(110, "0010110101", "alpha", 50, seed=10)
    assert not np.array_equal(a.selections, c.selections)


def test_draw_masks_shapes():
    rng = make_rng(0)
    m = draw_masks("skew", 6, 100, rng)
    assert m.shape == (100, 6) and (m.sum(axis=1) == 2).all()
    assert (draw_masks("fully", 6, 10, rng).sum(axis=1) == 1).all()
    assert draw_masks("sync", 6, 3, rng).all()


def test_spawned_streams_differ():
    a, b = spawn_rngs(5, 2)
    assert a.integers(1 << 30) != b.integers(1 << 30)
    assert spawn_rngs(5, 2)[0].integers(1 << 30) == spawn_rngs(5, 2)[0].integers(1 << 30)


def test_space_time_rows_are_normalized_steps():
    rows = space_time(204, "0110101", "fully", 10, make_rng(1))
    assert rows.shape == (11, 7)
    assert (rows == rows[0]).all()
    # small chunks give the same rows as one big chunk
    r1 = space_time(30, "0110101", "skew", 40, make_rng(3))
    r2 = space_time(30, "0110101", "skew", 40, make_rng(3), chunk=4)
    assert np.array_equal(r1, r2)


def test_sync_space_time_matches_step():
    x = Configuration.from_string("0000100000")
    rows = space_time(30, x, "sync", 4, make_rng(0))
    for t in range(4):
        x = step(30, x, range(10))
        assert Configuration.from_array(rows[t + 1]) == x


def test_small_step_examples():
    assert str(step(0, "1111", {1, 2})) == "1001"
    assert str(step(204, "10110", {0, 3})) == "10110"
    assert sample_selection("sync", 5, make_rng(0)) == Selection(range(5))
    got = {str(c) for c in successors(30, "0001", "fully")}
    assert got == {"0001", "1001", "0011"}


def test_fully_selection_is_uniform():
    rng = make_rng(123)
    counts = np.zeros(5)
    for _ in range(100_000):
        (c,) = sample_selection("fully", 5, rng).cells
        counts[c] += 1
    assert np.all(np.abs(counts / 100_000 - 0.2) <= 0.01)


def test_zero_steps_and_identity():
    rec = trajectory(30, "0110", "skew", 0, seed=1)
    assert rec.configurations.shape == (1, 4) and rec.final == Configuration.from_string("0110")
    for scheme in ("sync", "fully", "skew", "alpha"):
        rec = trajectory(204, "011010", scheme, 30, seed=2)
        assert (rec.configurations == rec.configurations[0]).all()


def test_rule_50_reaches_zero_within_budget():
    x0 = Configuration.from_array([i % 2 for i in range(50)])
    # 20000 normalized steps of 50 single-cell updates each = 10^6 updates
    rows = space_time(50, x0, "fully", 20_000, make_rng(42))
    assert rows[-1].sum() == 0
