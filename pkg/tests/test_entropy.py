import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from erasure_entropy import (
    Dist,
    EntropyValue,
    JointTable,
    Unit,
    binary_entropy,
    conditional_entropy,
    erasure_entropy_block,
    shannon_entropy,
)
from erasure_entropy.errors import ValidationError

LN2 = math.log(2.0)


def test_unit_conversion_roundtrip():
    v = EntropyValue(1.0, Unit.BITS)
    assert v.in_nats() == pytest.approx(LN2, abs=1e-15)
    assert v.to(Unit.NATS).to(Unit.BITS).value == pytest.approx(1.0, abs=1e-15)


def test_binary_entropy_endpoints_and_maximum():
    assert binary_entropy(0.0).value == 0.0
    assert binary_entropy(1.0).value == 0.0
    assert binary_entropy(0.5, Unit.BITS).value == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValidationError):
        binary_entropy(1.5)


def test_dist_refuses_unnormalized():
    with pytest.raises(ValidationError):
        Dist([0.5, 0.4])
    with pytest.raises(ValidationError):
        Dist([1.1, -0.1])


def test_shannon_entropy_uniform():
    d = Dist([0.25] * 4)
    assert shannon_entropy(d, Unit.BITS).value == pytest.approx(2.0, abs=1e-14)


def test_joint_table_marginal_axis_order():
    p = np.array([[0.1, 0.2], [0.3, 0.4]])
    j = JointTable(p)
    m10 = j.marginal([1, 0]).probs
    assert np.allclose(m10, p.T)
    m0 = j.marginal([0]).probs
    assert np.allclose(m0, p.sum(axis=1))


def test_conditional_entropy_independent_coords():
    # H(X|Y) = H(X) when X and Y are independent
    px = np.array([0.3, 0.7])
    py = np.array([0.6, 0.4])
    j = JointTable(np.outer(px, py))
    hx = shannon_entropy(Dist(px)).value
    assert conditional_entropy(j, [0]).value == pytest.approx(hx, abs=1e-14)


def test_conditional_entropy_deterministic_function():
    # Y = X: H(X|Y) = 0
    j = JointTable(np.diag([0.3, 0.7]))
    assert conditional_entropy(j, [0]).value == pytest.approx(0.0, abs=1e-14)


def test_erasure_block_sums_single_site_terms():
    p = np.array([[0.1, 0.2], [0.3, 0.4]])
    j = JointTable(p)
    expect = conditional_entropy(j, [0]).value + conditional_entropy(j, [1]).value
    assert erasure_entropy_block(j).value == pytest.approx(expect, abs=1e-14)


def _random_table(rng, shape):
    p = rng.random(shape) + 1e-3
    return JointTable(p / p.sum())


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 4), st.integers(1, 3))
def test_entropy_bounds_random_tables(seed, m, d):
    rng = np.random.default_rng(seed)
    j = _random_table(rng, (m,) * d)
    h = conditional_entropy(j, list(range(d)), Unit.BITS).value
    assert 0.0 <= h <= d * math.log2(m) + 1e-12
    # conditioning can only reduce entropy
    h0 = conditional_entropy(j, [0]).value
    h0_marg = shannon_entropy(Dist(j.marginal([0]).probs)).value
    assert h0 <= h0_marg + 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_erasure_block_below_joint_entropy(seed):
    rng = np.random.default_rng(seed)
    j = _random_table(rng, (2, 2, 2))
    joint = conditional_entropy(j, [0, 1, 2]).value
    assert erasure_entropy_block(j).value <= joint + 1e-12
