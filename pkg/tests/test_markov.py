import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _helpers import any_random_chain, bsc_entropy_rate_bits, bsc_erasure_rate_bits, h_bits
from erasure_entropy import (
    DmeSpec,
    MarkovSpec,
    Unit,
    binary_symmetric_chain,
    block_given_past_entropy,
    dme_bound_report,
    dme_conditional_entropy,
    entropy_rate,
    erasure_rate,
    iid_chain,
    interval_erasure_rate,
    markov_identity_residual,
    stationary_block_law,
    stationary_window_distribution,
)
from erasure_entropy.entropy import conditional_entropy
from erasure_entropy.errors import BudgetError, StructureError, ValidationError

# frozen oracle values for the eps = 0.1 binary chain
H_RATE_01_BITS = 0.46899559358928117
H_ERASE_01_BITS = 0.2579141414502828
H_BLOCK_PAST_01_BITS = 0.6800770457282801


def test_spec_validation():
    with pytest.raises(ValidationError):
        MarkovSpec(2, 1, np.array([[0.9, 0.2], [0.1, 0.9]]))
    with pytest.raises(ValidationError):
        MarkovSpec(2, 1, np.array([[0.9, 0.1]]))
    with pytest.raises(ValidationError):
        MarkovSpec(1, 1, np.array([[1.0]]))


def test_reducible_chain_rejected():
    with pytest.raises(StructureError):
        MarkovSpec(2, 1, np.array([[1.0, 0.0], [0.0, 1.0]]))


def test_periodic_chain_rejected():
    with pytest.raises(StructureError):
        MarkovSpec(2, 1, np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_stationary_distribution_is_invariant():
    chain = MarkovSpec(2, 1, np.array([[0.7, 0.3], [0.4, 0.6]]))
    pi = stationary_window_distribution(chain)
    assert np.allclose(pi @ chain.transition, pi, atol=1e-13)
    assert pi[0] == pytest.approx(4.0 / 7.0, abs=1e-12)


def test_bsc_rates_match_closed_form():
    chain = binary_symmetric_chain(0.1)
    h = entropy_rate(chain, Unit.BITS).value
    hm = erasure_rate(chain, Unit.BITS).value
    assert h == pytest.approx(bsc_entropy_rate_bits(0.1), abs=1e-13)
    assert hm == pytest.approx(bsc_erasure_rate_bits(0.1), abs=1e-13)
    assert h == pytest.approx(H_RATE_01_BITS, abs=1e-13)
    assert hm == pytest.approx(H_ERASE_01_BITS, abs=1e-13)


def test_block_given_past_skips_the_origin():
    # for a first-order flip chain, H(X_1 | X_-1) is the two-step flip entropy
    chain = binary_symmetric_chain(0.1)
    got = block_given_past_entropy(chain, Unit.BITS).value
    two_step = 2 * 0.1 * 0.9
    assert got == pytest.approx(h_bits(two_step), abs=1e-13)
    assert got == pytest.approx(H_BLOCK_PAST_01_BITS, abs=1e-13)


def test_identity_residual_tiny_for_named_chains():
    for chain in (binary_symmetric_chain(0.3), iid_chain([0.2, 0.3, 0.5])):
        assert abs(markov_identity_residual(chain)) < 1e-12


def test_iid_chain_rates_coincide():
    chain = iid_chain([0.2, 0.8])
    h = entropy_rate(chain).value
    hm = erasure_rate(chain).value
    assert h == pytest.approx(hm, abs=1e-13)


def test_second_order_chain_identity():
    rng = np.random.default_rng(7)
    t = rng.dirichlet(np.ones(2), size=4)
    t = 0.8 * t + 0.2 / 2
    t /= t.sum(axis=1, keepdims=True)
    chain = MarkovSpec(2, 2, t)
    assert abs(markov_identity_residual(chain)) < 1e-12


def test_interval_rate_matches_bruteforce_window():
    chain = binary_symmetric_chain(0.1)
    for L in (1, 2, 3):
        law = stationary_block_law(chain, L + 2)
        brute = conditional_entropy(law.table, list(range(1, L + 1))).value / L
        got = interval_erasure_rate(chain, L).value
        assert got == pytest.approx(brute, abs=1e-13)


def test_interval_rate_L1_equals_erasure_rate():
    chain = binary_symmetric_chain(0.07)
    assert interval_erasure_rate(chain, 1).value == pytest.approx(
        erasure_rate(chain).value, abs=1e-13
    )


def test_interval_rate_requires_first_order():
    rng = np.random.default_rng(0)
    t = rng.dirichlet(np.ones(2), size=4)
    t = 0.8 * t + 0.1
    t /= t.sum(axis=1, keepdims=True)
    chain = MarkovSpec(2, 2, t)
    with pytest.raises(ValidationError):
        interval_erasure_rate(chain, 3)


def test_dme_iid_uniform_is_linear_in_p():
    chain = iid_chain([0.5, 0.5])
    for p in (0.1, 0.5, 0.9):
        for n in (1, 4, 8):
            v = dme_conditional_entropy(chain, DmeSpec(p, n), Unit.BITS).value
            assert v == pytest.approx(p, abs=1e-12)


def test_dme_budget_enforced():
    chain = binary_symmetric_chain(0.1)
    with pytest.raises(BudgetError):
        dme_conditional_entropy(chain, DmeSpec(0.1, 20))


def test_dme_report_monotone_ratio():
    chain = binary_symmetric_chain(0.1)
    rows = dme_bound_report(chain, [0.1, 0.25, 0.5, 0.75], 8, Unit.BITS)
    ratios = [r[3] for r in rows]
    assert all(a < b for a, b in zip(ratios, ratios[1:]))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_identity_residual_random_chains(seed):
    chain = any_random_chain(np.random.default_rng(seed))
    assert abs(markov_identity_residual(chain)) < 1e-10


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_erasure_rate_below_entropy_rate(seed):
    chain = any_random_chain(np.random.default_rng(seed))
    assert erasure_rate(chain).value <= entropy_rate(chain).value + 1e-12
