import math

import numpy as np
import pytest

from erasure_entropy import (
    LatticeSpec,
    Unit,
    correlation,
    enumerate_torus,
    free_energy_content,
    hamiltonian_window,
    lts_check,
    single_site_conditional,
    torus_erasure_entropy,
    torus_gibbs_erasure,
    volume_normalized_erasure,
)
from erasure_entropy.errors import BudgetError, ValidationError
from erasure_entropy.lattice import tilted_single_site_measure

LN2 = math.log(2.0)


def test_lattice_validation():
    with pytest.raises(ValidationError):
        LatticeSpec("triangular", 4, 4)
    with pytest.raises(ValidationError):
        LatticeSpec("square", 2, 4)
    with pytest.raises(ValidationError):
        LatticeSpec("honeycomb", 5, 4)  # odd width has no brick tiling


def test_square_torus_is_4_regular():
    lat = LatticeSpec("square", 4, 3)
    nbr = lat.neighbor_array()
    assert nbr.shape == (12, 4)
    assert len(lat.bonds()) == 2 * lat.n_sites


def test_brick_torus_is_3_regular_even_and_odd_height():
    for w, h in ((4, 2), (4, 3), (6, 4), (4, 5)):
        lat = LatticeSpec("honeycomb", w, h)
        nbr = lat.neighbor_array()
        assert nbr.shape == (w * h, 3)
        assert len(lat.bonds()) == 3 * w * h // 2


def test_single_site_conditional_limits():
    assert single_site_conditional(0.3, 0) == pytest.approx(0.5)
    assert single_site_conditional(50.0, 4) == pytest.approx(1.0)
    assert single_site_conditional(50.0, -4) == pytest.approx(0.0)
    # matches the unnormalized Boltzmann ratio
    J, s = 0.4, 2
    expect = math.exp(J * s) / (math.exp(J * s) + math.exp(-J * s))
    assert single_site_conditional(J, s) == pytest.approx(expect, abs=1e-15)


def test_hamiltonian_window_counts_region_bonds():
    lat = LatticeSpec("square", 3, 3)
    config = np.ones(9, dtype=int)
    # a single site touches 4 bonds, all aligned
    assert hamiltonian_window(config, lat, 0.5, [0]) == pytest.approx(-2.0)


def test_enumeration_budget():
    with pytest.raises(BudgetError):
        enumerate_torus(LatticeSpec("square", 6, 6), 0.1)


def test_measure_normalization_and_marginals():
    m = enumerate_torus(LatticeSpec("square", 3, 3), 0.2)
    assert float(m.probs.sum()) == pytest.approx(1.0, abs=1e-12)
    marg = m.marginal([0, 1])
    assert float(marg.sum()) == pytest.approx(1.0, abs=1e-12)
    # flip symmetry: single-site marginal is uniform
    assert m.marginal([4])[0] == pytest.approx(0.5, abs=1e-13)


def test_odd_correlations_vanish():
    m = enumerate_torus(LatticeSpec("square", 3, 3), 0.3)
    assert correlation(m, [0]) == pytest.approx(0.0, abs=1e-13)
    assert correlation(m, [0, 1, 2]) == pytest.approx(0.0, abs=1e-13)
    assert correlation(m, [0, 1]) > 0.0


def test_direct_equals_kernel_form():
    for kind, w, h in (("square", 3, 3), ("honeycomb", 4, 3)):
        m = enumerate_torus(LatticeSpec(kind, w, h), 0.4)
        for region in ([0], [0, 1], [0, 1, 2]):
            d = torus_erasure_entropy(m, region).value
            g = torus_gibbs_erasure(m, region).value
            assert d == pytest.approx(g, abs=1e-12)


def test_zero_coupling_entropies():
    m = enumerate_torus(LatticeSpec("square", 3, 3), 0.0)
    assert m.full_entropy_nats() == pytest.approx(9 * LN2, abs=1e-12)
    assert torus_erasure_entropy(m, [0, 1], Unit.BITS).value == pytest.approx(2.0, abs=1e-12)


def test_volume_normalized_series():
    m = enumerate_torus(LatticeSpec("square", 4, 4), 0.4)
    vals = volume_normalized_erasure(m, [[0], [0, 1]], Unit.BITS)
    assert len(vals) == 2
    assert vals[0] == pytest.approx(
        torus_erasure_entropy(m, [0], Unit.BITS).value, abs=1e-13
    )


def test_free_energy_content_of_gibbs_measure():
    # F = E[window energy] - H(site | rest); check both terms independently
    lat = LatticeSpec("square", 3, 3)
    J = 0.4
    m = enumerate_torus(lat, J)
    f = free_energy_content(m.probs, lat, J, [0])
    nbrs = lat.neighbor_array()[0]
    energy = -J * sum(correlation(m, [0, int(v)]) for v in nbrs)
    expect = energy - torus_erasure_entropy(m, [0]).value
    assert f == pytest.approx(expect, abs=1e-12)


def test_tilted_measure_free_energy_above_gibbs():
    lat = LatticeSpec("square", 3, 3)
    J = 0.4
    m = enumerate_torus(lat, J)
    f_star = free_energy_content(m.probs, lat, J, [0])
    rng = np.random.default_rng(1)
    for _ in range(5):
        tilt = 0.1 * rng.choice([-1.0, 1.0], size=16)
        q = tilted_single_site_measure(m, 0, tilt)
        assert float(q.sum()) == pytest.approx(1.0, abs=1e-10)
        assert free_energy_content(q, lat, J, [0]) >= f_star - 1e-12


def test_zero_tilt_recovers_gibbs():
    lat = LatticeSpec("square", 3, 3)
    m = enumerate_torus(lat, 0.3)
    q = tilted_single_site_measure(m, 0, np.zeros(16))
    assert np.allclose(q, m.probs, atol=1e-14)


def test_lts_check_positive_gap():
    gap = lts_check(LatticeSpec("square", 3, 3), 0.4, 0, 0.1, 20, seed=3)
    assert gap > 0.0


def test_lts_independent_case_closed_form():
    # no coupling: constant tilt 0.45 moves the conditional to 0.95,
    # and the gap is ln 2 - H(0.95) exactly
    lat = LatticeSpec("square", 3, 3)
    m = enumerate_torus(lat, 0.0)
    f_star = free_energy_content(m.probs, lat, 0.0, [0])
    q = tilted_single_site_measure(m, 0, np.full(16, 0.45))
    gap = free_energy_content(q, lat, 0.0, [0]) - f_star
    expect = LN2 - (-(0.95 * math.log(0.95) + 0.05 * math.log(0.05)))
    assert gap == pytest.approx(expect, abs=1e-12)
