import numpy as np
import pytest

from erasure_entropy import (
    LatticeSpec,
    McConfig,
    Unit,
    class_frequencies_from_torus,
    correlation,
    enumerate_torus,
    estimate_class_frequencies,
    estimate_correlations,
    estimate_erasure_entropy,
    heat_bath_sweep,
    torus_erasure_entropy,
)
from erasure_entropy.errors import MixingFailureError, ValidationError


def _cfg(**kw):
    base = dict(
        lattice=LatticeSpec("square", 4, 4),
        J=0.2,
        sweeps=800,
        burn_in=100,
        batches=16,
        seed=0,
        chains=2,
    )
    base.update(kw)
    return McConfig(**base)


def test_config_validation():
    with pytest.raises(ValidationError):
        _cfg(batches=4)
    with pytest.raises(ValidationError):
        _cfg(sweeps=8)
    with pytest.raises(ValidationError):
        _cfg(chains=1)


def test_heat_bath_sweep_preserves_state_space():
    lat = LatticeSpec("square", 4, 4)
    rng = np.random.default_rng(0)
    state = np.ones(16, dtype=np.int8)
    out = heat_bath_sweep(state, lat, 0.3, rng)
    assert out.shape == (16,)
    assert np.all(np.abs(out) == 1)
    assert np.all(state == 1)  # input untouched
    with pytest.raises(ValidationError):
        heat_bath_sweep(np.zeros(16, dtype=np.int8), lat, 0.3, rng)


def test_fixed_seed_reproducible():
    a = estimate_erasure_entropy(_cfg())
    b = estimate_erasure_entropy(_cfg())
    assert a.mean == b.mean and a.se == b.se
    c = estimate_erasure_entropy(_cfg(seed=1))
    assert c.mean != a.mean


def test_entropy_estimate_within_3_sigma_of_exact():
    cfg = _cfg(sweeps=4000, burn_in=300, chains=4)
    exact = torus_erasure_entropy(enumerate_torus(cfg.lattice, cfg.J), [0]).value
    est = estimate_erasure_entropy(cfg)
    assert abs(est.mean - exact) < 3 * est.se
    assert est.se < 1e-3


def test_correlations_within_3_sigma_of_exact():
    cfg = _cfg(sweeps=4000, burn_in=300, chains=4, seed=2)
    measure = enumerate_torus(cfg.lattice, cfg.J)
    tuples = [(0, 1), (0, 1, 4, 5)]
    est = estimate_correlations(cfg, tuples)
    for tup in tuples:
        exact = correlation(measure, list(tup))
        e = est[tup]
        assert abs(e.mean - exact) < 3 * e.se


def test_class_frequencies_within_3_sigma_of_exact():
    cfg = _cfg(sweeps=4000, burn_in=300, chains=4, seed=5)
    measure = enumerate_torus(cfg.lattice, cfg.J)
    exact = class_frequencies_from_torus(measure)
    ests = estimate_class_frequencies(cfg)
    for est, val in zip(ests, (exact.P1, exact.P2, exact.P3, exact.P4)):
        assert abs(est.mean - val) < 3 * est.se + 1e-12


def test_brick_class_frequencies_sum_to_one():
    cfg = _cfg(lattice=LatticeSpec("honeycomb", 6, 4), J=0.3, seed=1)
    p1, p2 = estimate_class_frequencies(cfg)
    assert 2 * p1.mean + 6 * p2.mean == pytest.approx(1.0, abs=1e-12)


def test_mixing_failure_in_ordered_phase():
    cfg = _cfg(lattice=LatticeSpec("square", 12, 12), J=1.5, sweeps=200, burn_in=50)
    with pytest.raises(MixingFailureError):
        estimate_erasure_entropy(cfg)


def test_unit_conversion():
    nats = estimate_erasure_entropy(_cfg(), Unit.NATS)
    bits = estimate_erasure_entropy(_cfg(), Unit.BITS)
    assert bits.mean == pytest.approx(nats.mean / np.log(2.0), abs=1e-14)
