import numpy as np
import pytest

from erasure_entropy import (
    BoundaryClassProbs,
    CorrelationTriple,
    LatticeSpec,
    Unit,
    class_frequencies_from_torus,
    class_probs_from_correlations,
    correlations_from_class_probs,
    correlations_from_strip,
    correlations_from_torus,
    enumerate_torus,
    erasure_entropy_square,
    torus_erasure_entropy,
)
from erasure_entropy.errors import InconsistentInputError, ValidationError
from erasure_entropy.square import boundary_class

# frozen oracle: single-site erasure entropy, 4x4 torus, J = 0.4, in bits
H_4X4_J04_BITS = 0.41065464206055974


def test_boundary_class_partition():
    counts = [0, 0, 0, 0]
    for bits in np.ndindex(2, 2, 2, 2):
        spins = [2 * b - 1 for b in bits]
        counts[boundary_class(*spins)] += 1
    assert counts == [2, 8, 2, 4]


def test_correlation_triple_range_checked():
    with pytest.raises(InconsistentInputError):
        CorrelationTriple(1.5, 0.0, 0.0)


def test_class_probs_roundtrip():
    rng = np.random.default_rng(4)
    for _ in range(20):
        raw = rng.random(4)
        raw /= raw @ np.array([2.0, 8.0, 2.0, 4.0])
        probs = BoundaryClassProbs(*raw)
        back = class_probs_from_correlations(correlations_from_class_probs(probs))
        for name in ("P1", "P2", "P3", "P4"):
            assert getattr(back, name) == pytest.approx(getattr(probs, name), abs=1e-14)


def test_inconsistent_triple_rejected():
    # g4 = -1 with gEW = 1 cannot come from any distribution
    with pytest.raises(InconsistentInputError):
        class_probs_from_correlations(CorrelationTriple(-1.0, 1.0, 0.0))


def test_zero_coupling_classes_and_entropy():
    triple = CorrelationTriple(0.0, 0.0, 0.0)
    probs = class_probs_from_correlations(triple)
    for name in ("P1", "P2", "P3", "P4"):
        assert getattr(probs, name) == pytest.approx(1.0 / 16.0, abs=1e-15)
    assert erasure_entropy_square(0.0, probs, Unit.BITS).value == pytest.approx(1.0, abs=1e-14)


def test_class_solve_matches_direct_frequencies():
    lat = LatticeSpec("square", 4, 4)
    measure = enumerate_torus(lat, 0.4)
    direct = class_frequencies_from_torus(measure)
    solved = class_probs_from_correlations(correlations_from_torus(4, 0.4))
    for name in ("P1", "P2", "P3", "P4"):
        assert getattr(solved, name) == pytest.approx(getattr(direct, name), abs=1e-12)


def test_entropy_from_classes_matches_direct_conditional():
    J = 0.4
    lat = LatticeSpec("square", 4, 4)
    measure = enumerate_torus(lat, J)
    probs = class_frequencies_from_torus(measure)
    via_classes = erasure_entropy_square(J, probs, Unit.BITS).value
    direct = torus_erasure_entropy(measure, [0], Unit.BITS).value
    assert via_classes == pytest.approx(direct, abs=1e-12)
    assert direct == pytest.approx(H_4X4_J04_BITS, abs=1e-13)


def test_strip_width_range():
    with pytest.raises(ValidationError):
        correlations_from_strip(1, 0.2)
    with pytest.raises(ValidationError):
        correlations_from_strip(15, 0.2)


def test_strip_decouples_at_zero_coupling():
    t = correlations_from_strip(4, 0.0)
    assert t.g4 == pytest.approx(0.0, abs=1e-10)
    assert t.gEW == pytest.approx(0.0, abs=1e-10)
    assert t.gEN == pytest.approx(0.0, abs=1e-10)


def test_strip_tracks_elongating_torus():
    # width-4 cylinder vs the 6x4 torus (longest enumerable 4-ring torus)
    strip = correlations_from_strip(4, 0.2)
    lat = LatticeSpec("square", 6, 4)
    measure = enumerate_torus(lat, 0.2)
    from erasure_entropy import correlation
    from erasure_entropy.square import _cross_sites

    e, n, w, s = _cross_sites(lat)
    # cylinder axis carries E/W; compare against the length-6 axis of the torus
    assert strip.gEW == pytest.approx(correlation(measure, [lat.site(1, 0), lat.site(-1, 0)]), abs=5e-3)
    assert strip.gEN == pytest.approx(correlation(measure, [e, n]), abs=5e-3)
    assert strip.g4 == pytest.approx(correlation(measure, [e, n, w, s]), abs=5e-3)
