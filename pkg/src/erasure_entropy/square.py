"""Square-lattice single-site erasure entropy via boundary classes.

The four spins around a site fall into 4 orbits under rotations and the
global flip: all-equal (2 configurations), one-odd (8), opposite-pair (2),
adjacent-pair (4).  Their representative probabilities P1..P4 follow from
three correlators by a closed-form linear solve, and the erasure entropy is
a class-weighted sum of binary entropies of the heat-bath conditional.

Three interchangeable correlation providers are included: exact torus
enumeration, an infinite-cylinder transfer matrix, and Monte Carlo.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .entropy import EntropyValue, Unit, _from_nats, binary_entropy
from .errors import ConvergenceError, InconsistentInputError, ValidationError
from .lattice import LatticeSpec, TorusMeasure, correlation, enumerate_torus

NEG_PROB_TOL = 1e-9

# class index of each of the 16 (E, N, W, S) sign patterns, and multiplicities
CLASS_MULTIPLICITY = (2, 8, 2, 4)


@dataclass(frozen=True)
class CorrelationTriple:
    g4: float  # E(s_E s_N s_W s_S)
    gEW: float  # E(s_E s_W)
    gEN: float  # E(s_E s_N)
    se_g4: Optional[float] = None
    se_gEW: Optional[float] = None
    se_gEN: Optional[float] = None

    def __post_init__(self):
        for name in ("g4", "gEW", "gEN"):
            v = getattr(self, name)
            if not (-1.0 <= v <= 1.0):
                raise InconsistentInputError(f"{name}={v!r} outside [-1, 1]")


@dataclass(frozen=True)
class BoundaryClassProbs:
    P1: float
    P2: float
    P3: float
    P4: float

    def __post_init__(self):
        for name in ("P1", "P2", "P3", "P4"):
            v = getattr(self, name)
            if v < -NEG_PROB_TOL:
                raise InconsistentInputError(f"{name}={v!r} is negative beyond tolerance")
        total = 2 * self.P1 + 8 * self.P2 + 2 * self.P3 + 4 * self.P4
        if abs(total - 1.0) > 1e-9:
            raise ValidationError(f"class probabilities sum to {total!r}, not 1")


def boundary_class(sE: int, sN: int, sW: int, sS: int) -> int:
    """Class index 0..3 of a boundary sign pattern."""
    m = sE + sN + sW + sS
    if abs(m) == 4:
        return 0
    if abs(m) == 2:
        return 1
    return 2 if sE == sW else 3


def class_probs_from_correlations(t: CorrelationTriple) -> BoundaryClassProbs:
    """Invert the correlator relations for the representative probabilities."""
    p1 = (1.0 + t.g4 + 2.0 * t.gEW + 4.0 * t.gEN) / 16.0
    p2 = (1.0 - t.g4) / 16.0
    p3 = (1.0 + t.g4 + 2.0 * t.gEW - 4.0 * t.gEN) / 16.0
    p4 = (1.0 + t.g4 - 2.0 * t.gEW) / 16.0
    return BoundaryClassProbs(p1, p2, p3, p4)


def correlations_from_class_probs(p: BoundaryClassProbs) -> CorrelationTriple:
    """Forward map; inverse of class_probs_from_correlations."""
    g4 = 2 * p.P1 - 8 * p.P2 + 2 * p.P3 + 4 * p.P4
    gEW = 2 * p.P1 + 2 * p.P3 - 4 * p.P4
    gEN = 2 * p.P1 - 2 * p.P3
    return CorrelationTriple(g4, gEW, gEN)


def erasure_entropy_square(J: float, probs: BoundaryClassProbs, unit: Unit = Unit.NATS) -> EntropyValue:
    """Class-weighted average of the center spin's conditional entropy."""
    h4 = binary_entropy(np.exp(4 * J) / (np.exp(4 * J) + np.exp(-4 * J))).value
    h2 = binary_entropy(np.exp(2 * J) / (np.exp(2 * J) + np.exp(-2 * J))).value
    h0 = binary_entropy(0.5).value
    val = 2 * probs.P1 * h4 + 8 * probs.P2 * h2 + (2 * probs.P3 + 4 * probs.P4) * h0
    return _from_nats(val, unit)


def _cross_sites(lattice: LatticeSpec, x: int = 0, y: int = 0) -> Tuple[int, int, int, int]:
    """(E, N, W, S) site indices around (x, y)."""
    return (
        lattice.site(x + 1, y),
        lattice.site(x, y + 1),
        lattice.site(x - 1, y),
        lattice.site(x, y - 1),
    )


def correlations_from_torus(N: int, J: float) -> CorrelationTriple:
    """Exact correlators around a fixed site of an N x N torus."""
    lat = LatticeSpec("square", N, N)
    measure = enumerate_torus(lat, J)
    e, n, w, s = _cross_sites(lat)
    return CorrelationTriple(
        g4=correlation(measure, [e, n, w, s]),
        gEW=correlation(measure, [e, w]),
        gEN=correlation(measure, [e, n]),
    )


def class_frequencies_from_torus(measure: TorusMeasure, x: int = 0, y: int = 0) -> BoundaryClassProbs:
    """Representative probabilities from direct boundary-pattern frequencies.

    Members of a class are averaged, which is exact on a symmetric torus.
    """
    lat = measure.lattice
    sites = _cross_sites(lat, x, y)
    marg = measure.marginal(sites)  # axes E, N, W, S; index 1 = +1
    totals = [0.0, 0.0, 0.0, 0.0]
    for bits in np.ndindex(2, 2, 2, 2):
        spins = [2 * b - 1 for b in bits]
        totals[boundary_class(*spins)] += marg[bits]
    return BoundaryClassProbs(*[totals[c] / CLASS_MULTIPLICITY[c] for c in range(4)])


# --- infinite-cylinder transfer matrix provider ---------------------------


def _ring_alignment(W: int) -> np.ndarray:
    """sum s_i s_{i+1} around the ring, for each of the 2^W ring states."""
    idx = np.arange(1 << W, dtype=np.uint32)
    acc = np.zeros(idx.size, dtype=float)
    for i in range(W):
        j = (i + 1) % W
        diff = ((idx >> np.uint32(i)) ^ (idx >> np.uint32(j))) & np.uint32(1)
        acc += 1.0 - 2.0 * diff.astype(float)
    return acc


def _apply_coupling(v: np.ndarray, W: int, J: float) -> np.ndarray:
    """Apply the inter-ring factor, a Kronecker product of 2x2 blocks."""
    K = np.array([[np.exp(J), np.exp(-J)], [np.exp(-J), np.exp(J)]])
    t = v.reshape((2,) * W)
    for axis in range(W):
        t = np.tensordot(K, t, axes=([1], [axis]))
        t = np.moveaxis(t, 0, axis)
    return t.reshape(-1)


class _StripOperator:
    """Symmetrized transfer matrix of a width-W periodic strip, matrix-free."""

    def __init__(self, W: int, J: float):
        self.W = W
        self.J = J
        self.sqrt_ring = np.exp(0.5 * J * _ring_alignment(W))

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.sqrt_ring * _apply_coupling(self.sqrt_ring * v, self.W, self.J)

    def dominant(self, residual: float = 1e-13, max_iter: int = 200000) -> Tuple[float, np.ndarray]:
        v = np.full(1 << self.W, 1.0 / np.sqrt(1 << self.W))
        lam = 1.0
        for _ in range(max_iter):
            w = self.apply(v)
            lam = float(np.linalg.norm(w))
            w /= lam
            if float(np.linalg.norm(self.apply(w) - lam * w)) <= residual * lam:
                return lam, w
            v = w
        raise ConvergenceError("strip power iteration did not converge")


def _spin_diag(W: int, ring_pos: int) -> np.ndarray:
    idx = np.arange(1 << W, dtype=np.uint32)
    return 2.0 * ((idx >> np.uint32(ring_pos % W)) & np.uint32(1)).astype(float) - 1.0


def correlations_from_strip(W: int, J: float, residual: float = 1e-13) -> CorrelationTriple:
    """Correlators on an infinitely long cylinder of circumference W.

    The cylinder axis carries the E and W neighbors; N and S sit on the ring.
    """
    if not (2 <= W <= 14):
        raise ValidationError("strip width must be between 2 and 14")
    op = _StripOperator(W, J)
    lam, v = op.dominant(residual)
    z0 = _spin_diag(W, 0)
    z1 = _spin_diag(W, 1)
    zm1 = _spin_diag(W, W - 1)
    # gEW: spins two columns apart, same ring position
    gEW = float((z0 * v) @ op.apply(op.apply(z0 * v))) / lam ** 2
    # gEN: adjacent column, adjacent ring position
    gEN = float((z1 * v) @ op.apply(z0 * v)) / lam
    # g4: columns -1 and +1 at ring position 0, column 0 at ring positions +-1
    g4 = float((z0 * v) @ op.apply(z1 * zm1 * op.apply(z0 * v))) / lam ** 2
    return CorrelationTriple(g4=g4, gEW=gEW, gEN=gEN)


def correlations_from_mc(cfg, lattice: Optional[LatticeSpec] = None) -> CorrelationTriple:
    """Monte Carlo correlators with batch-means standard errors."""
    from .montecarlo import estimate_correlations

    lat = lattice if lattice is not None else cfg.lattice
    sites = _cross_sites(lat)
    e, n, w, s = sites
    tuples = [(e, n, w, s), (e, w), (e, n)]
    est = estimate_correlations(cfg, tuples)
    return CorrelationTriple(
        g4=est[tuples[0]].mean,
        gEW=est[tuples[1]].mean,
        gEN=est[tuples[2]].mean,
        se_g4=est[tuples[0]].se,
        se_gEW=est[tuples[1]].se,
        se_gEN=est[tuples[2]].se,
    )
