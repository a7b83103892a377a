"""Analytic honeycomb pipeline: pressure, its derivative, correlation, entropy.

The zero-field honeycomb Ising model is exactly solvable; its pressure is a
smooth biperiodic double integral away from the critical coupling
arccosh(2)/2.  Differentiating the pressure in the inverse temperature gives
the nearest-neighbor correlation (tangent-functional identity, taken with
the ferromagnetic sign so the correlation is nonnegative for J > 0).  The
correlation pins down the two boundary-class probabilities, and those give
the single-site erasure entropy in closed form.

The class-probability system used here is E = 2 P1 tanh(3J) + 2 P2 tanh(J),
obtained by summing the heat-bath conditional over all 8 boundary
configurations.  A variant without the factor 2 is circulating in print; it
fails both the independent J -> 0 limit (it would give P1 -> 5/16 instead of
1/8) and exact small-torus enumeration, and is kept only behind the
`corrected=False` comparison flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .entropy import LN2, EntropyValue, Unit, _from_nats, binary_entropy
from .errors import ConvergenceError, InconsistentInputError, NearCriticalError, ValidationError

CRITICAL_J = math.acosh(2.0) / 2.0  # ~0.6585


@dataclass(frozen=True)
class QuadratureConfig:
    n: int = 32  # starting grid points per axis; doubled until converged
    tol: float = 1e-13
    max_levels: int = 8

    def __post_init__(self):
        if self.n < 16 or (self.n & (self.n - 1)) != 0:
            raise ValidationError("grid size must be a power of 2, at least 16")
        if self.tol < 1e-13:
            raise ValidationError("tolerance below 1e-13 is not resolvable in doubles")


@dataclass(frozen=True)
class DerivativeConfig:
    step: float = 1e-3
    richardson_levels: int = 2

    def __post_init__(self):
        if not (1e-6 <= self.step <= 1e-2):
            raise ValidationError("derivative step must lie in [1e-6, 1e-2]")
        if self.richardson_levels < 1:
            raise ValidationError("need at least one Richardson level")


@dataclass(frozen=True)
class HexClassProbs:
    P1: float
    P2: float

    def __post_init__(self):
        if self.P1 < -1e-9 or self.P2 < -1e-9:
            raise InconsistentInputError(f"negative class probability: ({self.P1!r}, {self.P2!r})")
        if abs(2 * self.P1 + 6 * self.P2 - 1.0) > 1e-9:
            raise ValidationError("2 P1 + 6 P2 must equal 1")


@dataclass(frozen=True)
class HexPipelineResult:
    J: float
    pressure_at_one: float
    pressure_samples: tuple  # ((beta, p(beta)), ...) used by the derivative
    pressure_derivative: float
    nn_correlation: float
    class_probs: HexClassProbs
    entropy: EntropyValue
    quadrature_error: float
    derivative_error: float


def _integrand_min(beta: float, J: float) -> float:
    c = math.cosh(2.0 * beta * J)
    s2 = math.sinh(2.0 * beta * J) ** 2
    return c ** 3 + 1.0 - 3.0 * s2


def pressure_hex(beta: float, J: float, cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """Pressure of the zero-field honeycomb model at inverse temperature beta.

    Tensor-product trapezoid rule on the periodic square, doubling the grid
    until two successive values agree to the configured tolerance.
    """
    if _integrand_min(beta, J) < 1e-8:
        raise NearCriticalError(
            "pressure integrand touches zero: second order transition point "
            f"(|beta*J| near {CRITICAL_J:.6f})"
        )
    c3 = math.cosh(2.0 * beta * J) ** 3
    s2 = math.sinh(2.0 * beta * J) ** 2

    def level(n: int) -> float:
        theta = 2.0 * math.pi * np.arange(n) / n
        t1 = theta[:, None]
        t2 = theta[None, :]
        val = np.log(c3 + 1.0 - s2 * (np.cos(t1 - t2) + np.cos(t1) + np.cos(t2)))
        return 0.75 * math.log(2.0) + 0.25 * float(val.mean())

    prev = level(cfg.n)
    n = cfg.n
    for _ in range(cfg.max_levels):
        n *= 2
        cur = level(n)
        if abs(cur - prev) <= cfg.tol:
            return cur
        prev = cur
    raise ConvergenceError("pressure quadrature did not converge within the refinement budget")


def pressure_small_coupling_series(beta: float, J: float) -> float:
    """Leading small-coupling behavior, an independent check of the quadrature."""
    return math.log(2.0) + 0.75 * (beta * J) ** 2


def pressure_derivative_at_one(
    J: float, qcfg: QuadratureConfig = QuadratureConfig(), dcfg: DerivativeConfig = DerivativeConfig()
):
    """p'(1) by Richardson-extrapolated central differences.

    Returns (derivative, error_estimate, samples) where samples lists the
    (beta, p(beta)) evaluations used.
    """
    steps = [dcfg.step / (2 ** i) for i in range(dcfg.richardson_levels + 1)]
    samples = []
    diffs = []
    for h in steps:
        p_plus = pressure_hex(1.0 + h, J, qcfg)
        p_minus = pressure_hex(1.0 - h, J, qcfg)
        samples.extend([(1.0 + h, p_plus), (1.0 - h, p_minus)])
        diffs.append((p_plus - p_minus) / (2.0 * h))
    # Richardson table for the central difference (error orders h^2, h^4, ...)
    table = [diffs]
    for lvl in range(1, len(diffs)):
        factor = 4.0 ** lvl
        prev = table[-1]
        table.append([(factor * prev[i + 1] - prev[i]) / (factor - 1.0) for i in range(len(prev) - 1)])
    deriv = table[-1][0]
    err = abs(table[-1][0] - table[-2][0]) if len(table) > 1 else abs(diffs[-1] - diffs[0])
    return deriv, err, tuple(samples)


def nn_correlation_hex(
    J: float,
    qcfg: QuadratureConfig = QuadratureConfig(),
    dcfg: DerivativeConfig = DerivativeConfig(),
) -> float:
    """E(s_center s_neighbor) from the pressure derivative; 0 at J = 0."""
    if J == 0.0:
        return 0.0
    deriv, _, _ = pressure_derivative_at_one(J, qcfg, dcfg)
    return 2.0 * deriv / (3.0 * J)


def hex_class_probs(J: float, E: float, corrected: bool = True) -> HexClassProbs:
    """Class probabilities (P1, P2) from the nearest-neighbor correlation.

    Solves {2 P1 + 6 P2 = 1, 2 P1 tanh(3J) + 2 P2 tanh(J) = E}.  The
    degenerate J -> 0 system returns the independent values (1/8, 1/8).
    """
    if abs(E) > 1.0:
        raise InconsistentInputError(f"correlation {E!r} outside [-1, 1]")
    if J < 0.0:
        raise ValidationError("class solve assumes a ferromagnetic coupling")
    if J < 1e-6:
        return HexClassProbs(0.125, 0.125)
    t1, t3 = math.tanh(J), math.tanh(3.0 * J)
    if corrected:
        p1 = (3.0 * E - t1) / (6.0 * t3 - 2.0 * t1)
    else:
        # variant printed without the multiplicity factor; documentation only
        p1 = (6.0 * E - t1) / (6.0 * t3 - 2.0 * t1)
    p2 = (1.0 - 2.0 * p1) / 6.0
    return HexClassProbs(p1, p2)


def erasure_entropy_hex(J: float, probs: HexClassProbs, unit: Unit = Unit.NATS) -> EntropyValue:
    """2 P1 h(sigmoid(6J)) + 6 P2 h(sigmoid(2J)), the class-weighted entropy."""
    h3 = binary_entropy(np.exp(3 * J) / (np.exp(3 * J) + np.exp(-3 * J))).value
    h1 = binary_entropy(np.exp(J) / (np.exp(J) + np.exp(-J))).value
    return _from_nats(2 * probs.P1 * h3 + 6 * probs.P2 * h1, unit)


def hex_torus_observables(measure, site: int = 0):
    """(HexClassProbs, neighbor-averaged correlation) from an exact brick torus.

    Class members are averaged and the correlation is averaged over the three
    neighbors; with those conventions the linear class solve is exact on any
    finite brick torus, not just in the infinite-volume limit.
    """
    from .lattice import correlation as torus_correlation

    nbrs = measure.lattice.neighbor_array()[site]
    if nbrs.size != 3:
        raise ValidationError("hex observables need a 3-regular (brick) lattice")
    marg = measure.marginal([int(n) for n in nbrs])
    q_by_sum = {-3: 0.0, -1: 0.0, 1: 0.0, 3: 0.0}
    for bits in np.ndindex(2, 2, 2):
        s = sum(2 * b - 1 for b in bits)
        q_by_sum[s] += float(marg[bits])
    p1 = (q_by_sum[3] + q_by_sum[-3]) / 2.0
    p2 = (q_by_sum[1] + q_by_sum[-1]) / 6.0
    e_avg = float(np.mean([torus_correlation(measure, [site, int(n)]) for n in nbrs]))
    return HexClassProbs(p1, p2), e_avg


def hex_pipeline(
    J: float,
    qcfg: QuadratureConfig = QuadratureConfig(),
    dcfg: DerivativeConfig = DerivativeConfig(),
    unit: Unit = Unit.NATS,
) -> HexPipelineResult:
    """Pressure -> derivative -> correlation -> class probabilities -> entropy."""
    try:
        p1 = pressure_hex(1.0, J, qcfg)
    except (NearCriticalError, ConvergenceError) as exc:
        raise type(exc)(f"pressure stage: {exc}") from exc
    if J == 0.0:
        deriv, derr, samples = 0.0, 0.0, ()
        corr = 0.0
    else:
        try:
            deriv, derr, samples = pressure_derivative_at_one(J, qcfg, dcfg)
        except (NearCriticalError, ConvergenceError) as exc:
            raise type(exc)(f"derivative stage: {exc}") from exc
        corr = 2.0 * deriv / (3.0 * J)
    probs = hex_class_probs(J, corr)
    ent = erasure_entropy_hex(J, probs, unit)
    return HexPipelineResult(
        J=J,
        pressure_at_one=p1,
        pressure_samples=samples,
        pressure_derivative=deriv,
        nn_correlation=corr,
        class_probs=probs,
        entropy=ent,
        quadrature_error=qcfg.tol,
        derivative_error=derr,
    )
