"""Shared test utilities: random chain generation and frozen oracle values."""

import math

import numpy as np

from erasure_entropy import MarkovSpec
from erasure_entropy.errors import StructureError


def random_chain(rng: np.random.Generator, m: int, k: int) -> MarkovSpec:
    """A random fully-supported order-k chain (always irreducible, aperiodic)."""
    # Dirichlet rows bounded away from zero so the window chain is primitive
    t = rng.dirichlet(np.ones(m), size=m ** k)
    t = 0.9 * t + 0.1 / m
    t /= t.sum(axis=1, keepdims=True)
    return MarkovSpec(m, k, t)


def any_random_chain(rng: np.random.Generator) -> MarkovSpec:
    m = int(rng.integers(2, 4))
    k = int(rng.integers(1, 3))
    return random_chain(rng, m, k)


def h_bits(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -(p * math.log2(p) + (1 - p) * math.log2(1 - p))


# closed-form oracles for the flip-probability-eps binary chain
def bsc_entropy_rate_bits(eps: float) -> float:
    return h_bits(eps)


def bsc_erasure_rate_bits(eps: float) -> float:
    return 2.0 * h_bits(eps) - h_bits(2.0 * eps * (1.0 - eps))
