"""Exact Shannon-entropy primitives over explicit finite probability tables.

All internal arithmetic is done in nats with double precision; unit
conversion happens once at the boundary.  Probability tables are validated,
never silently renormalized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError

LN2 = math.log(2.0)

PROB_TOL = 1e-12
NEG_CLAMP = -1e-12


class Unit(Enum):
    NATS = "nats"
    BITS = "bits"


@dataclass(frozen=True)
class EntropyValue:
    """A nonnegative entropy tagged with its unit."""

    value: float
    unit: Unit

    def in_nats(self) -> float:
        return self.value if self.unit is Unit.NATS else self.value * LN2

    def in_bits(self) -> float:
        return self.value if self.unit is Unit.BITS else self.value / LN2

    def to(self, unit: Unit) -> "EntropyValue":
        return EntropyValue(self.in_nats() if unit is Unit.NATS else self.in_bits(), unit)


def _from_nats(value_nats: float, unit: Unit) -> EntropyValue:
    if value_nats < 0.0:
        if value_nats < NEG_CLAMP:
            raise ValidationError(f"entropy came out negative beyond rounding: {value_nats}")
        value_nats = 0.0
    if unit is Unit.NATS:
        return EntropyValue(value_nats, unit)
    return EntropyValue(value_nats / LN2, unit)


def _plogp_sum(p: np.ndarray) -> float:
    """-sum p log p in nats, with 0 log 0 := 0."""
    p = np.asarray(p, dtype=float).ravel()
    nz = p[p > 0.0]
    return float(-np.dot(nz, np.log(nz)))


class Dist:
    """A probability vector over a finite support."""

    def __init__(self, probs: Iterable[float]):
        p = np.asarray(list(probs) if not isinstance(probs, np.ndarray) else probs, dtype=float)
        if p.ndim != 1 or p.size < 1:
            raise ValidationError("Dist requires a nonempty 1-D probability vector")
        if np.any(p < 0.0):
            raise ValidationError("Dist entries must be nonnegative")
        s = float(p.sum())
        if abs(s - 1.0) > PROB_TOL:
            raise ValidationError(f"Dist does not sum to 1 (sum={s!r}); refusing to renormalize")
        self.probs = p

    def __len__(self) -> int:
        return self.probs.size


class JointTable:
    """Dense joint law of finitely many finite-alphabet coordinates."""

    def __init__(self, probs: np.ndarray):
        p = np.asarray(probs, dtype=float)
        if p.ndim < 1 or p.size < 1:
            raise ValidationError("JointTable requires at least one coordinate")
        if np.any(p < 0.0):
            raise ValidationError("JointTable entries must be nonnegative")
        s = float(p.sum())
        if abs(s - 1.0) > PROB_TOL:
            raise ValidationError(f"JointTable does not sum to 1 (sum={s!r}); refusing to renormalize")
        self.probs = p

    @property
    def shape(self) -> tuple:
        return self.probs.shape

    @property
    def n_coords(self) -> int:
        return self.probs.ndim

    def _check_coords(self, coords: Sequence[int]) -> tuple:
        coords = tuple(coords)
        if len(coords) == 0:
            raise ValidationError("coordinate set must be nonempty")
        if len(set(coords)) != len(coords):
            raise ValidationError("coordinate set has duplicates")
        for c in coords:
            if not (0 <= c < self.n_coords):
                raise ValidationError(f"coordinate {c} out of range for {self.n_coords} coordinates")
        return coords

    def marginal(self, keep_coords: Sequence[int]) -> "JointTable":
        """Marginal over the listed coordinates, in the listed order."""
        keep = self._check_coords(keep_coords)
        drop = tuple(c for c in range(self.n_coords) if c not in keep)
        m = self.probs.sum(axis=drop) if drop else self.probs
        # sum() preserves the original axis order; permute to requested order
        kept_order = [c for c in range(self.n_coords) if c in keep]
        perm = [kept_order.index(c) for c in keep]
        return JointTable(np.transpose(m, perm))


def binary_entropy(p: float, unit: Unit = Unit.NATS) -> EntropyValue:
    """Entropy of a {p, 1-p} coin, with the 0 log 0 := 0 convention."""
    if not (0.0 <= p <= 1.0):
        raise ValidationError(f"binary_entropy needs p in [0,1], got {p!r}")
    h = 0.0
    if 0.0 < p < 1.0:
        h = -p * math.log(p) - (1.0 - p) * math.log(1.0 - p)
    return _from_nats(h, unit)


def shannon_entropy(d: Dist, unit: Unit = Unit.NATS) -> EntropyValue:
    return _from_nats(_plogp_sum(d.probs), unit)


def joint_entropy_nats(j: JointTable) -> float:
    return _plogp_sum(j.probs)


def conditional_entropy(j: JointTable, target_coords: Sequence[int], unit: Unit = Unit.NATS) -> EntropyValue:
    """H(targets | rest) = H(all) - H(rest).

    When the targets are all coordinates this degenerates to H(all).
    """
    targets = j._check_coords(target_coords)
    rest = tuple(c for c in range(j.n_coords) if c not in targets)
    h_all = _plogp_sum(j.probs)
    h_rest = _plogp_sum(j.probs.sum(axis=targets)) if rest else 0.0
    return _from_nats(h_all - h_rest, unit)


def erasure_entropy_block(j: JointTable, unit: Unit = Unit.NATS) -> EntropyValue:
    """Sum over coordinates i of H(X_i | all other coordinates)."""
    h_all = _plogp_sum(j.probs)
    total = 0.0
    for i in range(j.n_coords):
        h_rest = _plogp_sum(j.probs.sum(axis=i)) if j.n_coords > 1 else 0.0
        term = h_all - h_rest
        if term < 0.0:
            if term < NEG_CLAMP:
                raise ValidationError(f"negative conditional entropy term: {term}")
            term = 0.0
        total += term
    return _from_nats(total, unit)
