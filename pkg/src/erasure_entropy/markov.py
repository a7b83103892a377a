"""Entropy and erasure-entropy rates of finite-alphabet k-step Markov chains.

A k-step chain is given by a row-stochastic table P(x_next | window) over all
m**k length-k windows.  Everything here is exact: the chain induced on
k-windows is solved for its stationary law, finite-window joint tables are
assembled by transition products, and the rates come out of entropy
differences on those tables.  For a k-step chain the one-sided rate is
attained at window length k and the two-sided (erasure) rate at radius k,
because the chain is a Markov field of range k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import networkx as nx
import numpy as np

from .entropy import (
    LN2,
    EntropyValue,
    JointTable,
    Unit,
    _from_nats,
    conditional_entropy,
    joint_entropy_nats,
)
from .errors import BudgetError, StructureError, ValidationError

ROW_TOL = 1e-12
STATIONARY_RESIDUAL = 1e-14
STATIONARY_MAX_ITER = 10 ** 6


@dataclass(frozen=True)
class MarkovSpec:
    """Finite-alphabet, order-k stationary chain given by a transition table."""

    m: int
    k: int
    transition: np.ndarray  # shape (m**k, m)

    def __post_init__(self):
        if self.m < 2:
            raise ValidationError("alphabet size must be >= 2")
        if self.k < 1:
            raise ValidationError("order must be >= 1")
        t = np.asarray(self.transition, dtype=float)
        if t.shape != (self.m ** self.k, self.m):
            raise ValidationError(
                f"transition table must have shape ({self.m ** self.k}, {self.m}), got {t.shape}"
            )
        if np.any(t < 0.0):
            raise ValidationError("transition probabilities must be nonnegative")
        bad = np.where(np.abs(t.sum(axis=1) - 1.0) > ROW_TOL)[0]
        if bad.size:
            raise ValidationError(f"transition rows do not sum to 1: rows {bad.tolist()}")
        object.__setattr__(self, "transition", t)
        _check_block_chain_structure(self)

    @property
    def n_states(self) -> int:
        return self.m ** self.k


@dataclass(frozen=True)
class BlockLaw:
    """Stationary law of a length-L window, as a JointTable over m**L cells."""

    length: int
    table: JointTable


@dataclass(frozen=True)
class DmeSpec:
    """Discrete memoryless erasure channel: erasure probability and block length."""

    p: float
    n: int

    def __post_init__(self):
        if not (0.0 <= self.p < 1.0):
            raise ValidationError(f"erasure probability must lie in [0,1), got {self.p!r}")
        if self.n < 1:
            raise ValidationError("block length must be >= 1")


def _block_successor(state: int, symbol: int, m: int, k: int) -> int:
    return (state * m + symbol) % (m ** k)


def _check_block_chain_structure(chain: MarkovSpec) -> None:
    """Reject chains whose k-window chain is reducible or periodic."""
    g = nx.DiGraph()
    n = chain.n_states
    g.add_nodes_from(range(n))
    rows, cols = np.nonzero(chain.transition > 0.0)
    for s, y in zip(rows.tolist(), cols.tolist()):
        g.add_edge(s, _block_successor(s, y, chain.m, chain.k))
    if not nx.is_strongly_connected(g):
        comps = [sorted(c) for c in nx.strongly_connected_components(g)]
        raise StructureError(f"window chain is reducible; communicating classes: {comps}")
    if not nx.is_aperiodic(g):
        raise StructureError("window chain is periodic")


def _window_transition_matrix(chain: MarkovSpec) -> np.ndarray:
    n, m, k = chain.n_states, chain.m, chain.k
    P = np.zeros((n, n))
    for s in range(n):
        for y in range(m):
            P[s, _block_successor(s, y, m, k)] += chain.transition[s, y]
    return P


def stationary_window_distribution(chain: MarkovSpec) -> np.ndarray:
    """Stationary law over k-windows by power iteration to residual 1e-14."""
    P = _window_transition_matrix(chain)
    pi = np.full(chain.n_states, 1.0 / chain.n_states)
    for _ in range(STATIONARY_MAX_ITER):
        nxt = pi @ P
        nxt /= nxt.sum()
        if np.abs(nxt - pi).sum() <= STATIONARY_RESIDUAL:
            return nxt
        pi = nxt
    raise StructureError("power iteration did not reach the stationary residual")


def stationary_block_law(chain: MarkovSpec, L: int) -> BlockLaw:
    """Exact stationary joint law of an L-window, L >= k."""
    if L < chain.k:
        raise ValidationError(f"window length {L} shorter than chain order {chain.k}")
    m, k = chain.m, chain.k
    pi = stationary_window_distribution(chain)
    joint = pi.reshape((m,) * k)
    # extend one symbol at a time: multiply by P(x_new | last k symbols)
    cond = chain.transition.reshape((m,) * k + (m,))
    for t in range(k, L):
        lead = (1,) * (t - k)
        joint = joint[..., None] * cond.reshape(lead + (m,) * k + (m,))
    return BlockLaw(L, JointTable(joint))


def entropy_rate(chain: MarkovSpec, unit: Unit = Unit.NATS) -> EntropyValue:
    """h = H(X_0 | previous k symbols); attained exactly at window k."""
    law = stationary_block_law(chain, chain.k + 1)
    return conditional_entropy(law.table, [chain.k], unit)


def erasure_rate(chain: MarkovSpec, unit: Unit = Unit.NATS) -> EntropyValue:
    """h^- = H(X_0 | k symbols on each side); attained exactly at radius k."""
    law = stationary_block_law(chain, 2 * chain.k + 1)
    return conditional_entropy(law.table, [chain.k], unit)


def block_given_past_entropy(chain: MarkovSpec, unit: Unit = Unit.NATS) -> EntropyValue:
    """H(X_1..X_k | X_-k..X_-1), the third term of the k-step identity.

    Note the gap: X_0 sits between the two blocks and is marginalized out.
    """
    k = chain.k
    law = stationary_block_law(chain, 2 * k + 1)
    keep = list(range(k)) + list(range(k + 1, 2 * k + 1))
    table = law.table.marginal(keep)
    return conditional_entropy(table, list(range(k, 2 * k)), unit)


def markov_identity_residual(chain: MarkovSpec) -> float:
    """(k+1) h - h^- - H(X_1..X_k | X_-k..X_-1), all in nats; ~0 for valid chains."""
    h = entropy_rate(chain).value
    hm = erasure_rate(chain).value
    hb = block_given_past_entropy(chain).value
    return (chain.k + 1) * h - hm - hb


def interval_erasure_rate(chain: MarkovSpec, L: int, unit: Unit = Unit.NATS) -> EntropyValue:
    """H(X_1..X_L | X_0, X_{L+1}) / L for first-order chains.

    Closed form: h + (h - H(X_{L+1}|X_0)) / L, where H(X_{L+1}|X_0) comes from
    the (L+1)-step transition matrix.  Tends to the entropy rate as L grows.
    """
    if chain.k != 1:
        raise ValidationError("interval erasure rate is implemented for first-order chains only")
    if L < 1:
        raise ValidationError("interval length must be >= 1")
    P = chain.transition
    pi = stationary_window_distribution(chain)
    PL = np.linalg.matrix_power(P, L + 1)
    h_step = 0.0
    for x in range(chain.m):
        row = PL[x]
        nz = row[row > 0.0]
        h_step += pi[x] * float(-np.dot(nz, np.log(nz)))
    h = entropy_rate(chain).value
    return _from_nats(h + (h - h_step) / L, unit)


def _dme_budget_check(chain: MarkovSpec, n: int) -> None:
    limit = {2: 12, 3: 7}.get(chain.m)
    if limit is None:
        limit = max(1, int(24 / np.log2(2 * chain.m)))
    if n > limit:
        raise BudgetError(f"block length {n} exceeds the m={chain.m} budget of {limit}")


def _pattern_conditional_entropies(law: BlockLaw) -> np.ndarray:
    """H(erased coords | observed coords) in nats, for every erasure bitmask.

    Bit i of the mask set means coordinate i is erased.  Entry 0 is 0.
    """
    n = law.length
    probs = law.table.probs
    h_all = joint_entropy_nats(law.table)
    out = np.empty(2 ** n)
    for mask in range(2 ** n):
        erased = tuple(i for i in range(n) if (mask >> i) & 1)
        if not erased:
            out[mask] = 0.0
            continue
        if len(erased) == n:
            out[mask] = h_all
            continue
        kept = probs.sum(axis=erased)
        nz = kept[kept > 0.0]
        h_kept = float(-np.dot(nz, np.log(nz)))
        out[mask] = max(h_all - h_kept, 0.0)
    return out


def _pattern_weights(n: int, p: float) -> np.ndarray:
    w = np.empty(2 ** n)
    for mask in range(2 ** n):
        e = bin(mask).count("1")
        w[mask] = (p ** e) * ((1.0 - p) ** (n - e))
    return w


def dme_conditional_entropy(chain: MarkovSpec, dme: DmeSpec, unit: Unit = Unit.NATS) -> EntropyValue:
    """Finite-n upper-window value (1/n) H(X_1..X_n | Z_1..Z_n).

    The erasure pattern is independent of the source, so the conditional
    entropy is the pattern-weighted average of H(erased | observed) over the
    exact n-window law.
    """
    _dme_budget_check(chain, dme.n)
    law = stationary_block_law(chain, dme.n)
    cond = _pattern_conditional_entropies(law)
    w = _pattern_weights(dme.n, dme.p)
    return _from_nats(float(np.dot(w, cond)) / dme.n, unit)


def dme_bound_report(
    chain: MarkovSpec, p_grid: Sequence[float], n: int, unit: Unit = Unit.NATS
) -> List[Tuple[float, float, float, float]]:
    """Rows (p, h_n(X|Z), p * h^-, h_n(X|Z)/p) for each p on the grid.

    The ratio column should drift down toward h^- as p -> 0; that trend is a
    diagnostic for the small-p expansion, not an asserted inequality.
    """
    _dme_budget_check(chain, n)
    for p in p_grid:
        if not (0.0 <= p < 1.0):
            raise ValidationError(f"erasure probability must lie in [0,1), got {p!r}")
    law = stationary_block_law(chain, n)
    cond = _pattern_conditional_entropies(law)
    hm = erasure_rate(chain).value
    scale = 1.0 if unit is Unit.NATS else 1.0 / LN2
    rows = []
    for p in p_grid:
        hn = float(np.dot(_pattern_weights(n, p), cond)) / n * scale
        ratio = hn / p if p > 0.0 else float("nan")
        rows.append((p, hn, p * hm * scale, ratio))
    return rows


def binary_symmetric_chain(eps: float) -> MarkovSpec:
    """First-order binary chain that flips with probability eps."""
    return MarkovSpec(2, 1, np.array([[1.0 - eps, eps], [eps, 1.0 - eps]]))


def iid_chain(dist: Sequence[float]) -> MarkovSpec:
    d = np.asarray(dist, dtype=float)
    return MarkovSpec(d.size, 1, np.tile(d, (d.size, 1)))
