"""Finite periodic Ising systems and their exact Boltzmann measures.

Two geometries are supported: the square torus and a honeycomb torus encoded
as a brick-wall lattice (square grid, all horizontal bonds, vertical bonds
alternating with the parity of x+y, which keeps every site 3-regular).  For
odd brick heights the vertical wrap bonds land one column to the right; that
unit shear is what makes the alternating pattern consistent around the torus.

Enumeration covers every configuration of up to 25 spins.  Work proceeds in
chunks of configurations so the peak footprint stays at a few hundred MB even
for the largest admissible torus.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .entropy import EntropyValue, Unit, _from_nats, _plogp_sum
from .errors import BudgetError, ValidationError

ENUM_MAX_SITES = 25
_CHUNK = 1 << 20


@dataclass(frozen=True)
class LatticeSpec:
    kind: str  # "square" or "honeycomb"
    width: int
    height: int

    def __post_init__(self):
        if self.kind not in ("square", "honeycomb"):
            raise ValidationError(f"unknown lattice kind {self.kind!r}")
        if self.kind == "square":
            if self.width < 3 or self.height < 3:
                raise ValidationError("square torus needs both extents >= 3 (doubled bonds)")
        else:
            if self.width % 2 != 0:
                raise ValidationError("brick (honeycomb) lattice needs an even width")
            if self.width < 4 or self.height < 2:
                raise ValidationError("brick lattice needs width >= 4 and height >= 2")

    @property
    def n_sites(self) -> int:
        return self.width * self.height

    @property
    def degree(self) -> int:
        return 4 if self.kind == "square" else 3

    def site(self, x: int, y: int) -> int:
        return (y % self.height) * self.width + (x % self.width)

    def coords(self, s: int) -> Tuple[int, int]:
        return s % self.width, s // self.width

    def bonds(self) -> List[Tuple[int, int]]:
        """Every nearest-neighbor bond exactly once."""
        W, H = self.width, self.height
        out: List[Tuple[int, int]] = []
        for y in range(H):
            for x in range(W):
                out.append((self.site(x, y), self.site(x + 1, y)))
        if self.kind == "square":
            for y in range(H):
                for x in range(W):
                    out.append((self.site(x, y), self.site(x, y + 1)))
        else:
            for y in range(H - 1):
                for x in range(W):
                    if (x + y) % 2 == 0:
                        out.append((self.site(x, y), self.site(x, y + 1)))
            shift = 1 if H % 2 == 1 else 0  # shear keeps the brick parity consistent
            for x in range(W):
                if (x + H - 1) % 2 == 0:
                    out.append((self.site(x, H - 1), self.site(x + shift, 0)))
        return out

    def neighbor_array(self) -> np.ndarray:
        """(n_sites, degree) array of neighbor site indices."""
        adj: List[List[int]] = [[] for _ in range(self.n_sites)]
        for i, j in self.bonds():
            adj[i].append(j)
            adj[j].append(i)
        deg = self.degree
        for s, a in enumerate(adj):
            if len(a) != deg:
                raise ValidationError(f"site {s} has degree {len(a)}, expected {deg}")
        return np.array(adj, dtype=np.int64)


def single_site_conditional(J: float, neighbor_sum) -> np.ndarray:
    """P(spin = +1 | neighbors) = e^{J S} / (2 cosh(J S)), as a stable sigmoid."""
    x = 2.0 * J * np.asarray(neighbor_sum, dtype=float)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    if out.ndim == 0:
        return float(out)
    return out


def hamiltonian_window(config: Sequence[int], lattice: LatticeSpec, J: float, region: Sequence[int]) -> float:
    """-J * sum over bonds meeting the region of s_i s_j, each bond once."""
    sigma = np.asarray(config, dtype=int)
    if sigma.shape != (lattice.n_sites,):
        raise ValidationError(f"config must have {lattice.n_sites} sites")
    if not np.all(np.abs(sigma) == 1):
        raise ValidationError("spins must be +1 or -1")
    region_set = _check_region(lattice, region)
    e = 0.0
    for i, j in lattice.bonds():
        if i in region_set or j in region_set:
            e -= J * sigma[i] * sigma[j]
    return e


def _check_region(lattice: LatticeSpec, region: Sequence[int]) -> frozenset:
    region_set = frozenset(int(s) for s in region)
    if not region_set:
        raise ValidationError("region must be nonempty")
    for s in region_set:
        if not (0 <= s < lattice.n_sites):
            raise ValidationError(f"site {s} out of range")
    return region_set


def _chunked(n_total: int):
    for start in range(0, n_total, _CHUNK):
        stop = min(start + _CHUNK, n_total)
        yield start, np.arange(start, stop, dtype=np.uint32)


def _bond_alignment(lattice: LatticeSpec) -> np.ndarray:
    """sum over bonds of s_i s_j for every configuration; spins read off bits."""
    n = lattice.n_sites
    bonds = lattice.bonds()
    total = np.zeros(1 << n, dtype=np.int8)
    for start, idx in _chunked(1 << n):
        acc = np.zeros(idx.size, dtype=np.int8)
        for i, j in bonds:
            diff = ((idx >> np.uint32(i)) ^ (idx >> np.uint32(j))) & np.uint32(1)
            acc += (1 - 2 * diff.astype(np.int8)).astype(np.int8)
        total[start : start + idx.size] = acc
    return total


class TorusMeasure:
    """Exact Boltzmann measure on a periodic lattice, weights ~ exp(J sum s s)."""

    def __init__(self, lattice: LatticeSpec, J: float, bond_alignment: np.ndarray, log_z: float):
        self.lattice = lattice
        self.J = float(J)
        self.bond_alignment = bond_alignment
        self.log_z = log_z
        self.probs = np.exp(J * bond_alignment.astype(float) - log_z)

    @property
    def n_sites(self) -> int:
        return self.lattice.n_sites

    def marginal(self, sites: Sequence[int]) -> np.ndarray:
        """Joint marginal over the listed sites, shape (2,)*len(sites).

        Axis t corresponds to sites[t]; index 1 means spin +1.
        """
        sites = list(_check_sites(self.lattice, sites))
        k = len(sites)
        out = np.zeros(1 << k)
        for start, idx in _chunked(1 << self.n_sites):
            sub = np.zeros(idx.size, dtype=np.int64)
            for t, s in enumerate(sites):
                sub |= (((idx >> np.uint32(s)) & np.uint32(1)).astype(np.int64)) << (k - 1 - t)
            out += np.bincount(sub, weights=self.probs[start : start + idx.size], minlength=1 << k)
        return out.reshape((2,) * k)

    def full_entropy_nats(self) -> float:
        # -sum p log p with log p = J*align - logZ
        mean_align = float(np.dot(self.probs, self.bond_alignment.astype(float)))
        return self.log_z - self.J * mean_align

    def expectation(self, values: np.ndarray) -> float:
        return float(np.dot(self.probs, values))


def _check_sites(lattice: LatticeSpec, sites: Sequence[int]):
    sites = [int(s) for s in sites]
    if not sites:
        raise ValidationError("site list must be nonempty")
    if len(set(sites)) != len(sites):
        raise ValidationError("site list has duplicates")
    for s in sites:
        if not (0 <= s < lattice.n_sites):
            raise ValidationError(f"site {s} out of range")
    return sites


def enumerate_torus(lattice: LatticeSpec, J: float) -> TorusMeasure:
    """Exact measure by enumeration of all 2^n configurations (n <= 25)."""
    n = lattice.n_sites
    if n > ENUM_MAX_SITES:
        raise BudgetError(f"{n} sites exceeds the enumeration budget of {ENUM_MAX_SITES}")
    align = _bond_alignment(lattice)
    lw = J * align.astype(float)
    m = float(lw.max())
    log_z = m + float(np.log(np.sum(np.exp(lw - m))))
    return TorusMeasure(lattice, J, align, log_z)


def correlation(measure: TorusMeasure, sites: Sequence[int]) -> float:
    """E[product of spins at the given sites]."""
    sites = _check_sites(measure.lattice, sites)
    total = 0.0
    for start, idx in _chunked(1 << measure.n_sites):
        par = np.zeros(idx.size, dtype=np.uint32)
        for s in sites:
            par ^= (idx >> np.uint32(s)) & np.uint32(1)
        prod = 1.0 - 2.0 * par.astype(float)
        total += float(np.dot(prod, measure.probs[start : start + idx.size]))
    return total


def torus_erasure_entropy(measure: TorusMeasure, region: Sequence[int], unit: Unit = Unit.NATS) -> EntropyValue:
    """H(X_region | X_rest) from the exact measure."""
    region = _check_sites(measure.lattice, region)
    h_all = measure.full_entropy_nats()
    rest = [s for s in range(measure.n_sites) if s not in set(region)]
    if not rest:
        warnings.warn("region covers the whole torus; returning the unconditioned entropy")
        return _from_nats(h_all, unit)
    h_rest = _plogp_sum(measure.marginal(rest))
    return _from_nats(h_all - h_rest, unit)


def _window_energies(measure: TorusMeasure, region: List[int]) -> np.ndarray:
    """-H_region(x) = J * sum over bonds meeting the region, for every config."""
    region_set = set(region)
    bonds = [b for b in measure.lattice.bonds() if b[0] in region_set or b[1] in region_set]
    out = np.empty(1 << measure.n_sites)
    for start, idx in _chunked(1 << measure.n_sites):
        acc = np.zeros(idx.size)
        for i, j in bonds:
            diff = ((idx >> np.uint32(i)) ^ (idx >> np.uint32(j))) & np.uint32(1)
            acc += 1.0 - 2.0 * diff.astype(float)
        out[start : start + idx.size] = measure.J * acc
    return out


def torus_gibbs_erasure(measure: TorusMeasure, region: Sequence[int], unit: Unit = Unit.NATS) -> EntropyValue:
    """-E[log gamma_region], the specification-kernel form of the same quantity.

    Agrees with torus_erasure_entropy exactly: the Boltzmann measure's
    conditional law given the full exterior is the finite-volume kernel.
    """
    region = _check_sites(measure.lattice, region)
    k = len(region)
    if k == measure.n_sites:
        warnings.warn("region covers the whole torus; returning the unconditioned entropy")
        return _from_nats(measure.full_entropy_nats(), unit)
    region_set = set(region)
    bonds = [b for b in measure.lattice.bonds() if b[0] in region_set or b[1] in region_set]
    pos = {s: t for t, s in enumerate(region)}
    total = 0.0
    for start, idx in _chunked(1 << measure.n_sites):
        # W[a, x] = J * sum over window bonds with region spins forced to assignment a
        W = np.zeros((1 << k, idx.size))
        for a in range(1 << k):
            forced = {s: (a >> pos[s]) & 1 for s in region}
            acc = np.zeros(idx.size)
            for i, j in bonds:
                bi = np.full(idx.size, forced[i], dtype=np.uint32) if i in region_set else (idx >> np.uint32(i)) & np.uint32(1)
                bj = np.full(idx.size, forced[j], dtype=np.uint32) if j in region_set else (idx >> np.uint32(j)) & np.uint32(1)
                acc += 1.0 - 2.0 * (bi ^ bj).astype(float)
            W[a] = measure.J * acc
        m = W.max(axis=0)
        log_zb = m + np.log(np.exp(W - m).sum(axis=0))
        # actual assignment of the region inside each configuration
        a_actual = np.zeros(idx.size, dtype=np.int64)
        for s in region:
            a_actual |= (((idx >> np.uint32(s)) & np.uint32(1)).astype(np.int64)) << pos[s]
        w_actual = W[a_actual, np.arange(idx.size)]
        log_gamma = w_actual - log_zb
        total -= float(np.dot(measure.probs[start : start + idx.size], log_gamma))
    return _from_nats(total, unit)


def volume_normalized_erasure(
    measure: TorusMeasure, regions: Sequence[Sequence[int]], unit: Unit = Unit.NATS
) -> List[float]:
    """h^-_region / |region| for each region in the list."""
    out = []
    for region in regions:
        h = torus_erasure_entropy(measure, region, unit)
        out.append(h.value / len(list(region)))
    return out


def free_energy_content(
    q_probs: np.ndarray, lattice: LatticeSpec, J: float, region: Sequence[int]
) -> float:
    """E_Q[H_region] - H_Q(X_region | X_rest), in nats.

    Gibbs measures minimize this over all measures agreeing with them outside
    the region; the minimum gap to a perturbed measure is a conditional
    KL divergence, hence nonnegative.
    """
    q = np.asarray(q_probs, dtype=float)
    n = lattice.n_sites
    if q.shape != (1 << n,):
        raise ValidationError(f"measure must be a table over {1 << n} configurations")
    if np.any(q < 0.0) or abs(float(q.sum()) - 1.0) > 1e-10:
        raise ValidationError("measure table is not a probability distribution")
    region = _check_sites(lattice, region)
    # energy term: H_region = -J * window alignment
    region_set = set(region)
    bonds = [b for b in lattice.bonds() if b[0] in region_set or b[1] in region_set]
    energy = np.zeros(1 << n)
    for start, idx in _chunked(1 << n):
        acc = np.zeros(idx.size)
        for i, j in bonds:
            diff = ((idx >> np.uint32(i)) ^ (idx >> np.uint32(j))) & np.uint32(1)
            acc += 1.0 - 2.0 * diff.astype(float)
        energy[start : start + idx.size] = -J * acc
    e_term = float(np.dot(q, energy))
    h_all = _plogp_sum(q)
    rest = [s for s in range(n) if s not in region_set]
    if rest:
        sub = np.zeros(1 << len(rest))
        for start, idx in _chunked(1 << n):
            si = np.zeros(idx.size, dtype=np.int64)
            for t, s in enumerate(rest):
                si |= (((idx >> np.uint32(s)) & np.uint32(1)).astype(np.int64)) << (len(rest) - 1 - t)
            sub += np.bincount(si, weights=q[start : start + idx.size], minlength=1 << len(rest))
        h_cond = h_all - _plogp_sum(sub)
    else:
        h_cond = h_all
    return e_term - h_cond


def tilted_single_site_measure(
    measure: TorusMeasure, site: int, tilt_by_boundary: np.ndarray
) -> np.ndarray:
    """Measure agreeing with the Gibbs one off `site`, conditional shifted per boundary.

    tilt_by_boundary has one entry per configuration of the site's neighbors
    (index bits follow the neighbor order of the lattice adjacency).
    """
    lat = measure.lattice
    nbrs = lat.neighbor_array()[site]
    deg = nbrs.size
    if tilt_by_boundary.shape != (1 << deg,):
        raise ValidationError(f"need one tilt per {1 << deg} boundary configurations")
    n = lat.n_sites
    q = np.empty(1 << n)
    gamma_plus = np.empty(1 << deg)
    for b in range(1 << deg):
        s_sum = sum(2 * ((b >> t) & 1) - 1 for t in range(deg))
        gamma_plus[b] = single_site_conditional(measure.J, s_sum)
    q_plus = np.clip(gamma_plus + tilt_by_boundary, 1e-12, 1.0 - 1e-12)
    for start, idx in _chunked(1 << n):
        b_idx = np.zeros(idx.size, dtype=np.int64)
        for t, s in enumerate(nbrs):
            b_idx |= (((idx >> np.uint32(s)) & np.uint32(1)).astype(np.int64)) << t
        flipped = (idx ^ np.uint32(1 << site)).astype(np.int64)
        pair = measure.probs[start : start + idx.size] + measure.probs[flipped]
        bit = ((idx >> np.uint32(site)) & np.uint32(1)).astype(bool)
        cond = np.where(bit, q_plus[b_idx], 1.0 - q_plus[b_idx])
        q[start : start + idx.size] = pair * cond
    return q


def lts_check(
    lattice: LatticeSpec,
    J: float,
    site: int,
    tilt: float,
    trials: int,
    seed: int = 0,
) -> float:
    """Minimum free-energy-content gap over random single-site tilts.

    Each trial flips the sign of the tilt independently per boundary
    configuration; the gap is F(tilted) - F(Gibbs) and must be >= 0.
    """
    if abs(tilt) > 0.5:
        raise ValidationError("tilt magnitude must be <= 0.5")
    measure = enumerate_torus(lattice, J)
    f_star = free_energy_content(measure.probs, lattice, J, [site])
    deg = lattice.degree
    rng = np.random.default_rng(seed)
    best = np.inf
    for _ in range(max(1, trials)):
        signs = rng.choice([-1.0, 1.0], size=1 << deg)
        q = tilted_single_site_measure(measure, site, tilt * signs)
        delta = free_energy_content(q, lattice, J, [site]) - f_star
        best = min(best, delta)
    return best
