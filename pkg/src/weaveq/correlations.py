"""Correlations above order k, genuine k-partite correlations, weaving and
quantum neural complexity for dense states.

Two evaluation modes for the minimization over product states built from
clusters of at most k sites:

``exact-minimization``
    search every set partition whose blocks have at most k sites.  Because the
    closest product state to rho for a fixed partition is the product of its
    block marginals, each candidate costs a sum of marginal entropies.
``symmetric-formula``
    for permutation-invariant states the optimum is floor(N/k) blocks of size k
    plus one block of size N mod k, so only first-m-site marginals are needed.
"""

from __future__ import annotations

import functools
import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .config import EXACT_CAP, CapacityError, DomainError, PreconditionError
from .partitions import SetPartition, iter_blocks
from .qcore import DensityMatrix, partial_trace, permutation_asymmetry, von_neumann_entropy

SYMMETRIC = "symmetric-formula"
EXACT = "exact-minimization"
MODES = (SYMMETRIC, EXACT)

SYMMETRY_TOL = 1e-8
CLAMP_TOL = 1e-9
TIE_TOL = 1e-12


def _clamp(x: float) -> float:
    return 0.0 if -CLAMP_TOL <= x < 0.0 else x


def _mode(mode: str) -> str:
    aliases = {"symmetric": SYMMETRIC, "exact": EXACT}
    mode = aliases.get(mode, mode)
    if mode not in MODES:
        raise DomainError(f"unknown mode {mode!r}")
    return mode


class MarginalEntropies:
    """Memoized entropies of cluster marginals of one state."""

    def __init__(self, rho: DensityMatrix):
        self.rho = rho
        self.n = rho.n_sites
        self._cache: dict[tuple[int, ...], float] = {}

    def __call__(self, sites: Sequence[int]) -> float:
        key = tuple(sites)
        if not key:
            return 0.0
        hit = self._cache.get(key)
        if hit is None:
            hit = von_neumann_entropy(partial_trace(self.rho, key))
            self._cache[key] = hit
        return hit

    def first(self, m: int) -> float:
        return self(tuple(range(1, m + 1)))

    def total(self) -> float:
        return self(tuple(range(1, self.n + 1)))


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class CorrelationProfile:
    """``above_k[k-1]`` holds S^{k->N} for k = 1..N and ``genuine[k-2]`` holds
    S^k for k = 2..N."""

    n: int
    above_k: tuple[float, ...]
    genuine: tuple[float, ...]
    mode: str

    @classmethod
    def from_above_k(cls, above_k: Sequence[float], mode: str) -> "CorrelationProfile":
        a = np.asarray(above_k, dtype=float)
        a = np.where((a < 0) & (a >= -CLAMP_TOL), 0.0, a)
        g = a[:-1] - a[1:]
        g = np.where((g < 0) & (g >= -CLAMP_TOL), 0.0, g)
        return cls(len(a), tuple(a.tolist()), tuple(g.tolist()), mode)

    def above(self, k: int) -> float:
        if not 1 <= k <= self.n:
            raise DomainError(f"order {k} outside 1..{self.n}")
        return self.above_k[k - 1]

    @property
    def multi_information(self) -> float:
        return self.above_k[0]

    def invariant_violations(self, tol: float = 1e-9) -> list[str]:
        out = []
        a = self.above_k
        if abs(a[-1]) > tol:
            out.append(f"S^(N->N) = {a[-1]} != 0")
        for k in range(1, self.n):
            if a[k] > a[k - 1] + tol:
                out.append(f"S^(k->N) increases at k={k + 1}")
        for k, g in enumerate(self.genuine, start=2):
            if g < -tol:
                out.append(f"S^{k} = {g} < 0")
        if any(x < -tol for x in a):
            out.append("negative S^(k->N)")
        scale = max(1.0, abs(a[0]))
        if abs(math.fsum(self.genuine) - a[0]) > tol * scale:
            out.append("genuine correlations do not telescope to the multi-information")
        return out

    def to_json(self) -> dict:
        return {"N": self.n, "mode": self.mode, "above_k": list(self.above_k), "genuine": list(self.genuine)}

    @classmethod
    def from_json(cls, obj: dict) -> "CorrelationProfile":
        prof = cls(int(obj["N"]), tuple(obj["above_k"]), tuple(obj["genuine"]), obj["mode"])
        if len(prof.above_k) != prof.n or len(prof.genuine) != prof.n - 1:
            raise DomainError("profile lengths do not match N")
        return prof

    def dumps(self) -> str:
        return json.dumps(self.to_json())


@dataclass(frozen=True)
class WeightScheme:
    """Non-negative weights Omega_k (k = 1..N-1) on S^{k->N}.

    The equivalent weights on genuine correlations are the prefix sums
    omega_k = Omega_1 + ... + Omega_{k-1} (k = 2..N).
    """

    big_omega: tuple[float, ...]
    name: str = "custom"

    def __post_init__(self):
        vals = tuple(float(x) for x in self.big_omega)
        if any(not math.isfinite(x) or x < 0 for x in vals):
            raise DomainError("weights must be finite and non-negative")
        object.__setattr__(self, "big_omega", vals)

    @property
    def n(self) -> int:
        return len(self.big_omega) + 1

    @functools.cached_property
    def small_omega(self) -> tuple[float, ...]:
        return tuple(itertools.accumulate(self.big_omega))


def make_weight_scheme(kind: str, n: int, custom_values: Sequence[float] | None = None) -> WeightScheme:
    if n < 2:
        raise DomainError("weight schemes need N >= 2")
    if kind == "uniform":
        return WeightScheme((1.0,) * (n - 1), "uniform")
    if kind == "linear":
        return WeightScheme(tuple(k / n for k in range(1, n)), "linear")
    if kind == "custom":
        if custom_values is None or len(custom_values) != n - 1:
            raise DomainError(f"custom scheme needs {n - 1} values")
        return WeightScheme(tuple(custom_values), "custom")
    raise DomainError(f"unknown weight scheme {kind!r}")


# ---------------------------------------------------------------------------
# symmetric closed form and exact minimization


def require_symmetric(rho: DensityMatrix) -> float:
    asym = permutation_asymmetry(rho)
    if asym > SYMMETRY_TOL:
        raise PreconditionError(f"state is not permutation invariant (asymmetry {asym:.3e})")
    return asym


def symmetric_above_k(n: int, k: int, entropy_of_size) -> float:
    """floor(N/k) S_k + S_{N mod k} - S_N given S_m for m-site clusters."""
    q, r = divmod(n, k)
    if r == 0 and q == 1:
        return 0.0
    rest = entropy_of_size(r) if r else 0.0
    return q * entropy_of_size(k) + rest - entropy_of_size(n)


def _check_exact_cap(n: int):
    if n > EXACT_CAP:
        raise CapacityError(f"exact minimization is capped at {EXACT_CAP} sites, got {n}")


def _best_by_max_block(ent: MarginalEntropies, kmax: int) -> list[float]:
    """Smallest sum of block entropies among partitions whose largest block is m (m=1..kmax)."""
    n = ent.n
    best = [math.inf] * (kmax + 1)
    for blocks in iter_blocks(n, kmax):
        total = 0.0
        largest = 0
        for b in blocks:
            total += ent(b)
            largest = max(largest, len(b))
        if total < best[largest]:
            best[largest] = total
    return best


def closest_product_partition(rho: DensityMatrix, k: int) -> tuple[float, SetPartition]:
    """S^{k->N} by exhaustive search plus the lexicographically smallest
    minimizing partition."""
    n = rho.n_sites
    _check_exact_cap(n)
    if not 1 <= k <= n:
        raise DomainError(f"order {k} outside 1..{n}")
    ent = MarginalEntropies(rho)
    scored = []
    for blocks in iter_blocks(n, k):
        scored.append((sum(ent(b) for b in blocks), tuple(tuple(b) for b in blocks)))
    low = min(s for s, _ in scored)
    ties = [SetPartition(bl) for s, bl in scored if s <= low + TIE_TOL]
    witness = min(ties, key=SetPartition.key)
    return _clamp(low - ent.total()), witness


def correlations_above_k(rho: DensityMatrix, k: int, mode: str) -> float:
    mode = _mode(mode)
    n = rho.n_sites
    if not 1 <= k <= n:
        raise DomainError(f"order {k} outside 1..{n}")
    if k == n:
        return 0.0
    ent = MarginalEntropies(rho)
    if mode == SYMMETRIC:
        require_symmetric(rho)
        return _clamp(symmetric_above_k(n, k, ent.first))
    _check_exact_cap(n)
    best = _best_by_max_block(ent, k)
    return _clamp(min(best[1:]) - ent.total())


def correlation_profile(rho: DensityMatrix, mode: str) -> CorrelationProfile:
    mode = _mode(mode)
    n = rho.n_sites
    ent = MarginalEntropies(rho)
    if mode == SYMMETRIC:
        require_symmetric(rho)
        above = [symmetric_above_k(n, k, ent.first) for k in range(1, n)]
    else:
        _check_exact_cap(n)
        best = _best_by_max_block(ent, n)
        s_total = ent.total()
        above = [min(best[1 : k + 1]) - s_total for k in range(1, n)]
    return CorrelationProfile.from_above_k(above + [0.0], mode)


def genuine_k_correlations(profile: CorrelationProfile, k: int) -> float:
    if not 2 <= k <= profile.n:
        raise DomainError(f"genuine order {k} outside 2..{profile.n}")
    return profile.genuine[k - 2]


def multi_information(rho: DensityMatrix) -> float:
    ent = MarginalEntropies(rho)
    singles = math.fsum(ent((i,)) for i in range(1, rho.n_sites + 1))
    return _clamp(singles - ent.total())


# ---------------------------------------------------------------------------
# weaving


def weaving_forms(profile: CorrelationProfile, scheme: WeightScheme) -> tuple[float, float]:
    """Both sides of the weaving identity: (sum Omega_k S^{k->N}, sum omega_k S^k).

    The genuine side uses raw increments of ``above_k``: the reported
    ``genuine`` values have rounding noise clamped to zero, and large omega_k
    would amplify that clamp into a spurious mismatch.
    """
    if scheme.n != profile.n:
        raise DomainError(f"weight scheme is for N={scheme.n}, profile has N={profile.n}")
    a = np.asarray(profile.above_k)
    big = np.asarray(scheme.big_omega) * a[:-1]
    small = np.asarray(scheme.small_omega) * (a[:-1] - a[1:])
    return math.fsum(big.tolist()), math.fsum(small.tolist())


def weaving(profile: CorrelationProfile, scheme: WeightScheme) -> float:
    by_order, by_genuine = weaving_forms(profile, scheme)
    if abs(by_order - by_genuine) > CLAMP_TOL * max(1.0, abs(by_order)):
        raise ArithmeticError(f"weaving forms disagree: {by_order} vs {by_genuine}")
    return by_order


# ---------------------------------------------------------------------------
# neural complexity


def _cluster_multiinfo(ent: MarginalEntropies, cluster: tuple[int, ...]) -> float:
    return math.fsum(ent((i,)) for i in cluster) - ent(cluster)


def cluster_multiinfo_average(rho: DensityMatrix, k: int) -> float:
    """Mean multi-information over all C(N, k) clusters of k sites."""
    return _cluster_average(MarginalEntropies(rho), k)


def _cluster_average(ent: MarginalEntropies, k: int) -> float:
    n = ent.n
    if not 1 <= k <= n:
        raise DomainError(f"cluster size {k} outside 1..{n}")
    if k == 1:
        return 0.0
    values = [_cluster_multiinfo(ent, c) for c in itertools.combinations(range(1, n + 1), k)]
    return math.fsum(values) / len(values)


def _neural_component(ent: MarginalEntropies, k: int) -> float:
    n = ent.n
    if not 1 <= k <= n - 1:
        raise DomainError(f"component order {k} outside 1..{n - 1}")
    total = _cluster_multiinfo(ent, tuple(range(1, n + 1)))
    return total - (n / k) * _cluster_average(ent, k)


def neural_component(rho: DensityMatrix, k: int) -> float:
    return _neural_component(MarginalEntropies(rho), k)


def neural_components(rho: DensityMatrix) -> list[float]:
    """C^(k) for k = 1..N-1, sharing marginal entropies between orders."""
    ent = MarginalEntropies(rho)
    return [_neural_component(ent, k) for k in range(1, rho.n_sites)]


def neural_complexity(rho: DensityMatrix, components: Iterable[float] | None = None) -> float:
    n = rho.n_sites
    comps = neural_components(rho) if components is None else list(components)
    return math.fsum(k / n * c for k, c in enumerate(comps, start=1))
