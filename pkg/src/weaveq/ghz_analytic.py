"""Closed-form measures for the white-noise GHZ family, valid for very large N.

The k-site marginal of ``p I/2^N + (1-p)|GHZ_N><GHZ_N|`` has two eigenvalues
``a_k = p/2^k + (1-p)/2`` and ``2^k - 2`` eigenvalues ``p/2^k``; the global
state has ``2^N - 1`` eigenvalues ``p/2^N`` and one ``1 - p + p/2^N``.  No
power of two is ever materialized: the degenerate block is rewritten as

    (2^k - 2) (p/2^k) log2(p/2^k) = (p - p 2^{1-k}) (log2 p - k)

and small powers ``p 2^{-k}`` come from ``ldexp``, whose underflow to zero
only happens where the term is multiplied into a vanishing contribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import config
from .config import DomainError
from .correlations import SYMMETRIC, CorrelationProfile, WeightScheme, make_weight_scheme, weaving


def _unit() -> float:
    return config.unit_per_bit()


@dataclass(frozen=True)
class GhzParams:
    n: int
    p: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"N must be an integer >= 2, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"p must lie in [0, 1], got {self.p}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "p", float(self.p))


def _marginal_bits(p: float, k: int) -> float:
    if k == 0:
        return 0.0
    if k == 1 or p == 0.0:
        return 1.0
    if p == 1.0:
        return float(k)
    a = 0.5 * (1.0 - p) + math.ldexp(p, -k)
    degenerate = (p - math.ldexp(p, 1 - k)) * (k - math.log2(p))
    return -2.0 * a * math.log2(a) + degenerate


def _global_bits(p: float, n: int) -> float:
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return float(n)
    tail = math.ldexp(p, -n)
    q_minus_one = -p + tail
    q = 1.0 + q_minus_one
    log2_q = math.log1p(q_minus_one) / math.log(2.0)
    return (p - tail) * (n - math.log2(p)) - q * log2_q


def _marginal_bits_all(p: float, n: int) -> np.ndarray:
    """S_k in bits for k = 0..N-1, vectorized."""
    k = np.arange(n, dtype=float)
    if p == 0.0:
        out = np.ones(n)
    elif p == 1.0:
        out = k.copy()
    else:
        a = 0.5 * (1.0 - p) + np.ldexp(p, -np.arange(n))
        degenerate = (p - np.ldexp(p, 1 - np.arange(n))) * (k - math.log2(p))
        out = -2.0 * a * np.log2(a) + degenerate
    out[0] = 0.0
    if n > 1:
        out[1] = 1.0
    return out


def ghz_marginal_entropy(params: GhzParams, k: int) -> float:
    """Entropy of any k-site marginal, 0 <= k <= N-1."""
    if not 0 <= k <= params.n - 1:
        raise DomainError(f"marginal size {k} outside 0..{params.n - 1}")
    return _marginal_bits(params.p, k) * _unit()


def ghz_global_entropy(params: GhzParams) -> float:
    return _global_bits(params.p, params.n) * _unit()


def ghz_above_k(params: GhzParams, k: int) -> float:
    n = params.n
    if not 1 <= k <= n:
        raise DomainError(f"order {k} outside 1..{n}")
    if k == n:
        return 0.0
    q, r = divmod(n, k)
    bits = q * _marginal_bits(params.p, k) + _marginal_bits(params.p, r) - _global_bits(params.p, n)
    return max(bits, 0.0) * _unit()


def ghz_neural_component(params: GhzParams, k: int) -> float:
    """(N/k) S_k - S_N, evaluated as (N S_k - k S_N)/k so that p = 1 gives 0 exactly."""
    n = params.n
    if not 1 <= k <= n - 1:
        raise DomainError(f"component order {k} outside 1..{n - 1}")
    return (n * _marginal_bits(params.p, k) - k * _global_bits(params.p, n)) / k * _unit()


def _above_all_bits(params: GhzParams) -> tuple[np.ndarray, np.ndarray, float]:
    n, p = params.n, params.p
    s = _marginal_bits_all(p, n)
    s_n = _global_bits(p, n)
    k = np.arange(1, n)
    q, r = np.divmod(n, k)
    above = q * s[k] + s[r] - s_n
    return above, s, s_n


def ghz_profile(params: GhzParams) -> CorrelationProfile:
    above, _, _ = _above_all_bits(params)
    above = np.maximum(above, 0.0) * _unit()
    return CorrelationProfile.from_above_k(np.append(above, 0.0), SYMMETRIC)


def ghz_neural_components(params: GhzParams) -> np.ndarray:
    n = params.n
    s = _marginal_bits_all(params.p, n)
    s_n = _global_bits(params.p, n)
    k = np.arange(1, n)
    return (n * s[1:] - k * s_n) / k * _unit()


def ghz_neural_complexity(params: GhzParams) -> float:
    n = params.n
    s = _marginal_bits_all(params.p, n)
    s_n = _global_bits(params.p, n)
    k = np.arange(1, n)
    terms = (n * s[1:] - k * s_n) / n
    return math.fsum(terms.tolist()) * _unit()


def ghz_weaving(params: GhzParams, scheme: WeightScheme) -> float:
    return weaving(ghz_profile(params), scheme)


@dataclass
class GhzSweepRow:
    p: float
    weavings: dict[str, float]
    neural_complexity: float
    above_k: list[float] | None = None
    neural_components: list[float] | None = None

    def as_dict(self) -> dict:
        d = {"p": self.p, **{f"W_{k}": v for k, v in self.weavings.items()}, "C": self.neural_complexity}
        if self.above_k is not None:
            d["above_k"] = self.above_k
            d["C_k"] = self.neural_components
        return d


def default_schemes(n: int) -> dict[str, WeightScheme]:
    return {"uniform": make_weight_scheme("uniform", n), "linear": make_weight_scheme("linear", n)}


def ghz_sweep(
    n: int,
    p_grid: Iterable[float],
    schemes: dict[str, WeightScheme] | None = None,
    include_orders: bool = False,
) -> list[GhzSweepRow]:
    grid = [float(p) for p in p_grid]
    if not grid or any(not 0.0 <= p <= 1.0 for p in grid):
        raise DomainError("p grid must be non-empty and inside [0, 1]")
    schemes = default_schemes(n) if schemes is None else schemes
    rows = []
    for p in grid:
        params = GhzParams(n, p)
        prof = ghz_profile(params)
        row = GhzSweepRow(
            p=p,
            weavings={name: weaving(prof, sch) for name, sch in schemes.items()},
            neural_complexity=ghz_neural_complexity(params),
        )
        if include_orders:
            row.above_k = list(prof.above_k[:-1])
            row.neural_components = ghz_neural_components(params).tolist()
        rows.append(row)
    return rows


def linear_grid(start: float, stop: float, count: int) -> list[float]:
    """``count`` points from start to stop inclusive (a single point is ``start``)."""
    if count < 1:
        raise DomainError("grid count must be at least 1")
    if count == 1:
        return [float(start)]
    step = (stop - start) / (count - 1)
    pts = [start + i * step for i in range(count)]
    pts[-1] = float(stop)
    return pts


def pure_state_above_k(n: int, k: int) -> int:
    """The p = 0 value in bits: ceil(N/k) below the top order, 0 at k = N."""
    return 0 if k == n else -(-n // k)
