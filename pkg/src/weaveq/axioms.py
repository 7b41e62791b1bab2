"""Randomized numerical checks of the monotonicity properties of the
correlation measures, plus the closed-form versus dense oracle sweep.

Each ``check_*`` function evaluates one inequality on one input and returns a
single-trial :class:`AxiomReport`; the battery merges trials keeping the worst.
Violations are signed slacks in bits: positive means the inequality fails.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .correlations import (
    EXACT,
    SYMMETRIC,
    MarginalEntropies,
    WeightScheme,
    _neural_component,
    correlation_profile,
    make_weight_scheme,
    multi_information,
    neural_complexity,
    weaving,
    weaving_forms,
)
from .ghz_analytic import (
    GhzParams,
    ghz_global_entropy,
    ghz_marginal_entropy,
    ghz_neural_complexity,
    ghz_neural_components,
    ghz_profile,
    ghz_weaving,
)
from .partitions import SetPartition
from .qcore import (
    DensityMatrix,
    KrausChannel,
    apply_product_channel,
    make_ghz_state,
    partial_trace,
    random_density,
    random_symmetric_density,
    standard_channel,
    state_from_json,
    state_to_json,
    tensor_product,
)

VIOLATION_TOL = 1e-8


@dataclass
class AxiomReport:
    axiom: str
    trials: int
    worst_violation: float
    witness: dict = field(default_factory=dict)
    informational: bool = False

    @property
    def passed(self) -> bool:
        return self.worst_violation <= VIOLATION_TOL

    def merge(self, other: "AxiomReport") -> "AxiomReport":
        worst = self if self.worst_violation >= other.worst_violation else other
        return AxiomReport(
            self.axiom,
            self.trials + other.trials,
            worst.worst_violation,
            worst.witness,
            self.informational,
        )

    def to_json(self) -> dict:
        return {
            "axiom": self.axiom,
            "trials": self.trials,
            "worst_violation": self.worst_violation,
            "pass": self.passed,
            "informational": self.informational,
            "witness": self.witness,
        }


def _channel_json(ch: KrausChannel) -> dict:
    return {
        "site_dim": ch.site_dim,
        "kraus_ops": [[[[z.real, z.imag] for z in row] for row in k.tolist()] for k in ch.kraus_ops],
    }


def _channel_from_json(obj: dict) -> KrausChannel:
    ops = []
    for k in obj["kraus_ops"]:
        arr = np.asarray(k, dtype=float)
        ops.append(arr[..., 0] + 1j * arr[..., 1])
    return KrausChannel(tuple(ops), int(obj["site_dim"]))


def _worst(values) -> float:
    return max(values, default=-math.inf)


# ---------------------------------------------------------------------------
# single-input checks


def check_disjoint_append(rho: DensityMatrix, sigma: DensityMatrix, k: int) -> AxiomReport:
    """S^{k->N}(rho) >= S^{k->N+n}(rho (x) sigma) for n <= k <= N."""
    n_big, n_small = rho.n_sites, sigma.n_sites
    if not n_small <= k <= n_big:
        raise ValueError(f"need n <= k <= N, got n={n_small}, k={k}, N={n_big}")
    before = correlation_profile(rho, EXACT).above(k)
    after = correlation_profile(tensor_product(rho, sigma), EXACT).above(k)
    witness = {"axiom": "disjoint_append", "rho": state_to_json(rho), "sigma": state_to_json(sigma), "k": k}
    return AxiomReport("disjoint_append", 1, after - before, witness)


def _measure_values(rho: DensityMatrix, measure: str, scheme: WeightScheme | None) -> list[float]:
    if measure == "above_k":
        return list(correlation_profile(rho, EXACT).above_k)
    if measure == "weaving":
        return [weaving(correlation_profile(rho, EXACT), scheme)]
    if measure == "neural":
        return [neural_complexity(rho)]
    raise ValueError(f"unknown measure {measure!r}")


def check_local_contractivity(
    rho: DensityMatrix,
    channels: Sequence[KrausChannel],
    measure: str = "above_k",
    scheme: WeightScheme | None = None,
) -> AxiomReport:
    """measure(rho) >= measure(Phi_1 (x) ... (x) Phi_N (rho)).

    ``measure`` is ``above_k`` (every order k), ``weaving`` (with ``scheme``,
    uniform by default) or ``neural``.  Neural complexity is not expected to
    be contractive, so its report is flagged informational.
    """
    if measure == "weaving" and scheme is None:
        scheme = make_weight_scheme("uniform", rho.n_sites)
    out = apply_product_channel(rho, channels)
    before = _measure_values(rho, measure, scheme)
    after = _measure_values(out, measure, scheme)
    name = f"local_contractivity_{measure}"
    witness = {
        "axiom": name,
        "rho": state_to_json(rho),
        "channels": [_channel_json(c) for c in channels],
        "measure": measure,
        "scheme": list(scheme.big_omega) if scheme is not None else None,
    }
    violation = _worst(a - b for a, b in zip(after, before))
    return AxiomReport(name, 1, violation, witness, informational=(measure == "neural"))


def check_partial_trace_monotonicity(rho: DensityMatrix, n: int, k: int) -> AxiomReport:
    """S^{k->N}(rho) >= S^{k->N-n}(rho_kept) for every kept cluster of N-n sites."""
    big = rho.n_sites
    if not (1 <= n < big and 1 <= k < big - n):
        raise ValueError(f"need k < N - n, got N={big}, n={n}, k={k}")
    before = correlation_profile(rho, EXACT).above(k)
    worst = -math.inf
    for keep in itertools.combinations(range(1, big + 1), big - n):
        after = correlation_profile(partial_trace(rho, keep), EXACT).above(k)
        worst = max(worst, after - before)
    witness = {"axiom": "partial_trace_monotonicity", "rho": state_to_json(rho), "n": n, "k": k}
    return AxiomReport("partial_trace_monotonicity", 1, worst, witness)


def check_superadditivity(rho: DensityMatrix, partition: SetPartition) -> AxiomReport:
    """S^{1->N}(rho) >= sum over blocks of S^{1->|b|}(rho_b)."""
    total = multi_information(rho)
    parts = math.fsum(multi_information(partial_trace(rho, b)) for b in partition.blocks)
    witness = {
        "axiom": "superadditivity",
        "rho": state_to_json(rho),
        "partition": [list(b) for b in partition.blocks],
    }
    return AxiomReport("superadditivity", 1, parts - total, witness)


def check_profile_invariants(rho: DensityMatrix, scheme: WeightScheme | None = None) -> AxiomReport:
    """Telescoping, monotonicity in k, non-negativity and the weaving dual form."""
    prof = correlation_profile(rho, EXACT)
    a = prof.above_k
    slacks = [abs(math.fsum(prof.genuine) - a[0])]
    slacks += [a[i] - a[i - 1] for i in range(1, len(a))]
    slacks += [-x for x in a] + [-g for g in prof.genuine]
    if scheme is not None:
        big, small = weaving_forms(prof, scheme)
        slacks.append(abs(big - small))
    witness = {
        "axiom": "profile_invariants",
        "rho": state_to_json(rho),
        "scheme": list(scheme.big_omega) if scheme is not None else None,
    }
    return AxiomReport("profile_invariants", 1, max(slacks), witness)


def check_symmetric_optimality(rho: DensityMatrix) -> AxiomReport:
    """Exhaustive minimization equals the closed form on a permutation-invariant state."""
    exact = correlation_profile(rho, EXACT).above_k
    sym = correlation_profile(rho, SYMMETRIC).above_k
    witness = {"axiom": "symmetric_optimality", "rho": state_to_json(rho)}
    return AxiomReport("symmetric_optimality", 1, max(abs(x - y) for x, y in zip(exact, sym)), witness)


def replay(witness: dict) -> AxiomReport:
    """Re-run the check that produced ``witness``."""
    kind = witness["axiom"]
    if kind == "oracle_equivalence":
        return check_oracle_equivalence([witness["n"]], [witness["p"]])
    rho = state_from_json(witness["rho"], validate=False)
    if kind == "disjoint_append":
        return check_disjoint_append(rho, state_from_json(witness["sigma"], validate=False), witness["k"])
    if kind.startswith("local_contractivity"):
        channels = [_channel_from_json(c) for c in witness["channels"]]
        scheme = WeightScheme(tuple(witness["scheme"])) if witness["scheme"] is not None else None
        return check_local_contractivity(rho, channels, witness["measure"], scheme)
    if kind == "partial_trace_monotonicity":
        return check_partial_trace_monotonicity(rho, witness["n"], witness["k"])
    if kind == "superadditivity":
        blocks = tuple(tuple(b) for b in witness["partition"])
        return check_superadditivity(rho, SetPartition(blocks))
    if kind == "profile_invariants":
        scheme = WeightScheme(tuple(witness["scheme"])) if witness["scheme"] is not None else None
        return check_profile_invariants(rho, scheme)
    if kind == "symmetric_optimality":
        return check_symmetric_optimality(rho)
    raise ValueError(f"unknown axiom {kind!r}")


# ---------------------------------------------------------------------------
# closed form versus dense pipeline


def dense_ghz_quantities(n: int, p: float) -> dict[str, list[float]]:
    """Every GHZ quantity from explicit matrices, exact set-partition search."""
    rho = make_ghz_state(n, p)
    ent = MarginalEntropies(rho)
    prof = correlation_profile(rho, EXACT)
    comps = [_neural_component(ent, k) for k in range(1, n)]
    return {
        "entropies": [ent.first(m) for m in range(1, n + 1)],
        "above_k": list(prof.above_k),
        "neural_components": comps,
        "weavings": [
            weaving(prof, make_weight_scheme("uniform", n)),
            weaving(prof, make_weight_scheme("linear", n)),
        ],
        "neural_complexity": [neural_complexity(rho, comps)],
    }


def analytic_ghz_quantities(n: int, p: float) -> dict[str, list[float]]:
    params = GhzParams(n, p)
    return {
        "entropies": [ghz_marginal_entropy(params, m) for m in range(1, n)] + [ghz_global_entropy(params)],
        "above_k": list(ghz_profile(params).above_k),
        "neural_components": ghz_neural_components(params).tolist(),
        "weavings": [
            ghz_weaving(params, make_weight_scheme("uniform", n)),
            ghz_weaving(params, make_weight_scheme("linear", n)),
        ],
        "neural_complexity": [ghz_neural_complexity(params)],
    }


def check_oracle_equivalence(ns: Sequence[int], ps: Sequence[float]) -> AxiomReport:
    """Largest |closed form - dense| over the (N, p) grid, as a violation above ORACLE_TOL."""
    worst, witness = -math.inf, {}
    for n in ns:
        for p in ps:
            dense = dense_ghz_quantities(n, p)
            closed = analytic_ghz_quantities(n, p)
            for key in dense:
                diff = max(abs(a - b) for a, b in zip(dense[key], closed[key]))
                if diff > worst:
                    worst = diff
                    witness = {"axiom": "oracle_equivalence", "n": n, "p": p, "quantity": key}
    return AxiomReport("oracle_equivalence", len(ns) * len(ps), worst, witness)


# ---------------------------------------------------------------------------
# battery


def _random_state(rng: np.random.Generator, n: int) -> DensityMatrix:
    dim = 2**n
    rank = int(rng.integers(1, dim + 1))
    return random_density((2,) * n, rank, int(rng.integers(2**63)))


def _random_channel(rng: np.random.Generator) -> KrausChannel:
    kind = ("depolarizing", "amplitude_damping", "phase_damping")[int(rng.integers(3))]
    return standard_channel(kind, float(rng.random()))


def _random_partition(rng: np.random.Generator, n: int) -> SetPartition:
    labels = rng.integers(0, n, size=n)
    blocks: dict[int, list[int]] = {}
    for site, lab in enumerate(labels, start=1):
        blocks.setdefault(int(lab), []).append(site)
    return SetPartition(tuple(tuple(b) for b in blocks.values()))


def _random_scheme(rng: np.random.Generator, n: int) -> WeightScheme:
    kind = ("uniform", "linear", "custom")[int(rng.integers(3))]
    return make_weight_scheme(kind, n, rng.random(n - 1).tolist() if kind == "custom" else None)


def _trial_checks(rng: np.random.Generator) -> list[AxiomReport]:
    out = []

    n_big = int(rng.integers(2, 4))
    n_small = int(rng.integers(1, min(2, 5 - n_big) + 1))
    k = int(rng.integers(n_small, n_big + 1))
    out.append(check_disjoint_append(_random_state(rng, n_big), _random_state(rng, n_small), k))

    n = int(rng.integers(3, 5))
    rho = _random_state(rng, n)
    channels = [_random_channel(rng) for _ in range(n)]
    out.append(check_local_contractivity(rho, channels, "above_k"))
    out.append(check_local_contractivity(rho, channels, "weaving", _random_scheme(rng, n)))
    out.append(check_local_contractivity(rho, channels, "neural"))

    n = int(rng.integers(4, 6))
    n_drop = int(rng.integers(1, n - 1))
    k = int(rng.integers(1, n - n_drop))
    out.append(check_partial_trace_monotonicity(_random_state(rng, n), n_drop, k))

    n = int(rng.integers(2, 6))
    out.append(check_superadditivity(_random_state(rng, n), _random_partition(rng, n)))

    n = int(rng.integers(2, 6))
    out.append(check_profile_invariants(_random_state(rng, n), _random_scheme(rng, n)))

    n = int(rng.integers(3, 6))
    sym = random_symmetric_density(n, int(rng.integers(2**63)), rank=int(rng.integers(1, 5)))
    out.append(check_symmetric_optimality(sym))
    return out


def run_axiom_battery(seed: int, trials: int) -> list[AxiomReport]:
    """Deterministic per seed; reports are merged in trial order."""
    merged: dict[str, AxiomReport] = {}
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        for rep in _trial_checks(rng):
            key = rep.axiom
            merged[key] = merged[key].merge(rep) if key in merged else rep
    return list(merged.values())


def battery_passed(reports: Sequence[AxiomReport]) -> bool:
    return all(r.passed for r in reports if not r.informational)


def reports_json(reports: Sequence[AxiomReport]) -> str:
    return json.dumps([r.to_json() for r in reports], sort_keys=True)
