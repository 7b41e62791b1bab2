"""Dense density-matrix engine.

Site labels are 1-based and site 1 is the most significant tensor factor,
so a product ``a (x) b`` puts ``a`` on the leading sites.  Everything here is
exact linear algebra on explicit matrices and serves as the oracle for the
closed-form GHZ evaluation.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import CapacityError, DomainError, dense_cap, unit_per_bit

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
EIG_CLAMP = 1e-12
SUPPORT_WEIGHT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    local_dims: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.local_dims)
        if not dims or any(d < 1 for d in dims):
            raise DomainError(f"local dimensions must be positive, got {self.local_dims}")
        m = np.asarray(self.matrix, dtype=complex)
        dim = math.prod(dims)
        if m.shape != (dim, dim):
            raise DomainError(f"matrix shape {m.shape} does not match local dims {dims}")
        object.__setattr__(self, "local_dims", dims)
        object.__setattr__(self, "matrix", m)

    @property
    def n_sites(self) -> int:
        return len(self.local_dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def tensor(self) -> np.ndarray:
        """View as a rank-2N tensor (row indices first, then column indices)."""
        return self.matrix.reshape(self.local_dims + self.local_dims)


@dataclass(frozen=True)
class KrausChannel:
    kraus_ops: tuple[np.ndarray, ...]
    site_dim: int

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus_ops)
        if not ops:
            raise DomainError("a channel needs at least one Kraus operator")
        d = self.site_dim
        if any(k.shape != (d, d) for k in ops):
            raise DomainError(f"Kraus operators must all be {d}x{d}")
        defect = completeness_defect(ops)
        if defect > 1e-10:
            raise DomainError(f"Kraus operators are not trace preserving (defect {defect:.2e})")
        object.__setattr__(self, "kraus_ops", ops)


def completeness_defect(ops: Sequence[np.ndarray]) -> float:
    d = ops[0].shape[0]
    total = sum(k.conj().T @ k for k in ops)
    return float(np.max(np.abs(total - np.eye(d))))


def site_subset(sites: Iterable[int], n_sites: int) -> tuple[int, ...]:
    """Normalize a cluster of site labels to a sorted, duplicate-free tuple."""
    idx = tuple(sorted(set(int(s) for s in sites)))
    if not idx:
        raise DomainError("site subset must be non-empty")
    if idx[0] < 1 or idx[-1] > n_sites:
        raise DomainError(f"site labels {idx} outside 1..{n_sites}")
    return idx


def _check_capacity(n: int):
    cap = dense_cap()
    if n > cap:
        raise CapacityError(f"{n} sites exceeds the dense cap of {cap}")


# ---------------------------------------------------------------------------
# construction


def make_ghz_state(n: int, p: float) -> DensityMatrix:
    """White-noise mixture ``p I/2^N + (1-p)|GHZ><GHZ|`` on N qubits."""
    if n < 2:
        raise DomainError("GHZ state needs at least 2 sites")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"mixing probability must lie in [0, 1], got {p}")
    _check_capacity(n)
    dim = 2**n
    m = np.eye(dim, dtype=complex) * (p / dim)
    for i in (0, dim - 1):
        for j in (0, dim - 1):
            m[i, j] += (1.0 - p) / 2.0
    return DensityMatrix((2,) * n, m)


def pure_state(vector: Sequence[complex], local_dims: Sequence[int]) -> DensityMatrix:
    v = np.asarray(vector, dtype=complex)
    v = v / np.linalg.norm(v)
    return DensityMatrix(tuple(local_dims), np.outer(v, v.conj()))


def maximally_mixed(local_dims: Sequence[int]) -> DensityMatrix:
    dim = math.prod(local_dims)
    return DensityMatrix(tuple(local_dims), np.eye(dim) / dim)


def tensor_product(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    _check_capacity(a.n_sites + b.n_sites)
    return DensityMatrix(a.local_dims + b.local_dims, np.kron(a.matrix, b.matrix))


def random_density(local_dims: Sequence[int], rank: int, seed) -> DensityMatrix:
    """``G G^dagger / Tr`` with G a dim x rank complex Gaussian matrix."""
    if rank < 1:
        raise DomainError("rank must be at least 1")
    dims = tuple(local_dims)
    _check_capacity(len(dims))
    dim = math.prod(dims)
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    return DensityMatrix(dims, m / np.trace(m).real)


def permute_sites(rho: DensityMatrix, order: Sequence[int]) -> DensityMatrix:
    """Relabel sites: new site ``i`` is old site ``order[i-1]`` (1-based)."""
    n = rho.n_sites
    axes = [o - 1 for o in order]
    if sorted(axes) != list(range(n)):
        raise DomainError(f"{order} is not a permutation of 1..{n}")
    t = rho.tensor().transpose(axes + [a + n for a in axes])
    dims = tuple(rho.local_dims[a] for a in axes)
    return DensityMatrix(dims, t.reshape(rho.dim, rho.dim))


def random_symmetric_density(n: int, seed, rank: int = 2, local_dim: int = 2) -> DensityMatrix:
    """Average of ``P rho P^dagger`` over every site permutation P."""
    _check_capacity(n)
    base = random_density((local_dim,) * n, rank, seed)
    t = base.tensor()
    acc = np.zeros_like(t)
    count = 0
    for perm in itertools.permutations(range(n)):
        acc += t.transpose(list(perm) + [p + n for p in perm])
        count += 1
    m = (acc / count).reshape(base.dim, base.dim)
    return DensityMatrix(base.local_dims, (m + m.conj().T) / 2)


def permutation_asymmetry(rho: DensityMatrix) -> float:
    """Largest element-wise change under conjugation by an adjacent transposition."""
    n = rho.n_sites
    if len(set(rho.local_dims)) > 1:
        return math.inf
    worst = 0.0
    for i in range(1, n):
        order = list(range(1, n + 1))
        order[i - 1], order[i] = order[i], order[i - 1]
        swapped = permute_sites(rho, order).matrix
        worst = max(worst, float(np.max(np.abs(swapped - rho.matrix))))
    return worst


# ---------------------------------------------------------------------------
# reductions and channels


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    n = rho.n_sites
    keep = site_subset(keep, n)
    if len(keep) == n:
        return rho
    rows = list(range(n))
    cols = [i + n if (i + 1) in keep else i for i in range(n)]
    out = [i - 1 for i in keep] + [i - 1 + n for i in keep]
    reduced = np.einsum(rho.tensor(), rows + cols, out)
    dims = tuple(rho.local_dims[i - 1] for i in keep)
    d = math.prod(dims)
    return DensityMatrix(dims, reduced.reshape(d, d))


def apply_local_channel(rho: DensityMatrix, site: int, ch: KrausChannel) -> DensityMatrix:
    n = rho.n_sites
    if not 1 <= site <= n:
        raise DomainError(f"site {site} outside 1..{n}")
    axis = site - 1
    if rho.local_dims[axis] != ch.site_dim:
        raise DomainError(
            f"channel acts on dimension {ch.site_dim}, site {site} has {rho.local_dims[axis]}"
        )
    t = rho.tensor()
    out = np.zeros_like(t)
    for k in ch.kraus_ops:
        left = np.moveaxis(np.tensordot(k, t, axes=([1], [axis])), 0, axis)
        out += np.moveaxis(np.tensordot(k.conj(), left, axes=([1], [axis + n])), 0, axis + n)
    return DensityMatrix(rho.local_dims, out.reshape(rho.dim, rho.dim))


def apply_product_channel(rho: DensityMatrix, channels: Sequence[KrausChannel]) -> DensityMatrix:
    """Apply one channel per site (the local map ``Phi_1 (x) ... (x) Phi_N``)."""
    if len(channels) != rho.n_sites:
        raise DomainError("need exactly one channel per site")
    for site, ch in enumerate(channels, start=1):
        rho = apply_local_channel(rho, site, ch)
    return rho


_PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def standard_channel(kind: str, param: float) -> KrausChannel:
    """Qubit Kraus sets: ``depolarizing`` (lambda), ``amplitude_damping`` and
    ``phase_damping`` (gamma).  Depolarizing maps rho to
    ``(1 - lambda) rho + lambda I/2``."""
    if not 0.0 <= param <= 1.0:
        raise DomainError(f"channel parameter must lie in [0, 1], got {param}")
    if kind == "depolarizing":
        ops = [math.sqrt(1 - 3 * param / 4) * _PAULI[0]]
        ops += [math.sqrt(param / 4) * s for s in _PAULI[1:]]
    elif kind == "amplitude_damping":
        ops = [
            np.array([[1, 0], [0, math.sqrt(1 - param)]], dtype=complex),
            np.array([[0, math.sqrt(param)], [0, 0]], dtype=complex),
        ]
    elif kind == "phase_damping":
        ops = [
            np.array([[1, 0], [0, math.sqrt(1 - param)]], dtype=complex),
            np.array([[0, 0], [0, math.sqrt(param)]], dtype=complex),
        ]
    else:
        raise DomainError(f"unknown channel kind {kind!r}")
    return KrausChannel(tuple(ops), 2)


def identity_channel(d: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(d, dtype=complex),), d)


# ---------------------------------------------------------------------------
# entropies


def hermiticity_defect(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


def _eigenvalues(rho: DensityMatrix) -> np.ndarray:
    m = rho.matrix
    if hermiticity_defect(m) > HERMITIAN_TOL:
        raise DomainError("matrix is not Hermitian")
    return np.linalg.eigvalsh((m + m.conj().T) / 2)


def entropy_bits_from_spectrum(eigs: np.ndarray) -> float:
    lam = np.where(eigs < EIG_CLAMP, 0.0, eigs)
    nz = lam[lam > 0]
    return max(0.0, float(-np.sum(nz * np.log2(nz))))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """``-Tr rho log rho`` in the configured unit (bits by default)."""
    return entropy_bits_from_spectrum(_eigenvalues(rho)) * unit_per_bit()


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """``-S(rho) - Tr rho log sigma``; ``inf`` when supp(rho) is not inside supp(sigma)."""
    if rho.dim != sigma.dim:
        raise DomainError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    s_rho = entropy_bits_from_spectrum(_eigenvalues(rho))
    sm = sigma.matrix
    if hermiticity_defect(sm) > HERMITIAN_TOL:
        raise DomainError("sigma is not Hermitian")
    s_vals, s_vecs = np.linalg.eigh((sm + sm.conj().T) / 2)
    weights = np.einsum("ij,jk,ki->i", s_vecs.conj().T, rho.matrix, s_vecs).real
    null = s_vals < EIG_CLAMP
    if np.any(weights[null] > SUPPORT_WEIGHT_TOL):
        return math.inf
    cross = float(np.sum(weights[~null] * np.log2(s_vals[~null])))
    value = -s_rho - cross
    return max(value, 0.0) * unit_per_bit()


# ---------------------------------------------------------------------------
# validation and (de)serialization


@dataclass(frozen=True)
class StateReport:
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float

    @property
    def passed(self) -> bool:
        return (
            self.hermiticity_defect <= HERMITIAN_TOL
            and self.trace_defect <= TRACE_TOL
            and self.min_eigenvalue >= -PSD_TOL
        )

    def as_dict(self) -> dict:
        return {
            "hermiticity_defect": self.hermiticity_defect,
            "trace_defect": self.trace_defect,
            "min_eigenvalue": self.min_eigenvalue,
            "pass": self.passed,
        }


def validate_state(rho: DensityMatrix) -> StateReport:
    m = rho.matrix
    herm = hermiticity_defect(m)
    tr = abs(complex(np.trace(m)) - 1.0)
    min_eig = float(np.min(np.linalg.eigvalsh((m + m.conj().T) / 2)))
    return StateReport(herm, tr, min_eig)


class InvalidStateError(DomainError):
    def __init__(self, report: StateReport):
        self.report = report
        super().__init__(f"invalid density matrix: {report.as_dict()}")


def state_to_json(rho: DensityMatrix) -> dict:
    return {
        "local_dims": list(rho.local_dims),
        "matrix": [[[z.real, z.imag] for z in row] for row in rho.matrix.tolist()],
    }


def state_from_json(obj: dict, validate: bool = True) -> DensityMatrix:
    try:
        dims = tuple(int(d) for d in obj["local_dims"])
        arr = np.asarray(obj["matrix"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed state object: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise DomainError("matrix entries must be [re, im] pairs")
    rho = DensityMatrix(dims, arr[..., 0] + 1j * arr[..., 1])
    if validate:
        report = validate_state(rho)
        if not report.passed:
            raise InvalidStateError(report)
    return rho


def load_state(path) -> DensityMatrix:
    with open(path) as fh:
        return state_from_json(json.load(fh))


def save_state(rho: DensityMatrix, path):
    with open(path, "w") as fh:
        json.dump(state_to_json(rho), fh)
