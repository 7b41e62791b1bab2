import itertools
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weaveq.config import CapacityError, DomainError
from weaveq.config import settings as weaveq_settings
from weaveq.qcore import (
    DensityMatrix,
    KrausChannel,
    apply_local_channel,
    identity_channel,
    make_ghz_state,
    maximally_mixed,
    partial_trace,
    permutation_asymmetry,
    permute_sites,
    pure_state,
    random_density,
    random_symmetric_density,
    relative_entropy,
    standard_channel,
    state_from_json,
    state_to_json,
    tensor_product,
    validate_state,
    von_neumann_entropy,
)
from weaveq.correlations import multi_information


def shannon_bits(probs):
    return -sum(x * math.log2(x) for x in probs if x > 0)


def bell():
    return pure_state([1, 0, 0, 1], (2, 2))


def brute_partial_trace(m, dims, keep):
    """Index-by-index reduction; ``keep`` holds 0-based site indices."""
    n = len(dims)
    keep = sorted(keep)
    out_dims = [dims[i] for i in keep]
    d = math.prod(out_dims)
    out = np.zeros((d, d), dtype=complex)
    ranges = [range(x) for x in dims]

    def flat(idx, ds):
        f = 0
        for i, di in zip(idx, ds):
            f = f * di + i
        return f

    for row in itertools.product(*ranges):
        for col in itertools.product(*ranges):
            if any(row[i] != col[i] for i in range(n) if i not in keep):
                continue
            r = flat([row[i] for i in keep], out_dims)
            c = flat([col[i] for i in keep], out_dims)
            out[r, c] += m[flat(row, dims), flat(col, dims)]
    return out


# --- make_ghz_state ---------------------------------------------------------


def test_ghz_pure_two_sites_is_bell():
    rho = make_ghz_state(2, 0.0)
    expected = np.zeros((4, 4))
    expected[np.ix_([0, 3], [0, 3])] = 0.5
    assert np.allclose(rho.matrix, expected, atol=1e-15)
    assert np.count_nonzero(np.abs(rho.matrix) > 0) == 4


def test_ghz_white_noise_limit():
    rho = make_ghz_state(3, 1.0)
    assert np.allclose(rho.matrix, np.eye(8) / 8, atol=1e-15)


def test_ghz_spectrum_half_mixed():
    eigs = np.sort(np.linalg.eigvalsh(make_ghz_state(3, 0.5).matrix))
    assert np.allclose(eigs, [0.0625] * 7 + [0.5625], atol=1e-14)


@pytest.mark.parametrize("n,p", [(2, 0.3), (5, 0.0), (6, 0.77)])
def test_ghz_state_is_valid(n, p):
    assert validate_state(make_ghz_state(n, p)).passed


def test_ghz_errors():
    with pytest.raises(DomainError):
        make_ghz_state(3, 1.5)
    with pytest.raises(DomainError):
        make_ghz_state(3, -0.1)
    with pytest.raises(CapacityError):
        make_ghz_state(13, 0.5)
    with weaveq_settings(dense_cap=3), pytest.raises(CapacityError):
        make_ghz_state(4, 0.5)


# --- tensor_product ---------------------------------------------------------


def test_tensor_of_mixed_qubits():
    out = tensor_product(maximally_mixed((2,)), maximally_mixed((2,)))
    assert out.local_dims == (2, 2)
    assert np.allclose(out.matrix, np.eye(4) / 4)


def test_tensor_of_basis_states_orders_sites():
    out = tensor_product(pure_state([1, 0], (2,)), pure_state([0, 1], (2,)))
    expected = np.zeros((4, 4))
    expected[1, 1] = 1.0  # |01><01|, site 1 most significant
    assert np.allclose(out.matrix, expected)


def test_tensor_of_bell_pairs_is_pure():
    out = tensor_product(bell(), bell())
    assert out.dim == 16
    assert abs(np.trace(out.matrix) - 1) < 1e-14
    assert abs(von_neumann_entropy(out)) < 1e-10


# --- partial_trace ----------------------------------------------------------


def test_partial_trace_pure_ghz_pair():
    red = partial_trace(make_ghz_state(3, 0.0), [1, 2])
    expected = np.zeros((4, 4))
    expected[0, 0] = expected[3, 3] = 0.5
    assert np.allclose(red.matrix, expected, atol=1e-15)


def test_partial_trace_keep_all_is_identity():
    rho = random_density((2, 3), 3, seed=4)
    assert np.array_equal(partial_trace(rho, [1, 2]).matrix, rho.matrix)


def test_single_site_marginal_of_noisy_ghz_is_maximally_mixed():
    red = partial_trace(make_ghz_state(3, 0.5), [1])
    assert np.allclose(red.matrix, np.eye(2) / 2, atol=1e-15)


def test_partial_trace_rejects_empty_keep():
    with pytest.raises(DomainError):
        partial_trace(make_ghz_state(3, 0.5), [])
    with pytest.raises(DomainError):
        partial_trace(make_ghz_state(3, 0.5), [4])


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32), data=st.data())
def test_partial_trace_matches_brute_force(seed, data):
    dims = data.draw(st.lists(st.integers(1, 3), min_size=1, max_size=3))
    keep = data.draw(st.sets(st.integers(1, len(dims)), min_size=1))
    rho = random_density(dims, 2, seed)
    expected = brute_partial_trace(rho.matrix, dims, [k - 1 for k in keep])
    assert np.allclose(partial_trace(rho, keep).matrix, expected, atol=1e-13)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32), data=st.data())
def test_partial_trace_composes(seed, data):
    rho = random_density((2, 2, 2, 2), 3, seed)
    a = sorted(data.draw(st.sets(st.integers(1, 4), min_size=1)))
    b = sorted(data.draw(st.sets(st.sampled_from(a), min_size=1)))
    # sites of the intermediate state are renumbered 1..|a|
    b_in_a = [a.index(s) + 1 for s in b]
    two_step = partial_trace(partial_trace(rho, a), b_in_a)
    assert np.max(np.abs(two_step.matrix - partial_trace(rho, b).matrix)) <= 1e-12


# --- entropies --------------------------------------------------------------


def test_entropy_maximally_mixed_qubit():
    assert von_neumann_entropy(maximally_mixed((2,))) == pytest.approx(1.0, abs=1e-14)


def test_entropy_pure_state_zero():
    assert von_neumann_entropy(random_density((2, 2), 1, seed=9)) == pytest.approx(0.0, abs=1e-10)


def test_entropy_noisy_ghz_pair_marginal():
    oracle = shannon_bits([0.375, 0.375, 0.125, 0.125])
    value = von_neumann_entropy(partial_trace(make_ghz_state(3, 0.5), [1, 2]))
    assert value == pytest.approx(oracle, abs=1e-12)
    assert value == pytest.approx(1.811278, abs=1e-6)


def test_entropy_natural_log_switch():
    with weaveq_settings(log_base="e"):
        assert von_neumann_entropy(maximally_mixed((2,))) == pytest.approx(math.log(2), abs=1e-14)


def test_entropy_rejects_non_hermitian():
    m = np.eye(2) / 2
    m[0, 1] = 1e-3
    with pytest.raises(DomainError):
        von_neumann_entropy(DensityMatrix((2,), m))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 4), rank=st.integers(1, 6))
def test_entropy_bounds_and_subadditivity(seed, n, rank):
    rho = random_density((2,) * n, rank, seed)
    s = von_neumann_entropy(rho)
    assert -1e-12 <= s <= n + 1e-9
    for i, j in itertools.combinations(range(1, n + 1), 2):
        s_ij = von_neumann_entropy(partial_trace(rho, [i, j]))
        s_i = von_neumann_entropy(partial_trace(rho, [i]))
        s_j = von_neumann_entropy(partial_trace(rho, [j]))
        assert s_i + s_j >= s_ij - 1e-9


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_strong_subadditivity_symmetric(seed):
    rho = random_symmetric_density(4, seed, rank=3)
    s = [0.0] + [von_neumann_entropy(partial_trace(rho, range(1, m + 1))) for m in range(1, 5)]
    for a, b, c in itertools.product(range(1, 3), repeat=3):
        if a + b + c <= 4:
            assert s[a + b + c] + s[b] <= s[a + b] + s[b + c] + 1e-9


# --- relative_entropy -------------------------------------------------------


def test_relative_entropy_self_is_zero():
    rho = random_density((2, 2), 3, seed=2)
    assert relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-9)


def test_relative_entropy_pure_to_mixed():
    assert relative_entropy(pure_state([0.6, 0.8j], (2,)), maximally_mixed((2,))) == pytest.approx(1.0, abs=1e-12)


def test_relative_entropy_to_product_of_marginals_is_multi_information():
    rho = make_ghz_state(3, 0.5)
    marginals = [partial_trace(rho, [i]) for i in (1, 2, 3)]
    prod = tensor_product(tensor_product(marginals[0], marginals[1]), marginals[2])
    oracle = 3.0 - shannon_bits([0.5625] + [0.0625] * 7)
    assert relative_entropy(rho, prod) == pytest.approx(oracle, abs=1e-10)
    assert relative_entropy(rho, prod) == pytest.approx(0.783083, abs=1e-6)
    assert multi_information(rho) == pytest.approx(oracle, abs=1e-10)


def test_relative_entropy_infinite_off_support():
    assert relative_entropy(pure_state([1, 0], (2,)), pure_state([0, 1], (2,))) == math.inf


def test_relative_entropy_dimension_mismatch():
    with pytest.raises(DomainError):
        relative_entropy(maximally_mixed((2,)), maximally_mixed((2, 2)))


@settings(max_examples=30, deadline=None)
@given(s1=st.integers(0, 2**32), s2=st.integers(0, 2**32), r1=st.integers(1, 4), r2=st.integers(1, 4))
def test_relative_entropy_nonnegative(s1, s2, r1, r2):
    rho = random_density((2, 2), r1, s1)
    sigma = random_density((2, 2), r2, s2)
    d = relative_entropy(rho, sigma)
    assert d >= -1e-9
    if np.max(np.abs(rho.matrix - sigma.matrix)) > 1e-8:
        assert d > 0


# --- validation, randomness, symmetry ---------------------------------------


def test_validate_state_reports():
    assert validate_state(make_ghz_state(3, 0.2)).passed
    bad_trace = validate_state(DensityMatrix((2,), np.eye(2)))
    assert not bad_trace.passed
    assert bad_trace.trace_defect == pytest.approx(1.0)
    m = np.eye(2) / 2
    m[0, 1] = 1e-3
    assert not validate_state(DensityMatrix((2,), m)).passed


def test_random_density_properties():
    a = random_density((2,), 1, seed=11)
    assert von_neumann_entropy(a) == pytest.approx(0.0, abs=1e-10)
    b = random_density((2,), 2, seed=11)
    assert 0.0 < von_neumann_entropy(b) <= 1.0
    assert np.array_equal(random_density((2, 2), 3, 5).matrix, random_density((2, 2), 3, 5).matrix)
    with pytest.raises(DomainError):
        random_density((2,), 0, seed=1)


def test_random_symmetric_density():
    two = random_symmetric_density(2, seed=3)
    swap = permute_sites(two, [2, 1])
    assert np.max(np.abs(swap.matrix - two.matrix)) <= 1e-10
    three = random_symmetric_density(3, seed=3, rank=3)
    singles = [partial_trace(three, [i]).matrix for i in (1, 2, 3)]
    assert all(np.max(np.abs(s - singles[0])) <= 1e-10 for s in singles)
    pair_entropies = [von_neumann_entropy(partial_trace(three, c)) for c in ([1, 2], [1, 3], [2, 3])]
    assert max(pair_entropies) - min(pair_entropies) <= 1e-10
    assert permutation_asymmetry(three) <= 1e-10
    assert validate_state(three).passed


def test_json_round_trip():
    rho = random_density((2, 3), 2, seed=8)
    back = state_from_json(state_to_json(rho))
    assert back.local_dims == (2, 3)
    assert np.array_equal(back.matrix, rho.matrix)


# --- channels ---------------------------------------------------------------


def full_operator(k, site, dims):
    mats = [np.eye(d) for d in dims]
    mats[site - 1] = k
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


@pytest.mark.parametrize("kind", ["depolarizing", "amplitude_damping", "phase_damping"])
@pytest.mark.parametrize("param", [0.0, 0.3, 1.0])
def test_standard_channels_complete(kind, param):
    ch = standard_channel(kind, param)
    total = sum(k.conj().T @ k for k in ch.kraus_ops)
    assert np.max(np.abs(total - np.eye(2))) <= 1e-12


def test_standard_channel_limits():
    dep0 = standard_channel("depolarizing", 0.0)
    rho = random_density((2,), 2, seed=1)
    assert np.allclose(apply_local_channel(rho, 1, dep0).matrix, rho.matrix, atol=1e-14)
    ad = apply_local_channel(maximally_mixed((2,)), 1, standard_channel("amplitude_damping", 1.0))
    assert np.allclose(ad.matrix, [[1, 0], [0, 0]], atol=1e-14)
    pd = apply_local_channel(rho, 1, standard_channel("phase_damping", 1.0))
    assert abs(pd.matrix[0, 1]) < 1e-14 and abs(pd.matrix[1, 0]) < 1e-14
    with pytest.raises(DomainError):
        standard_channel("depolarizing", 1.2)
    with pytest.raises(DomainError):
        standard_channel("bitflip", 0.2)


def test_identity_channel_leaves_state():
    rho = random_density((2, 2, 2), 3, seed=3)
    out = apply_local_channel(rho, 2, identity_channel())
    assert np.allclose(out.matrix, rho.matrix, atol=1e-14)


def test_depolarizing_product_state_stays_product():
    prod = tensor_product(random_density((2,), 2, 1), random_density((2,), 1, 2))
    out = apply_local_channel(prod, 1, standard_channel("depolarizing", 1.0))
    assert multi_information(out) == pytest.approx(0.0, abs=1e-10)


def test_depolarizing_one_site_of_ghz_reduces_total_correlations():
    rho = make_ghz_state(3, 0.0)
    out = apply_local_channel(rho, 2, standard_channel("depolarizing", 1.0))
    before, after = multi_information(rho), multi_information(out)
    assert before == pytest.approx(3.0, abs=1e-10)
    assert after < before - 1e-3
    # GHZ_3 with one site replaced by I/2: classically correlated pair (x) I/2
    assert after == pytest.approx(1.0, abs=1e-10)


def test_channel_dimension_mismatch():
    rho = random_density((3, 2), 2, seed=1)
    with pytest.raises(DomainError):
        apply_local_channel(rho, 1, standard_channel("depolarizing", 0.5))
    with pytest.raises(DomainError):
        KrausChannel((np.eye(2) * 2,), 2)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32), site=st.integers(1, 3), param=st.floats(0, 1))
def test_local_channel_matches_full_operator(seed, site, param):
    rho = random_density((2, 2, 2), 4, seed)
    ch = standard_channel("amplitude_damping", param)
    ops = [full_operator(k, site, (2, 2, 2)) for k in ch.kraus_ops]
    expected = sum(o @ rho.matrix @ o.conj().T for o in ops)
    out = apply_local_channel(rho, site, ch)
    assert np.allclose(out.matrix, expected, atol=1e-13)
    assert abs(np.trace(out.matrix) - 1) <= 1e-10


def test_concurrent_evaluation_is_deterministic():
    states = [random_density((2, 2, 2), 3, s) for s in range(8)]
    serial = [von_neumann_entropy(r) for r in states]
    with ThreadPoolExecutor(4) as pool:
        threaded = list(pool.map(von_neumann_entropy, states))
    assert threaded == serial
