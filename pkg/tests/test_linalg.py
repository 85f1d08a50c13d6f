"""Unit tests for the dense linear-algebra helpers.

Oracle values come from straight numpy calls (kron, eigvalsh) so the
helpers are checked against an independent route instead of themselves.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bellvar import linalg
from bellvar.linalg import (
    DIM_CAP,
    ID2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    apply,
    as_hermitian,
    as_ket,
    embed_local,
    expectation,
    fix_global_phase,
    haar_random_ket,
    inner_product,
    is_dichotomic,
    random_hermitian,
    spectral_decompose,
    tensor_product,
    top_eigenpair,
)

ATOL = 1e-10


def test_pauli_constants():
    np.testing.assert_array_equal(SIGMA_Z, np.diag([1.0, -1.0]))
    np.testing.assert_array_equal(SIGMA_X @ np.array([1.0, 0.0]), [0.0, 1.0])
    np.testing.assert_allclose(SIGMA_Y @ SIGMA_Y, ID2, atol=0)
    for p in (SIGMA_X, SIGMA_Y, SIGMA_Z):
        assert is_dichotomic(p)
    assert not is_dichotomic(np.diag([1.0, 0.5]))
    assert not is_dichotomic(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_as_ket_accepts_normalized_vectors():
    v = as_ket([1.0, 0.0])
    assert v.dtype == np.complex128
    assert v.shape == (2,)


def test_as_ket_rejects_bad_input():
    with pytest.raises(ValueError):
        as_ket([1.0, 1.0])  # not normalized
    with pytest.raises(ValueError):
        as_ket([0.5, 0.5, 0.5, 0.25, 0.25])  # length 5 is not a power of two
    with pytest.raises(ValueError):
        as_ket(np.zeros(4))


def test_as_ket_rejects_oversized_vectors():
    n = DIM_CAP * 2
    v = np.zeros(n)
    v[0] = 1.0
    with pytest.raises(ValueError):
        as_ket(v)


def test_as_hermitian_rejects_non_hermitian():
    with pytest.raises(ValueError):
        as_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        as_hermitian(np.ones((2, 3)))


def test_tensor_product_matches_kron_order():
    # site 0 is the leftmost factor: sigma_z (x) id flips nothing on site 1
    got = tensor_product(SIGMA_Z, ID2)
    np.testing.assert_array_equal(got, np.kron(SIGMA_Z, ID2))
    got2 = tensor_product([SIGMA_X, SIGMA_Y, SIGMA_Z])
    np.testing.assert_array_equal(got2, np.kron(np.kron(SIGMA_X, SIGMA_Y), SIGMA_Z))


def test_tensor_product_empty_rejected():
    with pytest.raises(ValueError):
        tensor_product([])


def test_embed_local_places_factor_at_site():
    a = random_hermitian(2, np.random.default_rng(7))
    for site, n_sites in [(0, 3), (1, 3), (2, 3)]:
        want = [ID2] * n_sites
        want[site] = a
        np.testing.assert_allclose(
            embed_local(a, site, n_sites),
            np.kron(np.kron(want[0], want[1]), want[2]),
            atol=0,
        )


def test_embed_local_rejects_bad_site():
    with pytest.raises(ValueError):
        embed_local(SIGMA_Z, 3, 3)
    with pytest.raises(ValueError):
        embed_local(SIGMA_Z, -1, 2)


def test_apply_and_inner_product():
    psi = as_ket([1.0, 0.0])
    np.testing.assert_allclose(apply(SIGMA_X, psi), [0.0, 1.0], atol=0)
    # vdot convention: first argument is conjugated
    u = as_ket([1 / np.sqrt(2), 1j / np.sqrt(2)])
    v = as_ket([1.0, 0.0])
    assert inner_product(u, v) == pytest.approx(1 / np.sqrt(2))
    with pytest.raises(ValueError):
        apply(SIGMA_X, as_ket([0.5, 0.5, 0.5, 0.5]))


def test_expectation_matches_rayleigh_quotient():
    rng = np.random.default_rng(11)
    for dim in (2, 4, 8):
        a = random_hermitian(dim, rng)
        psi = haar_random_ket(dim, rng)
        want = float(np.real(np.conj(psi) @ a @ psi))
        assert expectation(a, psi) == pytest.approx(want, abs=ATOL)


def test_expectation_rejects_complex_value():
    # a non-Hermitian operator should trip the imaginary-part guard rather
    # than silently truncating
    bad = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    psi = as_ket([1 / np.sqrt(2), 1j / np.sqrt(2)])
    with pytest.raises(ArithmeticError):
        expectation(bad, psi)


def test_fix_global_phase_first_amplitude_real_positive():
    v = np.array([0.0, 1j / np.sqrt(2), -1 / np.sqrt(2), 0.0])
    w = fix_global_phase(v)
    idx = np.flatnonzero(np.abs(w) > 1e-12)[0]
    assert w[idx].real > 0
    assert abs(w[idx].imag) < 1e-12
    # applying twice changes nothing
    np.testing.assert_allclose(fix_global_phase(w), w, atol=0)
    # norm preserved
    assert np.linalg.norm(w) == pytest.approx(1.0)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim_exp=st.integers(1, 4))
def test_top_eigenpair_agrees_with_eigvalsh(seed, dim_exp):
    dim = 2**dim_exp
    a = random_hermitian(dim, np.random.default_rng(seed))
    val, vec = top_eigenpair(a)
    want = float(np.linalg.eigvalsh(a)[-1])
    assert val == pytest.approx(want, abs=1e-9)
    residual = np.linalg.norm(a @ vec - val * vec)
    assert residual <= 1e-10 * max(1.0, abs(val))
    idx = np.flatnonzero(np.abs(vec) > 1e-12)[0]
    assert vec[idx].real > 0 and abs(vec[idx].imag) < 1e-12


def test_top_eigenpair_rejects_non_hermitian():
    with pytest.raises(ValueError):
        top_eigenpair(np.array([[0.0, 1.0], [0.0, 0.0]]))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim_exp=st.integers(1, 4))
def test_spectral_decompose_completeness_and_orthogonality(seed, dim_exp):
    dim = 2**dim_exp
    a = random_hermitian(dim, np.random.default_rng(seed))
    pairs = spectral_decompose(a)
    vals = [w for w, _ in pairs]
    assert vals == sorted(vals, reverse=True)
    total = sum(p for _, p in pairs)
    assert np.linalg.norm(total - np.eye(dim)) <= 1e-10
    rebuilt = sum(w * p for w, p in pairs)
    assert np.linalg.norm(rebuilt - a) <= 1e-9 * max(1.0, np.linalg.norm(a))
    for i, (_, p) in enumerate(pairs):
        for j, (_, q) in enumerate(pairs):
            prod = p @ q
            if i == j:
                assert np.linalg.norm(prod - p) <= 1e-9
            else:
                assert np.linalg.norm(prod) <= 1e-9


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_spectral_decompose_resolves_expectation(seed):
    a = random_hermitian(4, np.random.default_rng(seed))
    psi = haar_random_ket(4, np.random.default_rng(seed ^ 0x5EED))
    pairs = spectral_decompose(a)
    via_projectors = sum(w * expectation(p, psi) for w, p in pairs)
    assert via_projectors == pytest.approx(expectation(a, psi), abs=1e-10)


def test_spectral_decompose_groups_degenerate_levels():
    pairs = spectral_decompose(np.kron(SIGMA_Z, ID2))
    assert len(pairs) == 2
    for w, p in pairs:
        assert np.trace(p).real == pytest.approx(2.0, abs=1e-12)
        assert w in (pytest.approx(1.0), pytest.approx(-1.0))


def test_haar_random_ket_is_deterministic_and_normalized():
    u = haar_random_ket(8, np.random.default_rng(123))
    v = haar_random_ket(8, np.random.default_rng(123))
    np.testing.assert_array_equal(u, v)
    assert np.linalg.norm(u) == pytest.approx(1.0, abs=1e-12)
    w = haar_random_ket(8, np.random.default_rng(124))
    assert not np.allclose(u, w)


def test_random_hermitian_is_hermitian_and_seeded():
    a = random_hermitian(8, np.random.default_rng(5))
    b = random_hermitian(8, np.random.default_rng(5))
    np.testing.assert_array_equal(a, b)
    assert np.linalg.norm(a - a.conj().T) == 0.0


def test_dimension_cap_enforced_on_embedding():
    with pytest.raises(ValueError):
        embed_local(SIGMA_Z, 0, 13)  # 2**13 sites exceeds the cap


def test_module_reexports():
    assert linalg.DIM_CAP == 2**12
