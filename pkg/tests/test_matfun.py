import numpy as np
import pytest

from spdid import eig_sym, sym_fn, sym_inv_sqrt, sym_log, sym_pow, sym_sqrt, validate_spd
from spdid.core import DomainError
from support import random_orthogonal, random_spd


def test_eig_identity():
    spec = eig_sym(validate_spd(np.eye(2)))
    np.testing.assert_array_equal(spec.eigenvalues, [1.0, 1.0])
    np.testing.assert_array_equal(spec.eigenvectors, np.eye(2))


def test_eig_diagonal():
    spec = eig_sym(validate_spd(np.diag([4.0, 9.0])))
    np.testing.assert_allclose(spec.eigenvalues, [4.0, 9.0])


def test_eig_2x2_hand_computed():
    spec = eig_sym(validate_spd([[2.0, 1.0], [1.0, 2.0]]))
    np.testing.assert_allclose(spec.eigenvalues, [1.0, 3.0], atol=1e-12)
    s = 1 / np.sqrt(2)
    np.testing.assert_allclose(spec.eigenvectors[:, 0], [s, -s], atol=1e-12)
    np.testing.assert_allclose(spec.eigenvectors[:, 1], [s, s], atol=1e-12)


def test_spectrum_invariants_random():
    rng = np.random.default_rng(11)
    for n in (2, 5, 20):
        a = random_spd(rng, n)
        spec = eig_sym(a)
        assert np.all(np.diff(spec.eigenvalues) >= 0)
        assert np.all(spec.eigenvalues > 0)
        v = spec.eigenvectors
        assert np.abs(v.T @ v - np.eye(n)).max() <= 1e-8
        scale = 1 + np.abs(a.entries).max()
        assert np.abs((v * spec.eigenvalues) @ v.T - a.entries).max() <= 1e-8 * scale


def test_sym_fn_identity_and_diagonal():
    np.testing.assert_allclose(
        sym_fn(validate_spd(np.eye(3)), np.exp), np.e * np.eye(3), atol=1e-14
    )
    np.testing.assert_allclose(
        sym_fn(validate_spd(np.diag([4.0, 9.0])), np.sqrt), np.diag([2.0, 3.0]), atol=1e-12
    )


def test_sym_fn_square_matches_matmul():
    a = validate_spd([[2.0, 1.0], [1.0, 2.0]])
    np.testing.assert_allclose(
        sym_fn(a, lambda x: x**2), a.entries @ a.entries, atol=1e-12
    )


def test_sym_fn_domain_error():
    a = validate_spd(np.diag([0.5, 2.0]))
    with pytest.raises(DomainError):
        sym_fn(a, lambda x: np.log(x - 1.0))


def test_pow_one_recovers_input():
    rng = np.random.default_rng(2)
    a = random_spd(rng, 10)
    assert np.abs(sym_pow(a, 1.0).entries - a.entries).max() <= 1e-12 * (
        1 + np.abs(a.entries).max()
    )


def test_sqrt_and_inv_sqrt_diagonal():
    a = validate_spd(np.diag([4.0, 9.0]))
    np.testing.assert_allclose(sym_sqrt(a).entries, np.diag([2.0, 3.0]), atol=1e-12)
    np.testing.assert_allclose(
        sym_inv_sqrt(a).entries, np.diag([0.5, 1 / 3]), atol=1e-12
    )


def test_log_eigenvalues():
    lam = np.linalg.eigvalsh(sym_log(validate_spd([[2.0, 1.0], [1.0, 2.0]])))
    np.testing.assert_allclose(lam, [0.0, np.log(3.0)], atol=1e-12)


def test_sqrt_squares_back():
    rng = np.random.default_rng(5)
    for n in (2, 20, 200):
        a = random_spd(rng, n)
        r = sym_sqrt(a).entries
        scale = 1 + np.abs(a.entries).max()
        assert np.abs(r @ r - a.entries).max() <= 1e-8 * scale


def test_power_addition():
    rng = np.random.default_rng(6)
    a = random_spd(rng, 30)
    scale = 1 + np.abs(a.entries).max()
    for p in (-0.5, 0.3, 0.5, 1.0):
        for q in (-0.5, 0.3, 0.5, 1.0):
            lhs = sym_pow(a, p).entries @ sym_pow(a, q).entries
            rhs = sym_pow(a, p + q).entries
            # same eigenbasis, so difference is pure round-off
            assert np.abs(lhs - rhs).max() <= 1e-8 * scale


def test_log_exp_inversion():
    rng = np.random.default_rng(8)
    a = random_spd(rng, 40)
    log_a = sym_log(a)
    lam, vec = np.linalg.eigh(log_a)
    back = (vec * np.exp(lam)) @ vec.T
    assert np.abs(back - a.entries).max() <= 1e-8 * (1 + np.abs(a.entries).max())


def test_orthogonal_congruence():
    rng = np.random.default_rng(9)
    a = random_spd(rng, 15)
    q = random_orthogonal(rng, 15)
    rotated = validate_spd(q @ a.entries @ q.T)
    for p in (0.5, -0.5, 0.3):
        lhs = sym_pow(rotated, p).entries
        rhs = q @ sym_pow(a, p).entries @ q.T
        assert np.abs(lhs - rhs).max() <= 1e-8 * (1 + np.abs(a.entries).max())


def test_outputs_exactly_symmetric():
    rng = np.random.default_rng(10)
    a = random_spd(rng, 17)
    for m in (sym_pow(a, 0.37).entries, sym_log(a), sym_fn(a, np.sqrt)):
        np.testing.assert_array_equal(m, m.T)


def test_power_cache_returns_same_object():
    rng = np.random.default_rng(12)
    a = random_spd(rng, 6)
    assert sym_pow(a, 0.5) is sym_pow(a, 0.5)
    assert eig_sym(a) is eig_sym(a)
