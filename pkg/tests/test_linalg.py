"""Small dense symplectic linear algebra helpers."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from sympind import inertia, signature, standard_j, sym_part
from sympind.linalg import (ExpCurve, kernel_basis, kernel_dimension,
                            random_orthogonal, random_symmetric,
                            random_symplectic, singular_values,
                            symplectic_defect, symplectic_inverse)


def test_standard_j_square():
    for n in (1, 2, 3):
        j = standard_j(n)
        assert j.shape == (2 * n, 2 * n)
        np.testing.assert_allclose(j @ j, -np.eye(2 * n), atol=1e-15)
        np.testing.assert_allclose(j.T, -j, atol=1e-15)


def test_standard_j_extended_blocks():
    j = standard_j(1, 2, extended=True)
    assert j.shape == (6, 6)
    np.testing.assert_allclose(j[:2, :2], standard_j(1), atol=1e-15)
    # the parameter pairing couples the two dual slots antisymmetrically
    np.testing.assert_allclose(j @ j, -np.eye(6), atol=1e-15)
    np.testing.assert_allclose(j.T, -j, atol=1e-15)


def test_inertia_constructed_spectrum():
    q = random_orthogonal(np.random.default_rng(5), 5)
    s = q @ np.diag([2.0, 0.5, 0.0, -1.0, -3.0]) @ q.T
    res = inertia(s)
    assert (res.positive, res.zero, res.negative) == (2, 1, 2)
    assert res.signature == 0
    assert signature(s) == 0


def test_signature_threshold_band():
    s = np.diag([1.0, 1e-12, -1.0])
    assert signature(s, tol_eig=1e-8) == 0
    assert inertia(s, tol_eig=1e-8).zero == 1
    assert signature(s, tol_eig=1e-14) == 1


def test_kernel_basis_orthonormal_and_annihilated():
    rng = np.random.default_rng(11)
    a = rng.standard_normal((5, 3))
    m = a @ a.T  # rank 3, kernel dimension 2
    basis = kernel_basis(m, tol_sv=1e-10)
    assert basis.shape == (5, 2)
    np.testing.assert_allclose(basis.T @ basis, np.eye(2), atol=1e-12)
    assert float(np.max(np.abs(m @ basis))) < 1e-10
    assert kernel_dimension(m, tol_sv=1e-10) == 2


def test_singular_values_descending():
    rng = np.random.default_rng(2)
    sv = singular_values(rng.standard_normal((4, 4)))
    assert np.all(np.diff(sv) <= 0)


def test_symplectic_inverse_vs_solve():
    rng = np.random.default_rng(7)
    j = standard_j(2)
    m = random_symplectic(rng, j)
    assert symplectic_defect(m, j) < 1e-12
    np.testing.assert_allclose(symplectic_inverse(m, j), np.linalg.inv(m),
                               atol=1e-10)


def test_random_orthogonal_is_orthogonal():
    q = random_orthogonal(np.random.default_rng(3), 4)
    np.testing.assert_allclose(q.T @ q, np.eye(4), atol=1e-12)


def test_exp_curve_matches_expm():
    rng = np.random.default_rng(9)
    j = standard_j(2)
    gen = j @ random_symmetric(rng, 4)
    curve = ExpCurve(gen)
    for phi in (-1.3, 0.0, 0.4, 2.7):
        np.testing.assert_allclose(curve(phi), expm(phi * gen), atol=1e-11)
    batch = curve(np.array([0.1, 0.2]))
    assert batch.shape == (2, 4, 4)
    np.testing.assert_allclose(batch[0], expm(0.1 * gen), atol=1e-11)


symmetric_entries = st.floats(min_value=-5.0, max_value=5.0,
                              allow_nan=False, allow_infinity=False)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_signature_odd_under_negation(seed):
    s = random_symmetric(np.random.default_rng(seed), 4)
    assert signature(-s) == -signature(s)
    assert abs(signature(s)) <= 4


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_signature_orthogonal_invariance(seed):
    rng = np.random.default_rng(seed)
    s = random_symmetric(rng, 4)
    q = random_orthogonal(rng, 4)
    assert signature(q @ s @ q.T) == signature(s)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_random_symplectic_preserves_form(seed):
    rng = np.random.default_rng(seed)
    j = standard_j(2)
    m = random_symplectic(rng, j)
    assert symplectic_defect(m, j) < 1e-9


def test_sym_part_idempotent():
    a = np.arange(9.0).reshape(3, 3)
    s = sym_part(a)
    np.testing.assert_allclose(s, s.T, atol=1e-15)
    np.testing.assert_allclose(sym_part(s), s, atol=1e-15)
