import numpy as np
import pytest

from sqbath.linalg import jacobi_eigh, spectral, trace_distance


def random_hermitian(rng, dim, scale=1.0):
    g = rng.normal(size=(dim, dim)) + 1.0j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (g + g.conj().T)


def test_jacobi_matches_lapack_oracle():
    rng = np.random.default_rng(11)
    for dim in (2, 3, 4, 5, 6, 8):
        for _ in range(6):
            mat = random_hermitian(rng, dim)
            w, v, resid = jacobi_eigh(mat)
            w_ref = np.linalg.eigvalsh(mat)
            assert np.allclose(w, w_ref, atol=1e-10 * max(1.0, abs(w_ref).max()))
            assert resid < 1e-10 * max(1.0, abs(w_ref).max())


def test_jacobi_eigenvectors_orthonormal_and_consistent():
    rng = np.random.default_rng(12)
    mat = random_hermitian(rng, 6)
    w, v, _ = jacobi_eigh(mat)
    assert np.allclose(v.conj().T @ v, np.eye(6), atol=1e-10)
    assert np.allclose(mat @ v, v @ np.diag(w), atol=1e-9)
    assert np.all(np.diff(w) >= -1e-12)


def test_jacobi_exact_on_diagonal_input():
    w, v, resid = jacobi_eigh(np.diag([3.0, -1.0, 2.0]).astype(complex))
    assert np.array_equal(w, np.array([-1.0, 2.0, 3.0]))
    assert resid == 0.0


def test_jacobi_scale_invariance_of_convergence():
    rng = np.random.default_rng(13)
    mat = random_hermitian(rng, 5, scale=1e-8)
    w, _, _ = jacobi_eigh(mat)
    assert np.allclose(w, np.linalg.eigvalsh(mat), atol=1e-18)


def test_jacobi_rejects_bad_input():
    with pytest.raises(ValueError):
        jacobi_eigh(np.zeros((2, 3)))
    skew = np.array([[0.0, 1.0], [-1.0, 0.0]])
    with pytest.raises(ValueError):
        jacobi_eigh(skew)


def test_spectral_result_fields():
    mat = np.diag([1.0, 0.5]).astype(complex)
    res = spectral(mat)
    assert np.allclose(res.eigenvalues, [0.5, 1.0])
    assert res.residual <= 1e-12


def test_trace_distance_known_values():
    p = np.diag([1.0, 0.0]).astype(complex)
    q = np.diag([0.0, 1.0]).astype(complex)
    assert trace_distance(p, q) == pytest.approx(1.0, abs=1e-12)
    assert trace_distance(p, p) == pytest.approx(0.0, abs=1e-14)
    # pure states: distance = sqrt(1 - |overlap|^2) = sin(theta/2)
    theta = 0.7
    vec = np.array([np.cos(theta / 2.0), np.sin(theta / 2.0)], dtype=complex)
    r = np.outer(vec, vec.conj())
    assert trace_distance(p, r) == pytest.approx(abs(np.sin(theta / 2.0)),
                                                 abs=1e-12)


def test_trace_distance_matches_eigvalsh_oracle():
    rng = np.random.default_rng(14)
    for _ in range(10):
        g1 = rng.normal(size=(4, 4)) + 1.0j * rng.normal(size=(4, 4))
        g2 = rng.normal(size=(4, 4)) + 1.0j * rng.normal(size=(4, 4))
        p = g1 @ g1.conj().T
        p /= np.trace(p).real
        q = g2 @ g2.conj().T
        q /= np.trace(q).real
        ref = 0.5 * np.abs(np.linalg.eigvalsh(p - q)).sum()
        assert trace_distance(p, q) == pytest.approx(ref, abs=1e-10)
