import numpy as np
import pytest

from confmax.geometry import FRAME, haar_sample
from confmax.polynomials import EntryPoly, entry_matrix, matmul
from scipy.linalg import expm


def _random_poly(rng, n=6):
    terms = {}
    for _ in range(n):
        key = tuple(int(v) for v in rng.integers(0, 3, 4)) + (int(rng.integers(-2, 3)),)
        terms[key] = complex(rng.standard_normal(), rng.standard_normal())
    return EntryPoly(terms)


def test_ring_operations_match_pointwise(rng):
    p, q = _random_poly(rng), _random_poly(rng)
    pts = haar_sample(rng, 10)
    assert np.allclose((p * q)(pts), p(pts) * q(pts))
    assert np.allclose((p + q)(pts), p(pts) + q(pts))
    assert np.allclose((p - q)(pts), p(pts) - q(pts))
    assert np.allclose((p ** 3)(pts), p(pts) ** 3)


def test_det_power_is_the_determinant(rng):
    pts = haar_sample(rng, 5)
    u = entry_matrix()
    det = u[0][0] * u[1][1] - u[0][1] * u[1][0]
    assert np.allclose(det(pts), EntryPoly.det_power(1)(pts))
    assert np.allclose((EntryPoly.det_power(-2) * det * det)(pts), 1)


def test_left_derivative_matches_finite_difference(rng):
    p = _random_poly(rng)
    pts = haar_sample(rng, 5)
    h = 1e-5
    for x in FRAME:
        fd = (p(pts @ expm(h * x)) - p(pts @ expm(-h * x))) / (2 * h)
        assert np.allclose(p.left_derivative(x)(pts), fd, atol=1e-8)


def test_compose_inverse_and_conjugation(rng):
    p = _random_poly(rng)
    pts = haar_sample(rng, 5)
    assert np.allclose(p.compose_inverse()(pts), p(np.linalg.inv(pts)))
    assert np.allclose(p.conj_on_unitary()(pts), np.conj(p(pts)))


def test_degrees():
    a = EntryPoly.entry(0, 0) * EntryPoly.entry(1, 1) * EntryPoly.det_power(1)
    assert a.degree() == 4
    assert a.entry_degree() == 2


def test_matmul_of_entry_matrices(rng):
    u = entry_matrix()
    sq = matmul(u, u)
    pts = haar_sample(rng, 3)
    for i in range(2):
        for j in range(2):
            assert np.allclose(sq[i][j](pts), (pts @ pts)[:, i, j])


def test_entry_index_validation():
    with pytest.raises((ValueError, IndexError)):
        EntryPoly.entry(2, 0)
