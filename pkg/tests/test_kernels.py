import math

import numpy as np
import pytest

from confmax import _kernels as K
from confmax import conformal as C
from confmax import fields as F
from confmax.geometry import haar_sample
from confmax.polynomials import EntryPoly, evaluate_many

needs_numba = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba not installed")


def _table(rng, n_terms=40, nslots=3):
    exps = rng.integers(0, 4, (n_terms, 5))
    exps[:, 4] = rng.integers(-3, 4, n_terms)
    coefs = rng.standard_normal(n_terms) + 1j * rng.standard_normal(n_terms)
    slots = rng.integers(0, nslots, n_terms)
    return exps.astype(np.int64), coefs, slots.astype(np.int64), nslots


@needs_numba
def test_poly_eval_numba_matches_numpy(rng):
    pts = haar_sample(rng, 200)
    args = _table(rng)
    a = K.poly_eval_numpy(*args, pts)
    b = K.poly_eval_numba(*args, pts)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-13)


def test_poly_eval_against_direct_formula(rng):
    pts = rng.standard_normal((10, 2, 2)) + 1j * rng.standard_normal((10, 2, 2))
    exps, coefs, slots, n = _table(rng, 5, 1)
    det = np.linalg.det(pts)
    want = sum(c * pts[:, 0, 0] ** e[0] * pts[:, 0, 1] ** e[1] * pts[:, 1, 0] ** e[2]
               * pts[:, 1, 1] ** e[3] * det ** float(e[4]) for c, e in zip(coefs, exps))
    assert np.allclose(K.poly_eval(exps, coefs, slots, n, pts)[:, 0], want)


@needs_numba
def test_mobius_numba_matches_numpy(rng):
    g = C.random_g1(rng, 1.2).matrix
    Z = haar_sample(rng, 100)
    for a, b in zip(K.mobius_numpy(g, Z), K.mobius_numba(g, Z)):
        assert np.allclose(a, b, rtol=1e-11, atol=1e-12)


@needs_numba
def test_compensated_sums(rng):
    v = rng.standard_normal(10000) * 10.0 ** rng.integers(-8, 8, 10000)
    v = v + 1j * v[::-1]
    exact = complex(math.fsum(v.real), math.fsum(v.imag))
    assert K.compensated_sum_numpy(v) == exact
    assert abs(K.compensated_sum_numba(v) - exact) <= 1e-15 * np.abs(v).sum()


def test_frame_coords_kernel_shape(rng):
    Y = rng.standard_normal((3, 5, 2, 2)) + 0j
    assert K.frame_coords(Y).shape == (3, 5, 4)


def test_evaluate_many_handles_empty_and_zero_polys(rng):
    pts = haar_sample(rng, 4)
    out = evaluate_many([EntryPoly.zero(), EntryPoly.const(2.0)], pts)
    assert np.allclose(out, [[0, 2]] * 4)


def test_thread_cap_from_env(monkeypatch):
    monkeypatch.setenv("CONFMAX_THREADS", "1")
    K.set_threads_from_env()
    if K.HAVE_NUMBA:
        import numba
        assert numba.get_num_threads() == 1


def test_exact_fields_agree_across_backends(rng):
    # high-degree evaluation through whichever backend is active vs the numpy one
    w = F.maxwell_basis((5, "R", 1))
    pts = haar_sample(rng, 30)
    exps, coefs, slots = [], [], []
    for i, c in enumerate(w.coeffs):
        e, cc, s = c.table(i)
        exps.append(e), coefs.append(cc), slots.append(s)
    ref = K.poly_eval_numpy(np.concatenate(exps), np.concatenate(coefs), np.concatenate(slots), 6, pts)
    assert np.allclose(w.evaluate(pts), ref, rtol=1e-12, atol=1e-12)
