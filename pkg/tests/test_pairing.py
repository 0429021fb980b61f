import numpy as np
import pytest

from confmax import conformal as C
from confmax import fields as F
from confmax import pairing as P
from confmax.rep_core import psi_poly


def _minus_i_pair():
    a = F.maxwell_basis((1, "L", 1))
    b = F.maxwell_basis((0, "R", -1))
    return a, F.linear_combination([a, b], [0.4, 1.0 - 0.5j])


def test_norm_examples():
    r = P.hermitian_pair(*(F.maxwell_basis((0, "L", 1)),) * 2)
    assert r.in_pi2 == pytest.approx(-8, rel=1e-12)
    r = P.hermitian_pair(*(F.maxwell_basis((0, "R", 1)),) * 2)
    assert r.in_pi2 == pytest.approx(8, rel=1e-12)


@pytest.mark.parametrize("k", range(4))
def test_expected_norm_formula(k):
    lab = F.MaxwellBasisLabel(k, "L", -1)
    assert P.expected_norm(lab) / P.PI2 == pytest.approx(-(4 * k + 8) / (k + 1))
    assert P.expected_norm((k, "R", -1)) == -P.expected_norm(lab)


def test_pairing_is_hermitian():
    w, mu = _minus_i_pair()
    a = P.hermitian_pair(w, mu).value
    b = P.hermitian_pair(mu, w).value
    assert a == pytest.approx(np.conj(b), abs=1e-12)


def test_pairing_is_sesquilinear():
    w, mu = _minus_i_pair()
    c = 0.3 + 2j
    lhs = P.hermitian_pair(w, mu * c)
    mu_c = mu * c
    assert lhs.value == pytest.approx(np.conj(c) * P.hermitian_pair(w, mu).value, abs=1e-12)
    w_c = F.linear_combination([w], [c])
    assert P.hermitian_pair(w_c, mu_c).value == pytest.approx(abs(c) ** 2 * P.hermitian_pair(w, mu).value)


@pytest.mark.parametrize("shift", [dict(f=psi_poly(2, 0)), dict(f=psi_poly(1, 3) * 2j),
                                   dict(c1=1.3), dict(c4=0.7 - 1j), dict(c1=-0.5, c4=2.0)])
def test_pairing_does_not_depend_on_potential(shift):
    w, mu = _minus_i_pair()
    base = P.hermitian_pair(w, mu).value
    alt = P.shifted_potential(w.potential, **shift)
    assert P.hermitian_pair(w, mu, potential=alt).value == pytest.approx(base, abs=1e-12)


def test_eigenspace_contract():
    plus = F.maxwell_basis((0, "L", -1))
    minus = F.maxwell_basis((0, "L", 1))
    with pytest.raises(P.EigenspaceError):
        P.hermitian_pair(plus, minus)
    with pytest.raises(P.EigenspaceError):
        P.hermitian_pair(plus, plus, same_eigenspace=-1)
    assert P.eigen_sign(plus) == 1 and P.eigen_sign(minus) == -1
    assert P.eigen_sign(plus + minus) == 0
    with pytest.raises(P.EigenspaceError):
        P.gram_matrix([(0, "L", 1), (0, "L", -1)])


def test_missing_potential():
    w = F.maxwell_basis((0, "L", 1))
    bare = F.FormField(2, w.coeffs)
    with pytest.raises(P.MissingPotentialError):
        P.hermitian_pair(bare, w)


def test_gram_matrix_examples():
    rep = P.gram_matrix([(k, "L", 1) for k in range(4)])
    diag = np.real(np.diag(rep.matrix)) / P.PI2
    assert np.allclose(diag, [-8, -6, -16 / 3, -5], rtol=1e-8)
    off = rep.matrix - np.diag(np.diag(rep.matrix))
    assert np.max(np.abs(off)) <= 1e-8 * np.max(np.abs(diag))
    d = rep.to_dict()
    assert d["labels"] == ["L+0", "L+1", "L+2", "L+3"]
    assert len(d["matrix_pi2"]) == 4 and len(d["matrix_pi2"][0][0]) == 2


def test_fixed_order_reports_error_estimate():
    w = F.maxwell_basis((2, "L", 1))
    r = P.hermitian_pair(w, w, order=24)
    assert r.quadrature_order == 24 and r.estimated_error >= 0
    assert r.value == pytest.approx(P.expected_norm((2, "L", 1)), rel=1e-10)


def test_invariance_under_k_and_near_identity(rng):
    w, mu = _minus_i_pair()
    rep = P.invariance_check(C.random_k(rng), w, mu)
    assert rep.rel_error <= 1e-10
    rep = P.invariance_check(C.random_near_identity(rng, 0.4), w, w)
    assert rep.rel_error <= 1e-6
    assert rep.to_dict()["quadratureOrder"] >= 32
