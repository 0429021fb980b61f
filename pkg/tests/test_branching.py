import pytest
import sympy as sp

from confmax import branching as B
from confmax.laurent import LaurentPoly
from confmax.rep_core import su2_character

x, y = sp.symbols("x y")


def _to_sympy(lp):
    return sum(sp.Integer(int(c)) * y ** e for e, c in lp.to_dict().items())


def test_laurent_arithmetic():
    a = LaurentPoly.from_dict({-1: 2, 3: 1})
    b = LaurentPoly.from_dict({1: 1, 0: -1})
    assert sp.expand(_to_sympy(a * b) - sp.expand(_to_sympy(a) * _to_sympy(b))) == 0
    assert (a + b) - b == a
    assert a.reflect().to_dict() == {1: 2, -3: 1}
    assert su2_character(3).is_symmetric()


def test_rational_side_against_sympy_series():
    N = 14
    expr = x ** 4 * (y ** 4 - x ** 2 * y ** 2 + y ** 2 + 1) / ((1 - x ** 2) * (y ** 2 - x ** 2) * (1 - x ** 2 * y ** 2))
    ser = sp.series(expr, x, 0, N + 1).removeO()
    ours = B.rational_side_series(N)
    for n in range(N + 1):
        want = sp.simplify(ser.coeff(x, n))
        got = _to_sympy(ours.coeffs[n])
        assert sp.simplify(want - got) == 0, n


def test_sum_side_coefficients():
    s = B.maxw_character_series(12)
    assert s.coeffs[4].to_dict() == {2: 1, 0: 1, -2: 1}
    assert s.coeffs[5].is_zero()
    # k = 1: chi_3 chi_1 = y^4 + 2 y^2 + 2 + 2 y^-2 + y^-4
    assert s.coeffs[6].to_dict() == {4: 1, 2: 2, 0: 2, -2: 2, -4: 1}


def test_identities_exact_to_order_40():
    for sign in (1, -1):
        rep = B.dual_pair_decomposition_check(40, sign)
        assert rep.success, rep.to_dict()
        assert rep.lowest_power == 4 * sign


def test_dimensions_at_y_equals_one():
    at1 = B.maxw_character_series(30).at_y(1)
    for k in range(14):
        assert at1[2 * k + 4] == (k + 3) * (k + 1)


def test_discrete_series_character():
    d = B.discrete_series_character(1, 10)
    assert [c(1) for c in d.coeffs] == [0, 0, 0, 0, 1, 0, 1, 0, 1, 0, 1]


def test_mirrored_family_is_series_in_inverse_x():
    plus, minus = B.maxw_character_series(20, 1), B.maxw_character_series(20, -1)
    assert [c.to_dict() for c in plus.coeffs] == [c.to_dict() for c in minus.coeffs]
    assert set(minus.to_table()) == {str(-n) for n in range(4, 21, 2)}
    # numerically, the mirrored sum at large x matches the rational function of 1/x
    xv, yv = 7.0, 1.3
    t = 1 / xv
    r = t ** 4 * (yv ** 4 - t ** 2 * yv ** 2 + yv ** 2 + 1) / ((1 - t ** 2) * (yv ** 2 - t ** 2) * (1 - t ** 2 * yv ** 2))
    val = sum(c(yv) * xv ** (-n) for n, c in enumerate(B.maxw_character_series(60, -1).coeffs))
    assert val == pytest.approx(r, rel=1e-12)


def test_series_errors():
    with pytest.raises(ValueError):
        B.maxw_character_series(3)
    with pytest.raises(ValueError):
        B.maxw_character_series(10, 1) + B.maxw_character_series(10, -1)
    with pytest.raises(ZeroDivisionError):
        B.rational_side_series(8).divide(B.XYSeries(8, [LaurentPoly(0, [2])]))


def test_first_mismatch_is_reported():
    s = B.maxw_character_series(12)
    broken = B.XYSeries(12, list(s.coeffs))
    broken.coeffs[8] = broken.coeffs[8] + LaurentPoly(0, [1])
    assert s.first_mismatch(broken) == 8
