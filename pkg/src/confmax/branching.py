"""Exact character identities for the dual pair inside the conformal group.

Series are truncated power series in x (or in 1/x for the mirrored family)
whose coefficients are integer Laurent polynomials in y.  All arithmetic is
in Python integers.

Conventions: both SU(2) factors of K are evaluated at u(y) = diag(y, 1/y),
the S cap K variable is x, and the Maxwell character is written after the
substitution x -> 1/x, so the lowest power is x^4.  The SO(3) character of
the harmonic space H^k is chi_{2k}(y).
"""
from dataclasses import dataclass

from .laurent import LaurentPoly
from .rep_core import su2_character


class XYSeries:
    """sum_{n=0}^{N} c_n x^(sign * n) with Laurent-polynomial coefficients c_n.

    ``sign = +1`` for ordinary power series, ``-1`` for series in 1/x.
    """

    __slots__ = ("order", "coeffs", "sign")

    def __init__(self, order, coeffs=None, sign=1):
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        self.order = int(order)
        self.sign = sign
        c = list(coeffs or [])[: order + 1]
        c += [LaurentPoly()] * (order + 1 - len(c))
        self.coeffs = [x if isinstance(x, LaurentPoly) else LaurentPoly(0, [x]) for x in c]

    @classmethod
    def from_terms(cls, order, terms, sign=1):
        """terms: iterable of (power n >= 0, LaurentPoly)."""
        out = [LaurentPoly() for _ in range(order + 1)]
        for n, c in terms:
            if 0 <= n <= order:
                out[n] = out[n] + c
        return cls(order, out, sign)

    def _check(self, other):
        if self.sign != other.sign:
            raise ValueError("cannot combine series in x with series in 1/x")
        return min(self.order, other.order)

    def __add__(self, other):
        n = self._check(other)
        return XYSeries(n, [a + b for a, b in zip(self.coeffs[:n + 1], other.coeffs[:n + 1])], self.sign)

    def __sub__(self, other):
        n = self._check(other)
        return XYSeries(n, [a - b for a, b in zip(self.coeffs[:n + 1], other.coeffs[:n + 1])], self.sign)

    def __mul__(self, other):
        if not isinstance(other, XYSeries):
            return XYSeries(self.order, [c * other for c in self.coeffs], self.sign)
        n = self._check(other)
        out = [LaurentPoly() for _ in range(n + 1)]
        for i, a in enumerate(self.coeffs[:n + 1]):
            if a.is_zero():
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return XYSeries(n, out, self.sign)

    def divide(self, den):
        """self / den; the constant term of den must be a monomial +-y^m."""
        n = self._check(den)
        d0 = den.coeffs[0]
        if len(d0.coeffs) != 1 or abs(d0.coeffs[0]) != 1:
            raise ZeroDivisionError("constant term of the divisor must be a unit monomial")
        unit_exp, unit_sign = d0.offset, int(d0.coeffs[0])
        q = []
        for m in range(n + 1):
            acc = self.coeffs[m]
            for j in range(1, m + 1):
                if not den.coeffs[j].is_zero():
                    acc = acc - den.coeffs[j] * q[m - j]
            q.append(acc.shift(-unit_exp) * unit_sign)
        return XYSeries(n, q, self.sign)

    def truncate(self, order):
        return XYSeries(min(order, self.order), self.coeffs, self.sign)

    def at_y(self, y):
        """Specialize y; returns the list of coefficients."""
        return [c(y) for c in self.coeffs]

    def first_mismatch(self, other):
        n = self._check(other)
        for i in range(n + 1):
            if self.coeffs[i] != other.coeffs[i]:
                return i
        return None

    def __eq__(self, other):
        return (isinstance(other, XYSeries) and self.sign == other.sign
                and self.order == other.order and self.first_mismatch(other) is None)

    def is_y_symmetric(self):
        return all(c.is_symmetric() for c in self.coeffs)

    def to_table(self):
        """{power: {y-exponent: coefficient}} for nonzero coefficients."""
        return {str(self.sign * n): {str(e): v for e, v in sorted(c.to_dict().items())}
                for n, c in enumerate(self.coeffs) if not c.is_zero()}


def _poly_in_x(order, terms, sign=1):
    """A polynomial in x (or 1/x) from {power: LaurentPoly or int}."""
    return XYSeries.from_terms(order, [(n, c if isinstance(c, LaurentPoly) else LaurentPoly(0, [c]))
                                       for n, c in terms.items()], sign)


Y = LaurentPoly.monomial


def maxw_character_series(order, sign=1):
    """sum_k chi_{k+2}(y) chi_k(y) x^(2k+4), truncated at x^order.

    ``sign=-1`` builds the mirrored family's series in 1/x.
    """
    if order < 4:
        raise ValueError("truncation order must be >= 4")
    terms = []
    k = 0
    while 2 * k + 4 <= order:
        terms.append((2 * k + 4, su2_character(k + 2) * su2_character(k)))
        k += 1
    return XYSeries.from_terms(order, terms, sign)


def rational_side_series(order, sign=1):
    """x^4 (y^4 - x^2 y^2 + y^2 + 1) / ((1 - x^2)(y^2 - x^2)(1 - x^2 y^2)), expanded in x."""
    if order < 4:
        raise ValueError("truncation order must be >= 4")
    num = _poly_in_x(order, {4: Y(4) + Y(2) + 1, 6: -Y(2)}, sign)
    d1 = _poly_in_x(order, {0: 1, 2: -1}, sign)
    d2 = _poly_in_x(order, {0: Y(2), 2: -1}, sign)
    d3 = _poly_in_x(order, {0: 1, 2: -Y(2)}, sign)
    return num.divide(d1 * d2 * d3)


def even_character_series(order, sign=1):
    """x^4 sum_k chi_{2k+2}(y) x^(2k)."""
    terms = []
    k = 0
    while 2 * k + 4 <= order:
        terms.append((2 * k + 4, su2_character(2 * k + 2)))
        k += 1
    return XYSeries.from_terms(order, terms, sign)


def discrete_series_character(k, order, sign=1):
    """x^(2k+2) / (1 - x^2) = sum_j x^(2k+2+2j): the S cap K character of the
    discrete series paired with H^k (in 1/x for the mirrored family)."""
    return XYSeries.from_terms(order, [(2 * k + 2 + 2 * j, LaurentPoly(0, [1]))
                                       for j in range(order // 2 + 1)], sign)


def dual_pair_side_series(order, sign=1):
    """sum_{k >= 1} chi_{2k}(y) x^(2k+2) / (1 - x^2)."""
    out = XYSeries(order, sign=sign)
    k = 1
    while 2 * k + 2 <= order:
        out = out + discrete_series_character(k, order, sign) * su2_character(2 * k)
        k += 1
    return out


@dataclass(frozen=True)
class BranchingReport:
    order: int
    sign: int
    sum_vs_rational: object
    rational_times_denominator: object
    sum_vs_dual_pair: object
    dimensions_ok: bool
    symmetric: bool
    lowest_power: int

    @property
    def success(self):
        return (self.sum_vs_rational is None and self.rational_times_denominator is None
                and self.sum_vs_dual_pair is None and self.dimensions_ok and self.symmetric)

    def to_dict(self):
        return {
            "order": self.order,
            "family": "+" if self.sign > 0 else "-",
            "firstMismatch": {
                "sum_vs_rational": self.sum_vs_rational,
                "rational_times_(1-x^2)_vs_even_characters": self.rational_times_denominator,
                "sum_vs_dual_pair": self.sum_vs_dual_pair,
            },
            "dimensionsAtY1": self.dimensions_ok,
            "ySymmetric": self.symmetric,
            "lowestPower": self.lowest_power,
            "success": self.success,
        }


def dual_pair_decomposition_check(order, sign=1):
    """Compare the three expansions of the Maxwell character to x^order, exactly."""
    s = maxw_character_series(order, sign)
    r = rational_side_series(order, sign)
    one_minus = _poly_in_x(order, {0: 1, 2: -1}, sign)
    e = even_character_series(order, sign)
    d = dual_pair_side_series(order, sign)
    at1 = s.at_y(1)
    dims = all(at1[n] == ((n - 4) // 2 + 3) * ((n - 4) // 2 + 1) if n >= 4 and n % 2 == 0 else at1[n] == 0
               for n in range(order + 1))
    lowest = next((n for n, c in enumerate(s.coeffs) if not c.is_zero()), None)
    return BranchingReport(order, sign, s.first_mismatch(r), (r * one_minus).first_mismatch(e),
                           s.first_mismatch(d), dims, s.is_y_symmetric() and r.is_y_symmetric(),
                           sign * lowest if lowest is not None else None)
