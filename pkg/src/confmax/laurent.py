"""Integer Laurent polynomials in one variable, stored densely.

``LaurentPoly(offset, coeffs)`` is ``sum(coeffs[i] * y**(offset + i))``.
Coefficients are Python ints kept in object arrays so products never
overflow.
"""
import numpy as np


def _as_obj(coeffs):
    arr = np.empty(len(coeffs), dtype=object)
    arr[:] = [int(c) for c in coeffs]
    return arr


class LaurentPoly:
    __slots__ = ("offset", "coeffs")

    def __init__(self, offset=0, coeffs=()):
        coeffs = _as_obj(coeffs)
        nz = [i for i, c in enumerate(coeffs) if c != 0]
        if not nz:
            self.offset, self.coeffs = 0, _as_obj([])
            return
        lo, hi = nz[0], nz[-1]
        self.offset = int(offset) + lo
        self.coeffs = coeffs[lo:hi + 1]

    @classmethod
    def monomial(cls, exp, c=1):
        return cls(exp, [c])

    @classmethod
    def from_dict(cls, d):
        d = {int(k): int(v) for k, v in d.items() if v}
        if not d:
            return cls()
        lo, hi = min(d), max(d)
        return cls(lo, [d.get(e, 0) for e in range(lo, hi + 1)])

    def to_dict(self):
        return {self.offset + i: int(c) for i, c in enumerate(self.coeffs) if c != 0}

    def is_zero(self):
        return len(self.coeffs) == 0

    def min_exp(self):
        return self.offset

    def max_exp(self):
        return self.offset + len(self.coeffs) - 1

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly(0, [other])
        return self.offset == other.offset and list(self.coeffs) == list(other.coeffs)

    def __hash__(self):
        return hash((self.offset, tuple(self.coeffs)))

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly(0, [other])
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.offset, other.offset)
        hi = max(self.max_exp(), other.max_exp())
        out = _as_obj([0] * (hi - lo + 1))
        out[self.offset - lo:self.offset - lo + len(self.coeffs)] += self.coeffs
        out[other.offset - lo:other.offset - lo + len(other.coeffs)] += other.coeffs
        return LaurentPoly(lo, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.offset, -self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return LaurentPoly(self.offset, self.coeffs * int(other))
        if self.is_zero() or other.is_zero():
            return LaurentPoly()
        return LaurentPoly(self.offset + other.offset, np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def shift(self, n):
        """Multiply by y**n."""
        return LaurentPoly(self.offset + n, self.coeffs)

    def reflect(self):
        """Substitute y -> 1/y."""
        return LaurentPoly(-self.max_exp(), self.coeffs[::-1]) if not self.is_zero() else self

    def is_symmetric(self):
        return self == self.reflect()

    def __call__(self, y):
        total = 0
        for i, c in enumerate(self.coeffs):
            total += c * y ** (self.offset + i)
        return total

    def __repr__(self):
        if self.is_zero():
            return "0"
        terms = [f"{c}*y^{e}" for e, c in sorted(self.to_dict().items(), reverse=True)]
        return " + ".join(terms)
