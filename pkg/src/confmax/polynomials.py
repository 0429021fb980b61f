"""Exact coefficient functions on GL(2, C).

An :class:`EntryPoly` is a finite sum of monomials
``u11^a u12^b u21^c u22^d det(u)^p`` with complex coefficients and integer
``p`` of either sign.  This class of functions contains every matrix
coefficient of U(2), is closed under products, left-invariant
differentiation, composition with ``u -> u^-1`` and (on U(2)) complex
conjugation, which is everything the exterior calculus on U(2) needs.

Coefficients are stored as Python complex numbers; every coefficient that
arises from the constructions in this package is a Gaussian rational with
a small denominator, so arithmetic on them is exact in binary floating
point.
"""
from collections import defaultdict

import numpy as np

from . import _kernels


class EntryPoly:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for key, c in terms.items():
                c = complex(c)
                if c != 0:
                    clean[tuple(int(v) for v in key)] = c
        self.terms = clean

    # -- construction -------------------------------------------------------
    @classmethod
    def const(cls, c):
        return cls({(0, 0, 0, 0, 0): c})

    @classmethod
    def entry(cls, i, j):
        """The coordinate function u -> u[i, j] (0-based)."""
        if i not in (0, 1) or j not in (0, 1):
            raise ValueError(f"entry index ({i}, {j}) outside a 2x2 matrix")
        key = [0, 0, 0, 0, 0]
        key[2 * i + j] = 1
        return cls({tuple(key): 1})

    @classmethod
    def det_power(cls, p):
        return cls({(0, 0, 0, 0, p): 1})

    @classmethod
    def zero(cls):
        return cls()

    # -- algebra ------------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, EntryPoly):
            other = EntryPoly.const(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return EntryPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return EntryPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, EntryPoly):
            other = complex(other)
            return EntryPoly({k: c * other for k, c in self.terms.items()})
        out = defaultdict(complex)
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                out[tuple(a + b for a, b in zip(k1, k2))] += c1 * c2
        return EntryPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = EntryPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def degree(self):
        """Largest total entry degree of a monomial (det counted as 2)."""
        if not self.terms:
            return 0
        return max(a + b + c + d + 2 * abs(p) for a, b, c, d, p in self.terms)

    def entry_degree(self):
        """Largest total entry degree ignoring det powers (the degree on SU(2))."""
        if not self.terms:
            return 0
        return max(a + b + c + d for a, b, c, d, _ in self.terms)

    # -- calculus -----------------------------------------------------------
    def left_derivative(self, x):
        """x^L f(u) = d/dt f(u exp(t x)) at t = 0, exactly.

        ``x`` is any complex 2x2 matrix; the derivative is complex-linear in
        ``x`` because f extends holomorphically to GL(2, C).
        """
        x = np.asarray(x, dtype=np.complex128)
        tr = x[0, 0] + x[1, 1]
        # d/dt of each entry of u exp(tx): (u x)_ij = sum_k u_ik x_kj
        entry_rates = {
            0: {0: x[0, 0], 1: x[1, 0]},   # (ux)_11 = u11 x11 + u12 x21
            1: {0: x[0, 1], 1: x[1, 1]},   # (ux)_12 = u11 x12 + u12 x22
            2: {2: x[0, 0], 3: x[1, 0]},   # (ux)_21 = u21 x11 + u22 x21
            3: {2: x[0, 1], 3: x[1, 1]},   # (ux)_22 = u21 x12 + u22 x22
        }
        out = defaultdict(complex)
        for key, c in self.terms.items():
            if key[4] and tr != 0:
                out[key] += c * key[4] * tr
            for var in range(4):
                e = key[var]
                if e == 0:
                    continue
                for src, rate in entry_rates[var].items():
                    if rate == 0:
                        continue
                    new = list(key)
                    new[var] -= 1
                    new[src] += 1
                    out[tuple(new)] += c * e * rate
        return EntryPoly(out)

    def compose_inverse(self):
        """The function u -> f(u^-1), with u^-1 = adj(u) / det(u)."""
        out = {}
        for (a, b, c, d, p), coef in self.terms.items():
            sign = -1 if (b + c) % 2 else 1
            key = (d, b, c, a, -p - (a + b + c + d))
            out[key] = out.get(key, 0) + sign * coef
        return EntryPoly(out)

    def conj_on_unitary(self):
        """A function agreeing with conj(f) on U(2) (uses conj(u) = u^-T)."""
        out = {}
        for (a, b, c, d, p), coef in self.terms.items():
            sign = -1 if (b + c) % 2 else 1
            key = (d, c, b, a, -p - (a + b + c + d))
            out[key] = out.get(key, 0) + sign * coef.conjugate()
        return EntryPoly(out)

    # -- evaluation ---------------------------------------------------------
    def table(self, slot=0):
        keys = list(self.terms)
        exps = np.array(keys, dtype=np.int64).reshape(-1, 5)
        coefs = np.array([self.terms[k] for k in keys], dtype=np.complex128)
        slots = np.full(len(keys), slot, dtype=np.int64)
        return exps, coefs, slots

    def __call__(self, m):
        m = np.asarray(m, dtype=np.complex128)
        single = m.ndim == 2
        pts = m.reshape(-1, 2, 2)
        exps, coefs, slots = self.table()
        vals = _kernels.poly_eval(exps, coefs, slots, 1, pts)[:, 0]
        return vals[0] if single else vals.reshape(m.shape[:-2])

    def __repr__(self):
        if not self.terms:
            return "EntryPoly(0)"
        parts = []
        for (a, b, c, d, p), coef in sorted(self.terms.items()):
            mono = "".join(f"*{n}^{e}" for n, e in
                           zip(("u11", "u12", "u21", "u22", "det"), (a, b, c, d, p)) if e)
            parts.append(f"({coef:g}){mono}")
        return "EntryPoly(" + " + ".join(parts) + ")"


def evaluate_many(polys, m):
    """Evaluate a list of EntryPoly at points ``m`` (N,2,2) -> (N, len(polys))."""
    exps, coefs, slots = [], [], []
    for i, p in enumerate(polys):
        e, c, s = p.table(i)
        exps.append(e)
        coefs.append(c)
        slots.append(s)
    exps = np.concatenate(exps) if exps else np.zeros((0, 5), dtype=np.int64)
    coefs = np.concatenate(coefs) if coefs else np.zeros(0, dtype=np.complex128)
    slots = np.concatenate(slots) if slots else np.zeros(0, dtype=np.int64)
    return _kernels.poly_eval(exps, coefs, slots, len(polys), m)


def entry_matrix():
    """The 2x2 matrix of coordinate functions [[u11, u12], [u21, u22]]."""
    return [[EntryPoly.entry(0, 0), EntryPoly.entry(0, 1)],
            [EntryPoly.entry(1, 0), EntryPoly.entry(1, 1)]]


def matmul(a, b):
    """Product of 2x2 matrices whose entries may be EntryPoly or numbers."""
    return [[a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)] for i in range(2)]
