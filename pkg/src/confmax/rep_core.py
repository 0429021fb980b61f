"""Finite-dimensional representation theory of SU(2) and U(2).

Symmetric powers, matrix coefficients, the sl(2) basis built from the
invariant frame, SU(2) characters and the K-type bookkeeping for
K = U(2) x U(2): Clebsch-Gordan decompositions, restriction to the diagonal
subgroup M, and the Frobenius multiplicity counts behind the list of
closed 2-forms.

Monomial basis of S^k(C^2): index ``i`` is ``z1^(k-i) z2^i``, so index 0 is
``e1^k`` and index ``k`` is ``e2^k``.  The inner product is the restriction
of the tensor-product inner product: the basis is orthogonal with
``||z1^(k-i) z2^i||^2 = 1 / C(k, i)``.
"""
from collections import Counter
from dataclasses import dataclass
from math import comb

import numpy as np

from .geometry import FRAME
from .laurent import LaurentPoly
from .polynomials import EntryPoly


class InvalidLabelError(ValueError):
    """A representation label violates a parity or range constraint."""


# ---------------------------------------------------------------------------
# sl(2) basis
# ---------------------------------------------------------------------------

E = (FRAME[1] - 1j * FRAME[2]) / 2
F = -(FRAME[1] + 1j * FRAME[2]) / 2
H = -1j * FRAME[0]
X4 = FRAME[3]

SL2_BASIS = {"e": E, "f": F, "h": H, "x4": X4,
             "x1": FRAME[0], "x2": FRAME[1], "x3": FRAME[2]}


def lie_element(x):
    """Resolve a basis name ('e', 'f', 'h', 'x1'..'x4') or pass a matrix through."""
    if isinstance(x, str):
        try:
            return SL2_BASIS[x]
        except KeyError:
            raise ValueError(f"unknown Lie algebra element {x!r}") from None
    return np.asarray(x, dtype=np.complex128)


# ---------------------------------------------------------------------------
# symmetric powers
# ---------------------------------------------------------------------------

def _sym_power_generic(k, u11, u12, u21, u22, one, zero):
    # column j is (u e1)^(k-j) (u e2)^j, polynomials indexed by the z2 power
    def mul(p, q):
        out = [zero] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            for j, b in enumerate(q):
                out[i + j] = out[i + j] + a * b
        return out

    ue1 = [u11, u21]
    ue2 = [u12, u22]
    pow1 = [[one]]
    pow2 = [[one]]
    for _ in range(k):
        pow1.append(mul(pow1[-1], ue1))
        pow2.append(mul(pow2[-1], ue2))
    cols = [mul(pow1[k - j], pow2[j]) for j in range(k + 1)]
    return [[cols[j][i] for j in range(k + 1)] for i in range(k + 1)]


def sym_power_matrix(k, u):
    """Matrix of S^k(u) in the monomial basis; multiplicative in u."""
    if k < 0:
        raise InvalidLabelError(f"symmetric power degree must be >= 0, got {k}")
    u = np.asarray(u, dtype=np.complex128)
    rows = _sym_power_generic(k, u[0, 0], u[0, 1], u[1, 0], u[1, 1], 1.0 + 0j, 0j)
    return np.array(rows, dtype=np.complex128)


def sym_power_differential(k, x):
    """dS^k(x) = d/dt S^k(exp(t x)) at t = 0, for any complex 2x2 x."""
    x = lie_element(x)
    out = np.zeros((k + 1, k + 1), dtype=np.complex128)
    for j in range(k + 1):
        a, b = k - j, j  # basis vector z1^a z2^b
        out[j, j] += a * x[0, 0] + b * x[1, 1]
        if a and j + 1 <= k:
            out[j + 1, j] += a * x[1, 0]
        if b:
            out[j - 1, j] += b * x[0, 1]
    return out


def sym_inner_weights(k):
    return np.array([1.0 / comb(k, i) for i in range(k + 1)])


def sym_inner(k, v, w):
    """Invariant inner product on S^k(C^2), linear in the first slot."""
    return complex(np.sum(np.asarray(v) * np.conj(w) * sym_inner_weights(k)))


# ---------------------------------------------------------------------------
# matrix coefficients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MatrixCoeffFn:
    """v -> det(v)^m <S^k(v) left, right> on U(2) (or GL(2, C))."""

    k: int
    m: int
    left: tuple
    right: tuple

    def __post_init__(self):
        if len(self.left) != self.k + 1 or len(self.right) != self.k + 1:
            raise InvalidLabelError("coefficient vectors must have length k + 1")

    def __call__(self, v):
        v = np.asarray(v, dtype=np.complex128)
        det = v[0, 0] * v[1, 1] - v[0, 1] * v[1, 0]
        sv = sym_power_matrix(self.k, v) @ np.asarray(self.left)
        return det ** self.m * sym_inner(self.k, sv, self.right)

    def to_entry_poly(self):
        """Expand into an :class:`EntryPoly` (exact)."""
        u = [[EntryPoly.entry(0, 0), EntryPoly.entry(0, 1)],
             [EntryPoly.entry(1, 0), EntryPoly.entry(1, 1)]]
        S = _sym_power_generic(self.k, u[0][0], u[0][1], u[1][0], u[1][1],
                               EntryPoly.const(1), EntryPoly.zero())
        wts = sym_inner_weights(self.k)
        out = EntryPoly.zero()
        for i in range(self.k + 1):
            ri = complex(np.conj(self.right[i])) * wts[i]
            if ri == 0:
                continue
            for j in range(self.k + 1):
                if self.left[j] != 0:
                    out = out + S[i][j] * (ri * complex(self.left[j]))
        return out * EntryPoly.det_power(self.m)


def left_invariant_derivative(x, f):
    """x^L f for a matrix coefficient, exactly.

    The det power contributes ``m tr(x)``; the symmetric-power part is
    differentiated by acting with dS^k(x) on the left vector.
    """
    x = lie_element(x)
    left = np.asarray(f.left, dtype=np.complex128)
    new_left = sym_power_differential(f.k, x) @ left + f.m * (x[0, 0] + x[1, 1]) * left
    return MatrixCoeffFn(f.k, f.m, tuple(complex(c) for c in new_left), f.right)


def _check_psi_label(k, l):
    if k < 0 or (l - k) % 2:
        raise InvalidLabelError(f"psi_(k,l) needs k >= 0 and l = k mod 2, got k={k}, l={l}")


def psi(k, l, v):
    """psi_(k,l)(v) = det(v)^((l-k)/2) * v21^k."""
    _check_psi_label(k, l)
    v = np.asarray(v, dtype=np.complex128)
    det = v[..., 0, 0] * v[..., 1, 1] - v[..., 0, 1] * v[..., 1, 0]
    return det ** ((l - k) // 2) * v[..., 1, 0] ** k


def psi_coeff(k, l):
    """psi_(k,l) as a :class:`MatrixCoeffFn` (left = e1^k, right = e2^k)."""
    _check_psi_label(k, l)
    left = [0j] * (k + 1)
    right = [0j] * (k + 1)
    left[0] = 1
    right[k] = 1
    return MatrixCoeffFn(k, (l - k) // 2, tuple(left), tuple(right))


def psi_poly(k, l):
    _check_psi_label(k, l)
    return EntryPoly({(0, 0, k, 0, (l - k) // 2): 1})


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------

def su2_character(k, y=None):
    """chi_k(diag(y, 1/y)) = y^k + y^(k-2) + ... + y^-k.

    With ``y=None`` the character is returned as an exact LaurentPoly.
    """
    if k < 0:
        raise InvalidLabelError(f"character degree must be >= 0, got {k}")
    if y is None:
        return LaurentPoly.from_dict({k - 2 * j: 1 for j in range(k + 1)})
    return sum(y ** (k - 2 * j) for j in range(k + 1))


# ---------------------------------------------------------------------------
# K-types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class KType:
    """tau_(p,q,r): S^p(C^2) (x) S^q(C^2) with central character z^r; r = q mod 2."""

    p: int
    q: int
    r: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise InvalidLabelError(f"K-type degrees must be >= 0: {self}")
        if (self.r - self.q) % 2:
            raise InvalidLabelError(f"K-type {tuple(self)} violates r = q (mod 2)")

    def __iter__(self):
        return iter((self.p, self.q, self.r))

    @property
    def dim(self):
        return (self.p + 1) * (self.q + 1)

    def __str__(self):
        return f"F^({self.p},{self.q},{self.r})"


def clebsch_gordan(a, b):
    """Degrees n with S^n in S^a (x) S^b."""
    return list(range(abs(a - b), a + b + 1, 2))


def tensor_decompose(a, b):
    """F^a (x) F^b as a multiset (Counter) of KTypes."""
    out = Counter()
    for p in clebsch_gordan(a.p, b.p):
        for q in clebsch_gordan(a.q, b.q):
            out[KType(p, q, a.r + b.r)] += 1
    return out


def restrict_to_M(a):
    """F^(p,q,r) restricted to the diagonal M: Counter of (degree, r)."""
    return Counter((a.p + a.q - 2 * j, a.r) for j in range(min(a.p, a.q) + 1))


def _hom_m(a, n):
    return sum(1 for deg, _ in restrict_to_M(a) if deg == n)


def functions_multiplicity(a):
    """Multiplicity of F^(p,q,r) in C^oo(U(2)) (Peter-Weyl)."""
    return 1 if a.p == a.q else 0


def one_forms_multiplicity(a):
    """Frobenius count in Omega^1: Lie(U(2))_C = F^0 + F^2 as an M-module."""
    return _hom_m(a, 0) + _hom_m(a, 2)


def closed_two_forms_multiplicity(a):
    """Multiplicity in ker d on Omega^2.

    ker d on Omega^2 is Omega^1 / ker d, and ker d on Omega^1 matches C^oo
    K-type by K-type (the constants and the class of det^* dz/z are both
    trivial), so the count is the difference of the two above.
    """
    return one_forms_multiplicity(a) - functions_multiplicity(a)


def ker_d_ktypes(max_k, r_bound=None):
    """The K-types of closed 2-forms with degree parameter k <= max_k.

    Families F^(k+2,k,r), F^(k,k+2,r) with r = k (mod 2) and F^(k+1,k+1,r)
    with r = k+1 (mod 2), |r| <= r_bound (default max_k + 3).  Each label is
    cross-checked against :func:`closed_two_forms_multiplicity`.
    """
    if r_bound is None:
        r_bound = max_k + 3
    out = []
    for k in range(max_k + 1):
        for p, q in ((k + 2, k), (k, k + 2), (k + 1, k + 1)):
            for r in range(-r_bound, r_bound + 1):
                if (r - q) % 2:
                    continue
                t = KType(p, q, r)
                if closed_two_forms_multiplicity(t) != 1:
                    raise AssertionError(f"{t} listed but Frobenius count is "
                                         f"{closed_two_forms_multiplicity(t)}")
                out.append(t)
    return out
