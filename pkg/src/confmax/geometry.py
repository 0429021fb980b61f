"""Pointwise geometry of U(2) as a Lorentzian group manifold.

The Lie algebra u(2) of skew-Hermitian matrices carries the invariant
Lorentzian form ``<X, Y> = (tr(XY) - tr X tr Y) / 2`` (the polarization of
``-det``).  The frame

    x1 = diag(i, -i), x2 = [[0, 1], [-1, 0]], x3 = [[0, i], [i, 0]], x4 = iI

is orthonormal with signs (-1, -1, -1, +1).  Forms are stored by their
coefficients in the left-invariant dual coframe alpha_1..alpha_4, with
multi-indices in lexicographic order (for 2-forms: 12, 13, 14, 23, 24, 34).

Also here: Haar sampling, the product quadrature grid on SU(2), and
integration of 3-forms over SU(2).
"""
import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from . import _kernels
from ._kernels import frame_coords

FRAME = _kernels._FRAME.copy()
FRAME.setflags(write=False)
METRIC_SIGNS = np.array([-1.0, -1.0, -1.0, 1.0])

BASIS = {g: list(combinations(range(4), g)) for g in range(5)}
TWO_FORM_LABELS = ["".join(str(i + 1) for i in idx) for idx in BASIS[2]]

# Hodge star on 2-forms; column I holds the coefficients of *alpha_I.
#   *a12 = a34, *a13 = -a24, *a14 = -a23, *a23 = a14, *a24 = a13, *a34 = -a12
STAR = np.zeros((6, 6))
for _col, _row, _sign in ((0, 5, 1), (1, 4, -1), (2, 3, -1), (3, 2, 1), (4, 1, 1), (5, 0, -1)):
    STAR[_row, _col] = _sign
STAR.setflags(write=False)

# spanning sets of the +i and -i eigenspaces of the star
B_PLUS_I = np.array([
    [0, 0, 1, 1j, 0, 0],     # a14 + i a23
    [0, -1j, 0, 0, 1, 0],    # a24 - i a13
    [1j, 0, 0, 0, 0, 1],     # a34 + i a12
], dtype=np.complex128)
B_MINUS_I = B_PLUS_I.conj()

PROJ_PLUS_I = (np.eye(6) - 1j * STAR) / 2
PROJ_MINUS_I = (np.eye(6) + 1j * STAR) / 2


class DomainError(ValueError):
    """Input lies outside the domain on which an operation is defined."""


def _wedge_table(ga, gb):
    idx = {I: n for n, I in enumerate(BASIS[ga + gb])}
    rows = []
    for i, I in enumerate(BASIS[ga]):
        for j, J in enumerate(BASIS[gb]):
            if set(I) & set(J):
                continue
            seq = list(I + J)
            # sign of the sorting permutation
            sign = 1
            for a in range(len(seq)):
                for b in range(a + 1, len(seq)):
                    if seq[a] > seq[b]:
                        sign = -sign
            rows.append((i, j, idx[tuple(sorted(seq))], sign))
    return rows


WEDGE_TABLES = {(a, b): _wedge_table(a, b) for a in range(5) for b in range(5) if a + b <= 4}


def wedge_values(a, ga, b, gb):
    """Pointwise wedge of coefficient arrays (..., C(4,ga)) and (..., C(4,gb))."""
    a = np.asarray(a)
    b = np.asarray(b)
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
    out = np.zeros(shape + (len(BASIS[ga + gb]),), dtype=np.result_type(a, b, complex))
    for i, j, k, s in WEDGE_TABLES[(ga, gb)]:
        out[..., k] += s * a[..., i] * b[..., j]
    return out


def exterior_power(T, g):
    """Matrix of Lambda^g T: entry [I, J] = det T[I, J] (rows I, columns J)."""
    T = np.asarray(T)
    if g == 0:
        return np.ones(T.shape[:-2] + (1, 1), dtype=T.dtype)
    idx = BASIS[g]
    out = np.empty(T.shape[:-2] + (len(idx), len(idx)), dtype=np.result_type(T, complex))
    for a, I in enumerate(idx):
        for b, J in enumerate(idx):
            out[..., a, b] = np.linalg.det(T[..., list(I), :][..., list(J)])
    return out


def _is_skew_hermitian(X, tol=1e-12):
    X = np.asarray(X)
    return np.max(np.abs(X + np.conj(np.swapaxes(X, -1, -2)))) <= tol * max(1.0, np.max(np.abs(X)))


def metric_on_tangent(X, Y):
    """Invariant Lorentzian pairing of two elements of u(2)."""
    X = np.asarray(X, dtype=np.complex128)
    Y = np.asarray(Y, dtype=np.complex128)
    if X.shape[-2:] != (2, 2) or Y.shape[-2:] != (2, 2):
        raise DomainError("tangent vectors must be 2x2 matrices")
    if not (_is_skew_hermitian(X) and _is_skew_hermitian(Y)):
        raise DomainError("tangent vectors must be skew-Hermitian (elements of u(2))")
    val = (np.trace(X @ Y, axis1=-2, axis2=-1)
           - np.trace(X, axis1=-2, axis2=-1) * np.trace(Y, axis1=-2, axis2=-1)) / 2
    return np.real(val)


def metric_complex(X, Y):
    """Complex-bilinear extension of the pairing to gl(2, C)."""
    X = np.asarray(X, dtype=np.complex128)
    Y = np.asarray(Y, dtype=np.complex128)
    return (np.trace(X @ Y) - np.trace(X) * np.trace(Y)) / 2


@dataclass(frozen=True)
class U2Point:
    """A validated point of U(2)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (2, 2):
            raise DomainError("U(2) points are 2x2 matrices")
        if np.max(np.abs(m.conj().T @ m - np.eye(2))) > 1e-10:
            raise DomainError("matrix is not unitary")
        object.__setattr__(self, "matrix", m)

    @property
    def det(self):
        return complex(np.linalg.det(self.matrix))

    def in_su2(self, tol=1e-10):
        return abs(self.det - 1) <= tol


class TwoFormValue:
    """A 2-form at a single point, stored in the 12, 13, 14, 23, 24, 34 basis."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=np.complex128)
        if c.shape[-1] != 6:
            raise DomainError("a 2-form value has 6 coefficients")
        self.coeffs = c

    def star(self):
        return TwoFormValue(self.coeffs @ STAR.T)

    def conj(self):
        return TwoFormValue(self.coeffs.conj())

    def wedge(self, other):
        """Top-degree coefficient of self ^ other (multiple of alpha_1234)."""
        return wedge_values(self.coeffs, 2, other.coeffs, 2)[..., 0]

    def __add__(self, other):
        return TwoFormValue(self.coeffs + other.coeffs)

    def __sub__(self, other):
        return TwoFormValue(self.coeffs - other.coeffs)

    def __mul__(self, s):
        return TwoFormValue(self.coeffs * s)

    __rmul__ = __mul__

    def __repr__(self):
        return f"TwoFormValue({np.array2string(self.coeffs, precision=4)})"


def hodge_star(values):
    """Apply the star to 2-form coefficients of shape (..., 6)."""
    return np.asarray(values) @ STAR.T


# ---------------------------------------------------------------------------
# sampling and quadrature
# ---------------------------------------------------------------------------

def su2_from_ab(a, b):
    """[[a, -conj(b)], [b, conj(a)]] for |a|^2 + |b|^2 = 1."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    out = np.empty(a.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = a
    out[..., 0, 1] = -np.conj(b)
    out[..., 1, 0] = b
    out[..., 1, 1] = np.conj(a)
    return out


def haar_sample(rng, n, group="U2"):
    """n Haar-random points of SU(2) or U(2) as an (n, 2, 2) array."""
    if n < 1:
        raise DomainError("sample count must be >= 1")
    v = rng.standard_normal((n, 4))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    pts = su2_from_ab(v[:, 0] + 1j * v[:, 1], v[:, 2] + 1j * v[:, 3])
    if group == "SU2":
        return pts
    if group != "U2":
        raise ValueError(f"group must be 'SU2' or 'U2', got {group!r}")
    phase = np.exp(1j * rng.uniform(0, 2 * np.pi, n))
    return pts * phase[:, None, None]


@dataclass(frozen=True)
class QuadratureGrid:
    """Product grid on SU(2), with weights summing to 1 (normalized Haar).

    Coordinates: a = sqrt(1-s) e^{i t1}, b = sqrt(s) e^{i t2}.  Haar measure
    is ds dt1 dt2 / (2 pi)^2 on [0,1] x [0,2pi)^2; s uses Gauss-Legendre, the
    angles the periodic trapezoid rule.  Exact for polynomials in the matrix
    entries and their conjugates of total degree below ``order``.
    """

    order: int
    s_nodes: np.ndarray
    s_weights: np.ndarray
    angles: np.ndarray
    points: np.ndarray
    weights: np.ndarray

    def to_json(self):
        return json.dumps({
            "schema": "confmax.su2-grid/1",
            "order": self.order,
            "s_nodes": self.s_nodes.tolist(),
            "s_weights": self.s_weights.tolist(),
            "angles": self.angles.tolist(),
        })

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        return _build_grid(int(d["order"]), np.array(d["s_nodes"]),
                           np.array(d["s_weights"]), np.array(d["angles"]))


def _build_grid(order, s, ws, ang):
    S, T1, T2 = np.meshgrid(s, ang, ang, indexing="ij")
    W = np.broadcast_to(ws[:, None, None], S.shape) / len(ang) ** 2
    a = np.sqrt(1 - S) * np.exp(1j * T1)
    b = np.sqrt(S) * np.exp(1j * T2)
    pts = su2_from_ab(a.ravel(), b.ravel())
    weights = np.ascontiguousarray(W.ravel())
    for arr in (s, ws, ang, pts, weights):
        arr.setflags(write=False)
    return QuadratureGrid(order, s, ws, ang, pts, weights)


@lru_cache(maxsize=32)
def su2_quadrature_grid(order):
    if order < 1:
        raise DomainError("quadrature order must be >= 1")
    x, w = np.polynomial.legendre.leggauss(order // 2 + 1)
    s = (x + 1) / 2
    ws = w / 2
    ang = 2 * np.pi * np.arange(order) / order
    return _build_grid(order, s, ws, ang)


SU2_VOLUME = 2 * np.pi ** 2


def _top3_coeff(values):
    # alpha_123 is index 0 of the grade-3 basis (123, 124, 134, 234)
    return values[:, 0]


def integrate_threeform_su2(form, order=None, *, tol=1e-10, max_order=128,
                            return_error=False):
    """Integral of a 3-form over SU(2), oriented by alpha_1 ^ alpha_2 ^ alpha_3.

    ``form`` is anything with ``grade == 3`` and ``evaluate(points)``.  For an
    exact field the grid order is read off the polynomial degree; otherwise
    the order is doubled from 16 until successive values agree to ``tol``
    relative (``order`` fixes a single grid instead).  With
    ``return_error=True`` the result is ``(value, estimated_error)``.
    """
    if getattr(form, "grade", 3) != 3:
        raise DomainError("only 3-forms can be integrated over SU(2)")

    def at(n):
        grid = su2_quadrature_grid(n)
        vals = _top3_coeff(form.evaluate(grid.points))
        if not np.all(np.isfinite(vals)):
            raise FloatingPointError("3-form evaluated to a non-finite value on the grid")
        return SU2_VOLUME * _kernels.compensated_sum(vals * grid.weights)

    if order is None and getattr(form, "exact", False):
        order = max(8, form.su2_degree() + 2)
        value = at(order)
        return (value, 0.0) if return_error else value
    if order is not None:
        value = at(order)
        return (value, float("nan")) if return_error else value
    n = 16
    prev = at(n)
    while True:
        n *= 2
        cur = at(n)
        err = abs(cur - prev)
        if err <= tol * max(1.0, abs(cur)) or n >= max_order:
            return (cur, err) if return_error else cur
        prev = cur
