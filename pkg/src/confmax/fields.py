"""Differential forms on U(2) and the Maxwell solutions built from psi_(k,l).

A :class:`FormField` of grade g stores C(4, g) coefficient functions in
the left-invariant coframe.  Exact fields keep :class:`EntryPoly`
coefficients, so d, wedge, the star, conjugation and pullback by
inversion are computed symbolically.  Black-box fields carry only an
evaluator ``points (N,2,2) -> (N, C(4,g))``; their derivatives need an
explicit finite-difference step and the result is marked ``numeric``.
"""
from dataclasses import dataclass
from math import comb

import numpy as np
from scipy.linalg import expm

from .geometry import (BASIS, FRAME, PROJ_MINUS_I, PROJ_PLUS_I, STAR,
                       WEDGE_TABLES, DomainError, exterior_power, frame_coords,
                       haar_sample)
from .polynomials import EntryPoly, entry_matrix, evaluate_many, matmul
from .rep_core import KType, lie_element, psi_poly


CLASSIFY_TOL = 1e-10
CLASSIFY_POINTS = 25
CLASSIFY_SEED = 20240611


class NonExactFieldError(TypeError):
    """An exact operation was requested on a field known only numerically."""


class NotMaxwellError(ValueError):
    """The requested (k, l) does not give a Maxwell solution."""


# ---------------------------------------------------------------------------
# structure constants and derivations of the exterior algebra
# ---------------------------------------------------------------------------

def structure_constants():
    """c[j, a, b] with [x_a, x_b] = sum_j c[j, a, b] x_j (real)."""
    c = np.zeros((4, 4, 4))
    for a in range(4):
        for b in range(4):
            br = FRAME[a] @ FRAME[b] - FRAME[b] @ FRAME[a]
            c[:, a, b] = frame_coords(br).real
    return c


STRUCTURE = structure_constants()


def _unit(g, i):
    v = np.zeros(comb(4, g), dtype=np.complex128)
    v[i] = 1
    return v


def _wedge_vec(a, ga, b, gb):
    out = np.zeros(comb(4, ga + gb), dtype=np.complex128)
    for i, j, k, s in WEDGE_TABLES[(ga, gb)]:
        out[k] += s * a[i] * b[j]
    return out


def _d_coframe():
    # d alpha_j (X, Y) = -alpha_j([X, Y])  =>  d alpha_j = -sum_{a<b} c^j_ab alpha_ab
    out = np.zeros((4, 6))
    for j in range(4):
        for n, (a, b) in enumerate(BASIS[2]):
            out[j, n] = -STRUCTURE[j, a, b]
    return out


D_COFRAME = _d_coframe()


def _d_constant_matrix(g):
    """Matrix of d on constant-coefficient g-forms: column I = d alpha_I."""
    rows = comb(4, g + 1)
    M = np.zeros((rows, comb(4, g)), dtype=np.complex128)
    for col, I in enumerate(BASIS[g]):
        # Leibniz: d(a_i1 ^ ... ^ a_ig) = sum_m (-1)^m a_i1 ^ .. d a_im .. ^ a_ig
        for m, i in enumerate(I):
            term = np.ones(1, dtype=np.complex128)
            deg = 0
            for pos, j in enumerate(I):
                if pos == m:
                    term = _wedge_vec(term, deg, D_COFRAME[j].astype(complex), 2)
                    deg += 2
                else:
                    term = _wedge_vec(term, deg, _unit(1, j), 1)
                    deg += 1
            M[:, col] += (-1) ** m * term
    return M


D_CONSTANT = {g: _d_constant_matrix(g) for g in range(4)}


def derivation_matrix(A, g):
    """Extend a linear map A on 1-forms (columns: images of alpha_m) to g-forms as a derivation."""
    A = np.asarray(A, dtype=np.complex128)
    M = np.zeros((comb(4, g), comb(4, g)), dtype=np.complex128)
    for col, I in enumerate(BASIS[g]):
        for m in range(len(I)):
            term = np.ones(1, dtype=np.complex128)
            for pos, j in enumerate(I):
                vec = A[:, j] if pos == m else _unit(1, j)
                term = _wedge_vec(term, pos, vec, 1)
            M[:, col] += term
    return M


# ---------------------------------------------------------------------------
# form fields
# ---------------------------------------------------------------------------

def _lin_comb_polys(M, polys):
    """Apply a numeric matrix M (rows x len(polys)) to a list of EntryPoly."""
    out = []
    for row in np.asarray(M):
        acc = EntryPoly.zero()
        for c, p in zip(row, polys):
            if c != 0:
                acc = acc + p * complex(c)
        out.append(acc)
    return out


class FormField:
    """A differential form on U(2) in the left-invariant coframe."""

    def __init__(self, grade, coeffs=None, evaluator=None, potential=None,
                 numeric=False, label=None):
        if not 0 <= grade <= 4:
            raise DomainError(f"form grade must be 0..4, got {grade}")
        if (coeffs is None) == (evaluator is None):
            raise ValueError("give exactly one of coeffs or evaluator")
        if coeffs is not None:
            coeffs = [c if isinstance(c, EntryPoly) else EntryPoly.const(c) for c in coeffs]
            if len(coeffs) != comb(4, grade):
                raise DomainError(f"a {grade}-form needs {comb(4, grade)} coefficients")
        self.grade = grade
        self.coeffs = coeffs
        self.evaluator = evaluator
        self.potential = potential
        self.numeric = bool(numeric)
        self.label = label

    # -- constructors ---------------------------------------------------------
    @classmethod
    def constant(cls, grade, values):
        return cls(grade, [EntryPoly.const(v) for v in values])

    @classmethod
    def function(cls, f):
        if not isinstance(f, EntryPoly):
            f = f.to_entry_poly()
        return cls(0, [f])

    @classmethod
    def zero(cls, grade):
        return cls(grade, [EntryPoly.zero() for _ in BASIS[grade]])

    @property
    def exact(self):
        return self.coeffs is not None

    def with_potential(self, potential):
        out = self.copy()
        out.potential = potential
        return out

    def copy(self):
        return FormField(self.grade, coeffs=self.coeffs, evaluator=self.evaluator,
                         potential=self.potential, numeric=self.numeric, label=self.label)

    # -- evaluation -----------------------------------------------------------
    def evaluate(self, points):
        pts = np.asarray(points, dtype=np.complex128).reshape(-1, 2, 2)
        if self.exact:
            return evaluate_many(self.coeffs, pts)
        return np.asarray(self.evaluator(pts), dtype=np.complex128)

    def degree(self):
        if not self.exact:
            raise NonExactFieldError("degree is only defined for exact fields")
        return max((c.degree() for c in self.coeffs), default=0)

    def su2_degree(self):
        """Polynomial degree of the coefficients restricted to SU(2)."""
        if not self.exact:
            raise NonExactFieldError("degree is only defined for exact fields")
        return max((c.entry_degree() for c in self.coeffs), default=0)

    def max_abs(self, points):
        return float(np.max(np.abs(self.evaluate(points))))

    # -- linear structure -----------------------------------------------------
    def _binary(self, other, op):
        if self.grade != other.grade:
            raise DomainError("cannot add forms of different grade")
        numeric = self.numeric or other.numeric
        if self.exact and other.exact:
            return FormField(self.grade, [op(a, b) for a, b in zip(self.coeffs, other.coeffs)],
                             numeric=numeric)
        f, g = self, other
        return FormField(self.grade, evaluator=lambda p: op(f.evaluate(p), g.evaluate(p)),
                         numeric=numeric)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __neg__(self):
        return self * -1

    def __mul__(self, s):
        """Multiply by a constant or by an exact function (EntryPoly)."""
        if isinstance(s, EntryPoly):
            if not self.exact:
                f = self
                return FormField(self.grade, evaluator=lambda p: f.evaluate(p) * s(p)[:, None],
                                 numeric=self.numeric)
            return FormField(self.grade, [c * s for c in self.coeffs], numeric=self.numeric)
        s = complex(s)
        if self.exact:
            return FormField(self.grade, [c * s for c in self.coeffs], numeric=self.numeric)
        f = self
        return FormField(self.grade, evaluator=lambda p: f.evaluate(p) * s, numeric=self.numeric)

    __rmul__ = __mul__

    def apply_pointwise(self, M):
        """Apply a constant linear map to the coefficient vector."""
        M = np.asarray(M)
        if self.exact:
            return FormField(self.grade, _lin_comb_polys(M, self.coeffs), numeric=self.numeric)
        f = self
        return FormField(self.grade, evaluator=lambda p: f.evaluate(p) @ M.T, numeric=self.numeric)

    def star(self):
        if self.grade != 2:
            raise DomainError("the star is implemented on 2-forms")
        return self.apply_pointwise(STAR)

    def project(self, sign):
        """Component in the +i (sign=+1) or -i (sign=-1) eigenspace of the star."""
        return self.apply_pointwise(PROJ_PLUS_I if sign > 0 else PROJ_MINUS_I)

    def conj(self):
        """Complex conjugate on U(2); the coframe is real."""
        if self.exact:
            return FormField(self.grade, [c.conj_on_unitary() for c in self.coeffs],
                             numeric=self.numeric)
        f = self
        return FormField(self.grade, evaluator=lambda p: np.conj(f.evaluate(p)),
                         numeric=self.numeric)

    def is_zero_exact(self, tol=1e-12):
        if not self.exact:
            raise NonExactFieldError("exact zero test needs an exact field")
        return all(max((abs(v) for v in c.terms.values()), default=0.0) <= tol
                   for c in self.coeffs)

    def __repr__(self):
        kind = "exact" if self.exact else "black-box"
        tag = f" {self.label}" if self.label else ""
        return f"<FormField grade={self.grade} {kind}{tag}>"


def alpha(j):
    """The left-invariant coframe form alpha_j, j in 1..4."""
    v = np.zeros(4)
    v[j - 1] = 1
    return FormField.constant(1, v)


ALPHA_H = np.array([1j, 0, 0, 0])
ALPHA_F = np.array([0, -1, 1j, 0])
ALPHA_E = np.array([0, 1, 1j, 0])


def alpha_named(name):
    """alpha_h, alpha_f or alpha_e, dual to h, f, e."""
    vec = {"h": ALPHA_H, "f": ALPHA_F, "e": ALPHA_E}[name]
    return FormField.constant(1, vec)


# ---------------------------------------------------------------------------
# calculus
# ---------------------------------------------------------------------------

def _left_derivatives_exact(polys):
    return [[p.left_derivative(FRAME[j]) for p in polys] for j in range(4)]


def _left_derivatives_fd(w, step):
    # x_j^L f(u) ~ [f(u e^{h x_j}) - f(u e^{-h x_j})] / 2h, one Richardson level
    steps = [(expm(step * FRAME[j]), expm(-step * FRAME[j]),
              expm(2 * step * FRAME[j]), expm(-2 * step * FRAME[j])) for j in range(4)]

    def deriv(points, j):
        p1, m1, p2, m2 = steps[j]
        d1 = (w.evaluate(points @ p1) - w.evaluate(points @ m1)) / (2 * step)
        d2 = (w.evaluate(points @ p2) - w.evaluate(points @ m2)) / (4 * step)
        return (4 * d1 - d2) / 3

    return deriv


def exterior_derivative(w, fd_step=None):
    """d w.  Exact for exact fields; black-box fields need ``fd_step``."""
    if w.grade == 4:
        raise DomainError("d of a 4-form on a 4-manifold is identically zero")
    g = w.grade
    Dc = D_CONSTANT[g]
    if w.exact:
        derivs = _left_derivatives_exact(w.coeffs)
        out = _lin_comb_polys(Dc, w.coeffs)
        # d(f alpha_I) = sum_j (x_j^L f) alpha_j ^ alpha_I + f d alpha_I
        for j, jj, k, s in WEDGE_TABLES[(1, g)]:
            out[k] = out[k] + derivs[j][jj] * s
        return FormField(g + 1, out, numeric=w.numeric)
    if fd_step is None:
        raise NonExactFieldError(
            "exterior derivative of a black-box field needs an explicit fd_step")
    deriv = _left_derivatives_fd(w, fd_step)

    def evaluator(points):
        vals = w.evaluate(points)
        out = vals @ Dc.T
        for j in range(4):
            dj = deriv(points, j)
            for i, jj, k, s in WEDGE_TABLES[(1, g)]:
                if i == j:
                    out[:, k] += s * dj[:, jj]
        return out

    return FormField(g + 1, evaluator=evaluator, numeric=True)


def wedge(a, b):
    ga, gb = a.grade, b.grade
    if ga + gb > 4:
        raise DomainError(f"wedge product would have grade {ga + gb} > 4")
    table = WEDGE_TABLES[(ga, gb)]
    numeric = a.numeric or b.numeric
    if a.exact and b.exact:
        out = [EntryPoly.zero() for _ in BASIS[ga + gb]]
        for i, j, k, s in table:
            out[k] = out[k] + a.coeffs[i] * b.coeffs[j] * s
        return FormField(ga + gb, out, numeric=numeric)

    def evaluator(points):
        va, vb = a.evaluate(points), b.evaluate(points)
        out = np.zeros((len(va), comb(4, ga + gb)), dtype=np.complex128)
        for i, j, k, s in table:
            out[:, k] += s * va[:, i] * vb[:, j]
        return out

    return FormField(ga + gb, evaluator=evaluator, numeric=numeric)


def lie_derivative_left(x, w):
    """Lie derivative along the left-invariant field x^L (x complex 2x2), exactly.

    L_x alpha_j = -sum_m alpha_j([x, x_m]) alpha_m on the coframe, extended as
    a derivation; coefficient functions are differentiated by x^L.
    """
    if not w.exact:
        raise NonExactFieldError("exact Lie derivative needs an exact field")
    x = lie_element(x)
    A = np.zeros((4, 4), dtype=np.complex128)
    for m in range(4):
        # row j of column m is alpha_j([x, x_m]), so column j is L_x alpha_j
        A[m, :] = -frame_coords(x @ FRAME[m] - FRAME[m] @ x)
    M = derivation_matrix(A, w.grade)
    out = _lin_comb_polys(M, w.coeffs)
    out = [o + c.left_derivative(x) for o, c in zip(out, w.coeffs)]
    return FormField(w.grade, out, numeric=w.numeric)


def interior_left(x, w):
    """Contraction of w with x^L for x in the complexified frame span."""
    x = lie_element(x)
    xc = frame_coords(x)
    if w.grade == 0:
        raise DomainError("cannot contract a function")
    g = w.grade
    M = np.zeros((comb(4, g - 1), comb(4, g)), dtype=np.complex128)
    idx = {I: n for n, I in enumerate(BASIS[g - 1])}
    for col, I in enumerate(BASIS[g]):
        for pos, i in enumerate(I):
            rest = I[:pos] + I[pos + 1:]
            M[idx[rest], col] += (-1) ** pos * xc[i]
    if w.exact:
        return FormField(g - 1, _lin_comb_polys(M, w.coeffs), numeric=w.numeric)
    return FormField(g - 1, evaluator=lambda p: w.evaluate(p) @ M.T, numeric=w.numeric)


# ---------------------------------------------------------------------------
# inversion u -> u^-1 and the adjoint representation
# ---------------------------------------------------------------------------

def _adjoint_polys():
    """Ad(u) in frame coordinates as a 4x4 matrix of EntryPoly."""
    u = entry_matrix()
    dinv = EntryPoly.det_power(-1)
    uinv = [[u[1][1] * dinv, -u[0][1] * dinv], [-u[1][0] * dinv, u[0][0] * dinv]]
    out = [[None] * 4 for _ in range(4)]
    for col in range(4):
        xm = [[complex(FRAME[col][i, j]) for j in range(2)] for i in range(2)]
        y = matmul(matmul(u, xm), uinv)
        coords = [(y[0][0] - y[1][1]) * (1 / 2j), (y[0][1] - y[1][0]) * 0.5,
                  (y[0][1] + y[1][0]) * (1 / 2j), (y[0][0] + y[1][1]) * (1 / 2j)]
        for row in range(4):
            out[row][col] = coords[row]
    return out


_ADJ = None


def adjoint_polys():
    global _ADJ
    if _ADJ is None:
        _ADJ = _adjoint_polys()
    return _ADJ


def adjoint_matrix(u):
    """Ad(u) in frame coordinates, numerically (..., 4, 4)."""
    u = np.asarray(u, dtype=np.complex128)
    uinv = np.linalg.inv(u)
    cols = np.einsum("...ab,jbc,...cd->...jad", u, FRAME, uinv)
    return np.swapaxes(frame_coords(cols), -1, -2)


def _poly_det(M):
    n = len(M)
    if n == 0:
        return EntryPoly.const(1)
    if n == 1:
        return M[0][0]
    out = EntryPoly.zero()
    for c in range(n):
        if M[0][c].is_zero():
            continue
        minor = [row[:c] + row[c + 1:] for row in M[1:]]
        term = M[0][c] * _poly_det(minor)
        out = out + (term if c % 2 == 0 else -term)
    return out


_INV_MINORS = {}


def _inversion_minors(g):
    # Lambda^g of the tangent map of inversion, -Ad(u), as EntryPoly minors
    if g not in _INV_MINORS:
        adj = adjoint_polys()
        T = [[-adj[i][j] for j in range(4)] for i in range(4)]
        idx = BASIS[g]
        _INV_MINORS[g] = [[_poly_det([[T[i][j] for j in J] for i in I]) for J in idx] for I in idx]
    return _INV_MINORS[g]


def inversion_pullback(w, _with_potential=True):
    """eta^* w for eta(u) = u^-1.

    The tangent map in the frame is -Ad(u), so
    (eta^* w)_J(u) = sum_I w_I(u^-1) det(-Ad(u))[I, J].
    """
    g = w.grade
    pot = None
    if _with_potential and w.potential is not None:
        pot = inversion_pullback(w.potential)
    if w.exact:
        minors = _inversion_minors(g)
        comp = [c.compose_inverse() for c in w.coeffs]
        out = []
        for b in range(len(BASIS[g])):
            acc = EntryPoly.zero()
            for a in range(len(BASIS[g])):
                if not comp[a].is_zero():
                    acc = acc + comp[a] * minors[a][b]
            out.append(acc)
        return FormField(g, out, potential=pot, numeric=w.numeric)

    def evaluator(points):
        inv = np.linalg.inv(points)
        L = exterior_power(-adjoint_matrix(points), g)
        return np.einsum("ni,nij->nj", w.evaluate(inv), L)

    return FormField(g, evaluator=evaluator, potential=pot, numeric=w.numeric)


def alpha_right(j):
    """eta^* alpha_j: the right-invariant coframe, with coefficients -Ad(u)[j, :]."""
    return inversion_pullback(alpha(j))


def alpha_f_right():
    """eta^* alpha_f = -alpha_2^R + i alpha_3^R."""
    return inversion_pullback(alpha_named("f"))


# ---------------------------------------------------------------------------
# Maxwell solutions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MaxwellBasisLabel:
    """(k, side, sign): side 'L' builds d(psi_(k, sign (k+2)) alpha_f); 'R' is its
    mirror image under inversion, with the sign flipped so that the central
    character matches."""

    k: int
    side: str
    sign: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if self.side not in ("L", "R"):
            raise ValueError("side must be 'L' or 'R'")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def l(self):
        return self.sign * (self.k + 2)

    @property
    def ktype(self):
        k = self.k
        if self.side == "L":
            return KType(k, k + 2, self.sign * (k + 2))
        return KType(k + 2, k, self.sign * (k + 2))

    @property
    def eigen_sign(self):
        """+1 if the form is in the +i eigenspace of the star, -1 for -i."""
        return -self.sign if self.side == "L" else self.sign

    def __str__(self):
        return f"{self.side}{'+' if self.sign > 0 else '-'}{self.k}"


def maxwell_potential_left(k, l):
    """psi_(k,l) alpha_f."""
    return alpha_named("f") * psi_poly(k, l)


def closed_form_left(k, l):
    """d(psi_(k,l) alpha_f), a closed 2-form for every admissible (k, l)."""
    pot = maxwell_potential_left(k, l)
    w = exterior_derivative(pot)
    w.potential = pot
    return w


def maxwell_form(k, l, side="L"):
    """Maxwell solution with K-type labels (k, l) on the given side."""
    if abs(l) != k + 2:
        report = j_classification(k, l)
        raise NotMaxwellError(
            f"(k, l) = ({k}, {l}) is not a Maxwell label: only l = +-(k+2) give "
            f"a star eigenform; here the +i part has relative size "
            f"{report.plus:.3g} and the -i part {report.minus:.3g}")
    if side == "L":
        w = closed_form_left(k, l)
    elif side == "R":
        w = inversion_pullback(closed_form_left(k, -l))
    else:
        raise ValueError("side must be 'L' or 'R'")
    w.label = f"{side}{'+' if l > 0 else '-'}{k}"
    return w


def maxwell_basis(label):
    if not isinstance(label, MaxwellBasisLabel):
        label = MaxwellBasisLabel(*label)
    return maxwell_form(label.k, label.l, label.side)


def maxwell_labels(k_max):
    return [MaxwellBasisLabel(k, side, sign) for k in range(k_max + 1)
            for side in ("L", "R") for sign in (1, -1)]


@dataclass(frozen=True)
class JReport:
    """Star eigen-decomposition of a closed 2-form.

    ``plus`` / ``minus`` are sup-norms of the +i / -i projections over the
    sampled points, relative to the sup-norm of the form; ``exact_plus`` /
    ``exact_minus`` are the same ratios for the coefficient vectors of the
    exact polynomials (None for black-box fields).
    """

    k: int
    l: int
    closed: bool
    plus: float
    minus: float
    exact_plus: float = None
    exact_minus: float = None
    threshold: float = CLASSIFY_TOL

    @property
    def eigen_sign(self):
        """+1 for i, -1 for -i, 0 when neither projection vanishes."""
        if self.plus <= self.threshold < self.minus:
            return -1
        if self.minus <= self.threshold < self.plus:
            return 1
        return 0

    @property
    def is_maxwell(self):
        return self.closed and self.eigen_sign != 0

    def to_dict(self):
        return {"k": self.k, "l": self.l, "closed": self.closed,
                "isMaxwell": self.is_maxwell,
                "eigenSign": {1: "+i", -1: "-i", 0: None}[self.eigen_sign],
                "plusComponent": self.plus, "minusComponent": self.minus}


def _coeff_norm(w):
    return float(np.sqrt(sum(abs(v) ** 2 for c in w.coeffs for v in c.terms.values())))


def classify_form(w, n_points=CLASSIFY_POINTS, seed=CLASSIFY_SEED, k=None, l=None,
                  closed=None):
    """Pointwise star classification of a 2-form at Haar-random points of U(2)."""
    pts = haar_sample(np.random.default_rng(seed), n_points, "U2")
    v = w.evaluate(pts)
    scale = np.max(np.abs(v)) or 1.0
    plus = float(np.max(np.abs(v @ PROJ_PLUS_I.T)) / scale)
    minus = float(np.max(np.abs(v @ PROJ_MINUS_I.T)) / scale)
    ep = em = None
    if w.exact:
        total = _coeff_norm(w) or 1.0
        ep = _coeff_norm(w.project(1)) / total
        em = _coeff_norm(w.project(-1)) / total
    if closed is None:
        if w.exact:
            closed = exterior_derivative(w).is_zero_exact()
        else:
            closed = bool(np.max(np.abs(exterior_derivative(w, fd_step=1e-4).evaluate(pts)))
                          <= 1e-6 * scale)
    return JReport(k, l, closed, plus, minus, ep, em)


def j_classification(k, l, n_points=CLASSIFY_POINTS, seed=CLASSIFY_SEED):
    """Classify d(psi_(k,l) alpha_f) by its star eigencomponents."""
    return classify_form(closed_form_left(k, l), n_points, seed, k=k, l=l)


def lowering_orbit(label):
    """The basis solution and its successive lowerings by f (k+3 forms).

    Lowering acts along the factor of K that moves points by right
    translation (the second factor for side L); side R is the image of
    side L under inversion, which swaps the two factors.  For k = 0 the
    other factor is trivial and the forms span the whole K-type.
    """
    label = label if isinstance(label, MaxwellBasisLabel) else MaxwellBasisLabel(*label)
    left = MaxwellBasisLabel(label.k, "L", label.sign if label.side == "L" else -label.sign)
    w = maxwell_basis(left)
    vecs = [w]
    for _ in range(label.k + 3):
        vecs.append(lie_derivative_left("f", vecs[-1]))
        vecs[-1].potential = lie_derivative_left("f", vecs[-2].potential)
    if not vecs[-1].is_zero_exact():
        raise AssertionError("lowering did not terminate at the expected length")
    vecs = vecs[:-1]
    if label.side == "R":
        vecs = [inversion_pullback(v) for v in vecs]
    return vecs


def linear_combination(forms, coeffs):
    """sum c_i w_i, with potentials combined the same way when all are present."""
    out = forms[0] * coeffs[0]
    for w, c in zip(forms[1:], coeffs[1:]):
        out = out + w * c
    if all(w.potential is not None for w in forms):
        out.potential = linear_combination([w.potential for w in forms], coeffs)
    return out


# ---------------------------------------------------------------------------
# sample export
# ---------------------------------------------------------------------------

def sample_records(w, points):
    """JSON-ready records {point: 8 reals, coeffs: 2 * C(4, g) reals}.

    The point is the row-major 2x2 matrix as (re, im) pairs; coefficients
    follow the lexicographic coframe basis, also as (re, im) pairs.
    """
    pts = np.asarray(points, dtype=np.complex128).reshape(-1, 2, 2)
    vals = w.evaluate(pts)
    records = []
    for pt, row in zip(pts, vals):
        flat = pt.ravel()
        records.append({
            "point": [float(x) for z in flat for x in (z.real, z.imag)],
            "coeffs": [float(x) for z in row for x in (z.real, z.imag)],
        })
    return records
