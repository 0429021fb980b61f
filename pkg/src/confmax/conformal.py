"""The conformal group U(2,2), its action on U(2), Minkowski space and plane waves.

Two realizations are kept side by side:

* ``G``:  m J0 m* = J0 with J0 = [[0, iI], [-iI, 0]].  Minkowski translations
  are the lower unitriangular matrices [[I, 0], [Y, I]], Y Hermitian.
* ``G1``: m I22 m* = I22 with I22 = diag(1, 1, -1, -1).  The maximal compact
  subgroup K is block diagonal and g = [[A, B], [C, D]] acts on U(2) by
  Z -> (AZ + B)(CZ + D)^-1.

The Cayley map sigma(g) = L g L* with L = [[I, iI], [I, -iI]] / sqrt(2)
carries G onto G1.
"""
import json
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm, polar

from . import _kernels
from .fields import FormField
from .geometry import BASIS, METRIC_SIGNS, STAR, DomainError, frame_coords, haar_sample, wedge_values

I2 = np.eye(2, dtype=np.complex128)
Z2 = np.zeros((2, 2), dtype=np.complex128)
J0 = np.block([[Z2, 1j * I2], [-1j * I2, Z2]])
I22 = np.diag([1.0, 1.0, -1.0, -1.0]).astype(np.complex128)
L_CAYLEY = np.block([[I2, 1j * I2], [I2, -1j * I2]]) / np.sqrt(2)

COND_LIMIT = 1e8
DRIFT_QUIET = 1e-12
DRIFT_FATAL = 1e-8


class NearSingularError(ArithmeticError):
    """CZ + D is too ill-conditioned for a trustworthy action."""


class ConstraintError(ValueError):
    """Input violates a defining constraint (group membership, plane-wave system)."""


# ---------------------------------------------------------------------------
# group elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConformalElement:
    matrix: np.ndarray
    realization: str = "G1"

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (4, 4):
            raise ConstraintError("conformal group elements are 4x4 matrices")
        if self.realization not in ("G", "G1"):
            raise ConstraintError("realization must be 'G' or 'G1'")
        form = J0 if self.realization == "G" else I22
        resid = np.max(np.abs(m @ form @ m.conj().T - form))
        if resid > 1e-10 * max(1.0, np.linalg.norm(m) ** 2):
            raise ConstraintError(
                f"matrix does not preserve the {self.realization} form (residual {resid:.3g})")
        object.__setattr__(self, "matrix", m)

    def __matmul__(self, other):
        if other.realization != self.realization:
            raise ConstraintError("cannot multiply elements of different realizations")
        return ConformalElement(self.matrix @ other.matrix, self.realization)

    def inv(self):
        form = J0 if self.realization == "G" else I22
        # m form m* = form  =>  m^-1 = form m* form^-1
        return ConformalElement(form @ self.matrix.conj().T @ np.linalg.inv(form), self.realization)

    @property
    def blocks(self):
        m = self.matrix
        return m[:2, :2], m[:2, 2:], m[2:, :2], m[2:, 2:]

    def to_json(self):
        return json.dumps({"realization": self.realization,
                           "matrix": [[[v.real, v.imag] for v in row] for row in self.matrix]})

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        m = np.array([[complex(re, im) for re, im in row] for row in d["matrix"]])
        return cls(m, d["realization"])


def identity(realization="G1"):
    return ConformalElement(np.eye(4), realization)


def cayley(g):
    """sigma: G -> G1."""
    if g.realization != "G":
        raise ConstraintError("cayley expects an element of G")
    return ConformalElement(L_CAYLEY @ g.matrix @ L_CAYLEY.conj().T, "G1")


def cayley_inverse(g):
    if g.realization != "G1":
        raise ConstraintError("cayley_inverse expects an element of G1")
    return ConformalElement(L_CAYLEY.conj().T @ g.matrix @ L_CAYLEY, "G")


def nbar(Y):
    """[[I, 0], [Y, I]] in G for Hermitian Y."""
    Y = np.asarray(Y, dtype=np.complex128)
    return ConformalElement(np.block([[I2, Z2], [Y, I2]]), "G")


def n_upper(Y):
    """[[I, Y], [0, I]] in G for Hermitian Y."""
    Y = np.asarray(Y, dtype=np.complex128)
    return ConformalElement(np.block([[I2, Y], [Z2, I2]]), "G")


def k_element_G(A, B):
    """[[A, B], [-B, A]] in G; requires A + iB and A - iB unitary."""
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    return ConformalElement(np.block([[A, B], [-B, A]]), "G")


def block_diag_G1(A, D):
    return ConformalElement(np.block([[np.asarray(A), Z2], [Z2, np.asarray(D)]]), "G1")


def s_cap_k(theta):
    """diag(aI, a^-1 I) with a = e^{i theta}."""
    a = np.exp(1j * theta)
    return block_diag_G1(a * I2, I2 / a)


def lie_g1_real_part(X):
    """Split complex X in gl(4, C) as A + iB with A, B in Lie(G1)."""
    X = np.asarray(X, dtype=np.complex128)
    adj = I22 @ X.conj().T @ I22
    return (X - adj) / 2, (X + adj) / 2j


def is_lie_g1(X, tol=1e-12):
    X = np.asarray(X, dtype=np.complex128)
    return np.max(np.abs(X @ I22 + I22 @ X.conj().T)) <= tol * max(1.0, np.max(np.abs(X)))


def p_plus(X):
    """[[0, X], [0, 0]] in the complexified Lie algebra."""
    return np.block([[Z2, np.asarray(X, dtype=np.complex128)], [Z2, Z2]])


def p_minus(X):
    return np.block([[Z2, Z2], [np.asarray(X, dtype=np.complex128), Z2]])


def random_u2(rng):
    return haar_sample(rng, 1, "U2")[0]


def random_k(rng):
    return block_diag_G1(random_u2(rng), random_u2(rng))


def random_lie_g1(rng, scale=1.0):
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    d = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    a = (a - a.conj().T) / 2
    d = (d - d.conj().T) / 2
    X = np.block([[a, b], [b.conj().T, d]])
    return scale * X / np.linalg.norm(X)


def random_near_identity(rng, scale=0.3):
    """exp(X) for a random X in Lie(G1) with ||X||_F = scale."""
    return ConformalElement(expm(random_lie_g1(rng, scale)), "G1")


def random_g1(rng, scale=0.8):
    return random_k(rng) @ random_near_identity(rng, scale) @ random_k(rng)


# ---------------------------------------------------------------------------
# the action on U(2)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ActionResult:
    points: np.ndarray        # (N, 2, 2) images
    tangent: np.ndarray       # (N, 4, 4) frame matrix of the left-trivialized differential
    factor: np.ndarray        # (N,) det((AZ+B)^-1 AZ - (CZ+D)^-1 CZ)
    cond: np.ndarray          # (N,) condition number of CZ + D
    reunitarized: np.ndarray  # (N,) bool


def _as_points(Z):
    Z = np.asarray(getattr(Z, "matrix", Z), dtype=np.complex128)
    return Z.reshape(-1, 2, 2), Z.ndim == 2


def act_many(g, Z, cond_limit=COND_LIMIT):
    """Action of g in G1 on points Z (N,2,2) with tangent maps and conformal factors."""
    if g.realization != "G1":
        raise ConstraintError("the fractional-linear action is implemented on G1")
    pts, _ = _as_points(Z)
    W, T, factor, cond = _kernels.mobius(g.matrix, pts)
    bad = ~(cond <= cond_limit)
    if np.any(bad):
        raise NearSingularError(
            f"CZ + D is near-singular: condition estimate {np.max(cond[bad]):.3g} "
            f"exceeds {cond_limit:.1g}")
    drift = np.max(np.abs(np.conj(np.swapaxes(W, -1, -2)) @ W - I2), axis=(-2, -1))
    if np.any(drift > DRIFT_FATAL):
        raise NearSingularError(f"action output drifted from U(2) by {np.max(drift):.3g}")
    fix = drift > DRIFT_QUIET
    if np.any(fix):
        W = W.copy()
        for i in np.nonzero(fix)[0]:
            W[i] = polar(W[i])[0]
    return ActionResult(W, T, factor, cond, fix)


def act(g, Z):
    """g . Z = (AZ + B)(CZ + D)^-1 for a single point or an (N,2,2) stack."""
    pts, single = _as_points(Z)
    W = act_many(g, pts).points
    return W[0] if single else W


def action_conformal_factor(g, Z):
    """det((AZ+B)^-1 AZ - (CZ+D)^-1 CZ), computed directly from the blocks."""
    A, B, C, D = g.blocks
    Z = np.asarray(getattr(Z, "matrix", Z), dtype=np.complex128)
    M = np.linalg.solve(A @ Z + B, A @ Z) - np.linalg.solve(C @ Z + D, C @ Z)
    return complex(np.linalg.det(M))


def action_conformal_factor_alt(g, Z):
    """The equivalent expression det((AZ+B)^-1 B - (CZ+D)^-1 D)."""
    A, B, C, D = g.blocks
    Z = np.asarray(getattr(Z, "matrix", Z), dtype=np.complex128)
    M = np.linalg.solve(A @ Z + B, B) - np.linalg.solve(C @ Z + D, D)
    return complex(np.linalg.det(M))


def pulled_back_gram(g, Z):
    """Gram matrix of the metric pulled back by g, on the frame at Z (complex-bilinear)."""
    T = act_many(g, Z).tangent[0]
    return T.T @ np.diag(METRIC_SIGNS) @ T


# ---------------------------------------------------------------------------
# pullback of forms
# ---------------------------------------------------------------------------

def _minors(T, g):
    if g == 0:
        return np.ones(T.shape[:-2] + (1, 1), dtype=T.dtype)
    if g == 1:
        return T
    if g == 2:
        idx = BASIS[2]
        out = np.empty(T.shape[:-2] + (6, 6), dtype=T.dtype)
        for a, (i1, i2) in enumerate(idx):
            for b, (j1, j2) in enumerate(idx):
                out[..., a, b] = (T[..., i1, j1] * T[..., i2, j2]
                                  - T[..., i1, j2] * T[..., i2, j1])
        return out
    from .geometry import exterior_power
    return exterior_power(T, g)


def pullback(g, w, with_potential=True):
    """g^* w as a black-box field; the potential is pulled back alongside."""
    grade = w.grade
    pot = pullback(g, w.potential) if (with_potential and w.potential is not None) else None

    def evaluator(points):
        res = act_many(g, points)
        vals = w.evaluate(res.points)
        return np.einsum("ni,nij->nj", vals, _minors(res.tangent, grade))

    return FormField(grade, evaluator=evaluator, potential=pot, numeric=w.numeric,
                     label=(f"g*{w.label}" if w.label else None))


def represent(g, w):
    """pi(g) w = (g^-1)^* w."""
    return pullback(g.inv(), w)


def infinitesimal_action(X, w, step=1e-4, with_potential=True):
    """d pi(X) w = -d/dt (exp tX)^* w at t = 0.

    Central differences with step h and one Richardson level; complex X is
    split into real Lie(G1) parts and combined linearly.
    """
    X = np.asarray(X, dtype=np.complex128)
    if X.shape != (4, 4):
        raise ConstraintError("Lie algebra elements are 4x4 matrices")
    if not step > 1e-8:
        raise ValueError(f"finite-difference step {step} is too small")
    A, B = lie_g1_real_part(X)
    parts = [(c, M) for c, M in ((1.0, A), (1j, B)) if np.max(np.abs(M)) > 0]
    pot = None
    if with_potential and w.potential is not None:
        pot = infinitesimal_action(X, w.potential, step, with_potential=False)

    def deriv(points, M):
        def f(t):
            return pullback(ConformalElement(expm(t * M), "G1"), w, False).evaluate(points)
        d1 = (f(step) - f(-step)) / (2 * step)
        d2 = (f(2 * step) - f(-2 * step)) / (4 * step)
        return -(4 * d1 - d2) / 3

    def evaluator(points):
        out = np.zeros((len(points), len(BASIS[w.grade])), dtype=np.complex128)
        for c, M in parts:
            out += c * deriv(points, M)
        return out

    return FormField(w.grade, evaluator=evaluator, potential=pot, numeric=True)


# ---------------------------------------------------------------------------
# Minkowski space
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MinkowskiPoint:
    x1: float
    x2: float
    x3: float
    t: float

    @property
    def coords(self):
        return np.array([self.x1, self.x2, self.x3, self.t], dtype=float)

    def hermitian(self):
        return minkowski_hermitian(self.coords)


def lorentz_square(x):
    x = np.asarray(x, dtype=float)
    return -x[..., 0] ** 2 - x[..., 1] ** 2 - x[..., 2] ** 2 + x[..., 3] ** 2


def minkowski_hermitian(x):
    """X = [[t + x3, x1 + i x2], [x1 - i x2, t - x3]] for x = (x1, x2, x3, t)."""
    x = np.asarray(x, dtype=float)
    X = np.empty(x.shape[:-1] + (2, 2), dtype=np.complex128)
    X[..., 0, 0] = x[..., 3] + x[..., 2]
    X[..., 0, 1] = x[..., 0] + 1j * x[..., 1]
    X[..., 1, 0] = x[..., 0] - 1j * x[..., 1]
    X[..., 1, 1] = x[..., 3] - x[..., 2]
    return X


def hermitian_to_minkowski(X):
    X = np.asarray(X)
    return np.stack([X[..., 0, 1].real, X[..., 0, 1].imag,
                     (X[..., 0, 0].real - X[..., 1, 1].real) / 2,
                     (X[..., 0, 0].real + X[..., 1, 1].real) / 2], axis=-1)


# d/dx_a of the Hermitian matrix X
MINKOWSKI_DIRECTIONS = np.array([
    [[0, 1], [1, 0]],
    [[0, 1j], [-1j, 0]],
    [[1, 0], [0, -1]],
    [[1, 0], [0, 1]],
], dtype=np.complex128)


def _coords_of(p):
    if isinstance(p, MinkowskiPoint):
        return p.coords
    return np.asarray(p, dtype=float)


def embed_minkowski(p):
    """(I + iX)(I - iX)^-1, unitary for every Hermitian X."""
    X = minkowski_hermitian(_coords_of(p))
    # the two factors commute, so a left solve gives the same matrix
    return np.linalg.solve(I2 - 1j * X, I2 + 1j * X)


def embedding_conformal_factor(p):
    """4 / (1 + 2 |x|^2 + (x, x)^2), |x|^2 the Euclidean square of all four coordinates."""
    x = _coords_of(p)
    return 4.0 / (1 + 2 * np.sum(x * x, axis=-1) + lorentz_square(x) ** 2)


def embedding_factor_det(p):
    """The same factor as 4 / det(I + X^2)."""
    X = minkowski_hermitian(_coords_of(p))
    return 4.0 / np.linalg.det(I2 + X @ X).real


def embedding_tangent(p):
    """Frame matrix of the left-trivialized differential of the embedding.

    Column a is the frame coordinate vector of Q^-1 dQ(v_a) =
    2i (I + iX)^-1 v_a (I - iX)^-1, v_a = dX/dx_a.
    """
    X = minkowski_hermitian(_coords_of(p))
    left = np.linalg.inv(I2 + 1j * X)
    right = np.linalg.inv(I2 - 1j * X)
    cols = 2j * np.einsum("...ab,jbc,...cd->...jad", left, MINKOWSKI_DIRECTIONS, right)
    return np.swapaxes(frame_coords(cols), -1, -2)


def pull_to_minkowski(w, x):
    """Coefficients of F^* w on dx_a ^ dx_b (same index order as the coframe basis)."""
    x = np.atleast_2d(np.asarray(_coords_of(x), dtype=float))
    Q = embed_minkowski(x)
    T = embedding_tangent(x)
    return np.einsum("ni,nij->nj", w.evaluate(Q), _minors(T, w.grade))


@dataclass(frozen=True)
class MinkowskiTwoForm:
    """A 2-form on Minkowski space given by its dx_a ^ dx_b coefficients."""

    evaluator: object

    def coeffs(self, x):
        return np.asarray(self.evaluator(np.atleast_2d(np.asarray(x, dtype=float))),
                          dtype=np.complex128)


def eh_from_coeffs(c):
    """E, H from coefficients on dx12, dx13, dx14, dx23, dx24, dx34 (x4 = t):

    w = h1 dx2^dx3 - h2 dx1^dx3 + h3 dx1^dx2 - e1 dx1^dt - e2 dx2^dt - e3 dx3^dt.
    """
    c = np.asarray(c)
    H = np.stack([c[..., 3], -c[..., 1], c[..., 0]], axis=-1)
    E = np.stack([-c[..., 2], -c[..., 4], -c[..., 5]], axis=-1)
    return E, H


def coeffs_from_eh(E, H):
    E = np.asarray(E)
    H = np.asarray(H)
    return np.stack([H[..., 2], -H[..., 1], -E[..., 0], H[..., 0], -E[..., 1], -E[..., 2]],
                    axis=-1)


def extract_EH(w, p):
    """(E, H) of a 2-form at Minkowski point(s) p.

    ``w`` is a FormField on U(2) (pulled back through the embedding) or a
    MinkowskiTwoForm.  A single point gives 3-vectors; an (N,4) array gives
    (N,3) arrays.
    """
    x = _coords_of(p)
    single = x.ndim == 1
    if isinstance(w, MinkowskiTwoForm):
        c = w.coeffs(x)
    else:
        if w.grade != 2:
            raise DomainError("E and H are read off 2-forms")
        c = pull_to_minkowski(w, x)
    E, H = eh_from_coeffs(c)
    return (E[0], H[0]) if single else (E, H)


def maxwell_residuals(w, x, h=1e-4):
    """Central-difference residuals of div E, div H, dE/dt + curl H, dH/dt - curl E.

    Returns an (N, 8) array of residuals and the field scale max(|E|, |H|).
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    n = len(x)
    shifts = np.concatenate([x + h * e for e in np.eye(4)] + [x - h * e for e in np.eye(4)])
    E, H = extract_EH(w, shifts)
    E = E.reshape(2, 4, n, 3)
    H = H.reshape(2, 4, n, 3)
    dE = (E[0] - E[1]) / (2 * h)  # dE[a] = d/dx_a E
    dH = (H[0] - H[1]) / (2 * h)
    divE = dE[0, :, 0] + dE[1, :, 1] + dE[2, :, 2]
    divH = dH[0, :, 0] + dH[1, :, 1] + dH[2, :, 2]

    def curl(d):
        return np.stack([d[1, :, 2] - d[2, :, 1], d[2, :, 0] - d[0, :, 2],
                         d[0, :, 1] - d[1, :, 0]], axis=-1)

    r1 = dE[3] + curl(dH)
    r2 = dH[3] - curl(dE)
    E0, H0 = extract_EH(w, x)
    scale = max(np.max(np.abs(E0)), np.max(np.abs(H0)))
    return np.column_stack([divE, divH, r1, r2]), scale


# ---------------------------------------------------------------------------
# plane waves and the light-cone functional
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlaneWave:
    """E = e^{i(z,x)} E0, H = e^{i(z,x)} H0 with z = (u, freq) null."""

    u: np.ndarray
    freq: float
    E0: np.ndarray
    H0: np.ndarray

    @property
    def z(self):
        return np.concatenate([self.u, [self.freq]])

    def phase(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(1j * (-(x[..., :3] @ self.u) + self.freq * x[..., 3]))

    def fields(self, x):
        ph = self.phase(x)
        return ph[..., None] * self.E0, ph[..., None] * self.H0

    def two_form(self):
        def evaluator(x):
            E, H = self.fields(x)
            return coeffs_from_eh(E, H)
        return MinkowskiTwoForm(evaluator)

    def constraint_residuals(self):
        u, f, E0, H0 = self.u, self.freq, self.E0, self.H0
        return {
            "u.E0": abs(u @ E0),
            "u.H0": abs(u @ H0),
            "u x E0 + freq H0": float(np.max(np.abs(np.cross(u, E0) + f * H0))),
            "u x H0 - freq E0": float(np.max(np.abs(np.cross(u, H0) - f * E0))),
            "freq^2 - |u|^2": abs(f * f - u @ u),
        }

    def triad_det(self):
        """det of (u/|u|, H0/|H0|, E0/|E0|) for real amplitudes."""
        M = np.array([self.u / np.linalg.norm(self.u),
                      np.real(self.H0) / np.linalg.norm(self.H0),
                      np.real(self.E0) / np.linalg.norm(self.E0)])
        return float(np.linalg.det(M))

    def analytic_derivative_residual(self, x):
        """dw computed analytically: i zeta ^ w with zeta = (-u, freq); returns max |dw|."""
        zeta = np.concatenate([-self.u, [self.freq]]).astype(np.complex128)
        c = self.two_form().coeffs(x)
        dw = wedge_values(1j * zeta, 1, c, 2)
        star_c = c @ STAR.T
        dstar = wedge_values(1j * zeta, 1, star_c, 2)
        return float(max(np.max(np.abs(dw)), np.max(np.abs(dstar))))


def plane_wave(u, freq, E0, tol=1e-12):
    u = np.asarray(u, dtype=float)
    E0 = np.asarray(E0, dtype=np.complex128)
    if not np.any(u):
        raise ConstraintError("wave vector must be nonzero")
    scale = max(1.0, float(u @ u))
    if abs(freq * freq - u @ u) > tol * scale:
        raise ConstraintError(f"(u, freq) is not null: freq^2 = {freq * freq}, |u|^2 = {u @ u}")
    if abs(u @ E0) > tol * np.linalg.norm(u) * max(1.0, np.linalg.norm(E0)):
        raise ConstraintError("E0 must be transverse to u")
    H0 = -np.cross(u, E0) / freq
    return PlaneWave(u, float(freq), E0, H0)


def light_cone_pairing(z, Y):
    """Coefficient of q in det(Z + qY) / 2 with Z the Hermitian matrix of z."""
    Z = minkowski_hermitian(np.asarray(z, dtype=float))
    Y = np.asarray(Y, dtype=np.complex128)

    def f(q):
        return np.linalg.det(Z + q * Y) / 2

    return complex((f(1.0) - f(-1.0)) / 2)


def light_cone_functional(z, x):
    """Value of z on the generator [[0, 0], [xI, 0]] of Lie(S cap Nbar)."""
    return light_cone_pairing(z, x * I2).real
