"""The invariant Hermitian form <w, mu> = int_{SU(2)} alpha ^ conj(mu), with d alpha = w.

Both arguments must lie in the same eigenspace of the star.  The potential
alpha is taken from ``w.potential`` (or passed explicitly); for pulled-back
fields it is the pulled-back potential, since pullback commutes with d.
"""
from dataclasses import dataclass, field

import numpy as np

from .conformal import pullback
from .fields import FormField, MaxwellBasisLabel, maxwell_basis, wedge
from .geometry import (PROJ_MINUS_I, PROJ_PLUS_I, haar_sample,
                       integrate_threeform_su2)

PI2 = np.pi ** 2


class EigenspaceError(ValueError):
    """The two arguments of the pairing are not in a common star eigenspace."""


class MissingPotentialError(ValueError):
    """The first argument of the pairing carries no potential."""


@dataclass(frozen=True)
class PairingResult:
    value: complex
    quadrature_order: int
    estimated_error: float
    numeric: bool = False

    @property
    def in_pi2(self):
        return self.value / PI2

    def to_dict(self):
        return {"value": [self.value.real, self.value.imag],
                "value_pi2": [self.in_pi2.real, self.in_pi2.imag],
                "quadrature_order": self.quadrature_order,
                "estimated_error": self.estimated_error}


def eigen_sign(w, n_points=12, seed=12345, tol=1e-8):
    """+1 / -1 if w is a +i / -i eigenform of the star at sampled points, else 0."""
    pts = haar_sample(np.random.default_rng(seed), n_points, "U2")
    v = w.evaluate(pts)
    scale = np.max(np.abs(v))
    if scale == 0:
        return 0
    plus = np.max(np.abs(v @ PROJ_MINUS_I.T)) / scale   # what is left outside +i
    minus = np.max(np.abs(v @ PROJ_PLUS_I.T)) / scale
    if plus <= tol and minus > tol:
        return 1
    if minus <= tol and plus > tol:
        return -1
    return 0


def _integrand(alpha, mu):
    return wedge(alpha, mu.conj())


def _integrate(form, order, tol, max_order):
    if form.exact and order is None:
        n = max(8, form.su2_degree() + 2)
        return integrate_threeform_su2(form, n), n, 0.0
    if order is not None:
        val = integrate_threeform_su2(form, order)
        half = integrate_threeform_su2(form, max(2, order // 2))
        return val, order, abs(val - half)
    # adaptive doubling with a Cauchy stop
    n = 16
    prev = integrate_threeform_su2(form, n)
    while True:
        n *= 2
        cur = integrate_threeform_su2(form, n)
        err = abs(cur - prev)
        if err <= tol * max(abs(cur), 1e-300) or n >= max_order:
            return cur, n, err
        prev = cur


def hermitian_pair(w, mu, same_eigenspace=None, potential=None, order=None,
                   tol=1e-10, max_order=128, check_eigenspace=True):
    """<w, mu> with the potential of w.

    ``same_eigenspace`` (+1 for i, -1 for -i) states the contract; it is
    checked on sampled points unless ``check_eigenspace`` is False.
    """
    alpha = potential if potential is not None else w.potential
    if alpha is None:
        raise MissingPotentialError("the first argument needs a potential alpha with d alpha = w")
    if check_eigenspace:
        sw, sm = eigen_sign(w), eigen_sign(mu)
        if sw == 0 or sm == 0 or sw != sm:
            raise EigenspaceError(
                f"arguments are not in a common star eigenspace (signs {sw}, {sm})")
        if same_eigenspace is not None and same_eigenspace != sw:
            raise EigenspaceError(f"expected eigenspace {same_eigenspace:+d}i, found {sw:+d}i")
    form = _integrand(alpha, mu)
    value, n, err = _integrate(form, order, tol, max_order)
    return PairingResult(complex(value), int(n), float(err),
                         numeric=alpha.numeric or mu.numeric)


def expected_norm(label):
    """Closed form: -(4k+8)/(k+1) pi^2 on side L, the negative of that on side R."""
    if not isinstance(label, MaxwellBasisLabel):
        label = MaxwellBasisLabel(*label)
    val = -(4 * label.k + 8) / (label.k + 1) * PI2
    return val if label.side == "L" else -val


@dataclass
class GramReport:
    labels: list
    matrix: np.ndarray
    quadrature_order: int
    estimated_error: float
    results: list = field(default_factory=list)

    def to_dict(self):
        return {
            "labels": [str(l) for l in self.labels],
            "matrix_pi2": [[[v.real / PI2, v.imag / PI2] for v in row] for row in self.matrix],
            "matrix": [[[v.real, v.imag] for v in row] for row in self.matrix],
            "quadratureOrder": self.quadrature_order,
            "estimatedError": self.estimated_error,
        }


def gram_matrix(labels, order=None):
    """Pairwise pairings among basis solutions sharing one star eigenspace."""
    labels = [l if isinstance(l, MaxwellBasisLabel) else MaxwellBasisLabel(*l) for l in labels]
    signs = {l.eigen_sign for l in labels}
    if len(signs) != 1:
        raise EigenspaceError("gram_matrix needs labels from a single eigenspace")
    forms = [maxwell_basis(l) for l in labels]
    n = len(forms)
    M = np.zeros((n, n), dtype=np.complex128)
    orders, errs = [], []
    for i in range(n):
        for j in range(n):
            r = hermitian_pair(forms[i], forms[j], order=order, check_eigenspace=False)
            M[i, j] = r.value
            orders.append(r.quadrature_order)
            errs.append(r.estimated_error)
    return GramReport(labels, M, max(orders), max(errs))


@dataclass(frozen=True)
class InvarianceReport:
    before: complex
    after: complex
    rel_error: float
    quadrature_order: int
    estimated_error: float

    def to_dict(self):
        return {"before": [self.before.real, self.before.imag],
                "after": [self.after.real, self.after.imag],
                "relError": self.rel_error,
                "quadratureOrder": self.quadrature_order,
                "estimatedError": self.estimated_error}


def invariance_check(g, w, mu, tol=1e-10, max_order=128):
    """Compare <g^* w, g^* mu> with <w, mu>, the former by adaptive quadrature."""
    before = hermitian_pair(w, mu, check_eigenspace=False)
    gw = pullback(g, w)
    gmu = pullback(g, mu)
    after = hermitian_pair(gw, gmu, check_eigenspace=False, tol=tol, max_order=max_order)
    scale = max(abs(before.value), 1e-300)
    return InvarianceReport(before.value, after.value, abs(after.value - before.value) / scale,
                            after.quadrature_order, after.estimated_error)


def shifted_potential(alpha, f=None, c1=0.0, c4=0.0):
    """alpha + df + c1 alpha_1 + c4 alpha_4 (f an exact function)."""
    from .fields import alpha as coframe, exterior_derivative
    out = alpha
    if f is not None:
        out = out + exterior_derivative(FormField.function(f))
    if c1:
        out = out + coframe(1) * c1
    if c4:
        out = out + coframe(4) * c4
    return out
