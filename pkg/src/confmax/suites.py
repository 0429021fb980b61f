"""Named verification suites, one group of checks per acceptance criterion.

Every check records what was measured, what was expected, the tolerance and
a pass flag.  Reports contain no timings so that a fixed configuration
(including the seed) gives byte-identical output.
"""
from dataclasses import asdict, dataclass, field

import numpy as np

from . import branching, conformal, fields, geometry, pairing
from .rep_core import psi_poly

DEFAULT_TOLS = {
    "norm": 1e-8,
    "schur": 1e-10,
    "structure": 1e-12,
    "classify": fields.CLASSIFY_TOL,
    "embedding": 1e-6,
    "conformality": 1e-8,
    "invariance_k": 1e-6,
    "invariance_generic": 1e-3,
    "gram_offdiag": 1e-8,
    "annihilation": 1e-4,
    "maxwell_fd": 1e-4,
    "star_duality": 1e-12,
    "planewave": 1e-12,
    "sk_exponent": 1e-8,
}

SUITES = {
    "pairing": (1, 7, 8),
    "geometry": (2, 3),
    "ktypes": (4,),
    "conformal": (5, 6),
    "lie-action": (9, 13),
    "branching": (10,),
    "maxwell": (11,),
    "planewave": (12,),
}
SUITE_NAMES = tuple(SUITES) + ("all",)


@dataclass
class SuiteConfig:
    suite: str = "all"
    k_max: int = None
    samples: int = None
    seed: int = 0
    order: object = "auto"
    tolerances: dict = field(default_factory=dict)
    output: str = None
    format: str = "json"

    def tol(self, name):
        return float(self.tolerances.get(name, DEFAULT_TOLS[name]))

    def kmax(self, default):
        return default if self.k_max is None else int(self.k_max)

    def n(self, default):
        return default if self.samples is None else int(self.samples)

    def rng(self, salt):
        return np.random.default_rng([int(self.seed) & 0xFFFFFFFFFFFFFFFF, salt])

    def quad_order(self):
        return None if self.order in (None, "auto") else int(self.order)

    def echo(self):
        d = asdict(self)
        d["tolerances"] = {k: self.tol(k) for k in sorted(DEFAULT_TOLS)}
        return d


@dataclass
class Check:
    id: str
    criterion: int
    description: str
    measured: object
    expected: object
    tolerance: object
    passed: bool


def _f(x):
    """JSON-friendly number."""
    if isinstance(x, complex):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    return x


def _check(cid, crit, desc, measured, expected, tol, passed):
    return Check(cid, crit, desc, _f(measured), _f(expected), _f(tol), bool(passed))


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def criterion_1(cfg):
    tol = cfg.tol("norm")
    out = []
    for k in range(cfg.kmax(5) + 1):
        for sign in (1, -1):
            lab = fields.MaxwellBasisLabel(k, "L", sign)
            w = fields.maxwell_basis(lab)
            r = pairing.hermitian_pair(w, w, order=cfg.quad_order())
            exp = pairing.expected_norm(lab)
            rel = abs(r.value - exp) / abs(exp)
            out.append(_check(f"1.norm.{lab}", 1, f"<w,w>/pi^2 for {lab}",
                              r.value.real / pairing.PI2, exp / pairing.PI2, tol, rel <= tol))
    return out


def criterion_2(cfg):
    tol = cfg.tol("schur")
    out = []
    for k in range(cfg.kmax(6) + 1):
        f = psi_poly(k, k)
        sq = f * f.conj_on_unitary()
        form = fields.FormField(3, [sq, 0, 0, 0])
        val = geometry.integrate_threeform_su2(form) / geometry.SU2_VOLUME
        out.append(_check(f"2.schur.k{k}", 2, f"mean |psi_{k},{k}|^2 over SU(2)",
                          val.real, 1 / (k + 1), tol, abs(val - 1 / (k + 1)) <= tol))
    return out


def criterion_3(cfg):
    tol = cfg.tol("structure")
    out = []
    table = {0: {3: -2.0}, 1: {1: 2.0}, 2: {0: -2.0}, 3: {}}
    for j in range(4):
        expect = np.zeros(6)
        for idx, v in table[j].items():
            expect[idx] = v
        d = fields.exterior_derivative(fields.alpha(j + 1)).evaluate(np.eye(2)[None])[0]
        err = float(np.max(np.abs(d - expect)))
        out.append(_check(f"3.dalpha{j + 1}", 3, f"d alpha_{j + 1} on the 2-form basis",
                          err, 0.0, tol, err <= tol))
    star_table = {0: (5, 1), 1: (4, -1), 2: (3, -1), 3: (2, 1), 4: (1, 1), 5: (0, -1)}
    for col, (row, sgn) in star_table.items():
        e = np.zeros(6)
        e[col] = 1
        expect = np.zeros(6)
        expect[row] = sgn
        err = float(np.max(np.abs(geometry.hodge_star(e) - expect)))
        lab = geometry.TWO_FORM_LABELS
        out.append(_check(f"3.star.{lab[col]}", 3, f"J a{lab[col]} = {'+' if sgn > 0 else '-'}a{lab[row]}",
                          err, 0.0, tol, err <= tol))
    err = float(np.max(np.abs(geometry.STAR @ geometry.STAR + np.eye(6))))
    out.append(_check("3.star.squared", 3, "J^2 = -I", err, 0.0, tol, err <= tol))
    return out


def criterion_4(cfg):
    tol = cfg.tol("classify")
    out = []
    kmax = cfg.kmax(5)
    for k in range(kmax + 1):
        for lab in (fields.MaxwellBasisLabel(k, s, g) for s in ("L", "R") for g in (1, -1)):
            w = fields.maxwell_basis(lab)
            rep = fields.classify_form(w)
            ok = rep.is_maxwell and rep.eigen_sign == lab.eigen_sign
            out.append(_check(f"4.maxwell.{lab}", 4, f"{lab} closed with J = {lab.eigen_sign:+d}i",
                              max(min(rep.plus, rep.minus), 0.0), 0.0, tol, ok))
        for l in range(-(k + 6), k + 7):
            if (l - k) % 2 or abs(l) == k + 2:
                continue
            rep = fields.j_classification(k, l)
            out.append(_check(f"4.nonmaxwell.k{k}.l{l}", 4, f"(k,l)=({k},{l}) is not a solution",
                              min(rep.plus, rep.minus), f"> {tol}", tol, not rep.is_maxwell))
    return out


def _fd_metric_ratio(x, v, h=1e-5):
    Qp = conformal.embed_minkowski(x + h * v)
    Qm = conformal.embed_minkowski(x - h * v)
    Q = conformal.embed_minkowski(x)
    Y = np.linalg.solve(Q, (Qp - Qm) / (2 * h))
    c = geometry.frame_coords(Y)
    num = float(np.real(np.sum(geometry.METRIC_SIGNS * c * c)))
    return num / float(conformal.lorentz_square(v))


def criterion_5(cfg):
    tol = cfg.tol("embedding")
    rng = cfg.rng(5)
    out = []
    f0 = conformal.embedding_conformal_factor(np.zeros(4))
    out.append(_check("5.origin", 5, "embedding factor at the origin", f0, 4.0, 0.0, f0 == 4.0))
    worst = 0.0
    for _ in range(cfg.n(100)):
        x = rng.uniform(-2, 2, 4)
        v = rng.standard_normal(4)
        while abs(conformal.lorentz_square(v)) < 0.1:
            v = rng.standard_normal(4)
        ratio = _fd_metric_ratio(x, v)
        f = conformal.embedding_conformal_factor(x)
        worst = max(worst, abs(ratio - f) / f)
    out.append(_check("5.fd_ratio", 5, "FD metric ratio vs 4/(1+2|x|^2+(x,x)^2)",
                      worst, 0.0, tol, worst <= tol))
    return out


def criterion_6(cfg):
    tol = cfg.tol("conformality")
    rng = cfg.rng(6)
    eps = np.diag(geometry.METRIC_SIGNS)
    worst_gram = worst_det = 0.0
    for _ in range(cfg.n(50)):
        g = conformal.random_g1(rng)
        Z = geometry.haar_sample(rng, 1)[0]
        gram = conformal.pulled_back_gram(g, Z)
        s = np.trace(gram @ eps) / 4
        worst_gram = max(worst_gram, float(np.max(np.abs(gram - s * eps)) / abs(s)))
        f1 = conformal.action_conformal_factor(g, Z)
        f2 = conformal.action_conformal_factor_alt(g, Z)
        worst_det = max(worst_det, abs(s - f1) / abs(s), abs(s - f2) / abs(s))
    return [
        _check("6.gram_scalar", 6, "pulled-back Gram = scalar * diag(-1,-1,-1,1)",
               worst_gram, 0.0, tol, worst_gram <= tol),
        _check("6.factor_match", 6, "Gram scalar vs both determinant expressions",
               worst_det, 0.0, tol, worst_det <= tol),
    ]


def _invariance_pairs():
    a = fields.maxwell_basis((0, "R", 1))
    b = fields.maxwell_basis((1, "R", 1))
    c = fields.maxwell_basis((0, "L", -1))
    w = fields.linear_combination([a, b], [1.0, 0.5 + 0.25j])
    mu = fields.linear_combination([a, b, c], [1.0, -0.3j, 0.4])
    return [(w, w), (w, mu), (c, c)]


def criterion_7(cfg):
    rng = cfg.rng(7)
    pairs = _invariance_pairs()
    out = []
    n = cfg.n(10)
    for kind, tol in (("K", cfg.tol("invariance_k")), ("generic", cfg.tol("invariance_generic"))):
        worst = 0.0
        cert = True
        for i in range(n):
            g = conformal.random_k(rng) if kind == "K" else conformal.random_near_identity(rng, 0.5)
            w, mu = pairs[i % len(pairs)]
            rep = pairing.invariance_check(g, w, mu)
            worst = max(worst, rep.rel_error)
            if kind == "generic":
                cert = cert and rep.estimated_error <= tol * abs(rep.after)
        out.append(_check(f"7.invariance.{kind}", 7, f"<g*w, g*mu> = <w, mu> for {n} {kind} g",
                          worst, 0.0, tol, worst <= tol and cert))
    return out


def criterion_8(cfg):
    tol = cfg.tol("gram_offdiag")
    kmax = cfg.kmax(3)
    out = []
    for side in ("L", "R"):
        for sign in (1, -1):
            labels = [fields.MaxwellBasisLabel(k, side, sign) for k in range(kmax + 1)]
            rep = pairing.gram_matrix(labels, order=cfg.quad_order())
            M = rep.matrix
            diag = np.real(np.diag(M))
            scale = float(np.max(np.abs(diag)))
            off = float(np.max(np.abs(M - np.diag(np.diag(M))))) / scale
            want = 1 if side == "R" else -1
            tag = f"{side}{'+' if sign > 0 else '-'}"
            out.append(_check(f"8.sign.{tag}", 8, f"Gram diagonal sign on {tag}, k<={kmax}",
                              [float(d / pairing.PI2) for d in diag], "positive" if want > 0 else "negative",
                              0.0, bool(np.all(want * diag > 0))))
            out.append(_check(f"8.offdiag.{tag}", 8, f"Gram off-diagonal on {tag}",
                              off, 0.0, tol, off <= tol))
    return out


def criterion_9(cfg):
    tol = cfg.tol("annihilation")
    rng = cfg.rng(9)
    pts = geometry.haar_sample(rng, cfg.n(20))
    out = []
    for fam, sign, maker, name in (("(2,0,2)", 1, conformal.p_plus, "p+"),
                                   ("(2,0,-2)", -1, conformal.p_minus, "p-")):
        worst = 0.0
        for v in fields.lowering_orbit((0, "R", sign)):
            nv = np.max(np.abs(v.evaluate(pts)))
            for i in range(2):
                for j in range(2):
                    X = np.zeros((2, 2), complex)
                    X[i, j] = 1
                    d = conformal.infinitesimal_action(maker(X), v, with_potential=False)
                    worst = max(worst, float(np.max(np.abs(d.evaluate(pts))) / nv))
        out.append(_check(f"9.{name}.{fam}", 9, f"{name} annihilates the K-type {fam}",
                          worst, 0.0, tol, worst <= tol))
    return out


def criterion_10(cfg):
    order = int(cfg.order) if cfg.order not in (None, "auto") else 40
    out = []
    for sign in (1, -1):
        rep = branching.dual_pair_decomposition_check(order, sign)
        fam = "+" if sign > 0 else "-"
        out.append(_check(f"10.identity.{fam}", 10, f"exact match to x^{sign * order}",
                          rep.to_dict()["firstMismatch"], "none", 0, rep.success))
        out.append(_check(f"10.dimensions.{fam}", 10, "y=1 coefficients equal (k+3)(k+1)",
                          rep.dimensions_ok, True, 0, rep.dimensions_ok))
        out.append(_check(f"10.lowest.{fam}", 10, "lowest S cap K power",
                          rep.lowest_power, 4 * sign, 0, rep.lowest_power == 4 * sign))
    return out


def criterion_11(cfg):
    tol = cfg.tol("maxwell_fd")
    stol = cfg.tol("star_duality")
    rng = cfg.rng(11)
    x = rng.uniform(-1, 1, (cfg.n(50), 4))
    out = []
    for lab in fields.maxwell_labels(cfg.kmax(2)):
        w = fields.maxwell_basis(lab)
        res, scale = conformal.maxwell_residuals(w, x)
        rel = float(np.max(np.abs(res)) / scale)
        out.append(_check(f"11.vacuum.{lab}", 11, f"FD vacuum Maxwell residual for {lab}",
                          rel, 0.0, tol, rel <= tol))
        E, H = conformal.extract_EH(w, x)
        Es, Hs = conformal.extract_EH(w.star(), x)
        err = float(max(np.max(np.abs(Hs - E)), np.max(np.abs(Es + H))) / scale)
        out.append(_check(f"11.star.{lab}", 11, "star moves E to the H slot and H to -E",
                          err, 0.0, stol, err <= stol))
    return out


def criterion_12(cfg):
    tol = cfg.tol("planewave")
    rng = cfg.rng(12)
    out = []
    cases = [(np.array([0.0, 0.0, 1.0]), 1.0, np.array([1.0, 0.0, 0.0]))]
    for _ in range(cfg.n(20)):
        u = rng.standard_normal(3)
        e = np.cross(u, rng.standard_normal(3))
        cases.append((u, float(np.linalg.norm(u)) * rng.choice([1, -1]), e))
    worst = 0.0
    handed = True
    func = 0.0
    for u, f, e0 in cases:
        pw = conformal.plane_wave(u, f, e0)
        scale = max(1.0, np.linalg.norm(u)) * max(1.0, np.linalg.norm(e0))
        worst = max(worst, max(pw.constraint_residuals().values()) / scale)
        det = pw.triad_det()
        handed = handed and (abs(det - np.sign(f)) <= 1e-9)
        for x in (0.5, -1.25, 2.0):
            val = conformal.light_cone_functional(pw.z, x)
            func = max(func, abs(val - f * x) / max(1.0, abs(f * x)))
    out.append(_check("12.constraints", 12, "transversality, curl relations, null z",
                      worst, 0.0, tol, worst <= tol))
    out.append(_check("12.triad", 12, "triad (u, H0, E0) right-handed iff freq > 0",
                      handed, True, 0, handed))
    out.append(_check("12.functional", 12, "light-cone functional = freq * x",
                      func, 0.0, tol, func <= tol))
    return out


def criterion_13(cfg):
    tol = cfg.tol("sk_exponent")
    theta = 0.1
    g = conformal.s_cap_k(theta)
    rng = cfg.rng(13)
    pts = geometry.haar_sample(rng, cfg.n(25))
    out = []
    for k in range(cfg.kmax(5) + 1):
        for side in ("R", "L"):
            for sign in (1, -1):
                lab = fields.MaxwellBasisLabel(k, side, sign)
                w = fields.maxwell_basis(lab)
                v = w.evaluate(pts)
                gv = conformal.represent(g, w).evaluate(pts)
                mask = np.abs(v) > 1e-3 * np.max(np.abs(v))
                ratio = np.mean(gv[mask] / v[mask])
                n = int(np.rint(np.angle(ratio) / theta))
                err = float(np.max(np.abs(gv - np.exp(1j * n * theta) * v)) / np.max(np.abs(v)))
                want = -sign * (2 * k + 4)
                out.append(_check(f"13.exponent.{lab}", 13, f"S cap K exponent on {lab}",
                                  n, want, tol, n == want and err <= tol))
    return out


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 14)}


def run_suite(cfg):
    """Run the checks for ``cfg.suite``; returns (report dict, all passed)."""
    if cfg.suite not in SUITE_NAMES:
        raise KeyError(cfg.suite)
    crits = sorted({c for s in SUITES.values() for c in s}) if cfg.suite == "all" else SUITES[cfg.suite]
    # criteria run one after another; parallelism lives inside the numba
    # kernels (capped by CONFMAX_THREADS), whose thread pool is not reentrant
    checks = [ch for c in crits for ch in CRITERIA[c](cfg)]
    checks.sort(key=lambda ch: (ch.criterion, ch.id))
    passed = all(ch.passed for ch in checks)
    report = {"schema": "confmax.report/1", "config": cfg.echo(),
              "checks": [asdict(ch) for ch in checks], "passed": passed}
    return report, passed
