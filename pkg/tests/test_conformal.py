import numpy as np
import pytest
from scipy.linalg import expm

from confmax import conformal as C
from confmax import fields as F
from confmax.geometry import FRAME, haar_sample


def _hermitian(rng):
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    return (a + a.conj().T) / 2


def _close(a, b, pts, tol=1e-9):
    va, vb = a.evaluate(pts), b.evaluate(pts)
    return np.max(np.abs(va - vb)) <= tol * max(1.0, np.max(np.abs(vb)))


# -- group elements and the Cayley map --------------------------------------

def test_cayley_of_identity():
    assert np.allclose(C.cayley(C.identity("G")).matrix, np.eye(4))


def test_cayley_of_nbar_and_n(rng):
    for _ in range(5):
        Y = _hermitian(rng)
        want = (C.I2 + 1j * Y) @ np.linalg.inv(C.I2 - 1j * Y)
        assert np.allclose(C.act(C.cayley(C.nbar(Y)), C.I2), want, atol=1e-12)
        assert np.allclose(C.act(C.cayley(C.n_upper(Y)), C.I2), C.I2, atol=1e-12)


def test_cayley_is_a_homomorphism(rng):
    a, b = C.nbar(_hermitian(rng)), C.n_upper(_hermitian(rng))
    lhs = C.cayley(a @ b)
    assert np.allclose(lhs.matrix, (C.cayley(a) @ C.cayley(b)).matrix)
    assert np.allclose(C.cayley_inverse(lhs).matrix, (a @ b).matrix)


def test_element_validation_and_json(rng):
    with pytest.raises(C.ConstraintError):
        C.ConformalElement(np.diag([2, 1, 1, 1]), "G1")
    with pytest.raises(C.ConstraintError):
        C.cayley(C.identity("G1"))
    g = C.random_g1(rng)
    back = C.ConformalElement.from_json(g.to_json())
    assert np.array_equal(back.matrix, g.matrix)
    assert np.allclose((g @ g.inv()).matrix, np.eye(4))


def test_lie_algebra_split(rng):
    X = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    A, B = C.lie_g1_real_part(X)
    assert C.is_lie_g1(A) and C.is_lie_g1(B)
    assert np.allclose(A + 1j * B, X)


# -- the action ---------------------------------------------------------------

def test_identity_and_stabilizer_of_I(rng):
    Z = haar_sample(rng, 5)
    assert np.allclose(C.act(C.identity(), Z), Z)
    A = haar_sample(rng, 1)[0]
    assert np.allclose(C.act(C.block_diag_G1(A, A), C.I2), C.I2)


def test_group_law(rng):
    Z = haar_sample(rng, 100)
    for _ in range(10):
        g, h = C.random_g1(rng), C.random_g1(rng)
        assert np.allclose(C.act(g, C.act(h, Z)), C.act(g @ h, Z), atol=1e-10)


def test_k_action_in_the_other_realization(rng):
    U, V = haar_sample(rng, 2)
    A, B = (U + V) / 2, (U - V) / 2j
    g = C.cayley(C.k_element_G(A, B))
    Z = haar_sample(rng, 4)
    assert np.allclose(C.act(g, Z), (A - 1j * B) @ Z @ np.linalg.inv(A + 1j * B))


def test_action_outputs_are_unitary(rng):
    W = C.act(C.random_g1(rng, 1.5), haar_sample(rng, 200))
    assert np.allclose(np.conj(np.swapaxes(W, -1, -2)) @ W, C.I2, atol=1e-12)


def test_near_singular_is_reported(rng):
    g = C.random_g1(rng)
    with pytest.raises(C.NearSingularError, match="condition estimate"):
        C.act_many(g, haar_sample(rng, 3), cond_limit=1.0)


def test_conformal_factor_examples(rng):
    Z = haar_sample(rng, 1)[0]
    assert C.action_conformal_factor(C.identity(), Z) == pytest.approx(1)
    k = C.random_k(rng)
    assert abs(C.action_conformal_factor(k, Z)) == pytest.approx(1)
    gram = C.pulled_back_gram(k, Z)
    assert np.allclose(gram, np.diag([-1, -1, -1, 1]) * C.action_conformal_factor(k, Z))


def test_two_factor_expressions_agree(rng):
    for _ in range(100):
        g = C.random_g1(rng)
        Z = haar_sample(rng, 1)[0]
        a, b = C.action_conformal_factor(g, Z), C.action_conformal_factor_alt(g, Z)
        assert abs(a - b) <= 1e-10 * abs(a)
        assert C.act_many(g, Z).factor[0] == pytest.approx(a, rel=1e-10)


def test_tangent_map_matches_finite_difference(rng):
    g = C.random_g1(rng)
    Z = haar_sample(rng, 1)[0]
    T = C.act_many(g, Z).tangent[0]
    W = C.act(g, Z)
    h = 1e-6
    for m in range(4):
        dW = (C.act(g, Z @ expm(h * FRAME[m])) - C.act(g, Z @ expm(-h * FRAME[m]))) / (2 * h)
        col = np.einsum("a,aij->ij", T[:, m], FRAME)
        assert np.allclose(np.linalg.solve(W, dW), col, atol=1e-7)


# -- pullbacks ----------------------------------------------------------------

def test_pullback_by_identity(rng):
    w = F.maxwell_basis((1, "L", 1))
    assert _close(C.pullback(C.identity(), w), w, haar_sample(rng, 10))


def test_pullback_is_contravariant(rng):
    w = F.maxwell_basis((0, "R", 1))
    g, h = C.random_g1(rng), C.random_g1(rng)
    pts = haar_sample(rng, 10)
    assert _close(C.pullback(g @ h, w), C.pullback(h, C.pullback(g, w)), pts)


def test_torus_scales_coframe(rng):
    w = np.exp(0.3j)
    g = C.block_diag_G1(C.I2, np.diag([w, 1 / w]))
    pts = haar_sample(rng, 10)
    for name, factor in (("e", w ** -2), ("f", w ** 2), ("h", 1)):
        a = F.alpha_named(name)
        assert _close(C.represent(g, a), a * factor, pts, 1e-12)


def test_pullback_keeps_maxwell_property(rng):
    pts = haar_sample(rng, 10)
    for lab in F.maxwell_labels(1):
        w = F.maxwell_basis(lab)
        gw = C.pullback(C.random_g1(rng), w)
        v = gw.evaluate(pts)
        s = lab.eigen_sign
        assert np.max(np.abs(v @ C.STAR.T - 1j * s * v)) <= 1e-10 * np.max(np.abs(v))
        # closed, certified through the pulled-back potential
        d_pot = F.exterior_derivative(gw.potential, fd_step=1e-3).evaluate(pts)
        assert np.max(np.abs(d_pot - v)) <= 1e-7 * np.max(np.abs(v))


def test_central_direction_acts_trivially(rng):
    w = F.maxwell_basis((1, "R", 1))
    d = C.infinitesimal_action(1j * np.eye(4), w)
    assert np.max(np.abs(d.evaluate(haar_sample(rng, 5)))) < 1e-8


def test_lie_k_action_matches_exact_lie_derivative(rng):
    pts = haar_sample(rng, 8)
    w = F.maxwell_basis((1, "L", 1))
    for x in ("e", "f", "h", "x2"):
        from confmax.rep_core import lie_element
        xm = lie_element(x)
        X = np.block([[C.Z2, C.Z2], [C.Z2, xm]])
        d = C.infinitesimal_action(X, w, with_potential=False)
        assert _close(d, F.lie_derivative_left(xm, w), pts, 1e-8)


def test_infinitesimal_action_rejects_bad_input():
    w = F.maxwell_basis((0, "L", 1))
    with pytest.raises(C.ConstraintError):
        C.infinitesimal_action(np.eye(3), w)
    with pytest.raises(ValueError):
        C.infinitesimal_action(np.eye(4), w, step=1e-12)


# -- Minkowski space ----------------------------------------------------------

def test_embedding_examples():
    assert np.allclose(C.embed_minkowski([0, 0, 0, 0]), C.I2)
    t = 0.7
    assert np.allclose(C.embed_minkowski([0, 0, 0, t]), (1 + 1j * t) / (1 - 1j * t) * C.I2)
    Q = C.embed_minkowski([1, 0, 0, 0])
    assert np.allclose(Q.conj().T @ Q, C.I2)
    ev = sorted(np.linalg.eigvals(Q), key=lambda z: z.imag)
    assert np.allclose(ev, [(1 - 1j) / (1 + 1j), (1 + 1j) / (1 - 1j)])


def test_embedding_factor_forms_agree(rng):
    x = rng.uniform(-3, 3, (50, 4))
    for xi in x:
        assert C.embedding_conformal_factor(xi) == pytest.approx(C.embedding_factor_det(xi), rel=1e-12)


def test_embedding_pullback_is_conformal(rng):
    x = rng.uniform(-2, 2, (20, 4))
    T = C.embedding_tangent(x)
    gram = np.einsum("nai,a,naj->nij", T, np.array([-1.0, -1, -1, 1]), T)
    f = C.embedding_conformal_factor(x)
    eta = np.diag([-1.0, -1, -1, 1])
    assert np.allclose(gram, f[:, None, None] * eta, atol=1e-12)


def test_embedding_matches_group_orbit(rng):
    for _ in range(50):
        x = rng.uniform(-2, 2, 4)
        Y = C.minkowski_hermitian(x)
        assert np.allclose(C.act(C.cayley(C.nbar(Y)), C.I2), C.embed_minkowski(x), atol=1e-10)


def test_eh_dictionary_round_trip(rng):
    E = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    H = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    E2, H2 = C.eh_from_coeffs(C.coeffs_from_eh(E, H))
    assert np.allclose(E2, E) and np.allclose(H2, H)


def test_extract_eh_examples():
    pw = C.plane_wave([0, 0, 1], 1.0, [1, 0, 0])
    E, H = C.extract_EH(pw.two_form(), np.zeros(4))
    assert np.allclose(E, [1, 0, 0]) and np.allclose(H, [0, -1, 0])
    E, H = C.extract_EH(F.FormField.zero(2), np.zeros(4))
    assert np.allclose(E, 0) and np.allclose(H, 0)


def test_star_moves_fields(rng):
    w = F.maxwell_basis((0, "L", 1)) + F.maxwell_basis((1, "R", 1))
    x = rng.uniform(-1, 1, (10, 4))
    E, H = C.extract_EH(w, x)
    Es, Hs = C.extract_EH(w.star(), x)
    assert np.allclose(Es, -H, atol=1e-12) and np.allclose(Hs, E, atol=1e-12)


def test_classical_maxwell_for_basis_solutions(rng):
    x = rng.uniform(-1, 1, (20, 4))
    for lab in F.maxwell_labels(1):
        res, scale = C.maxwell_residuals(F.maxwell_basis(lab), x)
        assert np.max(np.abs(res)) <= 1e-4 * scale


def test_maxwell_residuals_detect_non_solutions(rng):
    x = rng.uniform(-1, 1, (10, 4))
    res, scale = C.maxwell_residuals(F.closed_form_left(1, 1), x)
    assert np.max(np.abs(res)) > 1e-2 * scale


# -- plane waves --------------------------------------------------------------

def test_plane_wave_examples():
    pw = C.plane_wave([0, 0, 1], 1.0, [1, 0, 0])
    assert np.allclose(pw.H0, [0, -1, 0])
    assert pw.triad_det() == pytest.approx(1)
    flipped = C.plane_wave([0, 0, 1], -1.0, [1, 0, 0])
    assert np.allclose(flipped.H0, [0, 1, 0])
    assert flipped.triad_det() == pytest.approx(-1)


def test_plane_wave_is_a_vacuum_solution(rng):
    u = rng.standard_normal(3)
    e = np.cross(u, rng.standard_normal(3)) + 1j * np.cross(u, rng.standard_normal(3))
    pw = C.plane_wave(u, -np.linalg.norm(u), e)
    assert max(pw.constraint_residuals().values()) < 1e-12
    assert pw.analytic_derivative_residual(rng.uniform(-1, 1, (5, 4))) < 1e-12
    res, scale = C.maxwell_residuals(pw.two_form(), rng.uniform(-1, 1, (5, 4)))
    assert np.max(np.abs(res)) <= 1e-6 * scale


def test_plane_wave_constraint_errors():
    with pytest.raises(C.ConstraintError):
        C.plane_wave([0, 0, 1], 2.0, [1, 0, 0])
    with pytest.raises(C.ConstraintError):
        C.plane_wave([0, 0, 1], 1.0, [0, 0, 1])
    with pytest.raises(C.ConstraintError):
        C.plane_wave([0, 0, 0], 0.0, [1, 0, 0])


def test_light_cone_functional():
    for z in ([0, 0, 1, 1], [3, 4, 0, -5], [1, 2, 2, 3]):
        for x in (0.5, -2.0):
            assert C.light_cone_functional(z, x) == pytest.approx(z[3] * x, abs=1e-12)
