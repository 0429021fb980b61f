"""Hot numeric kernels.

Every kernel exists twice: a numba ``@njit`` version and a pure-numpy
version with the same signature.  The public names at the bottom of this
module point at one or the other depending on the ``CONFMAX_NUMBA``
environment variable ("0" forces numpy, anything else uses numba when it
imports).  Both variants stay importable as ``*_numpy`` / ``*_numba`` so
they can be compared and benchmarked against each other.
"""
import math
import os

import numpy as np

try:
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def decorator(func):
            return func

        if args and callable(args[0]):
            return args[0]
        return decorator

    prange = range


if HAVE_NUMBA and "NUMBA_THREADING_LAYER" not in os.environ:
    # the default layer probes for TBB first and warns when it is too old
    numba.config.THREADING_LAYER = "workqueue"

USE_NUMBA = HAVE_NUMBA and os.environ.get("CONFMAX_NUMBA", "1") != "0"


def set_threads_from_env():
    """Cap numba's thread pool at ``CONFMAX_THREADS`` if set."""
    value = os.environ.get("CONFMAX_THREADS")
    if not value or not HAVE_NUMBA:
        return
    n = max(1, min(int(value), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)


# ---------------------------------------------------------------------------
# frame coordinates of 2x2 matrices
#
# Y = c1*x1 + c2*x2 + c3*x3 + c4*x4 with x1 = diag(i,-i), x2 = [[0,1],[-1,0]],
# x3 = [[0,i],[i,0]], x4 = iI.  Works for any complex Y (complex c).
# ---------------------------------------------------------------------------

def frame_coords_numpy(Y):
    y11 = Y[..., 0, 0]
    y12 = Y[..., 0, 1]
    y21 = Y[..., 1, 0]
    y22 = Y[..., 1, 1]
    out = np.empty(Y.shape[:-2] + (4,), dtype=np.complex128)
    out[..., 0] = (y11 - y22) / 2j
    out[..., 1] = (y12 - y21) / 2
    out[..., 2] = (y12 + y21) / 2j
    out[..., 3] = (y11 + y22) / 2j
    return out


# ---------------------------------------------------------------------------
# polynomial evaluation
#
# A term table row (a, b, c, d, p) stands for u11^a u12^b u21^c u22^d det(u)^p;
# ``slot`` says which output column the term accumulates into.
# ---------------------------------------------------------------------------

def poly_eval_numpy(exps, coefs, slots, nslots, m):
    n = m.shape[0]
    out = np.zeros((n, nslots), dtype=np.complex128)
    if exps.shape[0] == 0:
        return out
    u11 = m[:, 0, 0]
    u12 = m[:, 0, 1]
    u21 = m[:, 1, 0]
    u22 = m[:, 1, 1]
    det = u11 * u22 - u12 * u21
    bases = (u11, u12, u21, u22)
    tables = []
    for j in range(4):
        top = int(exps[:, j].max())
        tab = np.ones((top + 1, n), dtype=np.complex128)
        for e in range(1, top + 1):
            tab[e] = tab[e - 1] * bases[j]
        tables.append(tab)
    pmin = int(min(exps[:, 4].min(), 0))
    pmax = int(max(exps[:, 4].max(), 0))
    dtab = np.ones((pmax - pmin + 1, n), dtype=np.complex128)
    inv = 1.0 / det
    for e in range(1, pmax + 1):
        dtab[e - pmin] = dtab[e - 1 - pmin] * det
    for e in range(1, -pmin + 1):
        dtab[-e - pmin] = dtab[-e + 1 - pmin] * inv
    for t in range(exps.shape[0]):
        a, b, c, d, p = exps[t]
        val = tables[0][a] * tables[1][b] * tables[2][c] * tables[3][d] * dtab[p - pmin]
        out[:, slots[t]] += coefs[t] * val
    return out


@njit(cache=True, parallel=True)
def _poly_eval_numba(exps, coefs, slots, nslots, m):
    n = m.shape[0]
    nt = exps.shape[0]
    out = np.zeros((n, nslots), dtype=np.complex128)
    if nt == 0:
        return out
    top = np.zeros(4, dtype=np.int64)
    pmin = 0
    pmax = 0
    for t in range(nt):
        for j in range(4):
            if exps[t, j] > top[j]:
                top[j] = exps[t, j]
        if exps[t, 4] < pmin:
            pmin = exps[t, 4]
        if exps[t, 4] > pmax:
            pmax = exps[t, 4]
    width = max(top.max(), pmax - pmin) + 1
    for i in prange(n):
        tab = np.ones((5, width), dtype=np.complex128)
        u11 = m[i, 0, 0]
        u12 = m[i, 0, 1]
        u21 = m[i, 1, 0]
        u22 = m[i, 1, 1]
        det = u11 * u22 - u12 * u21
        base = (u11, u12, u21, u22)
        for j in range(4):
            for e in range(1, top[j] + 1):
                tab[j, e] = tab[j, e - 1] * base[j]
        # row 4 holds det^(e + pmin)
        tab[4, -pmin] = 1.0
        for e in range(1, pmax + 1):
            tab[4, e - pmin] = tab[4, e - 1 - pmin] * det
        inv = 1.0 / det
        for e in range(1, -pmin + 1):
            tab[4, -e - pmin] = tab[4, -e + 1 - pmin] * inv
        for t in range(nt):
            val = (tab[0, exps[t, 0]] * tab[1, exps[t, 1]] * tab[2, exps[t, 2]]
                   * tab[3, exps[t, 3]] * tab[4, exps[t, 4] - pmin])
            out[i, slots[t]] += coefs[t] * val
    return out


def poly_eval_numba(exps, coefs, slots, nslots, m):
    return _poly_eval_numba(np.ascontiguousarray(exps, dtype=np.int64),
                            np.ascontiguousarray(coefs, dtype=np.complex128),
                            np.ascontiguousarray(slots, dtype=np.int64),
                            int(nslots),
                            np.ascontiguousarray(m, dtype=np.complex128))


# ---------------------------------------------------------------------------
# fractional-linear action with its left-trivialized tangent map
#
# For g = [[A, B], [C, D]] and unitary Z: W = (AZ+B)(CZ+D)^-1, and the tangent
# map sends Z X to W (P X Q) with P = W^-1 A Z - C Z, Q = (CZ+D)^-1.  The
# returned T[:, i, j] is the x_i coordinate of P x_j Q.  ``factor`` is
# det(P) det(Q), ``cond`` the 2-norm condition number of CZ+D.
# ---------------------------------------------------------------------------

_FRAME = np.array([
    [[1j, 0], [0, -1j]],
    [[0, 1], [-1, 0]],
    [[0, 1j], [1j, 0]],
    [[1j, 0], [0, 1j]],
], dtype=np.complex128)


def _inv2_numpy(M):
    det = M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0]
    out = np.empty_like(M)
    out[..., 0, 0] = M[..., 1, 1]
    out[..., 0, 1] = -M[..., 0, 1]
    out[..., 1, 0] = -M[..., 1, 0]
    out[..., 1, 1] = M[..., 0, 0]
    return out / det[..., None, None], det


def _cond2_numpy(M):
    fro2 = np.sum(np.abs(M) ** 2, axis=(-2, -1))
    det = np.abs(M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0])
    disc = np.sqrt(np.maximum(fro2 * fro2 - 4 * det * det, 0.0))
    smax2 = (fro2 + disc) / 2
    with np.errstate(divide="ignore"):
        return np.where(det > 0, smax2 / np.where(det > 0, det, 1.0), np.inf)


def mobius_numpy(g, Z):
    A, B, C, D = g[:2, :2], g[:2, 2:], g[2:, :2], g[2:, 2:]
    num = A @ Z + B
    den = C @ Z + D
    den_inv, den_det = _inv2_numpy(den)
    W = num @ den_inv
    W_inv, _ = _inv2_numpy(W)
    P = W_inv @ (A @ Z) - C @ Z
    Q = den_inv
    cols = np.einsum("nab,jbc,ncd->njad", P, _FRAME, Q)
    T = np.swapaxes(frame_coords_numpy(cols), -1, -2)
    factor = ((P[:, 0, 0] * P[:, 1, 1] - P[:, 0, 1] * P[:, 1, 0])
              * (Q[:, 0, 0] * Q[:, 1, 1] - Q[:, 0, 1] * Q[:, 1, 0]))
    return W, T, factor, _cond2_numpy(den)


@njit(cache=True)
def _mul2(a00, a01, a10, a11, b00, b01, b10, b11):
    return (a00 * b00 + a01 * b10, a00 * b01 + a01 * b11,
            a10 * b00 + a11 * b10, a10 * b01 + a11 * b11)


@njit(cache=True, parallel=True)
def _mobius_numba(g, Z):
    n = Z.shape[0]
    W = np.empty((n, 2, 2), dtype=np.complex128)
    T = np.empty((n, 4, 4), dtype=np.complex128)
    factor = np.empty(n, dtype=np.complex128)
    cond = np.empty(n, dtype=np.float64)
    a00, a01, a10, a11 = g[0, 0], g[0, 1], g[1, 0], g[1, 1]
    b00, b01, b10, b11 = g[0, 2], g[0, 3], g[1, 2], g[1, 3]
    c00, c01, c10, c11 = g[2, 0], g[2, 1], g[3, 0], g[3, 1]
    d00, d01, d10, d11 = g[2, 2], g[2, 3], g[3, 2], g[3, 3]
    for i in prange(n):
        z00, z01, z10, z11 = Z[i, 0, 0], Z[i, 0, 1], Z[i, 1, 0], Z[i, 1, 1]
        az = _mul2(a00, a01, a10, a11, z00, z01, z10, z11)
        cz = _mul2(c00, c01, c10, c11, z00, z01, z10, z11)
        n00, n01, n10, n11 = az[0] + b00, az[1] + b01, az[2] + b10, az[3] + b11
        m00, m01, m10, m11 = cz[0] + d00, cz[1] + d01, cz[2] + d10, cz[3] + d11
        mdet = m00 * m11 - m01 * m10
        q00, q01, q10, q11 = m11 / mdet, -m01 / mdet, -m10 / mdet, m00 / mdet
        w = _mul2(n00, n01, n10, n11, q00, q01, q10, q11)
        W[i, 0, 0], W[i, 0, 1], W[i, 1, 0], W[i, 1, 1] = w
        wdet = w[0] * w[3] - w[1] * w[2]
        wi00, wi01, wi10, wi11 = w[3] / wdet, -w[1] / wdet, -w[2] / wdet, w[0] / wdet
        t = _mul2(wi00, wi01, wi10, wi11, az[0], az[1], az[2], az[3])
        p00, p01, p10, p11 = t[0] - cz[0], t[1] - cz[1], t[2] - cz[2], t[3] - cz[3]
        for j in range(4):
            x = _FRAME[j]
            px = _mul2(p00, p01, p10, p11, x[0, 0], x[0, 1], x[1, 0], x[1, 1])
            y = _mul2(px[0], px[1], px[2], px[3], q00, q01, q10, q11)
            T[i, 0, j] = (y[0] - y[3]) / 2j
            T[i, 1, j] = (y[1] - y[2]) / 2
            T[i, 2, j] = (y[1] + y[2]) / 2j
            T[i, 3, j] = (y[0] + y[3]) / 2j
        factor[i] = (p00 * p11 - p01 * p10) * (q00 * q11 - q01 * q10)
        fro2 = abs(m00) ** 2 + abs(m01) ** 2 + abs(m10) ** 2 + abs(m11) ** 2
        ad = abs(mdet)
        disc = math.sqrt(max(fro2 * fro2 - 4 * ad * ad, 0.0))
        cond[i] = ((fro2 + disc) / 2) / ad if ad > 0 else np.inf
    return W, T, factor, cond


def mobius_numba(g, Z):
    return _mobius_numba(np.ascontiguousarray(g, dtype=np.complex128),
                         np.ascontiguousarray(Z, dtype=np.complex128))


# ---------------------------------------------------------------------------
# compensated summation
# ---------------------------------------------------------------------------

def compensated_sum_numpy(values):
    values = np.asarray(values, dtype=np.complex128).ravel()
    return complex(math.fsum(values.real), math.fsum(values.imag))


@njit(cache=True)
def _neumaier(x):
    s = 0.0
    c = 0.0
    for v in x:
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
    return s + c


def compensated_sum_numba(values):
    values = np.ascontiguousarray(values, dtype=np.complex128).ravel()
    return complex(_neumaier(values.real.copy()), _neumaier(values.imag.copy()))


if USE_NUMBA:
    poly_eval = poly_eval_numba
    mobius = mobius_numba
    compensated_sum = compensated_sum_numba
else:
    poly_eval = poly_eval_numpy
    mobius = mobius_numpy
    compensated_sum = compensated_sum_numpy

frame_coords = frame_coords_numpy
