"""Hot numeric kernels.

Each kernel with a loop-heavy inner body exists twice: a ``*_nb`` variant
written as explicit loops and compiled by numba, and a ``*_np`` variant that
is plain vectorized numpy. The public names (``project_simplex``,
``mutual_information_array``, ``apply_local_array``, ``jacobi_eigh``) are
bound to one or the other at import time according to
:data:`sharedrand._accel.USE_NUMBA`.

The multi-start search and the game objectives are single-source: they are
written in the numpy subset numba understands and are compiled only when the
accelerated path is active.
"""
import math

import numpy as np

from ._accel import USE_NUMBA, always_njit, njit

GOLDEN = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1
_INV_2_53 = 1.0 / 9007199254740992.0

STEP_START = 0.25
STEP_FLOOR = 1e-9
RANDOM_TRIALS = 4
PATTERN_TRIALS = 8
SOFT_PHASES = 9
SOFT_GROWTH = 3.0


# --------------------------------------------------------------------------
# seeded generator: xorshift64* state, splitmix64 seeding
# --------------------------------------------------------------------------

def _splitmix64_py(s):
    s = (s + GOLDEN) & MASK64
    z = s
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return s, z ^ (z >> 31)


def _new_state_py(seed, start):
    s = (int(seed) ^ ((int(start) * GOLDEN) & MASK64)) & MASK64
    _, z = _splitmix64_py(s)
    return [z if z != 0 else 1]


def _next_u64_py(state):
    x = state[0]
    x ^= x >> 12
    x ^= (x << 25) & MASK64
    x ^= x >> 27
    state[0] = x
    return (x * 0x2545F4914F6CDD1D) & MASK64


def _uniform_py(state):
    return (_next_u64_py(state) >> 11) * _INV_2_53


@always_njit(cache=True)
def _splitmix64_nb(s):
    s = s + np.uint64(0x9E3779B97F4A7C15)
    z = s
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return s, z ^ (z >> np.uint64(31))


@always_njit(cache=True)
def _new_state_nb(seed, start):
    s = seed ^ (np.uint64(start) * np.uint64(0x9E3779B97F4A7C15))
    _, z = _splitmix64_nb(s)
    state = np.empty(1, dtype=np.uint64)
    state[0] = z if z != np.uint64(0) else np.uint64(1)
    return state


@always_njit(cache=True)
def _next_u64_nb(state):
    x = state[0]
    x ^= x >> np.uint64(12)
    x ^= x << np.uint64(25)
    x ^= x >> np.uint64(27)
    state[0] = x
    return x * np.uint64(0x2545F4914F6CDD1D)


@always_njit(cache=True)
def _uniform_nb(state):
    return (_next_u64_nb(state) >> np.uint64(11)) * (1.0 / 9007199254740992.0)


# --------------------------------------------------------------------------
# Euclidean projection onto the probability simplex
# --------------------------------------------------------------------------

def _project_simplex_np(v):
    v = np.asarray(v, dtype=np.float64)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, v.shape[0] + 1)
    ok = u - css / k > 0
    theta = css[ok][-1] / k[ok][-1]
    return np.maximum(v - theta, 0.0)


@always_njit(cache=True)
def _project_simplex_nb(v):
    n = v.shape[0]
    u = np.sort(v)[::-1]
    css = 0.0
    theta = 0.0
    for k in range(n):
        css += u[k]
        t = (css - 1.0) / (k + 1)
        if u[k] - t > 0.0:
            theta = t
    out = np.empty(n)
    for k in range(n):
        d = v[k] - theta
        out[k] = d if d > 0.0 else 0.0
    return out


# --------------------------------------------------------------------------
# entropy of a joint table
# --------------------------------------------------------------------------

def _plogp_sum_np(p):
    p = np.where((p < 0.0) & (p >= -1e-12), 0.0, p)
    nz = p > 0.0
    return -float(np.sum(p[nz] * np.log2(p[nz])))


def _mutual_information_np(p):
    p = np.asarray(p, dtype=np.float64)
    return (_plogp_sum_np(p.sum(axis=1)) + _plogp_sum_np(p.sum(axis=0))
            - _plogp_sum_np(p.ravel()))


@always_njit(cache=True)
def _mutual_information_nb(p):
    na, nb = p.shape
    ra = np.zeros(na)
    cb = np.zeros(nb)
    hxy = 0.0
    for i in range(na):
        for j in range(nb):
            v = p[i, j]
            if v < 0.0 and v >= -1e-12:
                v = 0.0
            ra[i] += v
            cb[j] += v
            if v > 0.0:
                hxy -= v * math.log2(v)
    hx = 0.0
    for i in range(na):
        if ra[i] > 0.0:
            hx -= ra[i] * math.log2(ra[i])
    hy = 0.0
    for j in range(nb):
        if cb[j] > 0.0:
            hy -= cb[j] * math.log2(cb[j])
    return hx + hy - hxy


# --------------------------------------------------------------------------
# local product map S_A (x) S_B acting on a joint table
# --------------------------------------------------------------------------

def _apply_local_np(sa, sb, p):
    return sa @ p @ sb.T


@always_njit(cache=True)
def _apply_local_nb(sa, sb, p):
    na_out, na = sa.shape
    nb_out, nb = sb.shape
    tmp = np.zeros((na, nb_out))
    for x in range(na):
        for y in range(nb):
            v = p[x, y]
            if v == 0.0:
                continue
            for yo in range(nb_out):
                tmp[x, yo] += sb[yo, y] * v
    out = np.zeros((na_out, nb_out))
    for xo in range(na_out):
        for x in range(na):
            w = sa[xo, x]
            if w == 0.0:
                continue
            for yo in range(nb_out):
                out[xo, yo] += w * tmp[x, yo]
    return out


# --------------------------------------------------------------------------
# cyclic complex Jacobi for small Hermitian matrices
# --------------------------------------------------------------------------

def _offdiag_norm_np(a):
    off = a[~np.eye(a.shape[0], dtype=bool)]
    return float(np.sqrt(np.sum(off.real ** 2 + off.imag ** 2)))


def _jacobi_eigh_np(h, tol=1e-12, max_sweeps=100):
    a = np.array(h, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    sweeps = 0
    while _offdiag_norm_np(a) > tol and sweeps < max_sweeps:
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                # phase on column/row q makes a[p, q] real and positive
                ph = apq / mag
                a[:, q] *= np.conj(ph)
                a[q, :] *= ph
                v[:, q] *= np.conj(ph)
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                colp = a[:, p].copy()
                a[:, p] = c * colp - s * a[:, q]
                a[:, q] = s * colp + c * a[:, q]
                rowp = a[p, :].copy()
                a[p, :] = c * rowp - s * a[q, :]
                a[q, :] = s * rowp + c * a[q, :]
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order], sweeps


@always_njit(cache=True)
def _jacobi_eigh_nb(h, tol=1e-12, max_sweeps=100):
    n = h.shape[0]
    a = h.astype(np.complex128).copy()
    v = np.eye(n, dtype=np.complex128)
    sweeps = 0
    while sweeps < max_sweeps:
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if math.sqrt(off) <= tol:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                ph = apq / mag
                cph = ph.conjugate()
                for k in range(n):
                    a[k, q] *= cph
                for k in range(n):
                    a[q, k] *= ph
                for k in range(n):
                    v[k, q] *= cph
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = sgn / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    order = np.argsort(w, kind="mergesort")
    return w[order], v[:, order], sweeps


if USE_NUMBA:
    project_simplex = _project_simplex_nb
    mutual_information_array = _mutual_information_nb
    apply_local_array = _apply_local_nb
    jacobi_eigh = _jacobi_eigh_nb
    _new_state = _new_state_nb
    _uniform = _uniform_nb
else:
    project_simplex = _project_simplex_np
    mutual_information_array = _mutual_information_np
    apply_local_array = _apply_local_np
    jacobi_eigh = _jacobi_eigh_np
    _new_state = _new_state_py
    _uniform = _uniform_py


# --------------------------------------------------------------------------
# multi-start direct search over a product of simplices
# --------------------------------------------------------------------------

@njit(cache=True)
def smooth_min(cells, beta):
    """Soft minimum ``-log(sum exp(-beta c)) / beta``; the hard min for beta <= 0."""
    mn = cells.min()
    if beta <= 0.0 or cells.shape[0] == 1:
        return mn
    acc = 0.0
    for k in range(cells.shape[0]):
        acc += math.exp(-beta * (cells[k] - mn))
    return mn - math.log(acc) / beta


@njit(cache=True)
def _gauss(state):
    u1 = _uniform(state)
    u2 = _uniform(state)
    if u1 < 1e-300:
        u1 = 1e-300
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


@njit(nogil=True, cache=True)
def search_start(objective, args, offsets, sizes, seed, start, max_iters, tol, betas):
    """One start of the direct search.

    Returns ``(value, x, history, iterations, stalled)`` where ``history`` holds
    the phase objective at the end of every smoothing phase.
    """
    state = _new_state(seed, start)
    nblocks = sizes.shape[0]
    npar = offsets[nblocks - 1] + sizes[nblocks - 1]
    x = np.empty(npar)
    for b in range(nblocks):
        o = offsets[b]
        tot = 0.0
        for k in range(sizes[b]):
            e = -math.log(1.0 - _uniform(state))
            x[o + k] = e
            tot += e
        for k in range(sizes[b]):
            x[o + k] /= tot

    history = np.empty(betas.shape[0])
    step = STEP_START
    iters = 0
    stalled = False
    for ph in range(betas.shape[0]):
        beta = betas[ph]
        f = smooth_min(objective(x, args), beta)
        if ph > 0:
            step = max(4.0 * step, 1e-3)
        stalled = False
        while iters < max_iters:
            iters += 1
            f0 = f
            x0 = x.copy()
            # mass transfer j -> i inside one block keeps the point feasible
            for b in range(nblocks):
                o = offsets[b]
                n = sizes[b]
                for i in range(n):
                    for j in range(n):
                        if i == j:
                            continue
                        d = min(step, x[o + j])
                        if d <= 0.0:
                            continue
                        xi = x[o + i]
                        xj = x[o + j]
                        x[o + i] = xi + d
                        x[o + j] = xj - d
                        fy = smooth_min(objective(x, args), beta)
                        if fy > f:
                            f = fy
                        else:
                            x[o + i] = xi
                            x[o + j] = xj
            for _ in range(RANDOM_TRIALS):
                y = x.copy()
                for b in range(nblocks):
                    o = offsets[b]
                    n = sizes[b]
                    v = np.empty(n)
                    for k in range(n):
                        v[k] = x[o + k] + step * _gauss(state)
                    w = project_simplex(v)
                    for k in range(n):
                        y[o + k] = w[k]
                fy = smooth_min(objective(y, args), beta)
                if fy > f:
                    f = fy
                    x = y
            # pattern move: keep extrapolating along this sweep's displacement
            if f > f0:
                scale = 1.0
                for _ in range(PATTERN_TRIALS):
                    y = x.copy()
                    for b in range(nblocks):
                        o = offsets[b]
                        n = sizes[b]
                        v = np.empty(n)
                        for k in range(n):
                            v[k] = x[o + k] + scale * (x[o + k] - x0[o + k])
                        w = project_simplex(v)
                        for k in range(n):
                            y[o + k] = w[k]
                    fy = smooth_min(objective(y, args), beta)
                    if fy > f:
                        f = fy
                        x = y
                        scale *= 2.0
                    else:
                        break
            if f - f0 <= tol:
                step *= 0.5
                if step < STEP_FLOOR:
                    stalled = True
                    break
        history[ph] = f
    value = smooth_min(objective(x, args), 0.0)
    return value, x, history, iters, stalled


# --------------------------------------------------------------------------
# objectives: parameter vector -> cells whose minimum is maximized
# --------------------------------------------------------------------------

@njit(cache=True)
def offdiag_cells(q):
    n = q.shape[0]
    out = np.empty(n * (n - 1))
    k = 0
    for i in range(n):
        for j in range(n):
            if i != j:
                out[k] = q[i, j]
                k += 1
    return out


@njit(cache=True)
def alpha_edge_table(x, n):
    """Joint n x n table from alpha-edge parameters.

    Layout: ``[alpha, 1 - alpha, A[:,0], A[:,1], B[:,0], B[:,1]]``.
    """
    a = x[0]
    a0 = x[2:2 + n]
    a1 = x[2 + n:2 + 2 * n]
    b0 = x[2 + 2 * n:2 + 3 * n]
    b1 = x[2 + 3 * n:2 + 4 * n]
    return a * np.outer(a0, b0) + (1.0 - a) * np.outer(a1, b1)


@njit(cache=True)
def general_table(x, m, n):
    """Joint n x n table from a full m x m source and two m -> n maps.

    Layout: ``[P.ravel(), A[:,0], ..., A[:,m-1], B[:,0], ..., B[:,m-1]]``.
    """
    src = np.ascontiguousarray(x[:m * m]).reshape((m, m))
    sa = np.ascontiguousarray(x[m * m:m * m + m * n]).reshape((m, n)).T.copy()
    sb = np.ascontiguousarray(x[m * m + m * n:m * m + 2 * m * n]).reshape((m, n)).T.copy()
    return sa @ src @ sb.T


@njit(cache=True)
def alpha_edge_cells(x, args):
    return offdiag_cells(alpha_edge_table(x, int(args[0])))


@njit(cache=True)
def general_cells(x, args):
    return offdiag_cells(general_table(x, int(args[1]), int(args[0])))


@njit(cache=True)
def edge_penalized_cells(x, args):
    n = int(args[0])
    q = alpha_edge_table(x, n)
    diag = 0.0
    for i in range(n):
        diag += q[i, i]
    return offdiag_cells(q) - args[1] * diag


@njit(cache=True)
def edge_fit_cells(x, args):
    """Negative squared residual of the alpha-edge fit to a 2 x 2 target.

    Layout: ``[alpha, ., a1, ., a2, ., b1, ., b2, .]`` with ``args`` the
    Alice-major flattened target.
    """
    a = x[0]
    a1 = x[2]
    a2 = x[4]
    b1 = x[6]
    b2 = x[8]
    k1 = a1 * b1 * a + a2 * b2 * (1.0 - a)
    k2 = a1 * a + a2 * (1.0 - a) - k1
    k3 = b1 * a + b2 * (1.0 - a) - k1
    k4 = 1.0 - k1 - k2 - k3
    r = (k1 - args[0]) ** 2 + (k2 - args[1]) ** 2 + (k3 - args[2]) ** 2 + (k4 - args[3]) ** 2
    out = np.empty(1)
    out[0] = -r
    return out
