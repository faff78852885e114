"""Integer enumeration kernels.

Each kernel exists twice: a loop version compiled with numba ``@njit`` and a
vectorised numpy version.  The numba path is used when numba imports and the
environment variable ``PPSQUARES_DISABLE_NUMBA`` is unset (or ``0``).  Both
paths return identical arrays; ``benchmarks/bench_kernels.py`` times them.

All kernels work in int64.  Callers keep bounds well below 2**31 so that
squares of coordinates cannot overflow.
"""

import math
import os

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

USE_NUMBA = _HAVE_NUMBA and os.environ.get("PPSQUARES_DISABLE_NUMBA", "0") in ("", "0")

_INT64_SAFE = 1 << 40


def _check_bound(bound):
    if bound > _INT64_SAFE:
        raise ValueError(f"norm bound {bound} outside the int64-safe range")


# ---------------------------------------------------------------------------
# elements x + y*omega with norm <= bound
#   Norm = x^2 + tr*x*y + nm*y^2,  |disc| = 4*nm - tr^2


def _norm_ball_numpy(tr, nm, bound):
    absd = 4 * nm - tr * tr
    ymax = math.isqrt(4 * bound // absd)
    ys = np.arange(-ymax, ymax + 1, dtype=np.int64)
    # (2x + tr*y)^2 <= 4*bound - absd*y^2
    rad = 4 * bound - absd * ys * ys
    r = np.sqrt(rad.astype(np.float64)).astype(np.int64) + 1
    lo = (-tr * ys - r) // 2 - 1
    hi = (-tr * ys + r) // 2 + 1
    counts = hi - lo + 1
    yy = np.repeat(ys, counts)
    start = np.repeat(lo - np.concatenate(([0], np.cumsum(counts)[:-1])), counts)
    xx = start + np.arange(counts.sum(), dtype=np.int64)
    nn = xx * xx + tr * xx * yy + nm * yy * yy
    keep = nn <= bound
    return xx[keep], yy[keep], nn[keep]


if _HAVE_NUMBA:

    @njit(cache=True)
    def _norm_ball_jit(tr, nm, bound):
        absd = 4 * nm - tr * tr
        ymax = int(math.sqrt(4 * bound // absd)) + 1
        while absd * ymax * ymax > 4 * bound:
            ymax -= 1
        cap = 0
        for y in range(-ymax, ymax + 1):
            r = int(math.sqrt(max(4 * bound - absd * y * y, 0))) + 2
            cap += r + 3
        xs = np.empty(cap, np.int64)
        ys = np.empty(cap, np.int64)
        ns = np.empty(cap, np.int64)
        k = 0
        for y in range(-ymax, ymax + 1):
            r = int(math.sqrt(max(4 * bound - absd * y * y, 0))) + 2
            lo = (-tr * y - r) // 2 - 1
            hi = (-tr * y + r) // 2 + 1
            for x in range(lo, hi + 1):
                n = x * x + tr * x * y + nm * y * y
                if n <= bound:
                    xs[k] = x
                    ys[k] = y
                    ns[k] = n
                    k += 1
        return xs[:k], ys[:k], ns[:k]


def norm_ball(tr, nm, bound):
    """Coordinates and norms of every order element of norm at most ``bound``.

    Output is sorted by (y, x).
    """
    if bound < 0:
        e = np.empty(0, np.int64)
        return e, e, e
    _check_bound(bound)
    if USE_NUMBA:
        return _norm_ball_jit(np.int64(tr), np.int64(nm), np.int64(bound))
    return _norm_ball_numpy(int(tr), int(nm), int(bound))


# ---------------------------------------------------------------------------
# index pairs (i, j) with norms[i] + norms[j] == total


def _norm_pairs_numpy(norms, total):
    order = np.argsort(norms, kind="stable")
    sn = norms[order]
    want = total - norms
    lo = np.searchsorted(sn, want, side="left")
    hi = np.searchsorted(sn, want, side="right")
    counts = hi - lo
    ii = np.repeat(np.arange(norms.size, dtype=np.int64), counts)
    offs = np.repeat(lo - np.concatenate(([0], np.cumsum(counts)[:-1])), counts)
    pos = offs + np.arange(counts.sum(), dtype=np.int64)
    return ii, order[pos].astype(np.int64)


if _HAVE_NUMBA:

    @njit(cache=True)
    def _norm_pairs_jit(norms, total):
        order = np.argsort(norms, kind="mergesort")
        sn = norms[order]
        m = norms.size
        lo = np.searchsorted(sn, total - norms, side="left")
        hi = np.searchsorted(sn, total - norms, side="right")
        cnt = 0
        for i in range(m):
            cnt += hi[i] - lo[i]
        ii = np.empty(cnt, np.int64)
        jj = np.empty(cnt, np.int64)
        k = 0
        for i in range(m):
            for p in range(lo[i], hi[i]):
                ii[k] = i
                jj[k] = order[p]
                k += 1
        return ii, jj


def norm_pairs(norms, total):
    """All index pairs (i, j) with ``norms[i] + norms[j] == total``, sorted by i."""
    norms = np.ascontiguousarray(norms, dtype=np.int64)
    if norms.size == 0:
        e = np.empty(0, np.int64)
        return e, e
    if USE_NUMBA:
        return _norm_pairs_jit(norms, np.int64(total))
    return _norm_pairs_numpy(norms, int(total))


# ---------------------------------------------------------------------------
# number of reduced primitive forms of a fundamental discriminant,
# stopping early once the count exceeds ``limit``


def _count_reduced_numpy(disc, limit):
    h = 0
    a = 1
    while 3 * a * a <= -disc:
        b = np.arange(-a + 1, a + 1, dtype=np.int64)
        b = b[(b - disc) % 2 == 0]
        num = b * b - disc
        b = b[num % (4 * a) == 0]
        c = (b * b - disc) // (4 * a)
        ok = (c > a) | ((c == a) & (b >= 0))
        h += int(ok.sum())
        if h > limit:
            return h
        a += 1
    return h


if _HAVE_NUMBA:

    @njit(cache=True)
    def _count_reduced_jit(disc, limit):
        h = 0
        a = 1
        while 3 * a * a <= -disc:
            for b in range(-a + 1, a + 1):
                if (b - disc) % 2 != 0:
                    continue
                num = b * b - disc
                if num % (4 * a) != 0:
                    continue
                c = num // (4 * a)
                if c > a or (c == a and b >= 0):
                    h += 1
                    if h > limit:
                        return h
            a += 1
        return h


def count_reduced_forms(disc, limit=None):
    """Class number of a fundamental discriminant (every form is primitive).

    With ``limit`` set, counting stops as soon as the count exceeds it.
    """
    if limit is None:
        limit = -disc
    if USE_NUMBA:
        return int(_count_reduced_jit(np.int64(disc), np.int64(limit)))
    return _count_reduced_numpy(int(disc), int(limit))


# ---------------------------------------------------------------------------
# vectors (x1, x2) of O^2 with N(a*x1 + b*x2) + N(x2) <= bound
#   for fixed x2 the admissible a*x1 + b*x2 lie in a disc; write
#   w = a*x1 + b*x2 = wx + wy*omega, N(w) = ((2wx + tr*wy)^2 + absd*wy^2)/4


def _isqrt_np(n):
    r = np.sqrt(np.maximum(n, 0).astype(np.float64)).astype(np.int64)
    r = np.where(r * r > n, r - 1, r)
    r = np.where((r + 1) * (r + 1) <= n, r + 1, r)
    return np.where(n < 0, -1, r)


def _close_vectors_numpy(tr, nm, a, bx, by, bound):
    absd = 4 * nm - tr * tr
    vx, vy, nv = _norm_ball_numpy(tr, nm, bound)
    bvx = bx * vx - nm * by * vy
    bvy = bx * vy + by * vx + tr * by * vy
    rem = bound - nv
    ry = _isqrt_np(4 * rem // absd)
    ly_lo = -((bvy + ry) // a)  # ceil((-bvy - ry)/a)
    ly_hi = (ry - bvy) // a
    out = [[], [], [], [], []]
    ny = ly_hi - ly_lo + 1
    for k in range(int(ny.max(initial=0))):
        sel = k < ny
        ly = ly_lo[sel] + k
        wy = a * ly + bvy[sel]
        s = _isqrt_np(4 * rem[sel] - absd * wy * wy)
        ok = s >= 0
        c = -tr * wy - 2 * bvx[sel]
        lx_lo = -((s - c) // (2 * a))  # ceil((c - s)/(2a))
        lx_hi = (c + s) // (2 * a)
        nx = np.where(ok, lx_hi - lx_lo + 1, 0)
        idx = np.nonzero(sel)[0]
        for j in range(int(nx.max(initial=0))):
            m = j < nx
            lx = lx_lo[m] + j
            ii = idx[m]
            wx = a * lx + bvx[ii]
            ww = wy[m]
            tot = wx * wx + tr * wx * ww + nm * ww * ww + nv[ii]
            keep = tot <= bound
            out[0].append(lx[keep])
            out[1].append(ly[m][keep])
            out[2].append(vx[ii][keep])
            out[3].append(vy[ii][keep])
            out[4].append(tot[keep])
    if not out[0]:
        e = np.empty(0, np.int64)
        return e, e, e, e, e
    return tuple(np.concatenate(col).astype(np.int64) for col in out)


if _HAVE_NUMBA:

    @njit(cache=True)
    def _isqrt_jit(n):
        if n < 0:
            return -1
        r = int(math.sqrt(n))
        while r * r > n:
            r -= 1
        while (r + 1) * (r + 1) <= n:
            r += 1
        return r

    @njit(cache=True)
    def _close_vectors_jit(tr, nm, a, bx, by, bound):
        absd = 4 * nm - tr * tr
        vx, vy, nv = _norm_ball_jit(tr, nm, bound)
        cap = 64
        o1 = np.empty(cap, np.int64)
        o2 = np.empty(cap, np.int64)
        o3 = np.empty(cap, np.int64)
        o4 = np.empty(cap, np.int64)
        o5 = np.empty(cap, np.int64)
        k = 0
        for i in range(vx.size):
            bvx = bx * vx[i] - nm * by * vy[i]
            bvy = bx * vy[i] + by * vx[i] + tr * by * vy[i]
            rem = bound - nv[i]
            ry = _isqrt_jit(4 * rem // absd)
            for ly in range(-((bvy + ry) // a), (ry - bvy) // a + 1):
                wy = a * ly + bvy
                s = _isqrt_jit(4 * rem - absd * wy * wy)
                if s < 0:
                    continue
                c = -tr * wy - 2 * bvx
                for lx in range(-((s - c) // (2 * a)), (c + s) // (2 * a) + 1):
                    wx = a * lx + bvx
                    tot = wx * wx + tr * wx * wy + nm * wy * wy + nv[i]
                    if tot > bound:
                        continue
                    if k == cap:
                        cap *= 2
                        o1 = np.concatenate((o1, np.empty(cap - k, np.int64)))
                        o2 = np.concatenate((o2, np.empty(cap - k, np.int64)))
                        o3 = np.concatenate((o3, np.empty(cap - k, np.int64)))
                        o4 = np.concatenate((o4, np.empty(cap - k, np.int64)))
                        o5 = np.concatenate((o5, np.empty(cap - k, np.int64)))
                    o1[k] = lx
                    o2[k] = ly
                    o3[k] = vx[i]
                    o4[k] = vy[i]
                    o5[k] = tot
                    k += 1
        return o1[:k], o2[:k], o3[:k], o4[:k], o5[:k]


def close_vectors(tr, nm, a, bx, by, bound):
    """All ``(x1, x2)`` with ``N(a*x1 + b*x2) + N(x2) <= bound``, ``b = bx + by*omega``.

    Returns the coordinate arrays ``x1x, x1y, x2x, x2y`` and the sums, sorted
    by (x2y, x2x, x1y, x1x); for a unimodular form ``[[a, b], [., d]]`` the sum is ``a`` times the value.
    """
    if bound < 0:
        e = np.empty(0, np.int64)
        return e, e, e, e, e
    _check_bound(bound)
    args = (int(tr), int(nm), int(a), int(bx), int(by), int(bound))
    if USE_NUMBA:
        cols = _close_vectors_jit(*(np.int64(v) for v in args))
    else:
        cols = _close_vectors_numpy(*args)
    # the two paths visit points in different orders
    idx = np.lexsort((cols[0], cols[1], cols[2], cols[3]))
    return tuple(c[idx] for c in cols)
