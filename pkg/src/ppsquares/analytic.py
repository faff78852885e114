"""Numerical route from a polarization matrix to the invariants of the curve.

``(D, M)`` gives the lattice O^2 in C^2 with the integral alternating form
``E(u, v) = Tr(u* M v / delta)``, i.e. the omega-coordinate of ``u* M v``.  A
symplectic basis of E yields a Riemann matrix tau; the ten even theta
constants at tau give a Rosenhain model ``y^2 = x(x-1)(x-l1)(x-l2)(x-l3)``,
whose Igusa-Clebsch invariants are compared with those of an exact sextic.

Theta characteristics are numbered in a fixed order; ``THETA_CHARACTERISTICS[i] = (a1, a2, b1, b2)`` with
``theta[a;b](tau) = sum_n exp(pi i (n + a/2) tau (n + a/2) + pi i (n + a/2) b)``.

Every run owns a private mpmath context, so nothing here touches the global
``mpmath.mp`` precision.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .hermitian import HermitianForm, pairing, VectorO2
from .quadorder import OrderElement

DEFAULT_PRECISION = int(os.environ.get("PPSQUARES_PRECISION", "400"))
MIN_PRECISION = 64
MAX_THETA_RADIUS = 400

THETA_CHARACTERISTICS = (
    (0, 0, 0, 0),
    (0, 0, 1, 1),
    (0, 0, 1, 0),
    (0, 0, 0, 1),
    (1, 0, 0, 0),
    (1, 0, 0, 1),
    (0, 1, 0, 0),
    (1, 1, 0, 0),
    (0, 1, 1, 0),
    (1, 1, 1, 1),
)
ODD_CHARACTERISTICS = tuple(
    (a1, a2, b1, b2)
    for a1 in (0, 1) for a2 in (0, 1) for b1 in (0, 1) for b2 in (0, 1)
    if (a1 * b1 + a2 * b2) % 2
)


class AnalyticError(ArithmeticError):
    pass


def make_context(precision):
    if precision < MIN_PRECISION:
        raise ValueError(f"precision {precision} below the {MIN_PRECISION}-bit minimum")
    ctx = mpmath.MPContext()
    ctx.prec = precision
    return ctx


# ---------------------------------------------------------------------------
# Riemann form and symplectic basis

_ZBASIS = (
    VectorO2(OrderElement(1, 0), OrderElement(0, 0)),
    VectorO2(OrderElement(0, 1), OrderElement(0, 0)),
    VectorO2(OrderElement(0, 0), OrderElement(1, 0)),
    VectorO2(OrderElement(0, 0), OrderElement(0, 1)),
)


def riemann_form(M: HermitianForm):
    """Gram matrix of E on the Z-basis (1,0), (w,0), (0,1), (0,w) of O^2."""
    return [[pairing(M, u, v)[1] for v in _ZBASIS] for u in _ZBASIS]


def _form(G, u, v):
    return sum(u[i] * G[i][j] * v[j] for i in range(4) for j in range(4))


def frobenius_basis(G):
    """Integral unimodular ``B`` (columns e1, e2, f1, f2) with ``B^T G B = J``.

    ``J = [[0, I], [-I, 0]]``.  Pairs are split off one at a time: a Euclid
    loop on the values ``E(e, .)`` leaves a single partner with value +-1, and
    the remaining vectors are projected to the orthogonal complement of the pair.
    """
    n = len(G)
    vecs = [[int(i == j) for i in range(n)] for j in range(n)]
    pairs = []
    while vecs:
        e, rest = vecs[0], vecs[1:]
        while True:
            vals = [_form(G, e, v) for v in rest]
            nz = [i for i, x in enumerate(vals) if x]
            if not nz:
                raise AnalyticError("alternating form is degenerate")
            k = min(nz, key=lambda i: abs(vals[i]))
            if len(nz) == 1:
                break
            for i in nz:
                if i != k:
                    q = vals[i] // vals[k]
                    rest[i] = [x - q * y for x, y in zip(rest[i], rest[k])]
        g = vals[k]
        if abs(g) != 1:
            raise AnalyticError(f"alternating form is not unimodular (elementary divisor {g})")
        f = [g * x for x in rest.pop(k)]
        proj = []
        for v in rest:
            evf, eve = _form(G, v, f), _form(G, v, e)
            proj.append([x - evf * y + eve * z for x, y, z in zip(v, e, f)])
        pairs.append((e, f))
        vecs = proj
    cols = [p[0] for p in pairs] + [p[1] for p in pairs]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def symplectic_check(G, B):
    """Exact integer check of ``B^T G B == J``."""
    n = len(G)
    g = n // 2
    for i in range(n):
        for j in range(n):
            val = sum(B[k][i] * G[k][l] * B[l][j] for k in range(n) for l in range(n))
            want = 1 if j == i + g else -1 if i == j + g else 0
            if val != want:
                return False
    return True


@dataclass(frozen=True)
class RiemannMatrix:
    tau: tuple
    basis: tuple
    precision: int

    def matrix(self, ctx):
        return ctx.matrix([[ctx.mpc(x) for x in row] for row in self.tau])


def _inv2(ctx, A):
    det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
    return [[A[1][1] / det, -A[0][1] / det], [-A[1][0] / det, A[0][0] / det]]


def _mul2(A, B):
    return [[A[i][0] * B[0][j] + A[i][1] * B[1][j] for j in range(2)] for i in range(2)]


def _is_pos_def(m11, m12, m22):
    return m11 > 0 and m11 * m22 - m12 * m12 > 0


def riemann_matrix(delta, M: HermitianForm, precision=DEFAULT_PRECISION):
    """Period matrix in the Siegel upper half-space for ``(E^2, M)``."""
    if M.delta != delta:
        raise ValueError("form and discriminant disagree")
    ctx = make_context(precision)
    G = riemann_form(M)
    B = frobenius_basis(G)
    if not symplectic_check(G, B):
        raise AnalyticError("symplectic basis check failed")
    w = M.order.complex_omega(ctx)
    # complex coordinates of the basis columns
    cols = []
    for j in range(4):
        c = [B[i][j] for i in range(4)]
        cols.append((c[0] + c[1] * w, c[2] + c[3] * w))
    Pe = [[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]]
    Pf = [[cols[2][0], cols[3][0]], [cols[2][1], cols[3][1]]]
    tau = _mul2(_inv2(ctx, Pe), Pf)
    if not _is_pos_def(tau[0][0].imag, tau[0][1].imag, tau[1][1].imag):
        # the opposite sign convention for E: swap the roles of e and f
        tau = _mul2(_inv2(ctx, Pf), Pe)
    tol = ctx.mpf(2) ** (-(precision - 8))
    if abs(tau[0][1] - tau[1][0]) > tol * (1 + abs(tau[0][1])):
        raise AnalyticError("period matrix is not symmetric")
    if not _is_pos_def(tau[0][0].imag, tau[0][1].imag, tau[1][1].imag):
        raise AnalyticError("imaginary part of the period matrix is not positive definite")
    sym = (tau[0][1] + tau[1][0]) / 2
    tau = ((tau[0][0], sym), (sym, tau[1][1]))
    return RiemannMatrix(tau, tuple(tuple(r) for r in B), precision)


# ---------------------------------------------------------------------------
# theta constants


def _min_eigenvalue(ctx, y11, y12, y22):
    tr = y11 + y22
    disc = ctx.sqrt((y11 - y22) ** 2 + 4 * y12 * y12)
    return (tr - disc) / 2


def theta_radius(lam, precision, max_radius=MAX_THETA_RADIUS):
    """Box radius R with the omitted part of every theta series below 2^-precision.

    Omitted points have sup-norm t >= R + 1/2; at most 8t + 4 points share a
    sup-norm level, each term is at most exp(-pi*lam*t^2), and the levels
    step by 1/2.  Once consecutive bounds shrink by half, the remainder is at
    most twice the first omitted level.
    """
    target = -(precision + 4) * math.log(2)
    lam = float(lam)
    if lam <= 0:
        raise AnalyticError("imaginary part is not positive definite")
    for R in range(1, max_radius + 1):
        t = R + 0.5
        first = math.log(8 * t + 4) - math.pi * lam * t * t
        nxt = math.log(8 * t + 8) - math.pi * lam * (t + 0.5) ** 2
        if nxt - first <= -math.log(2) and first + math.log(2) < target:
            return R
    raise AnalyticError(f"theta series needs a radius above {max_radius} at {precision} bits")


@dataclass(frozen=True)
class ThetaConstants:
    theta: tuple
    odd: tuple
    radius: int
    precision: int


def theta_constants(rm: RiemannMatrix, precision=None, max_radius=MAX_THETA_RADIUS):
    """Even theta constants in the fixed numbering, and the six odd ones."""
    precision = precision or rm.precision
    ctx = make_context(precision + 20)
    t11, t12, t22 = (ctx.mpc(rm.tau[0][0]), ctx.mpc(rm.tau[0][1]), ctx.mpc(rm.tau[1][1]))
    lam = _min_eigenvalue(ctx, t11.imag, t12.imag, t22.imag)
    R = theta_radius(lam, precision, max_radius)
    ipi = ctx.mpc(0, 1) * ctx.pi
    sums = {}
    for a1 in (0, 1):
        for a2 in (0, 1):
            acc = {(b1, b2): ctx.mpc(0) for b1 in (0, 1) for b2 in (0, 1)}
            for n1 in range(-R, R + 1):
                m1 = ctx.mpf(2 * n1 + a1) / 2
                for n2 in range(-R, R + 1):
                    m2 = ctx.mpf(2 * n2 + a2) / 2
                    term = ctx.exp(ipi * (m1 * m1 * t11 + 2 * m1 * m2 * t12 + m2 * m2 * t22))
                    for (b1, b2) in acc:
                        # exp(pi i m.b) = (-1)^(n.b) * i^(a.b)
                        sgn = -1 if (n1 * b1 + n2 * b2) % 2 else 1
                        acc[(b1, b2)] += sgn * term
            for (b1, b2), s in acc.items():
                k = (a1 * b1 + a2 * b2) % 4
                sums[(a1, a2, b1, b2)] = s * (ctx.mpc(0, 1) ** k)
    even = tuple(sums[c] for c in THETA_CHARACTERISTICS)
    odd = tuple(sums[c] for c in ODD_CHARACTERISTICS)
    return ThetaConstants(even, odd, R, precision)


def odd_thetas_vanish(th: ThetaConstants):
    tol = mpmath.mpf(2) ** (-(th.precision - 8))
    return all(abs(x) < tol for x in th.odd)


# ---------------------------------------------------------------------------
# Rosenhain model


def rosenhain(thetas):
    """``(l1, l2, l3)`` from the even theta constants (sequence of ten)."""
    th = thetas.theta if isinstance(thetas, ThetaConstants) else thetas
    sq = [x * x for x in th]
    for i in (1, 3, 9):
        if sq[i] == 0:
            raise AnalyticError(f"theta_{i} vanishes: period matrix is not a Jacobian point")
    l1 = sq[0] * sq[2] / (sq[1] * sq[3])
    l2 = sq[2] * sq[7] / (sq[3] * sq[9])
    l3 = sq[0] * sq[7] / (sq[1] * sq[9])
    return l1, l2, l3


def rosenhain_sextic(lams):
    """Coefficients (low degree first) of ``x(x-1)(x-l1)(x-l2)(x-l3)``, as a sextic."""
    coeffs = [0, 1]
    for r in (1,) + tuple(lams):
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= r * c
        coeffs = nxt
    return coeffs + [0]


# ---------------------------------------------------------------------------
# Igusa-Clebsch invariants of a binary sextic, via transvectants
#   forms of degree n are lists c with c[i] the coefficient of x^i z^(n-i)


def _scale(c, q):
    return c * q.numerator / q.denominator if not isinstance(c, (int, Fraction)) \
        else c * q


def _dx(f):
    return [i * f[i] for i in range(1, len(f))]


def _dz(f):
    n = len(f) - 1
    return [(n - i) * f[i] for i in range(n)]


def _pmul(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x == 0:
            continue
        for j, y in enumerate(g):
            out[i + j] += x * y
    return out


def transvectant(f, g, k):
    """Normalised k-th transvectant ``(f, g)_k`` of binary forms."""
    m, n = len(f) - 1, len(g) - 1
    out = [0] * (m + n - 2 * k + 1)
    for j in range(k + 1):
        df = f
        for _ in range(k - j):
            df = _dx(df)
        for _ in range(j):
            df = _dz(df)
        dg = g
        for _ in range(j):
            dg = _dx(dg)
        for _ in range(k - j):
            dg = _dz(dg)
        c = math.comb(k, j) * (-1) ** j
        for i, v in enumerate(_pmul(df, dg)):
            out[i] += c * v
    norm = Fraction(math.factorial(m - k) * math.factorial(n - k),
                    math.factorial(m) * math.factorial(n))
    return [_scale(v, norm) for v in out]


def clebsch_invariants(f):
    """Clebsch invariants ``(A, B, C, D)`` of a binary sextic."""
    if len(f) != 7:
        raise ValueError("a sextic needs seven coefficients (pad quintics with 0)")
    i = transvectant(f, f, 4)
    delta = transvectant(i, i, 2)
    y1 = transvectant(f, i, 4)
    y2 = transvectant(i, y1, 2)
    y3 = transvectant(i, y2, 2)
    A = transvectant(f, f, 6)[0]
    B = transvectant(i, i, 4)[0]
    C = transvectant(i, delta, 4)[0]
    D = transvectant(y3, y1, 2)[0]
    return A, B, C, D


def igusa_clebsch(f):
    """Igusa-Clebsch invariants ``(I2, I4, I6, I10)`` of a binary sextic."""
    A, B, C, D = clebsch_invariants(f)
    I2 = -120 * A
    I4 = -720 * A ** 2 + 6750 * B
    I6 = 8640 * A ** 3 - 108000 * A * B + 202500 * C
    I10 = (-62208 * A ** 5 + 972000 * A ** 3 * B + 1620000 * A ** 2 * C
           - 3037500 * A * B ** 2 - 6075000 * B * C - 4556250 * D)
    return I2, I4, I6, I10


def absolute_from_igusa_clebsch(ic):
    """Weight-0 invariants; ``I2^5/I10, I2^3 I4/I10, I2^2 I6/I10`` unless I2 = 0."""
    I2, I4, I6, I10 = ic
    if I10 == 0:
        raise AnalyticError("I10 vanishes: the sextic is singular")
    if I2 != 0:
        return (I2 ** 5 / I10, I2 ** 3 * I4 / I10, I2 ** 2 * I6 / I10)
    return (0 * I4, I4 * I6 / I10, I4 ** 5 / I10 ** 2)


@dataclass(frozen=True)
class IgusaInvariants:
    igusa_clebsch: tuple
    absolute: tuple


def _check_distinct(ctx, lams, tol):
    pts = [ctx.mpc(0), ctx.mpc(1)] + [ctx.mpc(x) for x in lams]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(pts[i] - pts[j]) < tol:
                raise AnalyticError("branch points collide: singular Rosenhain model")


def igusa_invariants_numeric(lams, precision=DEFAULT_PRECISION):
    ctx = make_context(precision)
    tol = ctx.mpf(2) ** (-(precision // 2))
    _check_distinct(ctx, lams, tol)
    f = [ctx.mpc(c) for c in rosenhain_sextic([ctx.mpc(x) for x in lams])]
    ic = igusa_clebsch(f)
    if abs(ic[3]) < tol * max(1, abs(ic[0]) ** 5):
        raise AnalyticError("I10 vanishes: singular model")
    return IgusaInvariants(ic, absolute_from_igusa_clebsch(ic))


def _sextic(coeffs):
    f = [Fraction(c) for c in coeffs]
    if len(f) > 7 or len(f) < 6:
        raise ValueError("expected a quintic or sextic (6 or 7 coefficients, low degree first)")
    return f + [Fraction(0)] * (7 - len(f))


def igusa_invariants_exact(coeffs):
    """Exact invariants of ``y^2 = f(x)``, ``coeffs`` low degree first."""
    f = _sextic(coeffs)
    ic = igusa_clebsch(f)
    if ic[3] == 0:
        raise ValueError("polynomial is not squarefree")
    return IgusaInvariants(ic, absolute_from_igusa_clebsch(ic))


# ---------------------------------------------------------------------------
# rational recognition


def rational_recognition(value, max_height, precision=DEFAULT_PRECISION):
    """``p/q`` with ``|p|, q <= max_height`` within ``2^-(precision/2)`` of ``value``, or None."""
    ctx = make_context(precision)
    z = ctx.mpc(value)
    tol = ctx.mpf(2) ** (-(precision // 2))
    if abs(z.imag) > tol * max(1, abs(z.real)):
        return None
    x = z.real
    guess = Fraction(ctx.nstr(x, int(precision * 0.30103) + 5, strip_zeros=False)
                     .replace(" ", "")).limit_denominator(max_height)
    if abs(guess.numerator) > max_height:
        return None
    if abs(x - ctx.mpf(guess.numerator) / guess.denominator) >= tol * max(1, abs(x)):
        return None
    return guess


# ---------------------------------------------------------------------------
# pipeline and reference-curve checks


@dataclass(frozen=True)
class AnalyticResult:
    riemann: RiemannMatrix
    thetas: ThetaConstants
    lambdas: tuple
    invariants: IgusaInvariants


def analytic_invariants(delta, M, precision=DEFAULT_PRECISION):
    rm = riemann_matrix(delta, M, precision)
    th = theta_constants(rm, precision)
    if not odd_thetas_vanish(th):
        raise AnalyticError("odd theta constants do not vanish")
    lams = rosenhain(th)
    inv = igusa_invariants_numeric(lams, precision)
    return AnalyticResult(rm, th, lams, inv)


def invariant_distance(numeric, exact, precision=DEFAULT_PRECISION):
    """Largest absolute difference between numeric and exact absolute invariants."""
    ctx = make_context(precision)
    return max(abs(ctx.mpc(x) - ctx.mpf(y.numerator) / y.denominator)
               for x, y in zip(numeric.absolute, exact.absolute))


def involution_holds(coeffs, d_power, d_value):
    """``f(d/x) x^6 == d^3 f(x)`` for ``d`` with ``d^d_power == d_value``.

    ``d_value`` must not be a perfect ``d_power``-th power unless ``d_power``
    is 1, so that 1, d, d^2 are independent over Q.  Coefficient-wise the
    identity says ``c_(6-i) == c_i d^(i-3)``.
    """
    c = _sextic(coeffs)
    k = d_power
    r = Fraction(d_value)
    for i in range(7):
        e = i - 3
        q, s = divmod(e, k)
        lhs = c[6 - i]
        rhs_coeff = c[i] * r ** q
        if s == 0:
            if lhs != rhs_coeff:
                return False
        elif lhs != 0 or rhs_coeff != 0:
            return False
    return True
