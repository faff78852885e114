"""Arithmetic in maximal orders of imaginary quadratic fields.

Elements are pairs ``(x, y)`` standing for ``x + y*omega`` with
``omega = sqrt(D)/2`` (D even) or ``(1 + sqrt(D))/2`` (D odd).  All arithmetic
goes through an :class:`Order`, which knows the trace and norm of omega.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import NamedTuple

from . import _kernels


class OrderElement(NamedTuple):
    x: int
    y: int

    def __str__(self):
        if self.y == 0:
            return str(self.x)
        w = "w" if self.y == 1 else ("-w" if self.y == -1 else f"{self.y}*w")
        if self.x == 0:
            return w
        return f"{self.x}{'+' if w[0] != '-' else ''}{w}"


ZERO = OrderElement(0, 0)
ONE = OrderElement(1, 0)


def _squarefree(n):
    n = abs(n)
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1
    return True


def is_fundamental(delta):
    """True for negative fundamental discriminants."""
    if not isinstance(delta, int) or delta >= 0:
        return False
    if delta % 4 == 1:
        return _squarefree(delta)
    if delta % 4 == 0:
        m = delta // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def prime_factors(n):
    """Distinct prime divisors of |n| by trial division."""
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class Order:
    """The maximal order of the negative fundamental discriminant ``delta``."""

    delta: int

    def __post_init__(self):
        if not is_fundamental(self.delta):
            raise ValueError(f"{self.delta} is not a negative fundamental discriminant")

    @cached_property
    def tr(self):
        """Trace of omega."""
        return self.delta % 2

    @cached_property
    def nm(self):
        """Norm of omega."""
        return -self.delta // 4 if self.delta % 2 == 0 else (1 - self.delta) // 4

    # -- element arithmetic ------------------------------------------------

    def add(self, u, v):
        return OrderElement(u[0] + v[0], u[1] + v[1])

    def sub(self, u, v):
        return OrderElement(u[0] - v[0], u[1] - v[1])

    def neg(self, u):
        return OrderElement(-u[0], -u[1])

    def mul(self, u, v):
        x1, y1 = u
        x2, y2 = v
        yy = y1 * y2
        return OrderElement(x1 * x2 - self.nm * yy, x1 * y2 + x2 * y1 + self.tr * yy)

    def scale(self, k, u):
        return OrderElement(k * u[0], k * u[1])

    def conj(self, u):
        return OrderElement(u[0] + self.tr * u[1], -u[1])

    def norm(self, u):
        x, y = u
        return x * x + self.tr * x * y + self.nm * y * y

    def trace(self, u):
        return 2 * u[0] + self.tr * u[1]

    def divexact(self, u, k):
        """``u / k`` for a rational integer ``k``, or None if not in the order."""
        if u[0] % k or u[1] % k:
            return None
        return OrderElement(u[0] // k, u[1] // k)

    def divide(self, u, v):
        """``u / v`` if it lies in the order, else None."""
        n = self.norm(v)
        return self.divexact(self.mul(u, self.conj(v)), n)

    def sign_key(self, u):
        """Sort key realising the total order: trace first, then Im-sign."""
        return (self.trace(u), u[1])

    @cached_property
    def delta_root(self):
        """The square root of delta with positive imaginary part, as 2w - tr."""
        return OrderElement(-self.tr, 2)

    @cached_property
    def units(self):
        return tuple(sorted(elements_of_norm(self, 1), key=self.sign_key))

    def is_unit(self, u):
        return self.norm(u) == 1

    def complex_omega(self, ctx=None):
        """omega as a complex number (mpmath context ``ctx`` or Python complex)."""
        if ctx is None:
            return complex(self.tr / 2, math.sqrt(-self.delta) / 2)
        return ctx.mpc(ctx.mpf(self.tr) / 2, ctx.sqrt(-self.delta) / 2)

    def element(self, x, y=0):
        return OrderElement(int(x), int(y))


@lru_cache(maxsize=None)
def order(delta):
    return Order(delta)


def elements_of_norm(O, target):
    """All elements of ``O`` of the given norm (exact, by solving for x per y)."""
    if target < 0:
        return []
    if target == 0:
        return [ZERO]
    absd = -O.delta
    out = []
    ymax = math.isqrt(4 * target // absd)
    for y in range(-ymax, ymax + 1):
        # (2x + tr*y)^2 = 4*target - absd*y^2
        rad = 4 * target - absd * y * y
        if rad < 0:
            continue
        s = math.isqrt(rad)
        if s * s != rad:
            continue
        for t in {s, -s}:
            if (t - O.tr * y) % 2 == 0:
                out.append(OrderElement((t - O.tr * y) // 2, y))
    return out


# ---------------------------------------------------------------------------
# lattices in Z^2 (coordinates over (1, omega))


def hnf2(gens):
    """Hermite basis ``(n, k, m)`` of the Z-span of 2-vectors ``gens``.

    The lattice is spanned by ``(n, 0)`` and ``(k, m)`` with ``0 <= k < n``.
    Only full-rank lattices are supported.
    """
    n = 0
    wx, wy = 0, 0
    for gx, gy in gens:
        if gy == 0:
            n = math.gcd(n, gx)
            continue
        if wy == 0:
            wx, wy = gx, gy
            continue
        g, s, t = _xgcd(wy, gy)
        nx = s * wx + t * gx
        # the combination killing the y-coordinate
        zx = (gy // g) * wx - (wy // g) * gx
        n = math.gcd(n, zx)
        wx, wy = nx, g
    if wy < 0:
        wx, wy = -wx, -wy
    if n == 0 or wy == 0:
        raise ValueError("generators do not span a full-rank lattice")
    return n, wx % n, wy


def _xgcd(a, b):
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def solve_z2(gens, target):
    """Integer coefficients ``c`` with ``sum c_i * gens_i == target``, or None.

    Column-style Hermite reduction with the unimodular transform tracked.
    """
    k = len(gens)
    cols = [list(g) for g in gens]
    U = [[int(i == j) for j in range(k)] for i in range(k)]

    def combine(i, j, a, b, c, d):
        # (col_i, col_j) <- (a*col_i + b*col_j, c*col_i + d*col_j)
        ci, cj = cols[i], cols[j]
        cols[i] = [a * p + b * q for p, q in zip(ci, cj)]
        cols[j] = [c * p + d * q for p, q in zip(ci, cj)]
        for row in U:
            p, q = row[i], row[j]
            row[i], row[j] = a * p + b * q, c * p + d * q

    for r, piv in ((0, 0), (1, 1)):
        for j in range(piv + 1, k):
            p, q = cols[piv][r], cols[j][r]
            if q == 0:
                continue
            g, s, t = _xgcd(p, q)
            combine(piv, j, s, t, -q // g, p // g)
    h11, h21 = cols[0]
    h22 = cols[1][1]
    t1, t2 = target
    if h11 == 0:
        if t1 != 0:
            return None
        z1 = 0
    else:
        if t1 % h11:
            return None
        z1 = t1 // h11
    rest = t2 - h21 * z1
    if h22 == 0:
        if rest != 0:
            return None
        z2 = 0
    else:
        if rest % h22:
            return None
        z2 = rest // h22
    z = [z1, z2] + [0] * (k - 2)
    return [sum(U[i][j] * z[j] for j in range(k)) for i in range(k)]


# ---------------------------------------------------------------------------
# ideals


@dataclass(frozen=True)
class QuadIdeal:
    """Integral ideal ``n*O + alpha*O`` with ``n`` its norm."""

    order: Order
    n: int
    alpha: OrderElement

    @cached_property
    def zbasis(self):
        """Hermite Z-basis ``(n1, k, m)``: the ideal is Z*(n1) + Z*(k + m*w)."""
        O = self.order
        w = OrderElement(0, 1)
        gens = [(self.n, 0), tuple(O.mul(w, (self.n, 0))), tuple(self.alpha),
                tuple(O.mul(w, self.alpha))]
        return hnf2(gens)

    @property
    def index(self):
        n1, _, m = self.zbasis
        return n1 * m

    def __contains__(self, z):
        n1, k, m = self.zbasis
        if z[1] % m:
            return False
        q = z[1] // m
        return (z[0] - q * k) % n1 == 0

    def is_primitive(self):
        """Not divisible by any rational integer > 1."""
        n1, k, m = self.zbasis
        return m == 1

    def norm_form(self):
        """Binary quadratic form ``N(p*n1 + q*beta)/N(ideal)`` for a primitive ideal."""
        n1, k, m = self.zbasis
        O = self.order
        beta = OrderElement(k, m)
        nrm = self.index
        return (O.norm((n1, 0)) // nrm, O.trace(O.mul((n1, 0), O.conj(beta))) // nrm,
                O.norm(beta) // nrm)

    def __str__(self):
        return f"({self.n}, {self.alpha})"


def ideal_from_form(O, form):
    """Primitive ideal ``(a, (-b + sqrt(D))/2)`` attached to a form (a, b, c).

    The generator is shifted by multiples of ``a`` until ``N(alpha)/a`` is
    prime to ``a``, which is the normalisation the decomposable-matrix
    construction needs.
    """
    a, b, c = form
    # (-b + sqrt(D))/2 = (-b - tr)/2 + w
    beta_x = (-b - O.tr) // 2
    for j in range(a + 1):
        alpha = OrderElement(beta_x + j * a, 1)
        if math.gcd(O.norm(alpha) // a, a) == 1:
            return QuadIdeal(O, a, alpha)
    raise AssertionError(f"no normalised generator for form {form}")


def elements_of_norm_in_ideal(ideal, target):
    """Every element of ``ideal`` with norm exactly ``target``."""
    O = ideal.order
    if target == 0:
        return [ZERO]
    return [z for z in elements_of_norm(O, target) if z in ideal]


# ---------------------------------------------------------------------------
# binary quadratic forms, class groups


def reduce_form(f):
    """Reduced representative of a positive definite form (a, b, c)."""
    a, b, c = f
    while True:
        if not (-a < b <= a):
            # translate b into (-a, a]
            r = (a - b) // (2 * a)
            b, c = b + 2 * r * a, a * r * r + b * r + c
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return (a, b, c)


def compose_forms(f1, f2):
    """Gauss composition of primitive forms of the same discriminant, reduced."""
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, v = _xgcd(s, d)
        y2 = -v
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return reduce_form((a3, b3, c3))


def principal_form(delta):
    k = delta % 2
    return (1, k, (k - delta) // 4)


def reduced_forms(delta):
    """All reduced primitive forms of discriminant ``delta``, sorted."""
    out = []
    a = 1
    while 3 * a * a <= -delta:
        for b in range(-a + 1, a + 1):
            num = b * b - delta
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
        a += 1
    return out


@dataclass(frozen=True)
class ClassGroup:
    order: Order
    forms: tuple
    reps: tuple
    h: int
    t: int

    @property
    def delta(self):
        return self.order.delta

    def form_of(self, ideal):
        """Reduced form attached to the class of ``ideal``."""
        return reduce_form(ideal.norm_form())

    def index_of(self, ideal):
        return self.forms.index(self.form_of(ideal))

    def generating_set(self):
        """Greedy minimal generating set of an exponent-2 group (list of indices).

        Classes are visited by increasing norm; a class is taken when it is not
        already in the span of the ones taken so far.
        """
        ident = principal_form(self.delta)
        span = {ident}
        gens = []
        for i, f in enumerate(self.forms):
            if f in span:
                continue
            gens.append(i)
            span |= {compose_forms(s, f) for s in span}
        return gens


def two_torsion_size(delta):
    return 2 ** (len(prime_factors(delta)) - 1)


def class_group(delta):
    """Class group of the maximal order of discriminant ``delta``."""
    O = delta if isinstance(delta, Order) else order(delta)
    forms = tuple(reduced_forms(O.delta))
    reps = tuple(ideal_from_form(O, f) for f in forms)
    return ClassGroup(O, forms, reps, len(forms), two_torsion_size(O.delta))


def has_exponent_at_most_two(cg, cross_check=False):
    """Every class squares to the identity.

    Decided by the genus-theory count ``h == t``; with ``cross_check`` the
    answer is also computed by squaring every reduced form, and a disagreement
    raises.
    """
    fast = cg.h == cg.t
    if cross_check:
        ident = principal_form(cg.delta)
        slow = all(compose_forms(f, f) == ident for f in cg.forms)
        if slow != fast:
            raise AssertionError(f"genus count and composition disagree for {cg.delta}")
    return fast


def fundamental_discriminants(bound):
    """Negative fundamental discriminants with |D| <= bound, by increasing |D|."""
    return [-m for m in range(3, bound + 1) if is_fundamental(-m)]


def scan_discriminants(bound):
    """Fundamental discriminants with class group of exponent <= 2, |D| <= bound.

    Returns ``[(D, h), ...]`` sorted by |D|.
    """
    out = []
    for d in fundamental_discriminants(bound):
        t = two_torsion_size(d)
        h = _kernels.count_reduced_forms(d, limit=t)
        if h == t:
            out.append((d, h))
    return out
