"""Positive definite unimodular Hermitian 2x2 forms over an imaginary quadratic order.

A form ``[[a, b], [conj(b), d]]`` with ``a*d - N(b) = 1``.  Vectors are pairs of
order elements, matrices are ``((p11, p12), (p21, p22))`` and act on columns,
so congruence by ``P`` rewrites the form on the basis given by P's columns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple


from . import _kernels
from .quadorder import ONE, ZERO, Order, OrderElement, order, solve_z2


class VectorO2(NamedTuple):
    x1: OrderElement
    x2: OrderElement


@dataclass(frozen=True)
class HermitianForm:
    order: Order
    a: int
    b: OrderElement
    d: int

    def __post_init__(self):
        object.__setattr__(self, "b", OrderElement(*self.b))
        if self.a < 1 or self.d < 1:
            raise ValueError("diagonal entries must be positive")
        if self.a * self.d - self.order.norm(self.b) != 1:
            raise ValueError(f"form {self} is not unimodular")

    @classmethod
    def from_ints(cls, delta, a, bx, by, d=None):
        """Build from ``(D, a, b_x, b_y[, d])``; ``d`` is recomputed from det = 1."""
        O = order(delta)
        b = OrderElement(bx, by)
        num = 1 + O.norm(b)
        if num % a:
            raise ValueError(f"no unimodular form with a={a}, b={b}")
        if d is not None and d != num // a:
            raise ValueError(f"d={d} does not give determinant 1")
        return cls(O, a, b, num // a)

    @property
    def delta(self):
        return self.order.delta

    def key(self):
        """Lexicographic (a, d, b) with b under the trace-then-imaginary order."""
        return (self.a, self.d) + self.order.sign_key(self.b)

    def det(self):
        return self.a * self.d - self.order.norm(self.b)

    def conjugate(self):
        return HermitianForm(self.order, self.a, self.order.conj(self.b), self.d)

    def to_tuple(self):
        return (self.delta, self.a, self.b.x, self.b.y, self.d)

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.order.conj(self.b)}, {self.d}]]"


# ---------------------------------------------------------------------------
# sesquilinear algebra


def pairing(M, u, v):
    """``u* M v`` as an order element."""
    O = M.order
    a, b, d = M.a, M.b, M.d
    Mv1 = O.add(O.scale(a, v[0]), O.mul(b, v[1]))
    Mv2 = O.add(O.mul(O.conj(b), v[0]), O.scale(d, v[1]))
    return O.add(O.mul(O.conj(u[0]), Mv1), O.mul(O.conj(u[1]), Mv2))


def value(M, v):
    """``v* M v``, computed as (N(a*x1 + b*x2) + N(x2)) / a."""
    O = M.order
    u = O.add(O.scale(M.a, v[0]), O.mul(M.b, v[1]))
    num = O.norm(u) + O.norm(v[1])
    q, r = divmod(num, M.a)
    assert r == 0
    return q


def columns(P):
    return VectorO2(P[0][0], P[1][0]), VectorO2(P[0][1], P[1][1])


def from_columns(x, y):
    return ((x[0], y[0]), (x[1], y[1]))


def congruent_form(M, P):
    """The form ``P* M P``."""
    x, y = columns(P)
    a = pairing(M, x, x)
    b = pairing(M, x, y)
    d = pairing(M, y, y)
    if a.y or d.y:
        raise AssertionError("diagonal of P* M P is not rational")
    return HermitianForm(M.order, a.x, b, d.x)


def mat_mul(O, P, Q):
    return tuple(
        tuple(O.add(O.mul(P[i][0], Q[0][j]), O.mul(P[i][1], Q[1][j])) for j in range(2))
        for i in range(2)
    )


def mat_adjoint(O, P):
    """Conjugate transpose."""
    return ((O.conj(P[0][0]), O.conj(P[1][0])), (O.conj(P[0][1]), O.conj(P[1][1])))


def mat_conj(O, P):
    return tuple(tuple(O.conj(e) for e in row) for row in P)


def mat_det(O, P):
    return O.sub(O.mul(P[0][0], P[1][1]), O.mul(P[0][1], P[1][0]))


def form_matrix(M):
    return ((OrderElement(M.a, 0), M.b), (M.order.conj(M.b), OrderElement(M.d, 0)))


IDENTITY = ((ONE, ZERO), (ZERO, ONE))


def is_gl2(O, P):
    return O.is_unit(mat_det(O, P))


# ---------------------------------------------------------------------------
# short vectors


def _coprime_ideal_index(O, x1, x2):
    """Index in O of the ideal generated by x1 and x2 (0 if both vanish)."""
    w = (0, 1)
    gens = [x1, O.mul(w, x1), x2, O.mul(w, x2)]
    g = 0
    for i in range(4):
        for j in range(i + 1, 4):
            g = math.gcd(g, gens[i][0] * gens[j][1] - gens[i][1] * gens[j][0])
    return g


def generates_unit_ideal(O, x1, x2):
    return _coprime_ideal_index(O, x1, x2) == 1


def vectors_up_to(M, n):
    """Nonzero ``v`` with ``v* M v <= n`` as a list of ``(value, v)``, sorted by value.

    Uses ``v* M v = (N(a*x1 + b*x2) + N(x2)) / a``: every ``x2`` of norm at most
    ``a*n`` is paired with the points ``x1`` whose ``a*x1 + b*x2`` is in the
    remaining disc.
    """
    O = M.order
    a = M.a
    cols = _kernels.close_vectors(O.tr, O.nm, a, M.b.x, M.b.y, a * n)
    out = []
    for p, q, s, t, tot in zip(*(c.tolist() for c in cols)):
        if p == q == s == t == 0:
            continue
        out.append((tot // a, VectorO2(OrderElement(p, q), OrderElement(s, t))))
    out.sort()
    return out


def short_vectors(M, n, coprime_only=False):
    """All ``v`` in O^2 with ``v* M v == n``."""
    O = M.order
    out = []
    for val, v in vectors_up_to(M, n):
        if val != n:
            continue
        if coprime_only and not generates_unit_ideal(O, v[0], v[1]):
            continue
        out.append(v)
    return out


def completion(O, x):
    """Some ``y`` with ``det(x | y) == 1``, for a vector with coprime coordinates."""
    # lambda1*x1 + lambda2*x2 = 1, then y = (-lambda2, lambda1)
    w = (0, 1)
    gens = [tuple(x[0]), tuple(O.mul(w, x[0])), tuple(x[1]), tuple(O.mul(w, x[1]))]
    c = solve_z2(gens, (1, 0))
    if c is None:
        raise ValueError(f"coordinates of {x} do not generate the unit ideal")
    lam1 = OrderElement(c[0], c[1])
    lam2 = OrderElement(c[2], c[3])
    return VectorO2(O.neg(lam2), lam1)


def min_norm_coset(O, b0, a):
    """Elements of minimal norm in ``b0 + a*O``, with the minimal norm."""
    # nearest lattice points to b0/a, in exact integer arithmetic; a minimal
    # point has |y| < a, and for fixed y the x-part is within one step of the
    # real minimiser, so small windows suffice
    best = None
    found = []
    y0 = b0[1] // a
    for ly in range(y0 - 1, y0 + 3):
        x0 = (2 * b0[0] + O.tr * (b0[1] - a * ly)) // (2 * a)
        for lx in range(x0 - 2, x0 + 3):
            r = OrderElement(b0[0] - a * lx, b0[1] - a * ly)
            nr = O.norm(r)
            if best is None or nr < best:
                best, found = nr, [r]
            elif nr == best:
                found.append(r)
    return best, found


# ---------------------------------------------------------------------------
# reduction


class Reduction(NamedTuple):
    form: HermitianForm
    transform: tuple


def primitive_minimum(M, limit=None):
    """Smallest value of a vector with coprime coordinates, and all such vectors.

    ``(1, 0)`` has value ``a``, so the search never goes past ``a``.  With
    ``limit`` set, only values up to ``limit`` are examined and ``(None, [])``
    is returned when none qualifies.
    """
    O = M.order
    bound = M.a if limit is None else min(limit, M.a)
    best, vecs = None, []
    for val, v in vectors_up_to(M, bound):
        if best is not None and val > best:
            break
        if generates_unit_ideal(O, v[0], v[1]):
            best = val
            vecs.append(v)
    return best, vecs


def gauss_step_reduce(M):
    """Cheap congruence making ``b`` minimal mod ``a*O`` and ``a <= d``.

    Alternates translation of the second basis vector by multiples of the first
    with swaps while ``d < a``; ``a`` strictly drops at each swap.  Returns the
    form and the transform.
    """
    O = M.order
    P = IDENTITY
    while True:
        _, reps = min_norm_coset(O, M.b, M.a)
        r = reps[0]
        if r != M.b:
            lam = O.divexact(O.sub(r, M.b), M.a)
            T = ((ONE, lam), (ZERO, ONE))
            P = mat_mul(O, P, T)
            M = HermitianForm(O, M.a, r, (1 + O.norm(r)) // M.a)
        if M.d >= M.a:
            return M, P
        P = mat_mul(O, P, ((ZERO, ONE), (ONE, ZERO)))
        M = HermitianForm(O, M.d, O.conj(M.b), M.a)


def reduce(M):
    """Reduced form congruent to ``M`` and ``P`` with ``P* M P`` equal to it.

    Smallest primitive value ``a'`` first; the form is rebased on one such vector
    so the remaining searches run with the small ``a'``.  For every basis
    ``(x, y)`` with ``x`` of value ``a'`` the entry ``b' = x* M y`` runs over a
    coset ``u*b0 + a'*O`` (u a unit), and ``d' = (1 + N(b'))/a'``, so the minimal
    ``d'`` and then the minimal ``b'`` come from the minimal-norm coset points.
    """
    O = M.order
    M0, Pg = gauss_step_reduce(M)
    amin, vecs = primitive_minimum(M0)
    x = vecs[0]
    P0 = mat_mul(O, Pg, from_columns(x, completion(O, x)))
    M1 = congruent_form(M, P0)
    assert M1.a == amin
    # keep the coefficients small before the short-vector search
    r = min_norm_coset(O, M1.b, amin)[1][0]
    lam = O.divexact(O.sub(r, M1.b), amin)
    P0 = mat_mul(O, P0, ((ONE, lam), (ZERO, ONE)))
    M1 = congruent_form(M, P0)
    A = short_vectors(M1, amin, coprime_only=True)
    best = None
    for x in A:
        y0 = completion(O, x)
        b0 = pairing(M1, x, y0)
        for u in O.units:
            ub0 = O.mul(u, b0)
            nr, reps = min_norm_coset(O, ub0, amin)
            d = (1 + nr) // amin
            for r in reps:
                key = (d,) + O.sign_key(r)
                if best is None or key < best[0]:
                    best = (key, x, u, y0, ub0, r)
    _, x, u, y0, ub0, r = best
    lam = O.divexact(O.sub(r, ub0), amin)
    y = VectorO2(*(O.add(O.mul(u, y0[i]), O.mul(lam, x[i])) for i in range(2)))
    P1 = from_columns(x, y)
    P = mat_mul(O, P0, P1)
    R = congruent_form(M, P)
    assert R.a == amin and R.b == r
    return Reduction(R, P)


def is_reduced(M):
    return reduce(M).form == M


def is_congruent(M1, M2):
    if M1.delta != M2.delta:
        raise ValueError("forms over different orders")
    return reduce(M1).form == reduce(M2).form
