"""Field of moduli and field of definition of a polarized square (E^2, M).

The field of moduli is Q exactly when, for every ideal class in a generating
set of the class group, some matrix ``P`` with entries in a representative
ideal ``A`` of norm ``n`` satisfies ``n*M == P* M P``.  With
``L = [[a, b], [0, 1]]`` (so that ``L* L = a*M``) the matrix ``Q = L P L^-1``
satisfies ``Q* Q = n``, and its columns scaled by ``a`` are pairs ``(X, Z)``,
``(Y, T)`` of elements of ``A`` with norm sum ``a^2 n`` that are orthogonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import _kernels
from .classify import automorphism_group
from .hermitian import HermitianForm, mat_adjoint, mat_conj, mat_mul, form_matrix
from .quadorder import ClassGroup, OrderElement, QuadIdeal, has_exponent_at_most_two

MAX_PAIRS = 10**7


class SearchTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class ModuliCertificate:
    delta: int
    form: HermitianForm
    witnesses: tuple
    fom_is_Q: bool
    fod_is_Q: bool
    aut_order: int
    failed_ideal: QuadIdeal | None = field(default=None, compare=False)


def conjugate_congruence_matrix(M):
    """``P0 = [[b, d], [-a, -conj(b)]]``, which satisfies ``P0* M P0 == conj(M)``."""
    O = M.order
    return ((M.b, OrderElement(M.d, 0)), (OrderElement(-M.a, 0), O.neg(O.conj(M.b))))


def hermitian_transform(M, P):
    """``P* M P`` as a 2x2 matrix over O (no unimodularity assumed)."""
    O = M.order
    return mat_mul(O, mat_adjoint(O, P), mat_mul(O, form_matrix(M), P))


def is_witness(M, ideal, P):
    """Exact check of ``P`` in ``M_2(ideal)`` and ``n*M == P* M P``."""
    O = M.order
    if not all(e in ideal for row in P for e in row):
        return False
    n = ideal.n
    target = tuple(tuple(O.scale(n, e) for e in row) for row in form_matrix(M))
    return hermitian_transform(M, P) == target


def _ideal_elements(ideal, bound):
    """Coordinates and norms of all elements of ``ideal`` with norm <= bound."""
    O = ideal.order
    xs, ys, ns = _kernels.norm_ball(O.tr, O.nm, bound)
    n1, k, m = ideal.zbasis
    keep = ys % m == 0
    keep &= (xs - (ys // m) * k) % n1 == 0
    return xs[keep], ys[keep], ns[keep]


def _direction_key(O, y, t):
    """Exact key of the point ``(y : t)`` of the projective line over K."""
    if t == (0, 0):
        return None
    num = O.mul(y, O.conj(t))
    nt = O.norm(t)
    return (Fraction(num[0], nt), Fraction(num[1], nt))


def norm_sum_solutions(ideal, total):
    """All ``(X, Z)`` in ``ideal^2`` with ``N(X) + N(Z) == total``."""
    xs, ys, ns = _ideal_elements(ideal, total)
    ii, jj = _kernels.norm_pairs(ns, total)
    if ii.size > MAX_PAIRS:
        raise SearchTooLarge(f"{ii.size} norm-equation solutions for {ideal} at {total}")
    X = zip(xs[ii].tolist(), ys[ii].tolist())
    Z = zip(xs[jj].tolist(), ys[jj].tolist())
    return [(OrderElement(*x), OrderElement(*z)) for x, z in zip(X, Z)]


def find_witness(M, ideal):
    """Some ``P`` in ``M_2(ideal)`` with ``n*M == P* M P``, or None."""
    O = M.order
    a, b = M.a, M.b
    n = ideal.n
    sols = norm_sum_solutions(ideal, a * a * n)
    by_dir = {}
    for X, Z in sols:
        by_dir.setdefault(_direction_key(O, X, Z), []).append((X, Z))
    b2 = O.mul(b, b)
    for X, Z in sols:
        # (Y, T) is proportional to (-conj(Z), conj(X))
        key = _direction_key(O, O.neg(O.conj(Z)), O.conj(X))
        for Y, T in by_dir.get(key, ()):
            p11 = O.divexact(O.sub(X, O.mul(b, Z)), a)
            p22 = O.divexact(O.add(O.mul(b, Z), T), a)
            num = O.sub(O.add(O.mul(b, X), Y), O.add(O.mul(b2, Z), O.mul(b, T)))
            p12 = O.divexact(num, a * a)
            if p11 is None or p22 is None or p12 is None:
                continue
            P = ((p11, p12), (Z, p22))
            if is_witness(M, ideal, P):
                return P
    return None


def test_ideals(cg: ClassGroup):
    """Ideals to test: every nonprincipal class when h <= 4, else a generating set."""
    if cg.h <= 4:
        idx = range(1, cg.h)
    else:
        idx = cg.generating_set()
    return [cg.reps[i] for i in idx]


def field_of_moduli_is_Q(delta, M, cg: ClassGroup, ideals=None, aut_order=None):
    """Certificate for the field of moduli of ``(E^2, M)`` being Q.

    ``ideals`` overrides the default choice of class representatives.
    """
    if cg.delta != delta or M.delta != delta:
        raise ValueError("discriminants of form and class group differ")
    if not has_exponent_at_most_two(cg):
        raise ValueError(f"class group of {delta} has exponent > 2")
    if ideals is None:
        ideals = test_ideals(cg)
    if aut_order is None:
        aut_order = len(automorphism_group(M))
    witnesses = []
    failed = None
    for ideal in ideals:
        P = find_witness(M, ideal)
        if P is None:
            failed = ideal
            break
        witnesses.append((ideal, P))
    fom = failed is None
    return ModuliCertificate(delta, M, tuple(witnesses), fom,
                             field_of_definition_is_Q(aut_order, fom), aut_order, failed)


def field_of_definition_is_Q(aut_order, fom):
    """Q is a field of definition iff the field of moduli is Q and |Aut| > 2."""
    return bool(fom) and aut_order > 2


def conjugation_obstruction(O, P):
    """``P * conj(P)``; equal to ``-Id`` for the descent obstruction when |Aut| = 2."""
    return mat_mul(O, P, mat_conj(O, P))
