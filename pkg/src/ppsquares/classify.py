"""Congruence classes of principal polarizations on E^2.

Decomposable classes come from ideal classes through the explicit product
matrix; all classes come from a finite scan of candidate reduced forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hermitian import (
    HermitianForm,
    VectorO2,
    completion,
    congruent_form,
    from_columns,
    min_norm_coset,
    pairing,
    primitive_minimum,
    reduce,
    short_vectors,
)
from .quadorder import (
    ClassGroup,
    QuadIdeal,
    _xgcd,
    class_group,
    has_exponent_at_most_two,
    reduce_form,
)


@dataclass(frozen=True)
class PolarizationRecord:
    form: HermitianForm
    decomposable: bool
    aut_order: int
    aut_group: tuple = field(repr=False, compare=False)


@dataclass(frozen=True)
class ClassificationResult:
    delta: int
    class_group: ClassGroup
    decomposables: tuple
    indecomposables: tuple

    @property
    def records(self):
        return self.decomposables + self.indecomposables


def decomposable_matrix(ideal: QuadIdeal, bezout=None) -> HermitianForm:
    """Form of the product polarization on F x F' pulled back to E^2.

    ``ideal = (n, alpha)`` must have ``N(alpha)/n`` prime to ``n``; ``bezout``
    optionally fixes the pair ``(x, y)`` with ``x*n^2 - y*N(alpha) = n``.
    """
    O = ideal.order
    n, alpha = ideal.n, ideal.alpha
    na = O.norm(alpha)
    if na % n:
        raise ValueError(f"{ideal}: n does not divide N(alpha)")
    m = na // n
    if bezout is None:
        g, x, t = _xgcd(n, m)
        if g != 1:
            raise AssertionError(f"{ideal} is not normalised: gcd(n, N(alpha)/n) = {g}")
        y = -t
    else:
        x, y = bezout
    if x * n * n - y * na != n:
        raise AssertionError(f"Bezout relation fails for {ideal} with x={x}, y={y}")
    s = x + y
    return HermitianForm(O, n + m, O.scale(s, alpha), x * x * n + y * y * m)


def decomposable_classes(cg: ClassGroup):
    """Reduced forms of the decomposable polarizations, one per pair {I, I^-1}."""
    out = []
    seen = set()
    for f, ideal in zip(cg.forms, cg.reps):
        inv = reduce_form((f[0], -f[1], f[2]))
        if inv in seen:
            continue
        seen.add(f)
        out.append(reduce(decomposable_matrix(ideal)).form)
    return out


def automorphism_group(M: HermitianForm):
    """All ``P`` in GL2(O) with ``P* M P == M``.

    The first column runs over coprime vectors of value ``a``.  For a fixed first
    column ``x`` with some completion ``y0``, every second column making a basis
    is ``u*y0 + lam*x`` (u a unit) and has ``x* M y = u*b0 + lam*a``; matching
    ``b`` fixes ``lam``, and then the value ``d`` follows from det = 1.
    """
    O = M.order
    group = []
    for x in short_vectors(M, M.a, coprime_only=True):
        y0 = completion(O, x)
        b0 = pairing(M, x, y0)
        for u in O.units:
            lam = O.divexact(O.sub(M.b, O.mul(u, b0)), M.a)
            if lam is None:
                continue
            y = VectorO2(*(O.add(O.mul(u, y0[i]), O.mul(lam, x[i])) for i in range(2)))
            P = from_columns(x, y)
            assert congruent_form(M, P) == M
            group.append(P)
    return group


def automorphism_group_naive(M: HermitianForm):
    """Literal search: columns of value a and d, forming a basis, with x*My = b."""
    from .hermitian import is_gl2

    O = M.order
    A = short_vectors(M, M.a, coprime_only=True)
    D = short_vectors(M, M.d, coprime_only=True)
    out = []
    for x in A:
        for y in D:
            P = from_columns(x, y)
            if is_gl2(O, P) and pairing(M, x, y) == M.b:
                out.append(P)
    return out


def hermite_a_bound(delta):
    """floor(sqrt(|D|/2)): Hermite bound for the minimum of the quaternary lattice.

    This bounds the smallest value over all nonzero vectors.  The ``a`` of a
    reduced form is the smallest value over vectors with coprime coordinates,
    which can be much larger when the line through a shortest vector is not
    free, so this is not a bound for the scan.
    """
    return math.isqrt(-delta // 2)


ENUM_DIVISOR = 8


def enumeration_bound(delta):
    """Largest ``a`` scanned for reduced forms: ``max(hermite, ceil(|D|/8))``.

    Empirical: over all 65 exponent-2 discriminants the largest reduced ``a``
    of an indecomposable class is at most |D|/15, and a scan to |D|/4 finds
    no further classes.
    """
    return max(hermite_a_bound(delta), -(delta // ENUM_DIVISOR))


def _residues(O, a):
    """Classes ``b`` mod ``a*O`` with ``a | N(b) + 1``, as coordinate pairs in [0, a)."""
    xs, ys = np.meshgrid(np.arange(a, dtype=np.int64), np.arange(a, dtype=np.int64))
    xs, ys = xs.ravel(), ys.ravel()
    ns = xs * xs + O.tr * xs * ys + O.nm * ys * ys
    ok = (ns + 1) % a == 0
    return list(zip(xs[ok].tolist(), ys[ok].tolist()))


def candidate_forms(O, a_max, a_min=1):
    """Forms ``(a, b, d)`` with ``a_min <= a <= a_max`` that pass the cheap reduction tests.

    ``b`` runs over the residues mod ``a*O`` with ``a | N(b) + 1``, taken at a
    minimal-norm representative (anything else lowers ``d``).  Unit multiples and
    the conjugate of ``b`` give congruent forms, so one ``b`` per orbit is kept.
    Forms with ``d < a`` or a coprime vector of value below ``a`` are dropped.
    """
    out = []
    for a in range(a_min, a_max + 1):
        seen = set()
        for res in _residues(O, a):
            nb, reps = min_norm_coset(O, res, a)
            b = reps[0]
            orbit = [O.mul(u, c) for u in O.units for c in (b, O.conj(b))]
            key = min(O.sign_key(c) for c in orbit)
            if key in seen:
                continue
            seen.add(key)
            d = (nb + 1) // a
            if d < a:
                continue
            M = HermitianForm(O, a, b, d)
            if a > 1 and primitive_minimum(M, limit=a - 1)[0] is not None:
                continue
            out.append(M)
    return out


def all_reduced_forms(O, a_max=None):
    """Reduced representatives of every class whose reduced ``a`` is <= a_max."""
    if a_max is None:
        a_max = enumeration_bound(O.delta)
    found = {}
    for M in candidate_forms(O, a_max):
        R = reduce(M).form
        found[R.key()] = R
    return [found[k] for k in sorted(found)]


def enumerate_polarizations(delta, force=False, a_max=None, with_automorphisms=True):
    """All polarization classes on E^2, split into decomposable and indecomposable."""
    cg = class_group(delta)
    if not force and not has_exponent_at_most_two(cg):
        raise ValueError(f"class group of {delta} has exponent > 2 (use force)")
    O = cg.order
    dec = decomposable_classes(cg)
    dec_keys = {M.key() for M in dec}
    if len(dec_keys) != (cg.h + cg.t) // 2:
        raise AssertionError(f"{delta}: expected {(cg.h + cg.t) // 2} decomposables, got {len(dec_keys)}")
    indec = [M for M in all_reduced_forms(O, a_max) if M.key() not in dec_keys]

    def record(M, is_dec):
        group = automorphism_group(M) if with_automorphisms else ()
        return PolarizationRecord(M, is_dec, len(group), tuple(group))

    decs = tuple(record(M, True) for M in sorted(dec, key=HermitianForm.key))
    indecs = tuple(record(M, False) for M in indec)
    return ClassificationResult(delta, cg, decs, indecs)
