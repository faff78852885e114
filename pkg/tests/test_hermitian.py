import itertools
import math
import random

import pytest
from hypothesis import given, strategies as st

from conftest import SAMPLE_DISCS, random_congruent, random_gl2
from ppsquares.classify import enumerate_polarizations
from ppsquares.hermitian import (
    HermitianForm,
    VectorO2,
    congruent_form,
    generates_unit_ideal,
    is_gl2,
    min_norm_coset,
    primitive_minimum,
    reduce,
    short_vectors,
    value,
    vectors_up_to,
)
from ppsquares.moduli import conjugate_congruence_matrix
from ppsquares.quadorder import OrderElement, order

FORMS_PER_DISC = 1000


def reduced_forms_of(D):
    return [r.form for r in enumerate_polarizations(D, with_automorphisms=False).records]


@pytest.mark.parametrize("D", SAMPLE_DISCS)
def test_reduction_idempotent_and_invariant(D):
    """1000 random congruent copies per discriminant reduce to their class representative."""
    rng = random.Random(D)
    reps = reduced_forms_of(D)
    keys = {M.key() for M in reps}
    assert len(keys) == len(reps)
    for i in range(FORMS_PER_DISC):
        R = reps[i % len(reps)]
        M, _ = random_congruent(R, rng)
        red = reduce(M)
        assert red.form == R
        assert congruent_form(M, red.transform) == R
        assert is_gl2(M.order, red.transform)
        assert reduce(red.form).form == red.form


@pytest.mark.parametrize("D", SAMPLE_DISCS)
def test_conjugate_is_congruent(D):
    """P0 = [[b, d], [-a, -conj b]] carries M to conj(M) on 1000 random forms."""
    rng = random.Random(-D)
    reps = reduced_forms_of(D)
    O = order(D)
    for i in range(FORMS_PER_DISC):
        M, _ = random_congruent(reps[i % len(reps)], rng, steps=8, span=3)
        P0 = conjugate_congruence_matrix(M)
        assert is_gl2(O, P0)
        assert congruent_form(M, P0) == M.conjugate()
    for R in reps:
        assert reduce(R.conjugate()).form == R


def box_radii(M, n):
    """Coordinate bounds for ``v* M v <= n`` from the smallest eigenvalue of M."""
    O = M.order
    nb = O.norm(M.b)
    lam = (M.a + M.d - math.sqrt((M.a - M.d) ** 2 + 4 * nb)) / 2
    r = math.sqrt(n / lam) * (1 + 1e-9)
    ry = int(2 * r / math.sqrt(-O.delta)) + 1
    rx = int(r + ry / 2) + 1
    return rx, ry


def box_vectors(M, n):
    rx, ry = box_radii(M, n)
    out = {}
    X, Y = range(-rx, rx + 1), range(-ry, ry + 1)
    for c in itertools.product(X, Y, X, Y):
        if c == (0, 0, 0, 0):
            continue
        v = VectorO2(OrderElement(c[0], c[1]), OrderElement(c[2], c[3]))
        val = value(M, v)
        if val <= n:
            out[v] = val
    return out


@pytest.mark.parametrize("D,a,bx,by", [(-163, 7, -1, -2), (-163, 5, 0, -2), (-20, 2, 0, 1),
                                       (-4, 1, 0, 0), (-3, 1, 0, 0), (-40, 3, 1, 1)])
def test_short_vectors_vs_box(D, a, bx, by):
    M = HermitianForm.from_ints(D, a, bx, by)
    n = a
    box = box_vectors(M, n)
    got = {v: val for val, v in vectors_up_to(M, n)}
    assert got == box
    for k in range(1, n + 1):
        sv = short_vectors(M, k)
        assert sorted(sv) == sorted(v for v, val in box.items() if val == k)
        prim = short_vectors(M, k, coprime_only=True)
        assert sorted(prim) == sorted(v for v in sv if generates_unit_ideal(M.order, *v))


@given(st.sampled_from([-3, -4, -8, -20, -163]), st.integers(-10**6, 10**6),
       st.integers(-10**6, 10**6), st.integers(1, 60))
def test_min_norm_coset_exact(D, x, y, a):
    O = order(D)
    best, found = min_norm_coset(O, (x, y), a)
    # brute force over a window around the rounded quotient
    qy = round(y / a)
    qx = round((x + O.tr * (y - a * qy) / 2) / a)
    cands = [(x - a * (qx + i), y - a * (qy + j)) for i in range(-3, 4) for j in range(-3, 4)]
    assert best == min(O.norm(c) for c in cands)
    assert all(O.norm(r) == best and (r[0] - x) % a == 0 and (r[1] - y) % a == 0 for r in found)


@pytest.mark.parametrize("D", [-20, -163, -232])
def test_primitive_minimum_is_a_of_reduced(D):
    for R in reduced_forms_of(D):
        best, vecs = primitive_minimum(R)
        assert best == R.a
        assert VectorO2(OrderElement(1, 0), OrderElement(0, 0)) in vecs


def test_unimodularity_enforced():
    with pytest.raises(ValueError):
        HermitianForm.from_ints(-8, 3, 1, 1)
    with pytest.raises(ValueError):
        HermitianForm.from_ints(-8, 2, 1, 1, 5)


@given(st.sampled_from([-3, -4, -8, -163]), st.integers(0, 10**6))
def test_random_gl2_is_invertible(D, seed):
    O = order(D)
    P = random_gl2(O, random.Random(seed))
    assert is_gl2(O, P)
