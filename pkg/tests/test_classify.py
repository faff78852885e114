import pytest

from ppsquares.classify import (
    automorphism_group,
    automorphism_group_naive,
    decomposable_classes,
    decomposable_matrix,
    enumerate_polarizations,
    enumeration_bound,
    hermite_a_bound,
)
from ppsquares.hermitian import IDENTITY, congruent_form, mat_mul, reduce, vectors_up_to
from ppsquares.quadorder import class_group, scan_discriminants
from ppsquares.reference import reference_counts

ALL_DISCS = [d for d, _ in scan_discriminants(5500)]


@pytest.mark.parametrize("D", ALL_DISCS)
def test_decomposable_count(D):
    cg = class_group(D)
    dec = decomposable_classes(cg)
    assert len({M.key() for M in dec}) == len(dec) == (cg.h + cg.t) // 2


@pytest.mark.parametrize("D", [-20, -84, -420])
def test_decomposable_matrix_is_unimodular(D):
    cg = class_group(D)
    for I in cg.reps:
        M = decomposable_matrix(I)
        assert M.det() == 1
        # the first basis vector spans a copy of the ideal class: a = n + N(alpha)/n
        assert M.a == I.n + cg.order.norm(I.alpha) // I.n


@pytest.mark.parametrize("D", [d for d in ALL_DISCS if -d <= 400])
def test_counts_small(D):
    ref = reference_counts()[0][D]
    res = enumerate_polarizations(D, with_automorphisms=False)
    assert (res.class_group.h, len(res.indecomposables)) == ref[:2]


@pytest.mark.parametrize("D", [-3, -4, -8, -20, -24, -40, -84, -163])
def test_automorphisms_naive_vs_coset(D):
    for rec in enumerate_polarizations(D).records:
        M = rec.form
        fast = sorted(automorphism_group(M))
        slow = sorted(automorphism_group_naive(M))
        assert fast == slow
        assert rec.aut_order == len(fast)


@pytest.mark.parametrize("D", [-3, -4, -8, -40, -163])
def test_automorphism_group_closed(D):
    for rec in enumerate_polarizations(D).records:
        M, G = rec.form, set(rec.aut_group)
        O = M.order
        assert IDENTITY in G
        assert len(G) % 2 == 0
        for P in G:
            assert congruent_form(M, P) == M
            for Q in G:
                assert mat_mul(O, P, Q) in G


@pytest.mark.parametrize("D", [-3, -4, -8, -20, -163, -232, -420])
def test_indecomposables_have_no_unit_vector(D):
    res = enumerate_polarizations(D, with_automorphisms=False)
    for rec in res.indecomposables:
        assert vectors_up_to(rec.form, 1) == []
        assert rec.form.a >= 2
    # the trivial class contains the identity form
    assert any(r.form.a == r.form.d == 1 for r in res.decomposables)


@pytest.mark.parametrize("D", [-163, -520, -1155])
def test_records_are_reduced_and_distinct(D):
    res = enumerate_polarizations(D, with_automorphisms=False)
    forms = [r.form for r in res.records]
    assert len({M.key() for M in forms}) == len(forms)
    for M in forms:
        assert reduce(M).form == M


def test_exponent_guard():
    with pytest.raises(ValueError):
        enumerate_polarizations(-23)
    res = enumerate_polarizations(-23, force=True, with_automorphisms=False)
    assert res.class_group.h == 3


def test_enumeration_bound():
    assert enumeration_bound(-3) == 1
    assert enumeration_bound(-5460) == 683
    assert all(enumeration_bound(D) >= hermite_a_bound(D) for D in ALL_DISCS)
