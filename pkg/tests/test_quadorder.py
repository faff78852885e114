import math

import pytest
from hypothesis import given, strategies as st
from sympy import jacobi_symbol

from ppsquares.quadorder import (
    class_group,
    compose_forms,
    elements_of_norm,
    fundamental_discriminants,
    has_exponent_at_most_two,
    order,
    principal_form,
    scan_discriminants,
)
from ppsquares.reference import reference_discriminants


def kronecker(D, n):
    """Kronecker symbol (D/n) for n >= 1."""
    out = 1
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        out *= 1 if D % 8 in (1, 7) else -1
    return out * (jacobi_symbol(D % n, n) if n > 1 else 1)


def class_number_analytic(D):
    """Dirichlet's class number formula."""
    w = {-3: 6, -4: 4}.get(D, 2)
    s = sum(kronecker(D, n) * n for n in range(1, -D))
    h, r = divmod(-w * s, 2 * -D)
    assert r == 0
    return h


def test_class_numbers_match_analytic_formula():
    for D in fundamental_discriminants(1200):
        assert class_group(D).h == class_number_analytic(D), D


@pytest.mark.parametrize("D", [-5460, -3315, -3003, -1848])
def test_large_class_numbers(D):
    assert class_group(D).h == class_number_analytic(D)


def test_scan_matches_reference_discriminants():
    got = {}
    for D, h in scan_discriminants(5500):
        got.setdefault(h, []).append(D)
    assert {h: tuple(ds) for h, ds in got.items()} == reference_discriminants()
    assert sorted(len(v) for v in got.values()) == [1, 9, 13, 18, 24]


def test_scan_prefix():
    assert [d for d, _ in scan_discriminants(12)] == [-3, -4, -7, -8, -11]
    assert scan_discriminants(2) == []


def test_exponent_two_cross_check():
    for D, _ in scan_discriminants(1500):
        assert has_exponent_at_most_two(class_group(D), cross_check=True)
    for D in (-23, -47, -56, -71):
        assert not has_exponent_at_most_two(class_group(D), cross_check=True)


@given(st.sampled_from([-3, -4, -7, -8, -15, -20, -23, -163, -5460]),
       st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20))
def test_norm_multiplicative(D, a, b, c, d):
    O = order(D)
    u, v = (a, b), (c, d)
    assert O.norm(O.mul(u, v)) == O.norm(u) * O.norm(v)
    assert O.mul(u, O.conj(u)) == (O.norm(u), 0)


@pytest.mark.parametrize("D", [-3, -4, -8, -163])
def test_units(D):
    assert len(order(D).units) == {-3: 6, -4: 4}.get(D, 2)


@given(st.sampled_from([-3, -4, -8, -20, -51, -163]), st.integers(0, 300))
def test_elements_of_norm_vs_box(D, n):
    O = order(D)
    r = math.isqrt(4 * n) + 2
    box = {(x, y) for x in range(-r, r + 1) for y in range(-r, r + 1) if O.norm((x, y)) == n}
    assert set(map(tuple, elements_of_norm(O, n))) == box


def test_composition_identity_and_inverse():
    for D in (-84, -420, -5460):
        cg = class_group(D)
        e = principal_form(D)
        for f in cg.forms:
            assert compose_forms(f, e) == f
            assert compose_forms(f, f) == e
