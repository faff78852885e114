import itertools
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from conftest import random_congruent
from ppsquares import analytic as A
from ppsquares.classify import enumerate_polarizations
from ppsquares.hermitian import HermitianForm
from ppsquares.reference import reference_curves

PREC = 200


@pytest.mark.parametrize("D", [-3, -4, -8, -20, -40, -163, -232, -420])
def test_frobenius_basis_exact(D):
    rng = random.Random(D)
    for rec in enumerate_polarizations(D, with_automorphisms=False).records:
        for M in (rec.form, random_congruent(rec.form, rng)[0]):
            G = A.riemann_form(M)
            assert all(G[i][j] == -G[j][i] for i in range(4) for j in range(4))
            B = A.frobenius_basis(G)
            assert A.symplectic_check(G, B)
            assert round(mpmath.det(mpmath.matrix(B))) in (1, -1)


@pytest.mark.parametrize("D", [-20, -40, -52, -232])
def test_odd_thetas_vanish_on_all_forms(D):
    for rec in enumerate_polarizations(D, with_automorphisms=False).indecomposables:
        rm = A.riemann_matrix(D, rec.form, 128)
        th = A.theta_constants(rm)
        assert A.odd_thetas_vanish(th)
        assert all(abs(x) > mpmath.mpf(2) ** -40 for x in th.theta)


@pytest.mark.parametrize("D", [-20, -52])
def test_invariants_do_not_depend_on_representative(D):
    rng = random.Random(7)
    for rec in enumerate_polarizations(D, with_automorphisms=False).indecomposables:
        M2, _ = random_congruent(rec.form, rng, steps=3, span=1)
        x = A.analytic_invariants(D, rec.form, PREC).invariants.absolute
        y = A.analytic_invariants(D, M2, PREC).invariants.absolute
        for u, v in zip(x, y):
            assert abs(u - v) <= mpmath.mpf(2) ** -(PREC // 2) * max(1, abs(u))


def _root_formula(roots, lead):
    """Igusa-Clebsch invariants from the roots (Igusa's definition), as mpc."""
    d = lambda i, j: (roots[i] - roots[j]) ** 2  # noqa: E731
    idx = list(range(6))

    def matchings(s):
        if not s:
            yield []
            return
        for b in s[1:]:
            rest = [x for x in s if x not in (s[0], b)]
            for m in matchings(rest):
                yield [(s[0], b)] + m

    I2 = lead ** 2 * sum(d(*m[0]) * d(*m[1]) * d(*m[2]) for m in matchings(idx))
    I4 = I6 = 0
    for T in itertools.combinations(idx, 3):
        if 0 not in T:
            continue
        U = [x for x in idx if x not in T]
        t = d(T[0], T[1]) * d(T[1], T[2]) * d(T[2], T[0]) * d(U[0], U[1]) * d(U[1], U[2]) * d(U[2], U[0])
        I4 += t
        for p in itertools.permutations(U):
            I6 += t * d(T[0], p[0]) * d(T[1], p[1]) * d(T[2], p[2])
    I10 = mpmath.fprod(d(i, j) for i, j in itertools.combinations(idx, 2))
    return I2, lead ** 4 * I4, lead ** 6 * I6, lead ** 10 * I10


@given(st.lists(st.tuples(st.integers(-9, 9), st.integers(1, 5), st.integers(-3, 3)),
                min_size=6, max_size=6, unique=True),
       st.integers(1, 4))
def test_transvectants_match_root_formula(roots, lead):
    with mpmath.workprec(300):
        rs = [mpmath.mpc(mpmath.mpf(p) / q, k) for p, q, k in roots]
        if len({(float(r.real), float(r.imag)) for r in rs}) < 6:
            return
        c = [mpmath.mpc(1)]
        for r in rs:
            n = [mpmath.mpc(0)] * (len(c) + 1)
            for i, x in enumerate(c):
                n[i + 1] += x
                n[i] -= r * x
            c = n
        f = [lead * x for x in c]
        got = A.igusa_clebsch(f)
        want = _root_formula(rs, lead)
        for g, w in zip(got, want):
            assert abs(g - w) <= mpmath.mpf(2) ** -200 * max(1, abs(w))


mobius = st.tuples(*(st.integers(-4, 4) for _ in range(4))).filter(lambda m: m[0] * m[3] != m[1] * m[2])


def _transform(coeffs, m):
    """Coefficients of (c x + d)^6 f((a x + b)/(c x + d))."""
    a, b, c, d = m
    out = [Fraction(0)] * 7
    for i, ci in enumerate(coeffs):
        # (a x + b)^i (c x + d)^(6 - i)
        p = [Fraction(1)]
        for lin in [(b, a)] * i + [(d, c)] * (6 - i):
            q = [Fraction(0)] * (len(p) + 1)
            for k, v in enumerate(p):
                q[k] += v * lin[0]
                q[k + 1] += v * lin[1]
            p = q
        for k, v in enumerate(p):
            out[k] += ci * v
    return out


@pytest.mark.parametrize("row", reference_curves(), ids=lambda r: str(r["disc"]))
@given(m=mobius)
def test_absolute_invariants_are_invariant(row, m):
    f = A._sextic(row["curve"])
    g = _transform(f, m)
    assert A.igusa_invariants_exact(g).absolute == A.igusa_invariants_exact(f).absolute


@given(st.integers(-10**25, 10**25), st.integers(1, 10**25))
def test_rational_recognition_roundtrip(p, q):
    x = Fraction(p, q)
    ctx = A.make_context(400)
    val = ctx.mpf(p) / q
    assert A.rational_recognition(val, 10**25, 400) == x


def test_rational_recognition_rejects():
    ctx = A.make_context(400)
    assert A.rational_recognition(ctx.pi, 10**20, 400) is None
    assert A.rational_recognition(ctx.mpc(1, 1), 10**20, 400) is None


@pytest.mark.parametrize("row", reference_curves(), ids=lambda r: str(r["disc"]))
def test_involution(row):
    inv = row["involution"]
    assert A.involution_holds(row["curve"], inv["power"], inv["value"])
    bumped = list(row["curve"])
    bumped[2] += 1
    assert not A.involution_holds(bumped, inv["power"], inv["value"])


def test_theta_radius_monotone():
    assert A.theta_radius(1.0, 100) <= A.theta_radius(1.0, 400)
    assert A.theta_radius(0.5, 400) >= A.theta_radius(2.0, 400)
    with pytest.raises(A.AnalyticError):
        A.theta_radius(1e-6, 400, max_radius=50)


def test_low_precision_unrecognized():
    """At 64 bits the pipeline either refuses or yields nothing recognizable."""
    M = HermitianForm.from_ints(-163, 2, 0, 1)
    try:
        res = A.analytic_invariants(-163, M, 64)
    except A.AnalyticError:
        return
    assert A.rational_recognition(res.invariants.absolute[0], 2 ** 16, 64) is None
