import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commontorsion.algebra import Poly, PrimeField, QQ
from commontorsion.curves import (
    INF,
    Cubic,
    CubicWith0,
    DivisionPolynomials,
    EllPoint,
    EvenQuartic,
    Mobius,
    ShortW,
    XSet,
    division_poly,
    halving_poly,
    point_order_bounded,
    to_short_weierstrass,
    torsion_x_poly,
    torsion_xset,
    velu_isogeny,
)
from commontorsion.errors import PreconditionError

from instances import random_mobius


def test_cubic_normal_form_is_translation():
    u, v, w = QQ(1), QQ(2), QQ(6)
    W = to_short_weierstrass(Cubic(u, v, w), INF)
    a, b, c, d = W.mobius.entries
    assert not c and a == d  # x -> x - 3 up to scalar
    assert W.mobius(QQ(0)) == QQ(-3)
    for r in (u, v, w):
        assert not W.E.rhs()(W.mobius(r))


def test_cubic_with_zero_origin_sent_to_infinity():
    W = to_short_weierstrass(CubicWith0(QQ(1), QQ(2), QQ(3)), QQ(0))
    assert W.mobius(QQ(0)) is INF
    for r in (1, 2, 3):
        assert not W.E.rhs()(W.mobius(QQ(r)))


def _count_model(f, p):
    K = PrimeField(p)
    sq = [0] * p
    for y in range(p):
        sq[y * y % p] += 1
    return sum(sq[f(K(x)).v] for x in range(p))


def test_even_quartic_point_count_f101():
    K = PrimeField(101)
    model = EvenQuartic(K(4), K(9))
    W = to_short_weierstrass(model, K(2))
    # quartic with square leading coefficient: two points at infinity
    n_model = _count_model(model.rhs(), 101) + 2
    assert n_model == len(W.E.points())


def test_origin_must_be_branch_point():
    with pytest.raises(PreconditionError):
        to_short_weierstrass(EvenQuartic(QQ(4), QQ(9)), QQ(1))


def test_psi3_over_f7():
    K = PrimeField(7)
    E = ShortW(K(0), K(1))
    psi3 = division_poly(E, 3)
    assert psi3 == Poly(K, [0, 12, 0, 0, 3])
    assert [x for x in range(7) if not psi3(K(x))] == [0]
    orders = {(P.x.v, P.y.v): point_order_bounded(E, P, 12) for P in E.points() if not P.is_zero}
    assert orders[(0, 1)] == 3 and orders[(0, 6)] == 3
    assert {xy for xy, o in orders.items() if o == 3} == {(0, 1), (0, 6)}


def test_division_poly_degrees():
    E = ShortW(QQ(-2), QQ(3))
    dp = DivisionPolynomials(E)
    for n in range(1, 32, 2):
        assert dp.psi(n).deg == (n * n - 1) // 2
    with pytest.raises(ValueError):
        division_poly(E, 0)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32))
def test_division_poly_specialization(seed):
    # psi_n of y^2 = x^3 + t x + 1 over F_p(t), evaluated at t0, equals psi_n at t0
    import sympy

    rng = random.Random(seed)
    p = 10007
    t, x = sympy.symbols("t x")
    n = rng.choice([3, 4, 5])
    F = x**3 + t * x + 1
    psi = {0: 0, 1: 1, 2: 2, 3: 3 * x**4 + 6 * t * x**2 + 12 * x - t**2,
           4: 4 * (x**6 + 5 * t * x**4 + 20 * x**3 - 5 * t**2 * x**2 - 4 * t * x - 8 - t**3)}
    psi[5] = sympy.expand(psi[4] * psi[2] ** 3 * 16 * F**2 / 16 - psi[1] * psi[3] ** 3)
    t0 = rng.randrange(p)
    K = PrimeField(p)
    spec = sympy.Poly(psi[n].subs(t, t0), x, modulus=p)
    ours = DivisionPolynomials(ShortW(K(t0), K(1))).psi(n)
    want = Poly(K, [int(c) for c in reversed(spec.all_coeffs())])
    assert ours == want


def test_torsion_x_thm13_branch_data():
    from commontorsion.algebra import NumberField

    K = NumberField([81, 0, 0, 0, 174, 0, 0, 0, 1], "s")
    s = K.gen()
    f, flag = torsion_x_poly(EvenQuartic(s * s, 1 / (s * s)), s, 2)
    assert not flag
    assert f == Poly.from_roots(K, [s, -s, 1 / s, -1 / s]).monic()


def test_torsion_x_cubic_two_torsion():
    u, v, w = QQ(1), QQ(2), QQ(3)
    f, flag = torsion_x_poly(Cubic(u, v, w), INF, 2)
    assert flag and f == Poly.from_roots(QQ, [u, v, w])


def test_generic_odd_torsion_count():
    E = ShortW(QQ(-2), QQ(3))
    for N in (3, 5, 7):
        xs = torsion_xset(E, INF, N)
        assert xs.poly.deg == (N * N - 1) // 2 and xs.inf


def test_torsion_vs_enumeration_small_primes():
    rng = random.Random(2)
    for p in (5, 7, 11, 13, 101, 199):
        K = PrimeField(p)
        while True:
            E = ShortW(K(rng.randrange(p)), K(rng.randrange(p)))
            if E.discriminant:
                break
        pts = E.points()
        for N in (2, 3, 4, 5, 6):
            if N % p == 0:
                continue
            xs = torsion_xset(E, INF, N)
            for P in pts:
                if P.is_zero:
                    continue
                in_set = P.x in xs
                assert in_set == E.mul(N, P).is_zero


def test_mobius_transport_of_torsion():
    rng = random.Random(4)
    K = PrimeField(1009)
    from commontorsion.covers import DoubleCover

    cov = DoubleCover(EvenQuartic(K(4), K(9)), K(2))
    M = random_mobius(K, rng)
    moved = cov.transported(M)
    for N in (3, 4, 6):
        assert cov.xset(N).transport(M) == moved.xset(N)


def test_mobius_basics():
    K = PrimeField(101)
    M = Mobius(2, 3, 5, 7, K)
    assert (M @ M.inverse()).is_identity()
    assert M(INF) == K(2) / 5
    assert M(K(-7) / 5) is INF
    assert Mobius(4, 6, 10, 14, K) == M
    with pytest.raises(PreconditionError):
        Mobius(1, 2, 2, 4, K)


def test_xset_ops():
    K = PrimeField(101)
    A = XSet.from_points(K, [K(1), K(2), INF])
    B = XSet.from_points(K, [K(2), K(3), INF])
    assert (A & B).count == 2 and INF in (A & B)
    assert (A | B).count == 4
    assert (A - B).count == 1 and K(1) in (A - B)
    sq = XSet.from_points(K, [K(0), K(4), INF]).pullback_square()
    assert sq.count == 4  # 0, +-2, oo


# --- Velu -------------------------------------------------------------------


def _three_torsion_point(E):
    for P in E.points():
        if not P.is_zero and point_order_bounded(E, P, 3) == 3:
            return P
    return None


def test_velu_f13_exhaustive():
    K = PrimeField(13)
    found = 0
    for a in range(13):
        for b in range(13):
            E = ShortW(K(a), K(b))
            if not E.discriminant:
                continue
            T = _three_torsion_point(E)
            if T is None:
                continue
            phi = velu_isogeny(E, T, 3)
            found += 1
            for P in E.points():
                Q = phi(P)
                assert phi.codomain.contains_point(Q)
                assert Q.is_zero == (P.is_zero or P.x == T.x)
                assert phi(E.add(P, T)) == Q
    assert found > 10


def test_velu_dual_gives_times_three():
    K = PrimeField(1009)
    rng = random.Random(3)
    gen = None
    while gen is None:
        E = ShortW(K(rng.randrange(1009)), K(rng.randrange(1009)))
        if not E.discriminant or (T := _three_torsion_point(E)) is None:
            continue
        phi = velu_isogeny(E, T, 3)
        E2 = phi.codomain
        # the dual's kernel is phi(E[3]); look for a curve where it has a rational generator
        gen = next((phi(P) for P in E.points()
                    if point_order_bounded(E, P, 3) == 3 and not phi(P).is_zero), None)
    dual = velu_isogeny(E2, gen, 3)
    from commontorsion.curves import isomorphism_scale

    u2 = isomorphism_scale(dual.codomain, E)
    for P in E.points()[:60]:
        R = dual(phi(P))
        x3 = E.mul(3, P)
        got = R if R.is_zero else EllPoint(u2 * R.x, None)
        assert got.is_zero == x3.is_zero
        if not x3.is_zero:
            assert got.x == x3.x


def test_velu_rejects_wrong_order():
    K = PrimeField(7)
    E = ShortW(K(0), K(1))
    P = next(P for P in E.points() if not P.is_zero and point_order_bounded(E, P, 12) != 3)
    with pytest.raises(PreconditionError):
        velu_isogeny(E, P, 3)


# --- halving and orders -----------------------------------------------------


def test_halving_poly():
    K = PrimeField(10007)
    rng = random.Random(9)
    E = ShortW(K(3), K(7))
    assert halving_poly(E, EllPoint.zero()) == E.rhs().monic()
    for _ in range(20):
        Q = E.random_point(rng)
        R = E.mul(2, Q)
        H = halving_poly(E, R)
        if not R.is_zero:
            assert H.deg == 4
        assert not H(Q.x)
        for x0 in roots(H):
            rhs = x0**3 + E.a * x0 + E.b
            if rhs.is_square():
                Q0 = EllPoint(x0, rhs.sqrt())
                assert E.mul(2, Q0).x == R.x


def roots(f):
    from commontorsion.algebra import roots as _r

    return _r(f)


def test_point_order_bounded():
    K = PrimeField(7)
    E = ShortW(K(0), K(1))
    assert point_order_bounded(E, EllPoint(K(0), K(1)), 12) == 3
    assert point_order_bounded(E, EllPoint.zero(), 5) == 1
    K = PrimeField(10007)
    E = ShortW(K(1), K(5))
    n = len(E.points())
    rng = random.Random(1)
    P = E.random_point(rng)
    o = point_order_bounded(E, P, n)
    assert o is not None and n % o == 0
    small = min(q for q in range(2, o + 1) if o % q == 0)
    if o > 12:
        assert point_order_bounded(E, P, 12 * small if o % (12 * small) else 1) is None
