import random

import flint
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commontorsion.algebra import Poly, PrimeField, poly_gcd, resultant, sylvester_resultant
from commontorsion.algebra.modular import ntt_primes
from commontorsion.covers import DoubleCover
from commontorsion.curves import INF, QuarticModel
from commontorsion.errors import PreconditionError, UnsupportedDomain
from commontorsion.search import (
    S3_FAMILY,
    SearchConfig,
    _common_factors_mod_p,
    _Scalars,
    common_factor_scan,
    get_family,
    interpolate_coset,
    intt,
    ntt,
    parametric_divpoly,
    resultant_profile,
    side_polys,
    xdeg,
)

P = ntt_primes(1, seed=0, two_adicity=12)[0]
K = PrimeField(P)


def to_poly(h):
    return Poly(K, [int(c) for c in h.coeffs()])


def good_t(rng):
    while True:
        t = rng.randrange(P)
        if int(flint.nmod_poly(list(S3_FAMILY.bad_t), P)(t)) != 0:
            return t


def exact_order(cover, n):
    """Exact-order x-set via the curves module's division polynomials."""
    out = cover.xset(n)
    for d in range(1, n):
        if n % d == 0:
            out = out - cover.xset(d)
    return out


def side_covers(t):
    c = Poly(K, list(S3_FAMILY.cubic_at(t, P)))
    return DoubleCover(QuarticModel(c), INF), DoubleCover(QuarticModel(c.shift(1)), K(0))


# --- torsion polynomials in Z ------------------------------------------------


def test_xdeg_counts():
    assert [xdeg(n) for n in (3, 4, 5, 6, 12)] == [4, 6, 12, 12, 48]


@pytest.mark.parametrize("n", [3, 4, 5, 6, 8])
def test_side_polys_match_division_polynomials(n):
    rng = random.Random(n)
    S = _Scalars(P)
    for _ in range(5):
        t = good_t(rng)
        E, E2 = side_covers(t)
        for side, cover in ((1, E), (2, E2)):
            h = to_poly(side_polys(S3_FAMILY, flint.nmod(t, P), side, [n], S)[n])
            want = exact_order(cover, n)
            assert not want.inf
            assert h.monic() == want.poly


def test_parametric_divpoly_specializes():
    rng = random.Random(1)
    S = _Scalars(P)
    for n in (3, 4, 5):
        for side in (1, 2):
            B = parametric_divpoly("s3", side, n, P, seed=2)
            assert B.deg_x == xdeg(n)
            assert B.deg_t <= xdeg(n)
            for _ in range(20):
                t = good_t(rng)
                direct = side_polys(S3_FAMILY, flint.nmod(t, P), side, [n], S)[n]
                assert B.specialize(t) == [int(c) for c in direct.coeffs()]


def test_specialize_rejects_degenerate_parameter():
    B = parametric_divpoly("s3", 1, 3, P)
    bad = [int(r) for r, _ in flint.nmod_poly(list(S3_FAMILY.bad_t), P).roots()]
    assert bad
    with pytest.raises(PreconditionError):
        B.specialize(bad[0])


# --- number-theoretic transform ---------------------------------------------


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 9))
def test_ntt_roundtrip(seed, logn):
    rng = random.Random(seed)
    n = 1 << logn
    p = ntt_primes(1, seed=seed % 7, two_adicity=10)[0]
    from sympy.ntheory import primitive_root

    w = pow(primitive_root(p), (p - 1) // n, p)
    a = np.array([rng.randrange(p) for _ in range(n)], dtype=np.int64)
    assert list(intt(ntt(a, p, w), p, w)) == list(a)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32))
def test_interpolate_coset_recovers_poly(seed):
    from sympy.ntheory import primitive_root

    rng = random.Random(seed)
    n = 64
    w = pow(primitive_root(P), (P - 1) // n, P)
    s = rng.randrange(2, P - 1)
    coeffs = [rng.randrange(P) for _ in range(rng.randrange(1, n + 1))]
    f = flint.nmod_poly(coeffs, P)
    vals = np.array([int(f(s * pow(w, j, P) % P)) for j in range(n)], dtype=np.int64)
    got = interpolate_coset(vals, P, w, s)
    assert got[: len(coeffs)] == coeffs and not any(got[len(coeffs):])


# --- resultants ---------------------------------------------------------------


def _h(t, m, n):
    S = _Scalars(P)
    tt = flint.nmod(t, P)
    return (to_poly(side_polys(S3_FAMILY, tt, 1, [m], S)[m]),
            to_poly(side_polys(S3_FAMILY, tt, 2, [n], S)[n]))


@pytest.mark.parametrize("mn", [(3, 3), (3, 4), (4, 3), (4, 5), (5, 5)])
def test_interpolated_resultant_matches_direct(mn):
    m, n = mn
    cfg = SearchConfig(m_max=5, n_max=5, seed=3)
    prof = resultant_profile(cfg, m, n, P)
    assert prof.degree <= prof.bound
    G = Poly(K, prof.baseline or [1])
    if (m, n) == (3, 3):
        # Z = 1 (x = 0 and x = oo on the sextic) is common 3-torsion for every t
        assert G == Poly(K, [-1, 1])
    rng = random.Random(m * 10 + n)
    for _ in range(6):
        t = good_t(rng)
        h1, h2 = _h(t, m, n)
        h1, h2 = h1 // G, h2 // G
        direct = resultant(h1, h2, deg_g=xdeg(n) - G.deg)
        assert int(prof.poly(t)) == direct.v
        if m + n <= 7:
            assert direct == sylvester_resultant(h1, h2, deg_g=xdeg(n) - G.deg)


def test_resultant_zero_iff_shared_z():
    cfg = SearchConfig(m_max=6, n_max=6, seed=0)
    prof = resultant_profile(cfg, 4, 6, P)
    rts = [int(r) for r, _ in prof.poly.roots()]
    bad = flint.nmod_poly(list(S3_FAMILY.bad_t), P)
    rts = [r for r in rts if int(bad(r)) != 0]
    for t in rts:
        h1, h2 = _h(t, 4, 6)
        assert poly_gcd(h1, h2).deg > 0
    rng = random.Random(5)
    for _ in range(10):
        t = good_t(rng)
        if int(prof.poly(t)) != 0:
            h1, h2 = _h(t, 4, 6)
            assert poly_gcd(h1, h2).deg == 0


def test_degrees_agree_across_primes():
    cfg = SearchConfig(m_max=5, n_max=5, primes=2, seed=1)
    p1, p2 = cfg.sample_primes()
    for m, n in cfg.pairs():
        a = resultant_profile(cfg, m, n, p1)
        b = resultant_profile(cfg, m, n, p2)
        assert a.degree == b.degree
        assert a.squarefree.degree() == b.squarefree.degree()


# --- common-factor scan -----------------------------------------------------


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32))
def test_planted_common_factor_found(seed):
    rng = random.Random(seed)
    pairs = [(3, 3), (3, 4), (4, 3), (4, 4), (5, 5)]

    def rand_sqfree(deg):
        while True:
            f = flint.nmod_poly([rng.randrange(P) for _ in range(deg)] + [1], P)
            if f.gcd(f.derivative()).degree() == 0:
                return f

    planted = rand_sqfree(rng.randrange(1, 4))
    wit = tuple(sorted(rng.sample(pairs, 2)))
    polys = {}
    for pr in pairs:
        f = rand_sqfree(rng.randrange(3, 9))
        polys[pr] = f * planted if pr in wit else f
    found = _common_factors_mod_p(polys, pairs)
    assert wit in found
    assert (found[wit] % planted).is_zero()


def test_single_pair_scan_is_empty():
    rep = common_factor_scan(SearchConfig(m_max=3, n_max=3))
    assert rep.status == "empty" and not rep.common


@pytest.mark.slow
def test_smoke_scan_finds_record_factor():
    rep = common_factor_scan(SearchConfig(m_max=6, n_max=6, exact=True))
    assert rep.status == "found"
    hits = [cf for cf in rep.common if cf.has_factor([-1300, 0, 1])]
    assert hits
    assert any({(4, 6), (6, 4)} <= set(cf.witnesses) for cf in hits)
    for cf in hits:
        assert all(cf.verified.values())


def test_scan_is_seed_independent_in_degrees():
    a = common_factor_scan(SearchConfig(m_max=4, n_max=4, seed=0)).to_dict()
    b = common_factor_scan(SearchConfig(m_max=4, n_max=4, seed=5)).to_dict()
    strip = lambda d: sorted((p["m"], p["n"], sorted(p["degree"].values())) for p in d["profiles"])
    assert strip(a) == strip(b)
    wit = lambda d: sorted(tuple(map(tuple, c["witnesses"])) for c in d["common_factors"])
    assert wit(a) == wit(b)


def test_config_validation():
    with pytest.raises(PreconditionError):
        SearchConfig(m_max=2)
    with pytest.raises(PreconditionError):
        SearchConfig(n_max=100)
    with pytest.raises(PreconditionError):
        SearchConfig(primes=0)
    with pytest.raises(UnsupportedDomain):
        SearchConfig(family="C2")


def test_get_family():
    assert get_family("S3Sextic") is S3_FAMILY
    assert get_family(S3_FAMILY) is S3_FAMILY
    with pytest.raises(UnsupportedDomain):
        get_family("generic")


def test_bad_parameters_include_two():
    bad = flint.nmod_poly(list(S3_FAMILY.bad_t), P)
    assert int(bad(2)) == 0 and int(bad(P - 2)) == 0
