"""Collision search over one-parameter bielliptic genus-2 families.

A family is a cubic c(Z) whose coefficients are integer polynomials in t.
Side 1 is E: w^2 = c(Z) with origin at infinity, side 2 is E': w^2 = Z c(Z)
with origin at 0.  For each order n the side-j polynomial h_{j,n}(t, Z)
vanishes exactly at the Z-images of points of exact order n, and

    R_{m,n}(t) = Res_Z(h_{1,m}, h_{2,n})

vanishes at parameters where an order-m point of E and an order-n point of
E' share a Z-value.  R_{m,n} is computed modulo NTT-friendly primes by
sampling t on a coset of a power-of-two subgroup of F_p^* and interpolating
with an inverse number-theoretic transform.  Factors shared by R_{m,n} for
different (m, n) are found with gcds of squarefree parts only.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import flint
import numba
import numpy as np
import sympy
from sympy.functions.combinatorial.numbers import mobius
from sympy.ntheory import factorint, primitive_root

from .algebra.modular import crt_combine, ntt_primes, rational_reconstruct
from .errors import PreconditionError, SampleShortfall, UnsupportedDomain

MAX_CAP = 48


# ----------------------------------------------------------------------------
# families
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Family:
    """c(Z) = sum_k c_k(t) Z^k with c_k given as ascending integer t-coefficients.

    ``swap`` records that c_k(-t) = c_{3-k}(t), i.e. side 2 at t is side 1
    at -t after Z -> 1/Z; the sampler then reuses side-1 work.
    """

    name: str
    cubic: tuple
    swap: bool = False

    def cubic_at(self, t, p: int) -> tuple[int, ...]:
        return tuple(_horner(c, t, p) for c in self.cubic)

    @property
    def bad_t(self) -> tuple[int, ...]:
        return _bad_t(self.cubic)


@lru_cache(maxsize=None)
def _bad_t(cubic) -> tuple[int, ...]:
    """c_0 c_3 disc_Z(c) as ascending integer coefficients in t."""
    t, Z = sympy.symbols("t Z")
    cs = [sum(int(a) * t**i for i, a in enumerate(c)) for c in cubic]
    c = sum(ck * Z**k for k, ck in enumerate(cs))
    expr = sympy.expand(cs[0] * cs[3] * sympy.discriminant(c, Z))
    return tuple(int(a) for a in reversed(sympy.Poly(expr, t).all_coeffs()))


S3_FAMILY = Family("s3", ((2, 1), (30, -3), (30, 3), (2, -1)), swap=True)
FAMILIES = {"s3": S3_FAMILY}


def get_family(tag) -> Family:
    if isinstance(tag, Family):
        return tag
    key = str(tag).lower()
    if key in ("s3sextic", "s3"):
        return S3_FAMILY
    raise UnsupportedDomain(f"no parametric family registered under {tag!r}")


def _horner(coeffs, t, p: int) -> int:
    acc = 0
    for a in reversed(coeffs):
        acc = (acc * t + a) % p
    return acc


@lru_cache(maxsize=None)
def xdeg(n: int) -> int:
    """Number of x-values of points of exact order n (n >= 3)."""
    c = n * n
    for q in factorint(n):
        c = c * (q * q - 1) // (q * q)
    return c // 2


def degree_bound(dm: int, dn: int) -> int:
    """t-degree bound of Res_Z for x-degrees dm, dn with coefficient t-degrees <= dm, dn."""
    return 2 * dm * dn


# ----------------------------------------------------------------------------
# torsion polynomials in the Z coordinate
# ----------------------------------------------------------------------------


class _Scalars:
    """Coefficient arithmetic adaptor over F_p (nmod) or F_p[t]/(q) (fq_default)."""

    def __init__(self, p: int, modulus=None):
        self.p = p
        if modulus is None or len(modulus) == 2:
            self.ext = None
            self.one = flint.nmod(1, p)
            self.poly = lambda cs: flint.nmod_poly(cs, p)
            if modulus is None:
                self.gen = None
            else:
                self.gen = flint.nmod(-modulus[0] * pow(modulus[1], -1, p), p)
        else:
            R = flint.fmpz_mod_poly_ctx(p)
            self.ext = flint.fq_default_ctx(p, len(modulus) - 1, var="t", modulus=R(list(modulus)))
            ring = flint.fq_default_poly_ctx(self.ext)
            self.one = self.ext.one()
            self.poly = ring
            self.gen = self.ext.gen()
        self.third = self.one * pow(3, -1, p)

    def __call__(self, v):
        return self.one * v


def _seeds(k, S):
    """(F, f_0..f_4) for the cubic k0 + k1 Z + k2 Z^2 + k3 Z^3 in Z."""
    k0, k1, k2, k3 = k
    th = S.third
    a = k1 * k3 - k2 * k2 * th
    b = k0 * k3 * k3 - k1 * k2 * k3 * th + 2 * k2 * k2 * k2 * th * th * th
    X = S.poly([k2 * th, k3])
    X2 = X * X
    X3 = X2 * X
    one = S.poly([S.one])
    F = X3 + X * a + one * b
    f3 = X2 * X2 * 3 + X2 * (6 * a) + X * (12 * b) - one * (a * a)
    f4 = (X3 * X3 + X2 * X2 * (5 * a) + X3 * (20 * b) - X2 * (5 * a * a)
          - X * (4 * a * b) - one * (8 * b * b + a * a * a)) * 2
    return F, {0: S.poly([]), 1: one, 2: one, 3: f3, 4: f4}


def _fill(f, F16, n):
    need, stack = set(), [n]
    while stack:
        k = stack.pop()
        if k in f or k in need:
            continue
        need.add(k)
        m = k // 2
        deps = (m - 2, m - 1, m, m + 1, m + 2) if k % 2 == 0 else (m - 1, m, m + 1, m + 2)
        stack.extend(d for d in deps if d not in f)
    for k in sorted(need):
        m = k // 2
        if k % 2:
            if m % 2 == 0:
                f[k] = F16 * f[m + 2] * f[m] ** 3 - f[m - 1] * f[m + 1] ** 3
            else:
                f[k] = f[m + 2] * f[m] ** 3 - F16 * f[m - 1] * f[m + 1] ** 3
        else:
            f[k] = f[m] * (f[m + 2] * f[m - 1] ** 2 - f[m - 2] * f[m + 1] ** 2)


@lru_cache(maxsize=None)
def _moebius_split(n: int):
    up, down = [], []
    for d in sympy.divisors(n):
        mu = mobius(n // d)
        if mu == 1:
            up.append(d)
        elif mu == -1:
            down.append(d)
    return tuple(up), tuple(down)


def _exact_order_z(k, ns, S) -> dict:
    """Exact-order torsion polynomials (unnormalised) in Z for the cubic k."""
    F, f = _seeds(k, S)
    F16 = F * F * 16
    T = {}

    def torsion(d):
        if d not in T:
            if d == 1:
                T[d] = S.poly([S.one])
            else:
                _fill(f, F16, d)
                T[d] = f[d] if d % 2 else f[d] * F
        return T[d]

    out = {}
    for n in ns:
        up, down = _moebius_split(n)
        num = torsion(up[0])
        for d in up[1:]:
            num = num * torsion(d)
        den = S.poly([S.one])
        for d in down:
            den = den * torsion(d)
        out[n] = num // den
    return out


def _side_cubic(c, side: int):
    """Cubic whose Z-torsion gives h_{side,n} (side 2 still to be reversed)."""
    if side == 1:
        return tuple(c)
    if side == 2:
        return tuple(reversed(c))
    raise ValueError("side must be 1 or 2")


def _reverse(h, d: int, S):
    cs = list(h.coeffs())
    cs += [S.one * 0] * (d + 1 - len(cs))
    return S.poly(cs[::-1])


def side_polys(family: Family, t, side: int, ns, S: _Scalars) -> dict:
    """h_{side,n}(t, Z) for n in ``ns`` at a specialised t in the scalar ring."""
    c = tuple(sum((S.one * a) * t**i for i, a in enumerate(ck)) for ck in family.cubic)
    hs = _exact_order_z(_side_cubic(c, side), ns, S)
    if side == 2:
        hs = {n: _reverse(h, xdeg(n), S) for n, h in hs.items()}
    return hs


def _formal_resultant(f, g, dg: int):
    """Res over formal degrees (deg f, dg); f has full degree, g may drop."""
    r = f.resultant(g)
    k = dg - g.degree()
    if k:
        r = r * f.leading_coefficient() ** k
    return r


# ----------------------------------------------------------------------------
# number-theoretic transform
# ----------------------------------------------------------------------------


@numba.njit(cache=True)
def _ntt_inplace(a, p, w):
    n = a.shape[0]
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            tmp = a[i]
            a[i] = a[j]
            a[j] = tmp
    length = 2
    while length <= n:
        e = n // length
        wl = 1
        base = w
        while e:
            if e & 1:
                wl = wl * base % p
            base = base * base % p
            e >>= 1
        half = length // 2
        tw = np.empty(half, np.int64)
        tw[0] = 1
        for k in range(1, half):
            tw[k] = tw[k - 1] * wl % p
        for i in range(0, n, length):
            for k in range(half):
                u = a[i + k]
                v = a[i + k + half] * tw[k] % p
                a[i + k] = (u + v) % p
                a[i + k + half] = (u - v + p) % p
        length <<= 1


def ntt(values, p: int, w: int) -> np.ndarray:
    """Evaluations at w^j of the polynomial with coefficient vector ``values``."""
    a = np.array(values, dtype=np.int64) % p
    if a.shape[0] & (a.shape[0] - 1):
        raise ValueError("transform length must be a power of two")
    _ntt_inplace(a, p, w % p)
    return a


def intt(values, p: int, w: int) -> np.ndarray:
    """Inverse of :func:`ntt`."""
    n = len(values)
    a = ntt(values, p, pow(w, -1, p))
    return a * pow(n, -1, p) % p


def interpolate_coset(values, p: int, w: int, s: int) -> list[int]:
    """Coefficients of the polynomial taking ``values[j]`` at s w^j."""
    a = intt(values, p, w)
    sinv = pow(s, -1, p)
    out, sk = [], 1
    for c in a.tolist():
        out.append(c * sk % p)
        sk = sk * sinv % p
    return out


def _next_pow2(n: int) -> int:
    return 1 << max(1, (n - 1).bit_length())


@dataclass(frozen=True)
class _Grid:
    p: int
    size: int
    w: int
    s: int

    def point(self, j: int) -> int:
        return self.s * pow(self.w, j, self.p) % self.p


def _make_grid(family: Family, p: int, size: int, seed: int) -> _Grid:
    if (p - 1) % size:
        raise SampleShortfall(f"p = {p}: 2-power subgroup of order {size} unavailable")
    w = pow(primitive_root(p), (p - 1) // size, p)
    bad = flint.nmod_poly(list(family.bad_t), p)
    bad_roots = [int(r) for r, _ in bad.roots()] if bad.degree() > 0 else []
    rng = random.Random(seed * 1_000_003 + p)
    for _ in range(64):
        s = rng.randrange(2, p - 1)
        sinv = pow(s, -1, p)
        # s w^j = r  iff  (r / s)^size = 1
        if all(pow(r * sinv % p, size, p) != 1 for r in bad_roots):
            return _Grid(p, size, w, s)
    raise SampleShortfall(f"p = {p}: no coset of size {size} avoids the degenerate parameters")


# ----------------------------------------------------------------------------
# parametric torsion polynomials
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class BiPoly:
    """Polynomial in (t, Z) mod p; ``rows[k]`` lists ascending t-coefficients of Z^k."""

    p: int
    rows: tuple
    bad_t: tuple = ()

    @property
    def deg_x(self) -> int:
        return len(self.rows) - 1

    @property
    def deg_t(self) -> int:
        return max((len(r) - 1 for r in self.rows), default=-1)

    def specialize(self, t0: int, check: bool = True) -> list[int]:
        """Ascending Z-coefficients at t = t0."""
        t0 %= self.p
        if check and self.bad_t and _horner(self.bad_t, t0, self.p) == 0:
            raise PreconditionError(f"t = {t0} is a degenerate parameter mod {self.p}")
        return [_horner(r, t0, self.p) for r in self.rows]


def _trim(cs: list[int]) -> list[int]:
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def parametric_divpoly(family, side: int, n: int, p: int, seed: int = 0) -> BiPoly:
    """h_{side,n}(t, Z) mod p, recovered from its values on a sample coset."""
    family = get_family(family)
    if n < 3:
        raise PreconditionError("orders start at 3")
    d = xdeg(n)
    S = _Scalars(p)
    grid = _make_grid(family, p, _next_pow2(d + 1), seed)
    table = np.zeros((d + 1, grid.size), dtype=np.int64)
    for j in range(grid.size):
        t = grid.point(j)
        h = side_polys(family, t, side, [n], S)[n]
        cs = [int(c) for c in h.coeffs()]
        table[: len(cs), j] = cs
    rows = []
    for k in range(d + 1):
        coeffs = interpolate_coset(table[k], p, grid.w, grid.s)
        if any(coeffs[d + 1:]):
            raise ArithmeticError(f"t-degree of Z^{k} coefficient exceeds {d}")
        rows.append(tuple(_trim(coeffs)))
    return BiPoly(p, tuple(rows), family.bad_t)


# ----------------------------------------------------------------------------
# resultant profiles
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchConfig:
    family: str = "s3"
    m_max: int = 24
    n_max: int = 24
    primes: int = 2
    prime_bits: int = 30
    seed: int = 0
    exact: bool = False

    def __post_init__(self):
        get_family(self.family)
        for cap in (self.m_max, self.n_max):
            if not 3 <= cap <= MAX_CAP:
                raise PreconditionError(f"order caps must lie in [3, {MAX_CAP}], got {cap}")
        if self.primes < 1:
            raise PreconditionError("need at least one prime")
        if not 20 <= self.prime_bits <= 31:
            raise PreconditionError("prime_bits must lie in [20, 31]")

    def pairs(self) -> list[tuple[int, int]]:
        return [(m, n) for m in range(3, self.m_max + 1) for n in range(3, self.n_max + 1)]

    def grid_size(self) -> int:
        dm = max(xdeg(m) for m in range(3, self.m_max + 1))
        dn = max(xdeg(n) for n in range(3, self.n_max + 1))
        return _next_pow2(degree_bound(dm, dn) + 1)

    def sample_primes(self) -> list[int]:
        e = self.grid_size().bit_length() - 1
        return ntt_primes(self.primes, self.seed, e, self.prime_bits)


@dataclass
class ResultantProfile:
    """R_{m,n} mod p together with its squarefree part."""

    p: int
    m: int
    n: int
    bound: int
    poly: object
    squarefree: object
    baseline: list[int] | None = None

    @property
    def degree(self) -> int:
        return self.poly.degree()


def _baseline(family, m, n, p, rng) -> list[int] | None:
    """Z-factor common to h_{1,m} and h_{2,n} for every t, if any."""
    S = _Scalars(p)
    gs = []
    for _ in range(3):
        t = rng.randrange(p)
        if _horner(family.bad_t, t, p) == 0:
            continue
        h1 = side_polys(family, t, 1, [m], S)[m]
        h2 = side_polys(family, t, 2, [n], S)[n]
        gs.append(h1.gcd(h2))
    if all(g.degree() == 0 for g in gs):
        return None
    if len(gs) < 2 or any(g != gs[0] for g in gs):
        raise PreconditionError(
            f"h_1,{m} and h_2,{n} share a t-dependent factor; R_{m},{n} vanishes identically"
        )
    return [int(c) for c in gs[0].coeffs()]


def _sample_all(family: Family, pairs, p: int, seed: int) -> dict:
    """Resultant profiles mod p for every pair, sharing the per-sample work."""
    rng = random.Random(seed * 7919 + p)
    base = {pr: _baseline(family, *pr, p, rng) for pr in pairs}
    bounds = {}
    for (m, n), g in base.items():
        k = len(g) - 1 if g else 0
        bounds[(m, n)] = (xdeg(n) - k) * xdeg(m) + (xdeg(m) - k) * xdeg(n)
    sizes = {pr: _next_pow2(bounds[pr] + 1) for pr in pairs}
    size = max(sizes.values())
    grid = _make_grid(family, p, size, seed)
    S = _Scalars(p)
    gpolys = {pr: S.poly(g) for pr, g in base.items() if g}
    by_stride: dict[int, list] = {}
    for pr in pairs:
        by_stride.setdefault(size // sizes[pr], []).append(pr)
    values = {pr: np.zeros(sizes[pr], dtype=np.int64) for pr in pairs}
    half = size // 2
    for j in range(half):
        active = [pr for st, prs in by_stride.items() if j % st == 0 for pr in prs]
        if not active:
            continue
        ms = sorted({m for m, _ in active})
        ns = sorted({n for _, n in active})
        t = grid.point(j)
        cache: dict = {}
        for jj, tt in ((j, t), (j + half, (-t) % grid.p)):
            c = family.cubic_at(tt, p)
            sides = []
            for side, orders in ((1, ms), (2, ns)):
                key = _side_cubic(c, side)
                if key not in cache:
                    want = sorted(set(ms) | set(ns)) if family.swap else orders
                    cache[key] = _exact_order_z(tuple(S.one * v for v in key), want, S)
                sides.append(cache[key])
            h1, h2raw = sides
            h2 = {n: _reverse(h2raw[n], xdeg(n), S) for n in ns}
            for pr in active:
                m, n = pr
                f, g = h1[m], h2[n]
                dg = xdeg(n)
                if pr in gpolys:
                    f = f // gpolys[pr]
                    g = g // gpolys[pr]
                    dg -= gpolys[pr].degree()
                st = size // sizes[pr]
                values[pr][jj // st] = int(_formal_resultant(f, g, dg))
    out = {}
    for pr in pairs:
        coeffs = interpolate_coset(values[pr], p, pow(grid.w, size // sizes[pr], p), grid.s)
        if any(coeffs[bounds[pr] + 1:]):
            raise ArithmeticError(f"R_{pr} mod {p} exceeds its degree bound {bounds[pr]}")
        R = flint.nmod_poly(_trim(coeffs), p)
        out[pr] = ResultantProfile(p, pr[0], pr[1], bounds[pr], R, _squarefree(R), base[pr])
    return out


def _squarefree(R):
    if R.degree() <= 0:
        return flint.nmod_poly([1], R.modulus())
    g = R.gcd(R.derivative())
    sq = R // g
    return sq * pow(int(sq.leading_coefficient()), -1, R.modulus())


def resultant_profile(cfg: SearchConfig, m: int, n: int, p: int | None = None) -> ResultantProfile:
    """R_{m,n}(t) mod p by evaluation-interpolation (first config prime by default)."""
    if not (3 <= m <= cfg.m_max and 3 <= n <= cfg.n_max):
        raise PreconditionError(f"({m}, {n}) outside the configured caps")
    family = get_family(cfg.family)
    if p is None:
        size = _next_pow2(degree_bound(xdeg(m), xdeg(n)) + 1)
        p = ntt_primes(1, cfg.seed, size.bit_length() - 1, cfg.prime_bits)[0]
    return _sample_all(family, [(m, n)], p, cfg.seed)[(m, n)]


# ----------------------------------------------------------------------------
# common factors
# ----------------------------------------------------------------------------


def _others_mod(polys: list) -> list:
    """r_i = prod_{j != i} polys[j] mod polys[i], via a product tree."""
    prods: dict = {}

    def prod(lo, hi):
        key = (lo, hi)
        if key not in prods:
            if hi - lo == 1:
                prods[key] = polys[lo]
            else:
                mid = (lo + hi) // 2
                prods[key] = prod(lo, mid) * prod(mid, hi)
        return prods[key]

    out = [None] * len(polys)

    def down(lo, hi, acc):
        if hi - lo == 1:
            out[lo] = acc % polys[lo]
            return
        mid = (lo + hi) // 2
        left, right = prod(lo, mid), prod(mid, hi)
        down(lo, mid, (acc % left) * (right % left) % left)
        down(mid, hi, (acc % right) * (left % right) % right)

    if len(polys) > 1:
        one = polys[0] ** 0
        down(0, len(polys), one)
    return out


def _coprime_basis(polys: list) -> list:
    basis: list = []
    for a in polys:
        pending = [a]
        while pending:
            a = pending.pop()
            if a.degree() <= 0:
                continue
            for i, b in enumerate(basis):
                g = a.gcd(b)
                if g.degree() > 0:
                    basis.pop(i)
                    pending.extend([g, b // g, a // g])
                    break
            else:
                basis.append(a)
    return basis


def _monic(f):
    return f * pow(int(f.leading_coefficient()), -1, f.modulus())


def _common_factors_mod_p(profiles: dict, pairs: list) -> dict:
    """Witness tuple -> monic product of basis factors dividing exactly those profiles."""
    polys = [profiles[pr] for pr in pairs]
    rest = _others_mod(polys)
    shared = [f.gcd(r) for f, r in zip(polys, rest)]
    basis = _coprime_basis([g for g in shared if g.degree() > 0])
    grouped: dict = {}
    for b in basis:
        wit = tuple(pr for pr, f in zip(pairs, polys) if (f % b).is_zero())
        if len(wit) >= 2:
            grouped[wit] = grouped[wit] * b if wit in grouped else b
    return {w: _monic(g) for w, g in grouped.items()}


@dataclass
class CommonFactor:
    witnesses: tuple
    degree: int
    per_prime: dict
    verified: dict
    direct: dict
    lifted: list | None = None
    stable: bool | None = None

    def to_dict(self) -> dict:
        return {
            "witnesses": [list(w) for w in self.witnesses],
            "degree": self.degree,
            "per_prime": {str(p): c for p, c in sorted(self.per_prime.items())},
            "divides_witnesses": {str(p): v for p, v in sorted(self.verified.items())},
            "direct_vanishing": {str(p): v for p, v in sorted(self.direct.items())},
            "lifted": None if self.lifted is None else [str(c) for c in self.lifted],
            "lift_stable": self.stable,
        }

    def roots_satisfy(self, coeffs: list) -> bool:
        """Whether this factor equals ``coeffs`` (ascending, monic rational) at every prime."""
        for p, cs in self.per_prime.items():
            target = [Fraction(c).numerator * pow(Fraction(c).denominator, -1, p) % p for c in coeffs]
            if cs != target:
                return False
        return True

    def has_factor(self, coeffs: list) -> bool:
        """Whether the rational polynomial ``coeffs`` divides this factor at every prime."""
        for p, cs in self.per_prime.items():
            target = [Fraction(c).numerator * pow(Fraction(c).denominator, -1, p) % p for c in coeffs]
            if not (flint.nmod_poly(cs, p) % flint.nmod_poly(target, p)).is_zero():
                return False
        return True


@dataclass
class SearchReport:
    config: SearchConfig
    primes: list
    profiles: dict
    common: list
    excluded: list
    status: str
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        cfg = self.config
        return {
            "schema": "commontorsion.search/1",
            "config": {
                "family": cfg.family, "m_max": cfg.m_max, "n_max": cfg.n_max,
                "primes": cfg.primes, "prime_bits": cfg.prime_bits, "seed": cfg.seed,
                "exact": cfg.exact,
            },
            "primes": list(self.primes),
            "status": self.status,
            "profiles": [
                {"m": m, "n": n, **info} for (m, n), info in sorted(self.profiles.items())
            ],
            "common_factors": [c.to_dict() for c in self.common],
            "excluded": self.excluded,
            "notes": list(self.notes),
        }


def _direct_vanishing(family: Family, g, witnesses, baselines) -> bool:
    """Check at each root of g (in its residue field) that both sides share a Z-root."""
    p = g.modulus()
    _, facs = g.factor()
    for q, _ in facs:
        S = _Scalars(p, [int(c) for c in q.coeffs()])
        t = S.gen
        for m, n in witnesses:
            h1 = side_polys(family, t, 1, [m], S)[m]
            h2 = side_polys(family, t, 2, [n], S)[n]
            if baselines.get((m, n)):
                G = S.poly([S.one * c for c in baselines[(m, n)]])
                h1, h2 = h1 // G, h2 // G
            if h1.gcd(h2).degree() <= 0:
                return False
    return True


def _lift(per_prime: dict):
    primes = sorted(per_prime)
    deg = len(per_prime[primes[0]])

    def attempt(ps):
        out = []
        for k in range(deg):
            r, M = crt_combine((per_prime[p][k], p) for p in ps)
            q = rational_reconstruct(r, M)
            if q is None:
                return None
            out.append(q)
        return out

    full = attempt(primes)
    stable = full is not None and len(primes) > 1 and attempt(primes[:-1]) == full
    return full, stable


def common_factor_scan(cfg: SearchConfig, progress=None) -> SearchReport:
    """Pairwise-common squarefree factors of R_{m,n} across distinct (m, n)."""
    family = get_family(cfg.family)
    pairs = cfg.pairs()
    if len(pairs) < 2:
        return SearchReport(cfg, [], {}, [], [], "empty", ["fewer than two (m, n) pairs in range"])
    primes = cfg.sample_primes()
    found: dict = {}
    profiles_out: dict = {pr: {"degree_bound": None, "degree": {}, "squarefree_degree": {},
                               "baseline": None} for pr in pairs}
    excluded = []
    all_profiles = {}
    for idx, p in enumerate(primes):
        prof = _sample_all(family, pairs, p, cfg.seed)
        all_profiles[p] = prof
        bad = flint.nmod_poly(list(family.bad_t), p)
        filtered = {}
        for pr in pairs:
            rp = prof[pr]
            info = profiles_out[pr]
            info["degree_bound"] = rp.bound
            info["degree"][str(p)] = rp.degree
            info["squarefree_degree"][str(p)] = rp.squarefree.degree()
            if rp.baseline:
                info["baseline"] = rp.baseline
            sq = rp.squarefree
            g = sq.gcd(bad)
            if g.degree() > 0:
                excluded.append({"prime": p, "m": pr[0], "n": pr[1], "removed_degree": g.degree()})
                sq = sq // g
            filtered[pr] = sq
        for wit, g in _common_factors_mod_p(filtered, pairs).items():
            found.setdefault(wit, {})[p] = g
        if progress:
            progress(idx + 1, len(primes), p)

    notes = []
    common = []
    for wit in sorted(found, key=lambda w: (len(w), w)):
        per = found[wit]
        missing = [p for p in primes if p not in per]
        degs = {per[p].degree() for p in per}
        if missing or len(degs) != 1:
            notes.append(f"witnesses {list(wit)}: factor absent or degree-unstable at primes {missing}")
            continue
        verified, direct = {}, {}
        baselines = {pr: profiles_out[pr]["baseline"] for pr in wit}
        for p in primes:
            g = per[p]
            verified[p] = all((all_profiles[p][pr].poly % g).is_zero() for pr in wit)
            direct[p] = _direct_vanishing(family, g, wit, baselines) if g.degree() <= 24 else None
        cf = CommonFactor(
            witnesses=wit, degree=degs.pop(),
            per_prime={p: [int(c) for c in per[p].coeffs()] for p in primes},
            verified=verified, direct=direct,
        )
        if cfg.exact:
            cf.lifted, cf.stable = _lift(cf.per_prime)
        common.append(cf)
    for pr, info in profiles_out.items():
        if len(set(info["degree"].values())) > 1:
            notes.append(f"R_{pr[0]},{pr[1]}: degree differs across primes {info['degree']}")
    status = "found" if common else "none"
    return SearchReport(cfg, primes, profiles_out, common, excluded, status, notes)
