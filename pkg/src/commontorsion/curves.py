"""Elliptic and genus-2 curve models, division polynomials and isogenies.

All elliptic computations run on a short Weierstrass model; other models are
connected to it through :func:`to_short_weierstrass`, which records the
Moebius change of x-coordinate and the y-rescaling.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, fields
from functools import cached_property

from sympy import factorint

from .algebra.fields import Elem, Field, PrimeField
from .algebra.poly import Poly, poly_gcd
from .errors import CharacteristicHazard, PreconditionError

# ----------------------------------------------------------------------------
# P^1 and Moebius maps
# ----------------------------------------------------------------------------


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "oo"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def is_inf(v) -> bool:
    return v is INF


def p1_eq(u, v) -> bool:
    if is_inf(u) or is_inf(v):
        return is_inf(u) and is_inf(v)
    return u == v


def p1_hom(v, K):
    """Homogeneous coordinates (x, z) of a P^1 point."""
    if is_inf(v):
        return K(1), K(0)
    return K(v), K(1)


class Mobius:
    """x -> (a x + b)/(c x + d), a 2x2 matrix up to nonzero scalar."""

    __slots__ = ("a", "b", "c", "d", "K")

    def __init__(self, a, b, c, d, K: Field | None = None):
        if K is None:
            K = next(v.K for v in (a, b, c, d) if isinstance(v, Elem))
        self.K = K
        self.a, self.b, self.c, self.d = (K(v) for v in (a, b, c, d))
        if not self.det:
            raise PreconditionError("Moebius matrix is singular")

    @classmethod
    def identity(cls, K):
        return cls(1, 0, 0, 1, K)

    @property
    def det(self) -> Elem:
        return self.a * self.d - self.b * self.c

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __call__(self, v):
        a, b, c, d = self.entries
        if is_inf(v):
            return INF if not c else a / c
        den = c * v + d
        if not den:
            return INF
        return (a * v + b) / den

    def __matmul__(self, other: "Mobius") -> "Mobius":
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return Mobius(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h, self.K)

    def inverse(self) -> "Mobius":
        a, b, c, d = self.entries
        return Mobius(d, -b, -c, a, self.K)

    def __eq__(self, other):
        # equality up to scalar, by cross-multiplication
        if not isinstance(other, Mobius):
            return NotImplemented
        x, y = self.entries, other.entries
        return all(x[i] * y[j] == x[j] * y[i] for i in range(4) for j in range(i + 1, 4))

    def __hash__(self):
        # normalise by the first nonzero entry
        ent = self.entries
        piv = next(e for e in ent if e)
        return hash(tuple((e / piv) for e in ent))

    def is_identity(self):
        return self == Mobius.identity(self.K)

    def is_involution(self):
        return not self.is_identity() and (self @ self).is_identity()

    def fixed_points(self):
        """Fixed points in P^1 (raises FieldExtensionRequired if irrational)."""
        a, b, c, d = self.entries
        # c x^2 + (d - a) x - b = 0
        if not c:
            pts = [INF]
            if a != d:
                pts.append(b / (d - a))
            return pts
        disc = (d - a) ** 2 + 4 * b * c
        r = disc.sqrt()
        return [(a - d + r) / (2 * c), (a - d - r) / (2 * c)]

    def pullback(self, f: Poly, D: int | None = None) -> Poly:
        """(c x + d)^D f(M(x)), roots move by M^{-1}."""
        return f.moebius_pullback(self.entries, D)

    def __repr__(self):
        return f"Mobius([[{self.a}, {self.b}], [{self.c}, {self.d}]])"


def mobius_sending(p0, p1, p2, K) -> Mobius:
    """The Moebius map sending p0, p1, p2 to 0, oo, 1 (points in P^1)."""
    x0, z0 = p1_hom(p0, K)
    x1, z1 = p1_hom(p1, K)
    x2, z2 = p1_hom(p2, K)
    # M(x,z) = (z0 x - x0 z) * k0 : (z1 x - x1 z) * k1, fix k's by M(p2) = 1
    n2 = z0 * x2 - x0 * z2
    d2 = z1 * x2 - x1 * z2
    return Mobius(z0 * d2, -x0 * d2, z1 * n2, -x1 * n2, K)


# ----------------------------------------------------------------------------
# finite subsets of P^1
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class XSet:
    """A finite subset of P^1: roots of a squarefree monic ``poly`` plus maybe oo."""

    poly: Poly
    inf: bool = False

    @classmethod
    def empty(cls, K):
        return cls(Poly(K, [1]), False)

    @classmethod
    def from_points(cls, K, pts):
        affine = [p for p in pts if not is_inf(p)]
        uniq = []
        for p in affine:
            if not any(p == q for q in uniq):
                uniq.append(p)
        return cls(Poly.from_roots(K, uniq), any(is_inf(p) for p in pts))

    @property
    def K(self):
        return self.poly.K

    @property
    def count(self) -> int:
        return max(self.poly.deg, 0) + int(self.inf)

    def __len__(self):
        return self.count

    def __and__(self, other: "XSet") -> "XSet":
        return XSet(poly_gcd(self.poly, other.poly), self.inf and other.inf)

    def __or__(self, other: "XSet") -> "XSet":
        g = poly_gcd(self.poly, other.poly)
        return XSet((self.poly * (other.poly // g)).monic(), self.inf or other.inf)

    def __sub__(self, other: "XSet") -> "XSet":
        g = poly_gcd(self.poly, other.poly)
        return XSet((self.poly // g).monic(), self.inf and not other.inf)

    def __contains__(self, v) -> bool:
        if is_inf(v):
            return self.inf
        return not self.poly(v)

    def __eq__(self, other):
        return isinstance(other, XSet) and self.inf == other.inf and self.poly == other.poly

    def __hash__(self):
        return hash((self.poly, self.inf))

    def issubset(self, other: "XSet") -> bool:
        return (self & other) == self

    def transport(self, M: Mobius) -> "XSet":
        """Image of the set under M."""
        D = max(self.poly.deg, 0) + int(self.inf)
        # with D above the affine degree, oo contributes the factor of M(oo)
        g = M.inverse().pullback(self.poly, D)
        return XSet(g.monic(), g.deg < D)

    def pullback_square(self) -> "XSet":
        """Preimage under x -> x^2 (both 0 and oo are ramification points)."""
        K = self.K
        c = self.poly.c
        spread = []
        for i, v in enumerate(c):
            spread.append(v)
            if i + 1 < len(c):
                spread.append(K.zero)
        g = Poly(K, spread, raw=True)
        if not self.poly(K(0)):
            g = g // Poly.x(K)
        return XSet(g.monic(), self.inf)

    def roots(self):
        from .algebra.poly import roots as _roots

        out = list(_roots(self.poly)) if self.poly.deg > 0 else []
        return out + ([INF] if self.inf else [])

    def __repr__(self):
        return f"XSet({self.poly}{' + oo' if self.inf else ''}; count={self.count})"


# ----------------------------------------------------------------------------
# curve models
# ----------------------------------------------------------------------------


class CurveModel:
    """y^2 = f(x); ``genus`` 1 models are elliptic with f of degree 3 or 4."""

    genus = 1
    tag = "model"

    def rhs(self) -> Poly:
        raise NotImplementedError

    def contains(self, x, y) -> bool:
        return y * y == self.rhs()(x)

    @property
    def K(self) -> Field:
        return next(v.K for v in self.params() if isinstance(v, Elem))

    def params(self):
        return ()

    def check(self):
        f = self.rhs()
        n = f.deg
        need = 3 if self.genus == 1 else 6
        if n not in (need, need + 1) and not (self.genus == 2 and n in (5, 6)):
            raise PreconditionError(f"{self.tag}: right-hand side has degree {n}")
        if poly_gcd(f, f.derivative()).deg > 0:
            raise PreconditionError(f"{self.tag}: right-hand side is not squarefree")
        return self


@dataclass(frozen=True)
class ShortW(CurveModel):
    """y^2 = x^3 + a x + b."""

    a: Elem
    b: Elem
    tag = "ShortW"

    def params(self):
        return (self.a, self.b)

    def rhs(self) -> Poly:
        K = self.a.K
        return Poly(K, [self.b, self.a, 0, 1])

    @cached_property
    def discriminant(self) -> Elem:
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    @cached_property
    def j_invariant(self) -> Elem:
        a, b = self.a, self.b
        return 1728 * 4 * a**3 / (4 * a**3 + 27 * b**2)

    # group law ---------------------------------------------------------------
    def contains_point(self, P: "EllPoint") -> bool:
        if P.is_zero:
            return True
        return P.y * P.y == P.x**3 + self.a * P.x + self.b

    def neg(self, P):
        return P if P.is_zero else EllPoint(P.x, -P.y)

    def add(self, P, Q):
        if P.is_zero:
            return Q
        if Q.is_zero:
            return P
        if P.x == Q.x:
            if P.y == -Q.y:
                return EllPoint.zero()
            lam = (3 * P.x * P.x + self.a) / (2 * P.y)
        else:
            lam = (Q.y - P.y) / (Q.x - P.x)
        x3 = lam * lam - P.x - Q.x
        return EllPoint(x3, lam * (P.x - x3) - P.y)

    def sub(self, P, Q):
        return self.add(P, self.neg(Q))

    def mul(self, n: int, P):
        if n < 0:
            return self.mul(-n, self.neg(P))
        R = EllPoint.zero()
        A = P
        while n:
            if n & 1:
                R = self.add(R, A)
            n >>= 1
            if n:
                A = self.add(A, A)
        return R

    def points(self):
        """All affine points over a (small) prime field, plus the origin."""
        K = self.a.K
        if not isinstance(K, PrimeField):
            raise PreconditionError("enumeration implemented over prime fields")
        p = K.p
        out = [EllPoint.zero()]
        sq = {}
        for y in range(p):
            sq.setdefault(y * y % p, []).append(y)
        av, bv = self.a.v, self.b.v
        for x in range(p):
            r = (x * x * x + av * x + bv) % p
            for y in sq.get(r, []):
                out.append(EllPoint(K(x), K(y)))
        return out

    def lift_x(self, x):
        """A point with the given x-coordinate (FieldExtensionRequired if none)."""
        y = (x**3 + self.a * x + self.b).sqrt()
        return EllPoint(x, y)

    def random_point(self, rng: random.Random):
        K = self.a.K
        while True:
            x = K(K.random(rng))
            rhs = x**3 + self.a * x + self.b
            if rhs and rhs.is_square():
                return EllPoint(x, rhs.sqrt())


@dataclass(frozen=True)
class Cubic(CurveModel):
    """y^2 = (x - u)(x - v)(x - w)."""

    u: Elem
    v: Elem
    w: Elem
    tag = "Cubic"

    def params(self):
        return (self.u, self.v, self.w)

    def rhs(self):
        return Poly.from_roots(self.K, [self.u, self.v, self.w])

    def branch_values(self):
        return [self.u, self.v, self.w, INF]


@dataclass(frozen=True)
class CubicWith0(CurveModel):
    """y^2 = x (x - u)(x - v)(x - w)."""

    u: Elem
    v: Elem
    w: Elem
    tag = "CubicWith0"

    def params(self):
        return (self.u, self.v, self.w)

    def rhs(self):
        K = self.K
        return Poly.from_roots(K, [K(0), self.u, self.v, self.w])

    def branch_values(self):
        return [self.u.K(0), self.u, self.v, self.w]


@dataclass(frozen=True)
class EvenQuartic(CurveModel):
    """y^2 = (x^2 - s)(x^2 - t)."""

    s: Elem
    t: Elem
    tag = "EvenQuartic"

    def params(self):
        return (self.s, self.t)

    def rhs(self):
        return Poly(self.K, [self.s * self.t, 0, -(self.s + self.t), 0, 1])

    def branch_values(self):
        rs, rt = self.s.sqrt(), self.t.sqrt()
        return [rs, -rs, rt, -rt]


@dataclass(frozen=True)
class QuarticModel(CurveModel):
    """y^2 = f(x) with f squarefree of degree 3 or 4, given by coefficients."""

    f: Poly
    tag = "Quartic"

    @property
    def K(self):
        return self.f.K

    def rhs(self):
        return self.f


@dataclass(frozen=True)
class EvenSextic(CurveModel):
    """y^2 = (x^2 - u)(x^2 - v)(x^2 - w), genus 2."""

    u: Elem
    v: Elem
    w: Elem
    genus = 2
    tag = "EvenSextic"

    def params(self):
        return (self.u, self.v, self.w)

    def rhs(self):
        K = self.K
        out = Poly(K, [1])
        for r in (self.u, self.v, self.w):
            out = out * Poly(K, [-r, 0, 1])
        return out


@dataclass(frozen=True)
class S3Sextic(CurveModel):
    """y^2 = x^6 + t x^3 + 1, genus 2 with reduced automorphism group S3."""

    t: Elem
    genus = 2
    tag = "S3Sextic"

    def params(self):
        return (self.t,)

    def rhs(self):
        return Poly(self.K, [1, 0, 0, self.t, 0, 0, 1])


@dataclass(frozen=True)
class PoonenCt(CurveModel):
    """y^2 = (x^3 - 1)(x^3 - t^12), genus 2."""

    t: Elem
    genus = 2
    tag = "PoonenCt"

    def params(self):
        return (self.t,)

    def rhs(self):
        K = self.K
        return Poly(K, [-1, 0, 0, 1]) * Poly(K, [-(self.t**12), 0, 0, 1])


@dataclass(frozen=True)
class SexticModel(CurveModel):
    """y^2 = f(x), f squarefree of degree 5 or 6."""

    f: Poly
    genus = 2
    tag = "Sextic"

    @property
    def K(self):
        return self.f.K

    def rhs(self):
        return self.f


def map_model(model: CurveModel, fn) -> CurveModel:
    """Apply a coefficient map (e.g. reduction mod p) to every model parameter."""
    if isinstance(model, (QuarticModel, SexticModel)):
        cs = [fn(c) for c in model.f.coeffs()]
        return type(model)(Poly(cs[-1].K, cs))
    vals = {f.name: fn(getattr(model, f.name)) for f in fields(model)}
    return type(model)(**vals)


def map_p1(v, fn):
    return v if is_inf(v) else fn(v)


def map_mobius(M: Mobius, fn) -> Mobius:
    ent = [fn(e) for e in M.entries]
    return Mobius(*ent, K=ent[0].K)


# ----------------------------------------------------------------------------
# points
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class EllPoint:
    """Affine point (x, y), or the origin when both are None."""

    x: Elem | None = None
    y: Elem | None = None

    @classmethod
    def zero(cls):
        return cls(None, None)

    @property
    def is_zero(self):
        return self.x is None

    def __repr__(self):
        return "O" if self.is_zero else f"({self.x}, {self.y})"


# ----------------------------------------------------------------------------
# normal form
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class WeierstrassForm:
    """A short Weierstrass model of (model, origin) with its coordinate maps.

    x_W = mobius(x) and y_W = yscale * y / (x - x0)^2 (finite origin x0) or
    y_W = yscale * y (origin at infinity).
    """

    E: ShortW
    mobius: Mobius
    yscale: Elem
    origin: object
    model: CurveModel

    def to_W(self, x, y) -> EllPoint:
        if is_inf(x):
            raise PreconditionError("points over x = oo are not mapped")
        if not is_inf(self.origin) and x == self.origin:
            return EllPoint.zero()
        xw = self.mobius(x)
        if is_inf(self.origin):
            return EllPoint(xw, self.yscale * y)
        return EllPoint(xw, self.yscale * y / (x - self.origin) ** 2)

    def from_W(self, P: EllPoint):
        """(x, y) on the model; the origin maps to (origin, 0) or to oo."""
        if P.is_zero:
            return (self.origin, None if is_inf(self.origin) else self.E.a.K(0))
        x = self.mobius.inverse()(P.x)
        if is_inf(x):
            raise PreconditionError("image lies over x = oo")
        if is_inf(self.origin):
            return (x, P.y / self.yscale)
        return (x, P.y * (x - self.origin) ** 2 / self.yscale)

    def x_to_W(self, x):
        return self.mobius(x)

    def x_from_W(self, xw):
        return self.mobius.inverse()(xw)


def _taylor(f: Poly, x0) -> list:
    """Coefficients of f(x0 + u) in u, padded to length 5."""
    g = f.compose_linear(1, x0)
    return [g[i] for i in range(5)]


def to_short_weierstrass(model: CurveModel, origin=INF) -> WeierstrassForm:
    """Short Weierstrass model with the origin branch point sent to infinity."""
    if isinstance(model, ShortW):
        K = model.K
        if not is_inf(origin):
            raise PreconditionError("ShortW models use the point at infinity as origin")
        return WeierstrassForm(model, Mobius.identity(K), K(1), INF, model)
    if model.genus != 1:
        raise PreconditionError("to_short_weierstrass needs an elliptic model")
    f = model.rhs()
    K = f.K
    if is_inf(origin):
        if f.deg != 3:
            raise PreconditionError("origin oo is not a branch point of a quartic model")
        c0, c1, c2, c3 = (f[i] for i in range(4))
        M = Mobius(c3, c2 / 3, 0, 1, K)
        yscale = c3
    else:
        x0 = K(origin)
        if f(x0):
            raise PreconditionError(f"origin x = {x0} is not a branch point")
        d = _taylor(f, x0)
        # x^4 f(x0 + 1/x) = d1 x^3 + d2 x^2 + d3 x + d4
        c3, c2, c1, c0 = d[1], d[2], d[3], d[4]
        M = Mobius(c2 / 3, c3 - c2 * x0 / 3, 1, -x0, K)
        yscale = c3
        origin = x0
    if not c3:
        raise PreconditionError("origin is a multiple root")
    a = c1 * c3 - c2 * c2 / 3
    b = c0 * c3 * c3 - c1 * c2 * c3 / 3 + 2 * c2**3 / 27
    E = ShortW(a, b)
    if not E.discriminant:
        raise PreconditionError("singular curve")
    return WeierstrassForm(E, M, yscale, origin, model)


# ----------------------------------------------------------------------------
# division polynomials
# ----------------------------------------------------------------------------


class DivisionPolynomials:
    """Memoised f_n with psi_n = f_n (n odd) and psi_n = 2 y f_n (n even)."""

    def __init__(self, E: ShortW):
        K = E.a.K
        if K.char in (2, 3):
            raise CharacteristicHazard("division polynomials need characteristic > 3")
        self.E = E
        a, b = E.a, E.b
        self.F = Poly(K, [b, a, 0, 1])
        self.F2x16 = self.F * self.F * 16
        self._f = {
            0: Poly(K, []),
            1: Poly(K, [1]),
            2: Poly(K, [1]),
            3: Poly(K, [-(a * a), 12 * b, 6 * a, 0, 3]),
            4: Poly(K, [-8 * b * b - a**3, -4 * a * b, -5 * a * a, 20 * b, 5 * a, 0, 1]) * 2,
        }

    def f(self, n: int) -> Poly:
        if n < 0:
            return -self.f(-n)
        got = self._f.get(n)
        if got is not None:
            return got
        # iterative fill of the needed indices, smallest first
        need, stack = set(), [n]
        while stack:
            k = stack.pop()
            if k in self._f or k in need:
                continue
            need.add(k)
            m = k // 2
            deps = (m - 2, m - 1, m, m + 1, m + 2) if k % 2 == 0 else (m - 1, m, m + 1, m + 2)
            stack.extend(d for d in deps if d not in self._f)
        for k in sorted(need):
            m = k // 2
            f = self._f
            if k % 2:
                if m % 2 == 0:
                    val = self.F2x16 * f[m + 2] * f[m] ** 3 - f[m - 1] * f[m + 1] ** 3
                else:
                    val = f[m + 2] * f[m] ** 3 - self.F2x16 * f[m - 1] * f[m + 1] ** 3
            else:
                val = f[m] * (f[m + 2] * f[m - 1] ** 2 - f[m - 2] * f[m + 1] ** 2)
            self._f[k] = val
        return self._f[n]

    def psi(self, n: int) -> Poly:
        """psi_n for odd n, psi_n / y for even n."""
        return self.f(n) if n % 2 else self.f(n) * 2

    def torsion(self, n: int) -> Poly:
        """Monic squarefree polynomial of x(P), P in E[n] minus the origin."""
        K = self.E.a.K
        if n == 1:
            return Poly(K, [1])
        if K.char and n % K.char == 0:
            raise CharacteristicHazard(f"characteristic {K.char} divides n = {n}")
        g = self.f(n) if n % 2 else self.f(n) * self.F
        return g.monic()

    def exact_order(self, n: int) -> Poly:
        """x-coordinates of points of exact order n (n >= 2)."""
        g = self.torsion(n)
        for q in factorint(n):
            g = g // poly_gcd(g, self.torsion(n // q))
        return g.monic()


def division_poly(E: ShortW, n: int) -> Poly:
    """psi_n with y^2 eliminated: psi_n (n odd) or psi_n / y (n even)."""
    if n <= 0:
        raise ValueError("division polynomial index must be positive")
    return DivisionPolynomials(E).psi(n)


def torsion_x_poly(model: CurveModel, origin=INF, N: int = 2, cache=None) -> tuple[Poly, bool]:
    """x-coordinates (model coordinate) of all points of order dividing N.

    Returns ``(poly, inf_flag)``: the monic squarefree polynomial of the
    affine values and whether x = oo carries such a point.  The origin's own
    x-value is included.
    """
    xs = torsion_xset(model, origin, N, cache)
    return xs.poly, xs.inf


def torsion_xset(model: CurveModel, origin=INF, N: int = 2, cache=None) -> XSet:
    if N < 1:
        raise ValueError("order bound must be positive")
    W = to_short_weierstrass(model, origin)
    dp = cache if cache is not None else DivisionPolynomials(W.E)
    T = dp.torsion(N)
    return _transport_w_set(W, T, True)


def _transport_w_set(W: WeierstrassForm, T: Poly, with_origin: bool) -> XSet:
    """Roots of T (W-coordinate), plus the origin if asked, in model coordinates."""
    D = max(T.deg, 0) + int(with_origin)
    g = W.mobius.pullback(T, D)
    return XSet(g.monic(), g.deg < D)


def exact_order_xset(W: WeierstrassForm, dp: DivisionPolynomials, n: int) -> XSet:
    if n == 1:
        K = W.E.a.K
        return _transport_w_set(W, Poly(K, [1]), True)
    return _transport_w_set(W, dp.exact_order(n), False)


# ----------------------------------------------------------------------------
# points: orders, isogenies, halving
# ----------------------------------------------------------------------------


def point_order_bounded(E: ShortW, P: EllPoint, N: int):
    """Exact order of P if it divides N, else None."""
    if not E.contains_point(P):
        raise PreconditionError("point not on curve")
    if P.is_zero:
        return 1
    if not E.mul(N, P).is_zero:
        return None
    order = N
    for q in factorint(N):
        while order % q == 0 and E.mul(order // q, P).is_zero:
            order //= q
    return order


@dataclass
class VeluIsogeny:
    """Separable isogeny with a given odd-order kernel (normalised)."""

    domain: ShortW
    codomain: ShortW
    kernel_half: list
    x_num: Poly
    x_den: Poly

    def __call__(self, P: EllPoint) -> EllPoint:
        if P.is_zero:
            return P
        x, y = P.x, P.y
        X, Y = x, y
        for Q, gx, gy, vQ, uQ in self.kernel_half:
            dx = x - Q.x
            if not dx:
                return EllPoint.zero()
            inv = 1 / dx
            inv2 = inv * inv
            X = X + vQ * inv + uQ * inv2
            Y = Y - uQ * 2 * y * inv2 * inv - vQ * (y - Q.y) * inv2 + gx * gy * inv2
        return EllPoint(X, Y)

    def map_x(self, x):
        den = self.x_den(x)
        if not den:
            return INF
        return self.x_num(x) / den


def velu_isogeny(E: ShortW, kernel_gen: EllPoint, ell: int) -> VeluIsogeny:
    """Quotient of E by <kernel_gen> (exact odd order ell), Velu's formulas."""
    if ell % 2 == 0 or ell < 3:
        raise PreconditionError("kernel order must be odd and >= 3")
    if point_order_bounded(E, kernel_gen, ell) != ell:
        raise PreconditionError(f"kernel generator does not have exact order {ell}")
    K = E.a.K
    half = []
    v = K(0)
    w = K(0)
    Q = kernel_gen
    for _ in range((ell - 1) // 2):
        gx = 3 * Q.x * Q.x + E.a
        gy = -2 * Q.y
        vQ = 2 * gx
        uQ = gy * gy
        v = v + vQ
        w = w + uQ + Q.x * vQ
        half.append((Q, gx, gy, vQ, uQ))
        Q = E.add(Q, kernel_gen)
    cod = ShortW(E.a - 5 * v, E.b - 7 * w)
    x = Poly.x(K)
    h = Poly(K, [1])
    for Q, *_ in half:
        h = h * (x - Q.x)
    num = x * h * h
    for Q, gx, gy, vQ, uQ in half:
        cof = h // (x - Q.x)
        num = num + (Poly(K, [uQ - vQ * Q.x, vQ])) * cof * cof
    return VeluIsogeny(E, cod, half, num, h * h)


def isomorphism_scale(E1: ShortW, E2: ShortW):
    """u^2 with E2 = E1 under (x, y) -> (u^2 x, u^3 y), or None if j differs.

    Requires a, b nonzero on both (j not 0 or 1728).
    """
    if E1.j_invariant != E2.j_invariant:
        return None
    if not (E1.a and E1.b and E2.a and E2.b):
        raise PreconditionError("isomorphism scale needs j != 0, 1728")
    # a2 = u^4 a1, b2 = u^6 b1
    return (E2.b * E1.a) / (E1.b * E2.a)


def apply_scale(P: EllPoint, u) -> EllPoint:
    if P.is_zero:
        return P
    return EllPoint(u * u * P.x, u * u * u * P.y)


def halving_poly(E: ShortW, R: EllPoint) -> Poly:
    """Monic polynomial of x(Q) over all Q with 2Q = R (degree 4, or 3 if R = O)."""
    K = E.a.K
    a, b = E.a, E.b
    F = Poly(K, [b, a, 0, 1])
    if R.is_zero:
        return F.monic()
    # x(2Q) = (x^4 - 2a x^2 - 8 b x + a^2) / (4 F(x))
    num = Poly(K, [a * a, -8 * b, -2 * a, 0, 1])
    return (num - F * (4 * R.x)).monic()


def transport_poly(W: WeierstrassForm, H: Poly) -> XSet:
    """Roots of H (W-coordinate) as a set in the model's x-coordinate."""
    return _transport_w_set(W, H, False)
