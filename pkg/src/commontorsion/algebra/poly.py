"""Dense univariate polynomials over the fields in :mod:`.fields`.

Coefficients are stored raw, ascending, with leading zeros stripped.  Over
prime fields the kernels work on plain ``int`` lists; large products use
Kronecker substitution so that multiplication runs inside the big-integer
multiplier.
"""

from __future__ import annotations

import random
import warnings
from fractions import Fraction

import gmpy2

from ..errors import CharacteristicHazard, DomainMismatch, UnsupportedDomain
from .fields import QQ, Elem, Field, PrimeField

NEG_INF = float("-inf")

_KRONECKER_MIN = 24


# ----------------------------------------------------------------------------
# F_p kernels on int lists (ascending, stripped)
# ----------------------------------------------------------------------------


def _strip(c):
    while c and not c[-1]:
        c.pop()
    return c


def _pack(a, w):
    return gmpy2.mpz(int.from_bytes(b"".join(x.to_bytes(w, "little") for x in a), "little"))


def _unpack(n, w, count, p):
    raw = int(n).to_bytes(w * count, "little")
    fb = int.from_bytes
    return [fb(raw[i : i + w], "little") % p for i in range(0, w * count, w)]


def fp_mul(a, b, p):
    if not a or not b:
        return []
    la, lb = len(a), len(b)
    if min(la, lb) < _KRONECKER_MIN:
        if la < lb:
            a, b, la, lb = b, a, lb, la
        out = [0] * (la + lb - 1)
        for j, y in enumerate(b):
            if y:
                for i, x in enumerate(a):
                    out[i + j] += x * y
        return _strip([c % p for c in out])
    bits = 2 * p.bit_length() + min(la, lb).bit_length() + 1
    w = (bits + 7) // 8
    A = _pack(a, w)
    B = A if a is b else _pack(b, w)
    return _strip(_unpack(A * B, w, la + lb - 1, p))


def fp_sqr(a, p):
    return fp_mul(a, a, p)


def fp_add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] = (out[i] + y) % p
    return _strip(out)


def fp_sub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, y in enumerate(b):
        out[i] = (out[i] - y) % p
    return _strip(out)


def fp_scale(a, c, p):
    c %= p
    if not c:
        return []
    return [x * c % p for x in a]


def fp_divmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], list(a)
    r = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * (len(a) - db)
    if db == 0:
        return [x * inv % p for x in a], []
    bl = b[:db]
    for i in range(len(a) - 1 - db, -1, -1):
        c = r[i + db] * inv % p
        q[i] = c
        if c:
            seg = r[i : i + db]
            r[i : i + db] = [(x - c * y) % p for x, y in zip(seg, bl)]
    return _strip(q), _strip(r[:db])


def fp_rem(a, b, p):
    return fp_divmod(a, b, p)[1]


def fp_monic(a, p):
    if not a or a[-1] == 1:
        return list(a)
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def fp_gcd(a, b, p):
    """Monic gcd by the Euclidean algorithm (remainders kept monic)."""
    a, b = fp_monic(_strip(list(a)), p), fp_monic(_strip(list(b)), p)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = a
        db = len(b) - 1
        bl = b[:db]
        # b is monic: plain elimination
        r = list(r)
        for i in range(len(r) - 1 - db, -1, -1):
            c = r[i + db]
            if c:
                seg = r[i : i + db]
                r[i : i + db] = [(x - c * y) % p for x, y in zip(seg, bl)]
        r = _strip(r[:db])
        a, b = b, fp_monic(r, p)
    return a


def fp_eval(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def fp_derivative(a, p):
    return _strip([i * a[i] % p for i in range(1, len(a))])


def _fp_inv_series(a, n, p):
    """Power-series inverse of ``a`` (a[0] != 0) modulo x^n by Newton iteration."""
    g = [pow(a[0], -1, p)]
    k = 1
    while k < n:
        k = min(2 * k, n)
        # g <- g * (2 - a*g) mod x^k
        ag = fp_mul(a[:k], g, p)[:k]
        ag = [(-x) % p for x in ag] + [0] * (k - len(ag))
        ag[0] = (ag[0] + 2) % p
        g = fp_mul(g, ag, p)[:k]
    return _strip(g)


class _FastReducer:
    """Remainder modulo a fixed ``m`` using a precomputed reversed inverse."""

    def __init__(self, m, p):
        self.m, self.p = m, p
        self.d = len(m) - 1
        rev = m[::-1]
        self.inv = _fp_inv_series(rev, max(self.d, 1), p)

    def rem(self, a):
        d, p = self.d, self.p
        n = len(a) - d  # quotient length
        if n <= 0:
            return list(a)
        if d < _KRONECKER_MIN or n > len(self.inv):
            return fp_rem(a, self.m, p)
        q_rev = fp_mul(a[::-1][:n], self.inv[:n], p)[:n]
        q_rev += [0] * (n - len(q_rev))
        q = _strip(q_rev[::-1])
        return fp_sub(a, fp_mul(q, self.m, p), p)


def fp_powmod(base, e, m, p):
    red = _FastReducer(m, p)
    result = [1]
    b = red.rem(list(base))
    while e:
        if e & 1:
            result = red.rem(fp_mul(result, b, p))
        e >>= 1
        if e:
            b = red.rem(fp_sqr(b, p))
    return result


def fp_resultant(a, b, p, da=None, db=None):
    """Res_{da,db}(a, b) over F_p with formal degrees (defaults: actual)."""
    ra, rb = len(a) - 1, len(b) - 1
    da = ra if da is None else da
    db = rb if db is None else db
    if ra < 0 or rb < 0:
        return 0
    extra = 1
    if ra < da and rb < db:
        return 0
    if rb < db:
        extra = pow(a[-1], db - rb, p)
    elif ra < da:
        k = da - ra
        extra = pow(b[-1], k, p) * (-1 if (k * db) & 1 else 1) % p
    # Euclidean resultant on actual degrees
    res = 1
    f, g = list(a), list(b)
    m, n = ra, rb
    while True:
        if n == 0:
            res = res * pow(g[0], m, p) % p
            break
        if m < n:
            if (m * n) & 1:
                res = -res % p
            f, g, m, n = g, f, n, m
            continue
        r = fp_rem(f, g, p)
        if not r:
            return 0
        k = len(r) - 1
        # Res(f, g) = (-1)^{mn} lc(g)^{m-k} Res(g, r)
        if (m * n) & 1:
            res = -res % p
        res = res * pow(g[-1], m - k, p) % p
        f, g, m, n = g, r, n, k
    return res * extra % p


# ----------------------------------------------------------------------------
# generic kernels over any Field (raw interface)
# ----------------------------------------------------------------------------


def _g_strip(K, c):
    while c and K.is_zero(c[-1]):
        c.pop()
    return c


def _g_mul(K, a, b):
    if not a or not b:
        return []
    out = [K.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if K.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = K.add(out[i + j], K.mul(x, y))
    return _g_strip(K, out)


def _g_divmod(K, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], list(a)
    r = list(a)
    inv = K.inv(b[-1])
    q = [K.zero] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = K.mul(r[i + db], inv)
        q[i] = c
        if not K.is_zero(c):
            for j in range(db):
                r[i + j] = K.sub(r[i + j], K.mul(c, b[j]))
    return _g_strip(K, q), _g_strip(K, r[:db])


def _g_monic(K, a):
    if not a:
        return []
    inv = K.inv(a[-1])
    return [K.mul(x, inv) for x in a]


# ----------------------------------------------------------------------------
# Poly
# ----------------------------------------------------------------------------


class Poly:
    """Immutable dense polynomial ``sum c[i] x^i`` over a field ``K``."""

    __slots__ = ("K", "c")

    def __init__(self, K: Field, coeffs=(), raw: bool = False):
        self.K = K
        if raw:
            c = list(coeffs)
        else:
            c = [K.convert(x) for x in coeffs]
        if isinstance(K, PrimeField):
            _strip(c)
        else:
            _g_strip(K, c)
        self.c = c

    # -- constructors ------------------------------------------------------
    @classmethod
    def x(cls, K):
        return cls(K, [K.zero, K.one], raw=True)

    @classmethod
    def const(cls, K, v):
        return cls(K, [v])

    @classmethod
    def from_roots(cls, K, roots):
        out = cls(K, [K.one], raw=True)
        for r in roots:
            out = out * cls(K, [K.neg(K.convert(r)), K.one], raw=True)
        return out

    # -- basic data --------------------------------------------------------
    @property
    def deg(self):
        return len(self.c) - 1 if self.c else NEG_INF

    @property
    def degree(self):
        return self.deg

    def is_zero(self):
        return not self.c

    @property
    def lc(self) -> Elem:
        return Elem(self.K, self.c[-1] if self.c else self.K.zero)

    def __getitem__(self, i) -> Elem:
        if 0 <= i < len(self.c):
            return Elem(self.K, self.c[i])
        return Elem(self.K, self.K.zero)

    def coeffs(self):
        return [Elem(self.K, x) for x in self.c]

    def __len__(self):
        return len(self.c)

    def __iter__(self):
        return iter(self.coeffs())

    def _check(self, other):
        if self.K != other.K:
            raise DomainMismatch(f"{self.K!r} vs {other.K!r}")

    def _lift(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly(self.K, [other])

    @property
    def _fp(self):
        return isinstance(self.K, PrimeField)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        K = self.K
        if self._fp:
            return Poly(K, fp_add(self.c, other.c, K.p), raw=True)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = K.add(out[i], y)
        return Poly(K, out, raw=True)

    __radd__ = __add__

    def __neg__(self):
        K = self.K
        return Poly(K, [K.neg(x) for x in self.c], raw=True)

    def __sub__(self, other):
        other = self._lift(other)
        if self._fp:
            return Poly(self.K, fp_sub(self.c, other.c, self.K.p), raw=True)
        return self + (-other)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        K = self.K
        if not isinstance(other, Poly):
            c = K.convert(other)
            if self._fp:
                return Poly(K, fp_scale(self.c, c, K.p), raw=True)
            return Poly(K, [K.mul(x, c) for x in self.c], raw=True)
        self._check(other)
        if self._fp:
            return Poly(K, fp_mul(self.c, other.c, K.p), raw=True)
        return Poly(K, _g_mul(K, self.c, other.c), raw=True)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative polynomial power")
        out = Poly(self.K, [self.K.one], raw=True)
        b = self
        while e:
            if e & 1:
                out = out * b
            e >>= 1
            if e:
                b = b * b
        return out

    def __divmod__(self, other):
        other = self._lift(other)
        K = self.K
        if self._fp:
            q, r = fp_divmod(self.c, other.c, K.p)
        else:
            q, r = _g_divmod(K, self.c, other.c)
        return Poly(K, q, raw=True), Poly(K, r, raw=True)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def __truediv__(self, scalar):
        if isinstance(scalar, Poly):
            return self.exact_div(scalar)
        return self * Elem(self.K, self.K.inv(self.K.convert(scalar)))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.K == other.K and self.c == other.c
        try:
            return self.c == self._lift(other).c
        except (TypeError, ValueError, DomainMismatch):
            return NotImplemented

    def __hash__(self):
        return hash((self.K, tuple(self.c)))

    def __bool__(self):
        return bool(self.c)

    # -- evaluation / transformations ----------------------------------------
    def __call__(self, x):
        K = self.K
        if isinstance(x, Poly):
            acc = Poly(K, [], raw=True)
            for c in reversed(self.c):
                acc = acc * x + Poly(K, [c], raw=True)
            return acc
        xv = x.v if isinstance(x, Elem) and x.K == K else K.convert(x)
        if self._fp:
            return Elem(K, fp_eval(self.c, xv, K.p))
        acc = K.zero
        for c in reversed(self.c):
            acc = K.add(K.mul(acc, xv), c)
        return Elem(K, acc)

    def monic(self):
        if not self.c:
            return self
        if self._fp:
            return Poly(self.K, fp_monic(self.c, self.K.p), raw=True)
        return Poly(self.K, _g_monic(self.K, self.c), raw=True)

    def derivative(self):
        K = self.K
        if self._fp:
            return Poly(K, fp_derivative(self.c, K.p), raw=True)
        return Poly(K, [K.mul(K.from_int(i), self.c[i]) for i in range(1, len(self.c))], raw=True)

    def reverse(self, n=None):
        """x^n f(1/x) with n defaulting to deg f."""
        n = len(self.c) - 1 if n is None else n
        c = list(self.c) + [self.K.zero] * (n + 1 - len(self.c))
        if len(c) > n + 1:
            raise ValueError("reverse length below degree")
        return Poly(self.K, c[::-1], raw=True)

    def shift(self, k: int):
        """Multiply by x^k."""
        if not self.c:
            return self
        return Poly(self.K, [self.K.zero] * k + list(self.c), raw=True)

    def compose_linear(self, alpha, beta):
        """f(alpha*x + beta)."""
        K = self.K
        al, be = K.convert(alpha), K.convert(beta)
        if not self.c:
            return self
        if self._fp:
            return Poly(K, _fp_compose_linear(self.c, al, be, K.p), raw=True)
        lin = Poly(K, [be, al], raw=True)
        return self(lin)

    def moebius_pullback(self, M, D=None):
        """(c x + d)^D f((a x + b)/(c x + d)) for M = (a, b, c, d); D >= deg f.

        Roots transform as x -> M^{-1}(root); the degree drops exactly by the
        multiplicity of ``a/c`` as a root, the missing roots sitting at infinity.
        """
        K = self.K
        a, b, c, d = (K.convert(v) for v in M)
        n = len(self.c) - 1
        D = n if D is None else D
        if not self.c:
            return self
        if D < n:
            raise ValueError("homogenising degree below polynomial degree")
        if K.is_zero(c):
            # d^D f((a/d) x + b/d)
            inv_d = K.inv(d)
            g = self.compose_linear(K.mul(a, inv_d), K.mul(b, inv_d))
            return g * Elem(K, K.pow(d, D))
        det = K.sub(K.mul(a, d), K.mul(b, c))
        inv_c = K.inv(c)
        # with Y = c x + d: f((a Y - det)/(c Y)) = g(1/Y), g(u) = f(a/c - (det/c) u)
        g = self.compose_linear(K.neg(K.mul(det, inv_c)), K.mul(a, inv_c))
        h = g.reverse(n).shift(D - n)  # Y^D g(1/Y)
        return h.compose_linear(c, d)

    def to_ints(self):
        if not self._fp:
            raise UnsupportedDomain("to_ints needs a prime field")
        return list(self.c)

    def map_coeffs(self, K2, fn):
        return Poly(K2, [fn(x) for x in self.c], raw=True)

    def __repr__(self):
        return format_coeffs([Elem(self.K, x) for x in self.c], "x") + f" over {self.K!r}"

    def __str__(self):
        return format_coeffs([Elem(self.K, x) for x in self.c], "x")


def _fp_compose_linear(a, al, be, p):
    """f(al*x + be) over F_p by divide and conquer on (al*x+be)^(2^k)."""
    n = len(a)
    if n <= 64:
        acc = []
        lin = [be % p, al % p]
        for c in reversed(a):
            acc = fp_add(fp_mul(acc, lin, p), [c] if c else [], p)
        return acc
    powers = [[be % p, al % p]]
    while (1 << len(powers)) < n:
        powers.append(fp_sqr(powers[-1], p))

    def rec(lo, hi, level):
        # coefficients a[lo:hi], hi - lo <= 2^level
        if hi - lo <= 64:
            acc = []
            lin = powers[0]
            for c in reversed(a[lo:hi]):
                acc = fp_add(fp_mul(acc, lin, p), [c] if c else [], p)
            return acc
        half = 1 << (level - 1)
        mid = min(lo + half, hi)
        low = rec(lo, mid, level - 1)
        if mid >= hi:
            return low
        high = rec(mid, hi, level - 1)
        return fp_add(low, fp_mul(high, powers[level - 1], p), p)

    level = max(1, (n - 1).bit_length())
    return _strip(rec(0, n, level))


# ----------------------------------------------------------------------------
# gcd, resultant, squarefree, roots
# ----------------------------------------------------------------------------


def _require_field(f):
    if not isinstance(f.K, Field):
        raise UnsupportedDomain(f"{f.K!r} is not a field")


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) = 0."""
    if f.K != g.K:
        raise DomainMismatch(f"{f.K!r} vs {g.K!r}")
    _require_field(f)
    K = f.K
    if isinstance(K, PrimeField):
        return Poly(K, fp_gcd(f.c, g.c, K.p), raw=True)
    a, b = _g_monic(K, list(f.c)), _g_monic(K, list(g.c))
    while b:
        _, r = _g_divmod(K, a, b)
        a, b = b, _g_monic(K, r)
    return Poly(K, a, raw=True)


def poly_xgcd(f: Poly, g: Poly):
    """(d, s, t) with s f + t g = d monic."""
    K = f.K
    r0, r1 = f, g
    s0, s1 = Poly(K, [K.one], raw=True), Poly(K, [], raw=True)
    t0, t1 = s1, s0
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0:
        return r0, s0, t0
    inv = Elem(K, K.inv(r0.c[-1]))
    return r0 * inv, s0 * inv, t0 * inv


def resultant(f: Poly, g: Poly, deg_f=None, deg_g=None) -> Elem:
    """Res_x(f, g), optionally with formal degrees (Sylvester sizes).

    Over fields the Euclidean remainder sequence is used.  A zero input
    gives 0.
    """
    if f.K != g.K:
        raise DomainMismatch(f"{f.K!r} vs {g.K!r}")
    K = f.K
    if f.is_zero() or g.is_zero():
        warnings.warn("resultant with a zero polynomial taken as 0", RuntimeWarning, stacklevel=2)
        return Elem(K, K.zero)
    if isinstance(K, PrimeField):
        return Elem(K, fp_resultant(f.c, g.c, K.p, deg_f, deg_g))
    ra, rb = f.deg, g.deg
    da = ra if deg_f is None else deg_f
    db = rb if deg_g is None else deg_g
    extra = K.one
    if ra < da and rb < db:
        return Elem(K, K.zero)
    if rb < db:
        extra = K.pow(f.c[-1], db - rb)
    elif ra < da:
        k = da - ra
        extra = K.pow(g.c[-1], k)
        if (k * db) & 1:
            extra = K.neg(extra)
    res = K.one
    a, b = list(f.c), list(g.c)
    m, n = ra, rb
    while True:
        if n == 0:
            res = K.mul(res, K.pow(b[0], m))
            break
        if m < n:
            if (m * n) & 1:
                res = K.neg(res)
            a, b, m, n = b, a, n, m
            continue
        _, r = _g_divmod(K, a, b)
        if not r:
            return Elem(K, K.zero)
        k = len(r) - 1
        if (m * n) & 1:
            res = K.neg(res)
        res = K.mul(res, K.pow(b[-1], m - k))
        a, b, m, n = b, r, n, k
    return Elem(K, K.mul(res, extra))


def sylvester_resultant(f: Poly, g: Poly, deg_f=None, deg_g=None) -> Elem:
    """Resultant as the Sylvester determinant (slow; used as an oracle)."""
    K = f.K
    m = f.deg if deg_f is None else deg_f
    n = g.deg if deg_g is None else deg_g
    if m <= 0 and n <= 0:
        return Elem(K, K.one)
    size = m + n
    fc = [f[i].v for i in range(m + 1)][::-1]
    gc = [g[i].v for i in range(n + 1)][::-1]
    rows = []
    for i in range(n):
        rows.append([K.zero] * i + fc + [K.zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([K.zero] * i + gc + [K.zero] * (size - n - 1 - i))
    return Elem(K, _det(K, rows))


def _det(K, rows):
    rows = [list(r) for r in rows]
    n = len(rows)
    det = K.one
    for col in range(n):
        piv = next((r for r in range(col, n) if not K.is_zero(rows[r][col])), None)
        if piv is None:
            return K.zero
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = K.neg(det)
        pv = rows[col][col]
        det = K.mul(det, pv)
        inv = K.inv(pv)
        for r in range(col + 1, n):
            fct = K.mul(rows[r][col], inv)
            if not K.is_zero(fct):
                rows[r] = [K.sub(x, K.mul(fct, y)) for x, y in zip(rows[r], rows[col])]
    return det


def squarefree_part(f: Poly) -> Poly:
    """Monic product of the distinct irreducible factors of f, f / gcd(f, f')."""
    if f.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    if f.K.char and f.K.char <= f.deg:
        raise CharacteristicHazard(
            f"characteristic {f.K.char} <= degree {f.deg}; choose a larger prime"
        )
    g = poly_gcd(f, f.derivative())
    return (f // g).monic()


def count_distinct_roots(f: Poly, scope: str = "closure") -> int:
    """Number of distinct roots in the algebraic closure or in the base field."""
    if scope == "closure":
        sf = squarefree_part(f)
        return max(sf.deg, 0)
    if scope != "base-field":
        raise ValueError(f"unknown scope {scope!r}")
    K = f.K
    if not K.char:
        raise UnsupportedDomain("base-field root counts need a finite field")
    q = K.order
    fm = f.monic()
    if fm.deg <= 0:
        return 0
    xq = powmod(Poly.x(K), q, fm)
    return max(poly_gcd(fm, xq - Poly.x(K)).deg, 0)


def powmod(base: Poly, e: int, m: Poly) -> Poly:
    K = m.K
    if isinstance(K, PrimeField):
        return Poly(K, fp_powmod(base.c, e, m.c, K.p), raw=True)
    out = Poly(K, [K.one], raw=True) % m
    b = base % m
    while e:
        if e & 1:
            out = (out * b) % m
        e >>= 1
        if e:
            b = (b * b) % m
    return out


def is_irreducible(f: Poly) -> bool:
    """Rabin's test over a prime field."""
    K = f.K
    if not isinstance(K, PrimeField):
        raise UnsupportedDomain("irreducibility test implemented over prime fields")
    n = f.deg
    if n <= 0:
        return False
    if n == 1:
        return True
    fm = f.monic()
    x = Poly.x(K)
    p = K.p
    primes = [q for q in range(2, n + 1) if n % q == 0 and all(q % r for r in range(2, q))]
    for q in primes:
        h = powmod(x, p ** (n // q), fm)
        if poly_gcd(fm, h - x).deg > 0:
            return False
    return (powmod(x, p**n, fm) - x).is_zero()


def _rational_roots(f: Poly) -> list:
    import sympy

    x = sympy.Symbol("x")
    cs = [sympy.Rational(c.numerator, c.denominator) for c in reversed(f.c)]
    rts = sympy.Poly(cs, x, domain="QQ").ground_roots()
    return [QQ(v) for v in sorted(Fraction(int(r.p), int(r.q)) for r in rts)]


def roots(f: Poly, rng: random.Random | None = None) -> list:
    """Distinct roots of f lying in its coefficient field (finite fields or QQ), sorted."""
    K = f.K
    if f.is_zero():
        raise ValueError("roots of the zero polynomial")
    if K is QQ:
        return _rational_roots(f)
    if not K.char:
        raise UnsupportedDomain("root finding implemented over finite fields and QQ")
    rng = rng or random.Random(0x5EED)
    q = K.order
    fm = f.monic()
    if fm.deg < 1:
        return []
    x = Poly.x(K)
    g = poly_gcd(fm, powmod(x, q, fm) - x)
    out = []
    _split(g, rng, out)
    key = (lambda e: e.v) if isinstance(K, PrimeField) else (lambda e: tuple(e.v))
    return sorted(out, key=key)


def _split(g: Poly, rng, out):
    K = g.K
    if g.deg <= 0:
        return
    if g.deg == 1:
        out.append(-g[0] / g[1])
        return
    q = K.order
    if q % 2 == 0:
        raise UnsupportedDomain("characteristic 2 root splitting not supported")
    while True:
        a = Elem(K, K.random(rng))
        h = powmod(Poly.x(K) + a, (q - 1) // 2, g) - Poly(K, [K.one], raw=True)
        d = poly_gcd(g, h)
        if 0 < d.deg < g.deg:
            _split(d, rng, out)
            _split(g // d, rng, out)
            return


def format_coeffs(coeffs, var="x"):
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if (not c) if isinstance(c, Elem) else c == 0:
            continue
        s = str(c)
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        neg = s.startswith("-") and not any(ch in s[1:] for ch in "+- ")
        if neg:
            s = s[1:]
        if mono:
            if s == "1":
                s = mono
            else:
                if "+" in s or " " in s or "-" in s:
                    s = f"({s})"
                s = f"{s}*{mono}"
        elif " " in s and len(coeffs) > 1:
            s = f"({s})"
        terms.append(("-", s) if neg else ("+", s))
    if not terms:
        return "0"
    sign, first = terms[0]
    out = ("-" if sign == "-" else "") + first
    for sign, s in terms[1:]:
        out += f" {sign} {s}"
    return out


def QQpoly(coeffs) -> Poly:
    return Poly(QQ, [Fraction(c) for c in coeffs])
