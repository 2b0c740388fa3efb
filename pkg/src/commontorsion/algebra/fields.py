"""Coefficient fields.

Every field object works on *raw* values (``int`` for F_p, ``Fraction`` for
Q, tuples for extension and number fields) through methods such as
``K.add(a, b)``.  Polynomial kernels use the raw interface directly.  Scalar
code wraps raw values in :class:`Elem`, which provides the usual operators.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import isqrt

from sympy.ntheory import isprime, sqrt_mod

from ..errors import DomainMismatch, FieldExtensionRequired, UnsupportedDomain


class Field:
    char = 0
    degree = 1

    # raw arithmetic, overridden where needed
    def neg(self, a):
        return self.sub(self.zero, a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        r = self.one
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def is_zero(self, a):
        return a == self.zero

    def eq(self, a, b):
        return a == b

    def __call__(self, v) -> "Elem":
        return Elem(self, self.convert(v))

    def elems(self, values):
        return [self(v) for v in values]

    @property
    def is_finite(self):
        return self.char != 0

    @property
    def order(self):
        return self.char ** self.degree if self.char else None


class RationalField(Field):
    """The rationals, raw values are ``fractions.Fraction``."""

    zero = Fraction(0)
    one = Fraction(1)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def convert(self, v):
        if isinstance(v, Elem):
            if v.K != self:
                raise DomainMismatch(f"cannot coerce {v.K!r} element into QQ")
            return v.v
        if isinstance(v, str):
            return Fraction(v.strip())
        return Fraction(v)

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in QQ")
        return 1 / a

    def div(self, a, b):
        return a / b

    def sqrt(self, a):
        if a < 0:
            raise FieldExtensionRequired(f"{a} is not a square in QQ", [-a, 0, 1])
        n, d = a.numerator, a.denominator
        rn, rd = isqrt(n), isqrt(d)
        if rn * rn != n or rd * rd != d:
            raise FieldExtensionRequired(f"{a} is not a square in QQ", [-a, 0, 1])
        return Fraction(rn, rd)

    def to_str(self, a):
        return str(a)


QQ = RationalField()


class PrimeField(Field):
    """F_p with raw values canonical in ``[0, p)``."""

    def __init__(self, p: int, check: bool = True):
        if check and not isprime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.zero = 0
        self.one = 1

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def convert(self, v):
        if isinstance(v, Elem):
            if v.K == self:
                return v.v
            if isinstance(v.K, RationalField):
                v = v.v
            else:
                raise DomainMismatch(f"cannot coerce {v.K!r} element into {self!r}")
        if isinstance(v, int):
            return v % self.p
        if isinstance(v, str):
            v = Fraction(v.strip())
        if isinstance(v, Fraction):
            if v.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator of {v} vanishes mod {self.p}")
            return v.numerator * pow(v.denominator, -1, self.p) % self.p
        raise TypeError(f"cannot convert {type(v).__name__} into {self!r}")

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"inverse of 0 in GF({self.p})")
        return pow(a, -1, self.p)

    def pow(self, a, e):
        return pow(a, e, self.p)

    def is_square(self, a):
        return a == 0 or self.p == 2 or pow(a, (self.p - 1) // 2, self.p) == 1

    def sqrt(self, a):
        a %= self.p
        if a == 0:
            return 0
        if not self.is_square(a):
            raise FieldExtensionRequired(
                f"{a} is not a square mod {self.p}", [-a % self.p, 0, 1]
            )
        r = sqrt_mod(a, self.p)
        return min(r, self.p - r)

    def random(self, rng: random.Random):
        return rng.randrange(self.p)

    def to_str(self, a):
        return str(a)


class ExtensionField(Field):
    """F_p[z]/(g) for a monic irreducible g of degree k >= 2."""

    def __init__(self, p: int, modulus, name: str = "z"):
        self.base = PrimeField(p)
        g = [c % p for c in modulus]
        while g and g[-1] == 0:
            g.pop()
        if len(g) < 3:
            raise ValueError("extension modulus must have degree >= 2")
        if g[-1] != 1:
            inv = pow(g[-1], -1, p)
            g = [c * inv % p for c in g]
        self.p = p
        self.char = p
        self.modulus = tuple(g)
        self.degree = len(g) - 1
        self.name = name
        self.zero = (0,) * self.degree
        self.one = (1,) + (0,) * (self.degree - 1)
        from .poly import Poly, is_irreducible

        if not is_irreducible(Poly(self.base, g)):
            raise ValueError(f"modulus {g} is reducible over GF({p})")

    def __repr__(self):
        return f"GF({self.p}^{self.degree})[{self.modulus}]"

    def __eq__(self, other):
        return (
            isinstance(other, ExtensionField)
            and other.p == self.p
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("GFext", self.p, self.modulus))

    def gen(self):
        return Elem(self, (0, 1) + (0,) * (self.degree - 2))

    def convert(self, v):
        if isinstance(v, Elem):
            if v.K == self:
                return v.v
            if v.K == self.base:
                v = v.v
            elif isinstance(v.K, RationalField):
                v = v.v
            else:
                raise DomainMismatch(f"cannot coerce {v.K!r} element into {self!r}")
        if isinstance(v, (tuple, list)):
            return self._reduce(list(v))
        return (self.base.convert(v),) + (0,) * (self.degree - 1)

    def from_int(self, n):
        return (n % self.p,) + (0,) * (self.degree - 1)

    def _reduce(self, c):
        p, g, k = self.p, self.modulus, self.degree
        c = [x % p for x in c]
        for i in range(len(c) - 1, k - 1, -1):
            q = c[i]
            if q:
                for j in range(k + 1):
                    c[i - k + j] = (c[i - k + j] - q * g[j]) % p
        c = c[:k] + [0] * (k - len(c))
        return tuple(c)

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a, b):
        k = self.degree
        c = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    c[i + j] += x * y
        return self._reduce(c)

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of 0 in extension field")
        s = _list_inverse_mod(list(a), list(self.modulus), self.base)
        return self._reduce(s)

    def is_square(self, a):
        return not any(a) or self.pow(a, (self.order - 1) // 2) == self.one

    def sqrt(self, a):
        if not any(a):
            return a
        if not self.is_square(a):
            raise FieldExtensionRequired("not a square in extension field", None)
        from .poly import Poly, roots

        # roots of X^2 - a over this field
        r = roots(Poly(self, [self.neg(a), self.zero, self.one]))
        return r[0].v

    def random(self, rng: random.Random):
        return tuple(rng.randrange(self.p) for _ in range(self.degree))

    def to_str(self, a):
        return "[" + ",".join(map(str, a)) + "]"


class NumberField(Field):
    """Q[s]/(f) for a monic irreducible f over Q (irreducibility assumed).

    Raw values are tuples of ``Fraction`` of length ``deg f``.
    """

    def __init__(self, modulus, name: str = "s"):
        f = [Fraction(c) for c in modulus]
        while f and f[-1] == 0:
            f.pop()
        if len(f) < 2:
            raise ValueError("number field modulus must have degree >= 1")
        if f[-1] != 1:
            f = [c / f[-1] for c in f]
        self.modulus = tuple(f)
        self.degree_over_q = len(f) - 1
        self.name = name
        n = self.degree_over_q
        self.zero = (Fraction(0),) * n
        self.one = (Fraction(1),) + (Fraction(0),) * (n - 1)

    def __repr__(self):
        return f"QQ[{self.name}]/({self.modulus_str()})"

    def modulus_str(self):
        from .poly import format_coeffs

        return format_coeffs(self.modulus, self.name)

    def __eq__(self, other):
        return isinstance(other, NumberField) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("NF", self.modulus))

    def gen(self):
        if self.degree_over_q == 1:
            return Elem(self, (-self.modulus[0],))
        return Elem(self, (Fraction(0), Fraction(1)) + self.zero[2:])

    def convert(self, v):
        if isinstance(v, Elem):
            if v.K == self:
                return v.v
            if isinstance(v.K, RationalField):
                v = v.v
            else:
                raise DomainMismatch(f"cannot coerce {v.K!r} element into {self!r}")
        if isinstance(v, (tuple, list)):
            return self._reduce([Fraction(c) for c in v])
        return (Fraction(v),) + self.zero[1:]

    def from_int(self, n):
        return (Fraction(n),) + self.zero[1:]

    def _reduce(self, c):
        f, k = self.modulus, self.degree_over_q
        c = list(c)
        for i in range(len(c) - 1, k - 1, -1):
            q = c[i]
            if q:
                for j in range(k + 1):
                    c[i - k + j] -= q * f[j]
        c = c[:k] + [Fraction(0)] * (k - len(c))
        return tuple(c)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        k = self.degree_over_q
        c = [Fraction(0)] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    c[i + j] += x * y
        return self._reduce(c)

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of 0 in number field")
        return self._reduce(_list_inverse_mod(list(a), list(self.modulus), QQ))

    def sqrt(self, a):
        """A square root in the field; the one whose leading nonzero coefficient is positive."""
        if not any(a[1:]) and a[0] >= 0:
            try:
                return self.convert(QQ.sqrt(a[0]))
            except FieldExtensionRequired:
                pass
        import sympy

        K = self._sympy_field()
        x = sympy.Symbol("_x")
        rhs = K([sympy.QQ(c.numerator, c.denominator) for c in reversed(a)])
        poly = sympy.Poly.from_list([K.one, K.zero, -rhs], x, domain=K)
        for fac, _ in poly.factor_list()[1]:
            if fac.degree() == 1:
                lead, const = fac.rep.to_list()
                rep = (-const / lead).to_list()
                c = [Fraction(int(q.numerator), int(q.denominator)) for q in reversed(rep)]
                root = self._reduce(c)
                lead_c = next((q for q in reversed(root) if q), Fraction(0))
                return root if lead_c >= 0 else self.neg(root)
        raise FieldExtensionRequired(f"{self.to_str(a)} is not a square in {self!r}", None)

    def _sympy_field(self):
        if getattr(self, "_symfield", None) is None:
            import sympy

            t = sympy.Symbol(self.name)
            f = sympy.Poly(
                [sympy.Rational(c.numerator, c.denominator) for c in reversed(self.modulus)], t
            )
            self._symfield = sympy.QQ.algebraic_field(sympy.CRootOf(f, 0))
        return self._symfield

    def reduction(self, K: PrimeField, root: int):
        """Ring map to ``K`` sending the generator to ``root`` (a root of f mod p)."""
        p = K.p
        f_at = 0
        for c in reversed(self.modulus):
            f_at = (f_at * root + K.convert(c)) % p
        if f_at:
            raise ValueError(f"{root} is not a root of the defining polynomial mod {p}")

        def red(a):
            acc = 0
            for c in reversed(a):
                acc = (acc * root + K.convert(c)) % p
            return acc

        return red

    def to_str(self, a):
        from .poly import format_coeffs

        return format_coeffs(a, self.name)


def _list_inverse_mod(a, g, K):
    """Inverse of a modulo g over field K; coefficient lists ascending."""

    def trim(x):
        while x and K.is_zero(x[-1]):
            x.pop()
        return x

    r0, r1 = trim(list(g)), trim(list(a))
    s0, s1 = [], [K.one]
    while len(r1) > 1:
        inv_lc = K.inv(r1[-1])
        q = [K.zero] * (len(r0) - len(r1) + 1)
        r = list(r0)
        for i in range(len(r) - len(r1), -1, -1):
            c = K.mul(r[i + len(r1) - 1], inv_lc)
            q[i] = c
            for j, y in enumerate(r1):
                r[i + j] = K.sub(r[i + j], K.mul(c, y))
        r = trim(r[: len(r1) - 1])
        # s = s0 - q*s1
        prod = [K.zero] * (len(q) + len(s1))
        for i, x in enumerate(q):
            for j, y in enumerate(s1):
                prod[i + j] = K.add(prod[i + j], K.mul(x, y))
        n = max(len(s0), len(prod))
        s = [
            K.sub(s0[i] if i < len(s0) else K.zero, prod[i] if i < len(prod) else K.zero)
            for i in range(n)
        ]
        r0, r1, s0, s1 = r1, r, s1, trim(s)
    if not r1:
        raise ZeroDivisionError("element is not invertible (modulus reducible?)")
    c = K.inv(r1[0])
    return [K.mul(c, x) for x in s1]


class Elem:
    """A field element with operator overloading."""

    __slots__ = ("K", "v")

    def __init__(self, K: Field, v):
        self.K = K
        self.v = v

    def _coerce(self, other):
        if isinstance(other, Elem):
            if other.K is self.K or other.K == self.K:
                return other.v
            return self.K.convert(other)
        return self.K.convert(other)

    def __add__(self, o):
        return Elem(self.K, self.K.add(self.v, self._coerce(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return Elem(self.K, self.K.sub(self.v, self._coerce(o)))

    def __rsub__(self, o):
        return Elem(self.K, self.K.sub(self._coerce(o), self.v))

    def __mul__(self, o):
        return Elem(self.K, self.K.mul(self.v, self._coerce(o)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return Elem(self.K, self.K.div(self.v, self._coerce(o)))

    def __rtruediv__(self, o):
        return Elem(self.K, self.K.div(self._coerce(o), self.v))

    def __neg__(self):
        return Elem(self.K, self.K.neg(self.v))

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        return Elem(self.K, self.K.pow(self.v, e))

    def __eq__(self, o):
        if isinstance(o, Elem):
            if o.K != self.K:
                return False
            return self.K.eq(self.v, o.v)
        try:
            return self.K.eq(self.v, self.K.convert(o))
        except (TypeError, ValueError, ZeroDivisionError):
            return NotImplemented

    def __hash__(self):
        return hash((self.K, self.v))

    def __bool__(self):
        return not self.K.is_zero(self.v)

    def inverse(self):
        return Elem(self.K, self.K.inv(self.v))

    def sqrt(self):
        return Elem(self.K, self.K.sqrt(self.v))

    def is_square(self):
        if hasattr(self.K, "is_square"):
            return self.K.is_square(self.v)
        try:
            self.K.sqrt(self.v)
        except FieldExtensionRequired:
            return False
        return True

    def __int__(self):
        if isinstance(self.K, PrimeField):
            return self.v
        raise UnsupportedDomain(f"no integer value for {self.K!r} elements")

    def __repr__(self):
        return self.K.to_str(self.v)

    __str__ = __repr__


def GF(p: int, modulus=None, check: bool = True) -> Field:
    """Prime field, or an extension of it when ``modulus`` is given."""
    if modulus is None:
        return PrimeField(p, check=check)
    return ExtensionField(p, modulus)
