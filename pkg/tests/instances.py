"""Random instance generators shared by the test modules."""

from __future__ import annotations

import random

from sympy import primerange

from commontorsion.algebra.fields import PrimeField
from commontorsion.covers import CoverPair, DoubleCover, ascend_pair, common_klein
from commontorsion.curves import INF, Cubic, EvenSextic, Mobius, SexticModel
from commontorsion.errors import PreconditionError
from commontorsion.genus2 import Genus2Curve

SMALL_PRIMES = list(primerange(5, 1000))


def random_mobius(K, rng: random.Random) -> Mobius:
    while True:
        a, b, c, d = (K(rng.randrange(K.p)) for _ in range(4))
        if a * d - b * c:
            return Mobius(a, b, c, d, K)


def distinct_nonzero(K, rng, k):
    vals = set()
    while len(vals) < k:
        vals.add(rng.randrange(1, K.p))
    out = [K(v) for v in vals]
    rng.shuffle(out)
    return out


def random_bielliptic(rng: random.Random, p: int | None = None):
    """Even sextic conjugated by a random Moebius map, with its involution."""
    p = p or rng.choice(SMALL_PRIMES)
    K = PrimeField(p)
    u, v, w = distinct_nonzero(K, rng, 3)
    C0 = EvenSextic(u, v, w)
    A = random_mobius(K, rng)
    f = A.pullback(C0.rhs(), 6)
    inv = A.inverse() @ Mobius(-1, 0, 0, 1, K) @ A
    return Genus2Curve(SexticModel(f), inv)


def _split(M: Mobius) -> bool:
    try:
        M.fixed_points()
    except ArithmeticError:
        return False
    return True


def random_involution_pair(rng: random.Random, p: int | None = None):
    """A pair over GF(p) with a common Klein involution, moved by a random Moebius map.

    Built by ascending a pair whose branch sets share 0 and oo.
    """
    for _ in range(200):
        q = p or rng.choice(SMALL_PRIMES)
        K = PrimeField(q)
        s1, t1, s2, t2 = distinct_nonzero(K, rng, 4)
        if not all(v.is_square() for v in (s1, t1, s2, t2)):
            continue
        try:
            c1 = DoubleCover(Cubic(K(0), s1, t1), s1, (K(0), s1, t1, INF))
            c2 = DoubleCover(Cubic(K(0), s2, t2), s2, (K(0), s2, t2, INF))
            up = ascend_pair(CoverPair(c1, c2), choice=(K(0), INF)).pair
            pair = up.transported(random_mobius(K, rng))
            alphas = [a for a in common_klein(pair) if not a.is_identity() and _split(a)]
        except (PreconditionError, ArithmeticError):
            continue
        return pair, alphas
    raise RuntimeError("no instance found")
