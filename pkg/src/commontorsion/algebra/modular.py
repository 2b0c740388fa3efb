"""Chinese remaindering, rational reconstruction and verification primes."""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd, isqrt
from typing import Callable, Iterable, Iterator

from sympy.ntheory import isprime, nextprime

from .fields import Elem


def crt_combine(residues: Iterable) -> tuple[int, int]:
    """Combine ``[(r_i, m_i), ...]`` into ``(r, prod m_i)`` with ``0 <= r < prod``.

    Residues may be ints or prime-field :class:`Elem` values (the modulus is
    then taken from the pair).  Raises ``ValueError`` naming the first pair of
    moduli that are not coprime.
    """
    items = []
    for r, m in residues:
        if isinstance(r, Elem):
            r = r.v
        if m < 1:
            raise ValueError(f"modulus must be positive, got {m}")
        items.append((int(r) % m, m))
    if not items:
        raise ValueError("no residues to combine")
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if gcd(items[i][1], items[j][1]) != 1:
                raise ValueError(
                    f"moduli {items[i][1]} and {items[j][1]} (positions {i}, {j}) are not coprime"
                )
    r, M = items[0]
    for ri, mi in items[1:]:
        # r + M*k = ri (mod mi)
        k = (ri - r) * pow(M, -1, mi) % mi
        r += M * k
        M *= mi
    return r % M, M


def rational_reconstruct(residue, modulus: int) -> Fraction | None:
    """Rational a/b = residue (mod modulus) with |a|, b <= sqrt(modulus/2).

    Returns ``None`` when no such fraction exists (failure status).
    """
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    if isinstance(residue, Elem):
        residue = residue.v
    u = int(residue) % modulus
    bound = isqrt(modulus // 2)
    r0, r1 = modulus, u
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    a, b = r1, t1
    if b == 0 or abs(b) > bound:
        return None
    if b < 0:
        a, b = -a, -b
    if gcd(b, modulus) != 1:
        return None
    if (a - b * u) % modulus:
        return None
    return Fraction(a, b)


def prime_stream(seed: int, lo_bits: int = 59, hi_bits: int = 62) -> Iterator[int]:
    """Deterministic pseudorandom primes in [2^lo_bits, 2^hi_bits)."""
    rng = random.Random(seed)
    lo, hi = 1 << lo_bits, 1 << hi_bits
    seen = set()
    while True:
        p = nextprime(rng.randrange(lo, hi))
        if p < hi and p not in seen:
            seen.add(p)
            yield p


def good_primes(
    count: int,
    seed: int,
    accept: Callable[[int], bool] | None = None,
    lo_bits: int = 59,
    hi_bits: int = 62,
    max_tries: int = 100000,
) -> list[int]:
    """The first ``count`` primes of the seeded stream passing ``accept``."""
    out = []
    tries = 0
    for p in prime_stream(seed, lo_bits, hi_bits):
        tries += 1
        if tries > max_tries:
            raise RuntimeError("prime search exhausted")
        if accept is None or accept(p):
            out.append(p)
            if len(out) == count:
                return out
    return out


def is_prime(n: int) -> bool:
    return isprime(n)


def reduction_map(K0, p: int):
    """Ring map from ``K0`` (QQ, a number field or F_p itself) to GF(p).

    Returns ``(Fp, fn, root)`` where ``fn`` sends :class:`Elem` values of
    ``K0`` to ``Fp`` and ``root`` is the image of the number-field generator
    (the least root of the defining polynomial mod p), or ``None`` when p is
    unusable: no root, repeated roots, or p divides a denominator.
    """
    from .fields import NumberField, PrimeField, RationalField
    from .poly import Poly, poly_gcd, roots

    if isinstance(K0, PrimeField):
        if K0.p != p:
            return None
        return K0, (lambda e: e), None
    Fp = PrimeField(p, check=False)
    if isinstance(K0, RationalField):
        return Fp, (lambda e: Fp(e.v)), None
    if isinstance(K0, NumberField):
        if any(c.denominator % p == 0 for c in K0.modulus):
            return None
        f = Poly(Fp, [Fp(c) for c in K0.modulus])
        if f.deg != len(K0.modulus) - 1 or poly_gcd(f, f.derivative()).deg > 0:
            return None
        rts = sorted(int(r) for r in roots(f))
        if not rts:
            return None
        red = K0.reduction(Fp, rts[0])
        return Fp, (lambda e: Elem(Fp, red(e.v))), rts[0]
    raise TypeError(f"no reduction from {K0!r}")


def ntt_primes(count: int, seed: int, two_adicity: int, bits: int = 30) -> list[int]:
    """Seeded distinct primes p = k 2^e + 1 in [2^(bits-1), 2^bits), e = two_adicity.

    Raises ``ValueError`` when the window holds fewer than ``count`` such primes.
    """
    if not 2 <= bits <= 31:
        raise ValueError("bits must lie in [2, 31] so products fit in 62 bits")
    step = 1 << two_adicity
    lo_k = -(-((1 << (bits - 1)) - 1) // step)
    hi_k = ((1 << bits) - 2) // step
    ks = list(range(max(lo_k, 1), hi_k + 1))
    random.Random(seed).shuffle(ks)
    out = []
    for k in ks:
        if isprime(k * step + 1):
            out.append(k * step + 1)
            if len(out) == count:
                return out
    raise ValueError(f"only {len(out)} primes of {bits} bits with 2^{two_adicity} | p - 1")
