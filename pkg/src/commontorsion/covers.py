"""Pairs of elliptic double covers of P^1 and their common torsion x-values.

A :class:`DoubleCover` is an elliptic curve together with its x-map to P^1,
the group origin being one of the four branch points.  For a
:class:`CoverPair` the module computes the Klein groups, the invariant pair
``(a, b)``, the degree-2 descent along a common involution and its inverse,
and the order-bounded set of common torsion x-coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from sympy import divisors

from .algebra.fields import Field, NumberField, PrimeField, RationalField
from .algebra.modular import crt_combine, good_primes, rational_reconstruct, reduction_map
from .algebra.poly import Poly, poly_gcd
from .curves import (
    INF,
    CurveModel,
    Cubic,
    DivisionPolynomials,
    EvenQuartic,
    Mobius,
    QuarticModel,
    WeierstrassForm,
    XSet,
    is_inf,
    map_model,
    map_p1,
    p1_eq,
    p1_hom,
    to_short_weierstrass,
    torsion_xset,
)
from .errors import ExcludedCase, PreconditionError, PrimeInconsistency

ALLOWED_INVARIANTS = {(3, 1), (2, 1), (1, 1), (0, 1), (2, 2), (0, 2), (0, 4)}

CAVEAT = "only points whose order divides the bound N were examined"


# ----------------------------------------------------------------------------
# covers
# ----------------------------------------------------------------------------


def _p1_index(pts, v):
    for i, q in enumerate(pts):
        if p1_eq(q, v):
            return i
    return -1


@dataclass(frozen=True, eq=False)
class DoubleCover:
    """Elliptic curve ``model`` with x-map to P^1; ``origin`` is a branch value.

    ``branch`` lists the four branch values when they are known in the base
    field; otherwise it is ``None`` and operations that need individual
    branch values raise.
    """

    model: CurveModel
    origin: object
    branch: tuple | None = None

    def __post_init__(self):
        f = self.model.rhs()
        if self.model.genus != 1:
            raise PreconditionError("double covers need an elliptic model")
        self.model.check()
        if is_inf(self.origin):
            if f.deg != 3:
                raise PreconditionError("origin oo is not a branch value")
        elif f(self.origin):
            raise PreconditionError(f"origin {self.origin} is not a branch value")
        if self.branch is None:
            try:
                object.__setattr__(self, "branch", tuple(self._find_branch()))
            except (PreconditionError, ArithmeticError):
                object.__setattr__(self, "branch", None)
        else:
            br = tuple(self.branch)
            if len(br) != 4:
                raise PreconditionError("a double cover has four branch values")
            if any(_p1_index(br[:i], b) >= 0 for i, b in enumerate(br)):
                raise PreconditionError("branch values must be distinct")
            for b in br:
                if is_inf(b):
                    if f.deg != 3:
                        raise PreconditionError("oo is not a branch value of a quartic")
                elif f(b):
                    raise PreconditionError(f"{b} is not a root of the model")
            if f.deg == 3 and _p1_index(br, INF) < 0:
                raise PreconditionError("oo must be listed for a cubic model")
            object.__setattr__(self, "branch", br)
        if self.branch is not None and _p1_index(self.branch, self.origin) < 0:
            raise PreconditionError("origin is not among the branch values")

    def _find_branch(self):
        if hasattr(self.model, "branch_values"):
            return self.model.branch_values()
        from .algebra.poly import roots

        f = self.model.rhs()
        rts = sorted(roots(f), key=int) if isinstance(self.K, PrimeField) else []
        if len(rts) != f.deg:
            raise PreconditionError("branch values not in the base field")
        return rts + ([INF] if f.deg == 3 else [])

    @classmethod
    def from_branch(cls, branch, origin, K: Field, lead=1):
        """Cover with y^2 = lead * prod (x - b) over the finite branch values."""
        fin = [b for b in branch if not is_inf(b)]
        f = Poly.from_roots(K, fin) * K(lead)
        return cls(QuarticModel(f), origin, tuple(branch))

    @property
    def K(self) -> Field:
        return self.model.rhs().K

    @cached_property
    def W(self) -> WeierstrassForm:
        return to_short_weierstrass(self.model, self.origin)

    @cached_property
    def divpolys(self) -> DivisionPolynomials:
        return DivisionPolynomials(self.W.E)

    def xset(self, N: int) -> XSet:
        """x-values (P^1) of all points of order dividing N, origin included."""
        return torsion_xset(self.model, self.origin, N, self.divpolys)

    @cached_property
    def branch_set(self) -> XSet:
        f = self.model.rhs()
        return XSet(f.monic(), f.deg == 3)

    def require_branch(self):
        if self.branch is None:
            from .errors import FieldExtensionRequired

            raise FieldExtensionRequired(
                "branch values are not all in the base field",
                [str(c) for c in self.model.rhs().coeffs()],
            )
        return self.branch

    def transported(self, M: Mobius) -> "DoubleCover":
        """The same cover in the coordinate M(x)."""
        f = self.model.rhs()
        g = M.inverse().pullback(f, 4)
        br = None if self.branch is None else tuple(M(b) for b in self.branch)
        return DoubleCover(QuarticModel(g), M(self.origin), br)

    def reduce(self, fn) -> "DoubleCover":
        br = None if self.branch is None else tuple(map_p1(b, fn) for b in self.branch)
        return DoubleCover(map_model(self.model, fn), map_p1(self.origin, fn), br)

    def describe(self) -> dict:
        return {
            "model": self.model.tag,
            "rhs": [str(c) for c in self.model.rhs().coeffs()],
            "origin": p1_str(self.origin),
            "branch": None if self.branch is None else [p1_str(b) for b in self.branch],
        }


def p1_str(v) -> str:
    return "oo" if is_inf(v) else str(v)


@dataclass(frozen=True, eq=False)
class CoverPair:
    """Two double covers of the same P^1 over the same field."""

    c1: DoubleCover
    c2: DoubleCover

    def __post_init__(self):
        if self.c1.K != self.c2.K:
            raise PreconditionError("covers live over different fields")
        if self.c1.branch_set == self.c2.branch_set:
            raise ExcludedCase(
                "identical branch sets: the curves are isomorphic and the common set is infinite"
            )

    @property
    def K(self):
        return self.c1.K

    def reduce(self, fn) -> "CoverPair":
        return CoverPair(self.c1.reduce(fn), self.c2.reduce(fn))

    def transported(self, M: Mobius) -> "CoverPair":
        return CoverPair(self.c1.transported(M), self.c2.transported(M))

    def __iter__(self):
        return iter((self.c1, self.c2))


# ----------------------------------------------------------------------------
# Klein groups and the invariant pair
# ----------------------------------------------------------------------------


def pairing_involution(p, q, r, s, K) -> Mobius:
    """The Moebius involution swapping p <-> q and r <-> s."""
    rows = []
    for u, v in ((p, q), (r, s)):
        x1, z1 = p1_hom(u, K)
        x2, z2 = p1_hom(v, K)
        # M = [[a, b], [c, -a]] sends (x1:z1) to (x2:z2)
        rows.append((x1 * z2 + z1 * x2, z1 * z2, -(x1 * x2)))
    (a1, b1, c1), (a2, b2, c2) = rows
    a = b1 * c2 - c1 * b2
    b = c1 * a2 - a1 * c2
    c = a1 * b2 - b1 * a2
    if not (a or b or c) or not (-(a * a) - b * c):
        raise PreconditionError("degenerate branch data")
    return Mobius(a, b, c, -a, K)


def klein_group(cover: DoubleCover) -> list[Mobius]:
    """[id, a1, a2, a3] with a_i realising the pairings {01|23}, {02|13}, {03|12}."""
    b = cover.require_branch()
    K = cover.K
    out = [Mobius.identity(K)]
    for i, j, k, l in ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)):
        out.append(pairing_involution(b[i], b[j], b[k], b[l], K))
    return out


@dataclass(frozen=True)
class PairInvariant:
    a: int
    b: int

    def __post_init__(self):
        if (self.a, self.b) not in ALLOWED_INVARIANTS:
            raise RuntimeError(f"impossible invariant {(self.a, self.b)}")

    def as_tuple(self):
        return (self.a, self.b)


def common_klein(pair: CoverPair) -> list[Mobius]:
    g2 = klein_group(pair.c2)
    return [g for g in klein_group(pair.c1) if any(g == h for h in g2)]


def invariant_pair(pair: CoverPair) -> PairInvariant:
    """(#common 2-torsion x-values, #common Klein group elements)."""
    a = (pair.c1.branch_set & pair.c2.branch_set).count
    if a == 3:
        # only (3, 1) has a = 3; no need for explicit branch values
        return PairInvariant(3, 1)
    return PairInvariant(a, len(common_klein(pair)))


# ----------------------------------------------------------------------------
# descent and ascent
# ----------------------------------------------------------------------------


def _sending_zero_inf(f0, finf, K) -> Mobius:
    """x -> (x - f0)/(x - finf), homogeneously; plain x - f0 when finf is oo."""
    if is_inf(finf) and not is_inf(f0):
        return Mobius(1, -f0, 0, 1, K)
    x1, z1 = p1_hom(f0, K)
    x2, z2 = p1_hom(finf, K)
    return Mobius(z1, -x1, z2, -x2, K)


def _neg(v):
    return v if is_inf(v) else -v


@dataclass(frozen=True, eq=False)
class Descent:
    """Result of descending along a common involution.

    In the normalised coordinate X = mu(x) the involution is X -> -X and
    the descended covers live on Z = X^2.
    """

    upstairs: CoverPair
    mu: Mobius
    normalized: CoverPair
    pair: CoverPair

    def beta_preimage(self, I_down: XSet) -> XSet:
        """beta^{-1}(I) in the original upstairs coordinate."""
        return I_down.pullback_square().transport(self.mu.inverse())

    def beta(self, x):
        X = self.mu(x)
        return X if is_inf(X) else X * X


def _descend_cover(cov: DoubleCover) -> DoubleCover:
    br = cov.require_branch()
    if any(is_inf(b) or not b for b in br):
        raise PreconditionError("involution fixes a branch value")
    r1 = br[0]
    j = _p1_index(br, -r1)
    if j < 0:
        raise PreconditionError("branch set is not symmetric under x -> -x")
    r2 = next(b for i, b in enumerate(br) if i not in (0, j))
    s, t = r1 * r1, r2 * r2
    L = cov.model.rhs().lc
    K = cov.K
    o = cov.origin * cov.origin
    if L == 1:
        model = Cubic(K(0), s, t)
    else:
        model = QuarticModel(Poly.from_roots(K, [K(0), s, t]) * L)
    return DoubleCover(model, o, (K(0), s, t, INF))


def descend_pair(pair: CoverPair, alpha: Mobius) -> Descent:
    """Quotient both covers by the 2-torsion translation inducing ``alpha``."""
    if alpha.is_identity():
        raise PreconditionError("cannot descend along the identity")
    if not any(alpha == g for g in common_klein(pair)):
        raise PreconditionError("involution is not common to both Klein groups")
    fp = alpha.fixed_points()
    if is_inf(fp[0]):
        fp = [fp[1], fp[0]]
    K = pair.K
    mu = _sending_zero_inf(fp[0], fp[1], K)
    norm = pair.transported(mu)
    down = CoverPair(_descend_cover(norm.c1), _descend_cover(norm.c2))
    return Descent(pair, mu, norm, down)


def _ascend_cover(cov: DoubleCover, sign: int) -> DoubleCover:
    K = cov.K
    br = cov.require_branch()
    rest = [b for b in br if not (is_inf(b) or not b)]
    if len(rest) != 2:
        raise PreconditionError("0 and oo must both be branch values")
    o = cov.origin
    if is_inf(o) or not o:
        raise PreconditionError("origin sits at a chosen fixed point")
    s, t = (o, rest[1]) if p1_eq(o, rest[0]) else (o, rest[0])
    rs, rt = s.sqrt(), t.sqrt()
    if sign < 0:
        rs = -rs
    f = cov.model.rhs()
    L = f.lc
    if L == 1:
        model = EvenQuartic(s, t)
    else:
        model = QuarticModel(Poly(K, [s * t, 0, -(s + t), 0, 1]) * L)
    return DoubleCover(model, rs, (rs, -rs, rt, -rt))


@dataclass(frozen=True, eq=False)
class Ascent:
    nu: Mobius
    normalized: CoverPair
    pair: CoverPair


def ascend_pair(pair: CoverPair, choice=None, signs=(1, 1)) -> Ascent:
    """Inverse of :func:`descend_pair`.

    ``choice`` names two common branch values (sent to 0 and oo); by default
    the first two common ones in the order of the first cover's branch list.
    ``signs`` picks the square root of each normalised origin.
    """
    K = pair.K
    b1, b2 = pair.c1.require_branch(), pair.c2.require_branch()
    common = [b for b in b1 if _p1_index(b2, b) >= 0]
    if len(common) < 2:
        raise PreconditionError("ascent needs at least two common branch values")
    if choice is None:
        choice = common[:2]
    c0, cinf = choice
    if _p1_index(common, c0) < 0 or _p1_index(common, cinf) < 0 or p1_eq(c0, cinf):
        raise PreconditionError("choice must be two distinct common branch values")
    nu = _sending_zero_inf(c0, cinf, K)
    norm = pair.transported(nu)
    up = CoverPair(_ascend_cover(norm.c1, signs[0]), _ascend_cover(norm.c2, signs[1]))
    return Ascent(nu, norm, up)


# ----------------------------------------------------------------------------
# common torsion x-coordinates
# ----------------------------------------------------------------------------


def order_classes(cover: DoubleCover, S: XSet, N: int) -> dict[int, XSet]:
    """Split S (a subset of x-values of N-torsion) by minimal point order."""
    W = cover.W
    SW = S.transport(W.mobius)
    out = {}
    remaining = SW.poly
    if SW.inf:
        out[1] = XSet(Poly(S.K, [1]), True)
    for d in divisors(N):
        if d == 1 or remaining.deg <= 0:
            continue
        T = cover.divpolys.torsion(d)
        g = poly_gcd(remaining, T % remaining)
        if g.deg > 0:
            out[d] = XSet(g, False)
            remaining = remaining // g
    if remaining.deg > 0:
        raise RuntimeError("element without order dividing N")
    back = W.mobius.inverse()
    return {d: xs.transport(back) for d, xs in out.items()}


@dataclass
class LocalIntersection:
    """Common set over one finite field, with the joint order profile."""

    N: int
    I: XSet
    classes: dict  # (o1, o2) -> XSet

    @property
    def profile(self) -> dict:
        return {k: v.count for k, v in sorted(self.classes.items())}


def intersect_local(pair: CoverPair, N: int) -> LocalIntersection:
    if N < 1:
        raise ValueError("order bound must be positive")
    I = pair.c1.xset(N) & pair.c2.xset(N)
    cl1 = order_classes(pair.c1, I, N)
    cl2 = order_classes(pair.c2, I, N)
    classes = {}
    for o1, A in cl1.items():
        for o2, B in cl2.items():
            C = A & B
            if C.count:
                classes[(o1, o2)] = C
    if sum(c.count for c in classes.values()) != I.count:
        raise RuntimeError("order classes do not partition the common set")
    return LocalIntersection(N, I, classes)


@dataclass
class PrimeEvidence:
    p: int
    root: int | None
    count: int
    profile: dict
    poly: list
    inf: bool

    def to_dict(self):
        return {
            "p": str(self.p),
            "generator_image": None if self.root is None else str(self.root),
            "count": self.count,
            "profile": [[list(k), v] for k, v in sorted(self.profile.items())],
            "affine_poly": [str(c) for c in self.poly],
            "infinity": self.inf,
        }


@dataclass
class TorsionXReport:
    """Bounded common torsion x-values of a pair, with per-prime evidence."""

    N: int
    count: int
    inf: bool
    classes: list  # [((o1, o2), count)]
    elements: list | None  # explicit P^1 values when they lie in the base field
    evidence: list
    field: str
    lifted_poly: list | None = None
    status: str = "consistent"
    caveat: str = CAVEAT

    @property
    def orders_divide_N(self) -> bool:
        return all(self.N % o1 == 0 and self.N % o2 == 0 for (o1, o2), _ in self.classes)

    def to_dict(self):
        return {
            "max_order": self.N,
            "count": self.count,
            "infinity_in_set": self.inf,
            "order_classes": [
                {"orders": list(k), "count": v} for k, v in self.classes
            ],
            "all_orders_divide_bound": self.orders_divide_N,
            "elements": None if self.elements is None else [p1_str(e) for e in self.elements],
            "lifted_affine_poly": self.lifted_poly,
            "field": self.field,
            "primes": [e.to_dict() for e in self.evidence],
            "status": self.status,
            "caveat": self.caveat,
        }


def _split_roots(xs: XSet):
    from .algebra.poly import roots

    if xs.poly.deg <= 0:
        rts = []
    else:
        rts = sorted(roots(xs.poly), key=lambda e: e.v)
        if len(rts) != xs.poly.deg:
            return None
    return rts + ([INF] if xs.inf else [])


def field_label(K) -> str:
    if isinstance(K, PrimeField):
        return f"GF({K.p})"
    if isinstance(K, NumberField):
        return f"Q({K.name}) with {K.modulus_str()} = 0"
    if isinstance(K, RationalField):
        return "QQ"
    return repr(K)


def lift_rational_poly(polys: dict[int, list]) -> list | None:
    """CRT + rational reconstruction of per-prime coefficient lists.

    Returns string coefficients when all primes give the same degree and
    the reconstruction is unchanged after dropping the last prime.
    """
    ps = sorted(polys)
    if len(ps) < 2 or len({len(polys[p]) for p in ps}) != 1:
        return None

    def rec(use):
        M = 1
        for p in use:
            M *= p
        out = []
        for i in range(len(polys[ps[0]])):
            r, M = crt_combine([(polys[p][i], p) for p in use])
            q = rational_reconstruct(r, M)
            if q is None:
                return None
            out.append(q)
        return out

    full = rec(ps)
    if full is None or rec(ps[:-1]) != full:
        return None
    return [str(q) for q in full]


def is_global(K) -> bool:
    return isinstance(K, (RationalField, NumberField))


def sample_primes(K0, count, seed, check, lo_bits=59, hi_bits=62):
    """Good primes for data over K0: reduction exists and ``check`` passes."""
    chosen = {}

    def accept(p):
        red = reduction_map(K0, p)
        if red is None:
            return False
        Fp, fn, root = red
        try:
            check(fn)
        except (PreconditionError, ZeroDivisionError, ValueError, ArithmeticError):
            return False
        chosen[p] = (fn, root)
        return True

    ps = good_primes(count, seed, accept, lo_bits, hi_bits)
    return [(p, *chosen[p]) for p in ps]


def common_torsion_x(pair: CoverPair, N: int, primes: int = 3, seed: int = 0) -> TorsionXReport:
    """Common x-values of points of order dividing N on both covers.

    Over a finite field this is one computation; over QQ or a number field
    the pair is reduced at ``primes`` good primes near 2^60, and all images
    must agree on the count and on the joint order profile.
    """
    if N < 1:
        raise ValueError("order bound must be positive")
    K = pair.K
    if not is_global(K):
        loc = intersect_local(pair, N)
        ev = PrimeEvidence(K.char, None, loc.I.count, loc.profile, loc.I.poly.to_ints(), loc.I.inf) \
            if isinstance(K, PrimeField) else None
        return TorsionXReport(
            N, loc.I.count, loc.I.inf, list(loc.profile.items()), _split_roots(loc.I),
            [ev] if ev else [], field_label(K),
        )
    images = sample_primes(K, primes, seed, lambda fn: pair.reduce(fn))
    results = {}
    evidence = []
    for p, fn, root in images:
        loc = intersect_local(pair.reduce(fn), N)
        results[p] = loc
        evidence.append(PrimeEvidence(p, root, loc.I.count, loc.profile, loc.I.poly.to_ints(), loc.I.inf))
    counts = {p: r.I.count for p, r in results.items()}
    profiles = {p: r.profile for p, r in results.items()}
    first = next(iter(results.values()))
    if len(set(counts.values())) != 1 or any(pr != first.profile for pr in profiles.values()):
        raise PrimeInconsistency(f"primes disagree: counts {counts}", {"counts": counts, "profiles": profiles})
    lifted = None
    if isinstance(K, RationalField):
        lifted = lift_rational_poly({p: r.I.poly.to_ints() for p, r in results.items()})
    return TorsionXReport(
        N, first.I.count, first.I.inf, list(first.profile.items()), None, evidence,
        field_label(K), lifted,
    )


def stable_common_torsion_x(pair: CoverPair, N0: int, cap_factor: int = 4, **kw):
    """Double N from N0 until the count stops growing (at most N0*cap_factor)."""
    N = N0
    rep = common_torsion_x(pair, N, **kw)
    history = [(N, rep.count)]
    while N * 2 <= N0 * cap_factor:
        nxt = common_torsion_x(pair, N * 2, **kw)
        history.append((N * 2, nxt.count))
        if nxt.count == rep.count:
            return rep, history, True
        N, rep = N * 2, nxt
    return rep, history, False
