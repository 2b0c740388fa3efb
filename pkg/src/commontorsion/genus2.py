"""Bielliptic genus-2 curves, their (3,1) cover pairs and torsion packets.

A genus-2 curve y^2 = f(x) with an extra involution x -> M(x) is moved to
X = mu(x) where the involution becomes X -> -X.  The sextic is then even,
f~(X) = c(X^2), and the two elliptic quotients are y^2 = c(Z) (origin oo)
and y^2 = Z c(Z) (origin 0).  Points of the hyperelliptic torsion packet
lie over the common torsion x-values of that pair.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .algebra.fields import Elem, PrimeField
from .algebra.poly import Poly, poly_gcd, roots
from .covers import (
    CoverPair,
    DoubleCover,
    _sending_zero_inf,
    field_label,
    intersect_local,
    is_global,
    lift_rational_poly,
    sample_primes,
)
from .curves import (
    INF,
    Cubic,
    CubicWith0,
    CurveModel,
    EllPoint,
    EvenQuartic,
    EvenSextic,
    Mobius,
    PoonenCt,
    QuarticModel,
    XSet,
    apply_scale,
    halving_poly,
    is_inf,
    isomorphism_scale,
    p1_eq,
    map_mobius,
    map_model,
    point_order_bounded,
    velu_isogeny,
)
from .errors import FieldExtensionRequired, PreconditionError, PrimeInconsistency

# ----------------------------------------------------------------------------
# curves with a marked involution
# ----------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Genus2Curve:
    """Genus-2 model plus an optional extra involution acting on x."""

    model: CurveModel
    involution: Mobius | None = None

    def __post_init__(self):
        if self.model.genus != 2:
            raise PreconditionError("genus-2 model required")
        self.model.check()
        M = self.involution
        if M is not None:
            if M.is_identity():
                raise PreconditionError("the marked involution is the identity on x")
            if not M.is_involution():
                raise PreconditionError("marked map is not an involution")
            f = self.model.rhs()
            g = M.pullback(f, 6)
            if g * f.lc != f * g.lc:
                raise PreconditionError("marked involution does not preserve the curve")

    @property
    def K(self):
        return self.model.rhs().K

    def reduce(self, fn) -> "Genus2Curve":
        inv = None if self.involution is None else map_mobius(self.involution, fn)
        return Genus2Curve(map_model(self.model, fn), inv)


@dataclass(frozen=True, eq=False)
class BiellipticNormal:
    """Even form f~(X) = c(X^2) in the coordinate X = mu(x)."""

    curve: Genus2Curve
    mu: Mobius
    sextic: Poly
    cubic: Poly

    def even_sextic(self) -> EvenSextic:
        """EvenSextic(u, v, w) when c splits over the base field."""
        rts = roots(self.cubic)
        if len(rts) != 3:
            raise FieldExtensionRequired(
                "u, v, w are not in the base field", [str(c) for c in self.cubic.coeffs()]
            )
        u, v, w = sorted(rts, key=lambda e: e.v)
        return EvenSextic(u, v, w)


def normalize_bielliptic(C: Genus2Curve) -> BiellipticNormal:
    """Conjugate the marked involution to X -> -X and read off c(Z)."""
    M = C.involution
    if M is None:
        raise PreconditionError("no extra involution marked")
    fp = M.fixed_points()
    if is_inf(fp[0]):
        fp = [fp[1], fp[0]]
    if p1_eq(fp[0], fp[1]):
        raise PreconditionError("involution fixed points coincide")
    K = C.K
    mu = _sending_zero_inf(fp[0], fp[1], K)
    g = mu.inverse().pullback(C.model.rhs(), 6)
    if any(g[i] for i in (1, 3, 5)):
        raise RuntimeError("normalised sextic is not even")
    if g.deg != 6:
        raise PreconditionError("a fixed point of the involution is a Weierstrass point")
    c = Poly(K, [g[0], g[2], g[4], g[6]])
    return BiellipticNormal(C, mu, g, c)


@dataclass(frozen=True, eq=False)
class SplitPair:
    """The (3,1) pair of elliptic quotients with the quotient maps."""

    pair: CoverPair
    cubic: Poly

    @staticmethod
    def psi(x, y):
        return (x * x, y)

    @staticmethod
    def psi_prime(x, y):
        return (x * x, x * y)


def split_to_pair(C) -> SplitPair:
    """E: y^2 = c(Z) with origin oo and E': y^2 = Z c(Z) with origin 0."""
    if isinstance(C, EvenSextic):
        K = C.K
        u, v, w = C.u, C.v, C.w
        if not (u and v and w) or u == v or v == w or u == w:
            raise PreconditionError("u, v, w must be distinct and nonzero")
        c = Poly.from_roots(K, [u, v, w])
        E = DoubleCover(Cubic(u, v, w), INF, (u, v, w, INF))
        E2 = DoubleCover(CubicWith0(u, v, w), K(0), (K(0), u, v, w))
        return SplitPair(CoverPair(E, E2), c)
    c = C.cubic if isinstance(C, BiellipticNormal) else C
    K = c.K
    if c.deg != 3 or not c[0]:
        raise PreconditionError("c(Z) must be a cubic with c(0) != 0")
    if poly_gcd(c, c.derivative()).deg > 0:
        raise PreconditionError("c(Z) has a repeated root")
    E = DoubleCover(QuarticModel(c), INF)
    E2 = DoubleCover(QuarticModel(c.shift(1)), K(0))
    return SplitPair(CoverPair(E, E2), c)


@dataclass(frozen=True, eq=False)
class JoinedCurve:
    """Even sextic c(X^2) obtained from a (3,1) pair, with the coordinate change."""

    nu: Mobius
    cubic: Poly

    @property
    def sextic(self) -> Poly:
        K = self.cubic.K
        out = []
        for i, a in enumerate(self.cubic.coeffs()):
            out.append(a)
            if i < 3:
                out.append(K(0))
        return Poly(K, out)


def pair_to_genus2(pair: CoverPair) -> JoinedCurve:
    """Send the extra branch value of the first cover to oo, of the second to 0."""
    common = pair.c1.branch_set & pair.c2.branch_set
    if common.count != 3:
        raise PreconditionError("pair invariant is not (3, 1)")
    K = pair.K
    extra1 = pair.c1.branch_set - common
    extra2 = pair.c2.branch_set - common

    def point(xs: XSet):
        if xs.inf:
            return INF
        return -xs.poly[0]

    b1, b2 = point(extra1), point(extra2)
    nu = _sending_zero_inf(b2, b1, K)
    c = common.transport(nu)
    if c.inf:
        raise RuntimeError("common branch value sent to oo")
    return JoinedCurve(nu, c.poly)


# ----------------------------------------------------------------------------
# packets
# ----------------------------------------------------------------------------


@dataclass
class LocalPacket:
    N: int
    iprime: XSet
    k0inf: int
    packet: XSet
    size: int
    formula: int
    weierstrass: int
    profile: dict


def packet_local(C: Genus2Curve, N: int) -> LocalPacket:
    if N % 2:
        # the packet holds the Weierstrass points, whose images have order 2
        raise PreconditionError(f"packet bound must be even, got {N}")
    nb = normalize_bielliptic(C)
    sp = split_to_pair(nb)
    loc = intersect_local(sp.pair, N)
    Ip = loc.I
    K = C.K
    k = int(not Ip.poly(K(0))) + int(Ip.inf)
    formula = 4 * Ip.count - 6 - 2 * k
    packet = Ip.pullback_square().transport(nb.mu.inverse())
    f = C.model.rhs()
    weier = max(poly_gcd(packet.poly, f).deg, 0)
    size = 2 * max(packet.poly.deg, 0) - weier
    if packet.inf:
        size += 2 if f.deg == 6 else 1
        if f.deg == 5:
            weier += 1
    return LocalPacket(N, Ip, k, packet, size, formula, weier, loc.profile)


@dataclass
class PacketReport:
    N: int
    iprime_count: int
    iprime_zero_inf: int
    size: int
    formula: int
    weierstrass: int
    inf_in_packet: bool
    affine_degree: int
    profile: list
    evidence: list
    field: str
    lifted_poly: list | None = None
    status: str = "consistent"

    @property
    def formula_holds(self):
        return self.size == self.formula

    def to_dict(self):
        return {
            "max_order": self.N,
            "iprime_count": self.iprime_count,
            "iprime_meets_zero_inf": self.iprime_zero_inf,
            "packet_size": self.size,
            "formula_value": self.formula,
            "formula_holds": self.formula_holds,
            "weierstrass_points": self.weierstrass,
            "packet_over_infinity": self.inf_in_packet,
            "packet_affine_degree": self.affine_degree,
            "iprime_order_classes": [{"orders": list(k), "count": v} for k, v in self.profile],
            "lifted_packet_x_poly": self.lifted_poly,
            "field": self.field,
            "primes": self.evidence,
            "status": self.status,
            "caveat": "packet points whose images have orders dividing N on both quotients",
        }


def packet_report(C: Genus2Curve, N: int, primes: int = 3, seed: int = 0) -> PacketReport:
    """Hyperelliptic torsion packet of a bielliptic C, bounded by N."""
    K = C.K
    if not is_global(K):
        loc = packet_local(C, N)
        ev = [_packet_evidence(K.char if isinstance(K, PrimeField) else None, None, loc)]
        return _report(loc, ev, field_label(K), None)

    def check(fn):
        split_to_pair(normalize_bielliptic(C.reduce(fn)))

    images = sample_primes(K, primes, seed, check)
    locs = {}
    ev = []
    for p, fn, root in images:
        locs[p] = packet_local(C.reduce(fn), N)
        ev.append(_packet_evidence(p, root, locs[p]))
    keys = {p: (l.size, l.iprime.count, tuple(sorted(l.profile.items()))) for p, l in locs.items()}
    if len(set(keys.values())) != 1:
        raise PrimeInconsistency(
            "primes disagree on the packet", {"sizes": {p: k[0] for p, k in keys.items()}}
        )
    first = next(iter(locs.values()))
    lifted = None
    if all(l.packet.inf == first.packet.inf for l in locs.values()):
        lifted = lift_rational_poly({p: l.packet.poly.to_ints() for p, l in locs.items()})
    return _report(first, ev, field_label(K), lifted)


def _packet_evidence(p, root, loc: LocalPacket):
    return {
        "p": None if p is None else str(p),
        "generator_image": None if root is None else str(root),
        "iprime_count": loc.iprime.count,
        "packet_size": loc.size,
        "packet_affine_poly": [str(c) for c in loc.packet.poly.coeffs()],
        "packet_over_infinity": loc.packet.inf,
    }


def _report(loc: LocalPacket, ev, label, lifted):
    return PacketReport(
        loc.N,
        loc.iprime.count,
        loc.k0inf,
        loc.size,
        loc.formula,
        loc.weierstrass,
        loc.packet.inf,
        max(loc.packet.poly.deg, 0),
        sorted(loc.profile.items()),
        ev,
        label,
        lifted,
    )


# ----------------------------------------------------------------------------
# automorphism-family table
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyProfile:
    tag: str
    normal_form: str
    reduced_group: str
    aut_order: int
    dim_moduli: int
    t_min: int

    @property
    def expression(self) -> str:
        if self.dim_moduli == 0:
            return str(self.t_min)
        base = self.t_min + self.dim_moduli * self.aut_order
        return f"{base} + {self.aut_order}*delta"

    def expected_size(self, delta=0):
        """t_min + (dim + delta) * #Aut; isolated curves have no delta term."""
        if self.dim_moduli == 0:
            return self.t_min
        return self.t_min + (self.dim_moduli + Fraction(delta)) * self.aut_order


_FAMILIES = {
    "generic": FamilyProfile("generic", "generic", "1", 2, 3, 6),
    "C2": FamilyProfile("C2", "x^6 + s x^4 + t x^2 + 1", "C2", 4, 2, 6),
    "C2xC2": FamilyProfile("C2xC2", "x^5 + t x^3 + x", "C2 x C2", 8, 1, 6),
    "S3": FamilyProfile("S3", "x^6 + t x^3 + 1", "S3", 12, 1, 10),
    "D6": FamilyProfile("D6", "x^6 + 1", "D6", 24, 0, 10),
    "S4": FamilyProfile("S4", "x^5 + x", "S4", 48, 0, 22),
    "C5": FamilyProfile("C5", "x^5 + 1", "C5", 10, 0, 18),
}


def family_profile(tag: str) -> FamilyProfile:
    try:
        return _FAMILIES[tag]
    except KeyError:
        raise PreconditionError(f"unknown family {tag!r}; known: {', '.join(_FAMILIES)}") from None


def family_tags():
    return list(_FAMILIES)


def s3_cubic(t, K=None) -> Poly:
    """c(Z) of x^6 + t x^3 + 1 normalised along x -> 1/x with mu = (x-1)/(x+1)."""
    K = K or t.K
    t = K(t)
    return Poly(K, [2 + t, 30 - 3 * t, 30 + 3 * t, 2 - t])


# ----------------------------------------------------------------------------
# Poonen's family C_t : y^2 = (x^3 - 1)(x^3 - t^12)
# ----------------------------------------------------------------------------


def cube_root_of_unity(K):
    rts = roots(Poly(K, [1, 1, 1]))
    if not rts:
        raise FieldExtensionRequired("no primitive cube root of unity", ["1", "1", "1"])
    return min(rts, key=lambda e: e.v)


@dataclass(frozen=True, eq=False)
class PoonenQuotients:
    t: Elem
    C: PoonenCt
    E1: DoubleCover
    E2: DoubleCover

    @property
    def zero_plus(self):
        return (self.t.K(0), self.t**6)

    def phi1(self, x, y):
        t = self.t
        d = x + t * t
        return (((x - t * t) / d) ** 2, 8 * t**3 * y / ((t**6 + 1) * d**3))

    def phi2(self, x, y):
        t = self.t
        d = x + t * t
        return (((x - t * t) / d) ** 2, 8 * t**3 * (x - t * t) * y / ((t**6 + 1) * d**4))

    def T1(self):
        return self.phi1(*self.zero_plus)

    def T2(self):
        return self.phi2(*self.zero_plus)


def poonen_quotients(t) -> PoonenQuotients:
    """The quotients of C_t by tau and tau*iota with their branch data."""
    K = t.K
    if not t or t**6 == 1 or t**6 == -1:
        raise PreconditionError("degenerate parameter: need t != 0 and t^6 != +-1")
    z = cube_root_of_unity(K)
    C = PoonenCt(t).check()
    qt = PoonenQuotients(t, C, None, None)
    br = []
    for k in range(3):
        X, _ = qt.phi1(z**k, K(0))
        br.append(X)
    u, v, w = br
    E1 = DoubleCover(Cubic(u, v, w), INF, (u, v, w, INF))
    E2 = DoubleCover(CubicWith0(u, v, w), K(0), (K(0), u, v, w))
    return PoonenQuotients(t, C, E1, E2)


def model_point_order(cover: DoubleCover, x, y, N: int):
    W = cover.W
    return point_order_bounded(W.E, W.to_W(x, y), N)


# ----------------------------------------------------------------------------
# the eight-further-points identity on E_s : y^2 = (x^2 - s^2)(x^2 - 1/s^2)
# ----------------------------------------------------------------------------


def e_s_cover(s) -> DoubleCover:
    return DoubleCover(EvenQuartic(s * s, 1 / (s * s)), s, (s, -s, 1 / s, -1 / s))


def e_s_prime_cover(s) -> DoubleCover:
    """E'_s : y^2 = x (x - 1)(x - c), c = (s^2+1)^2/(4 s^2), origin (c, 0)."""
    K = s.K
    c = (s * s + 1) ** 2 / (4 * s * s)
    return DoubleCover(Cubic(K(0), K(1), c), c, (K(0), K(1), c, INF))


def psi_map(x, y):
    """E_s -> E'_s, independent of s."""
    return ((x * x + 1) ** 2 / (4 * x * x), (x**4 - 1) * y / (8 * x**3))


def psi_kernel_check(s) -> bool:
    """(x^2+1)^2 - 4 c x^2 is proportional to (x^2 - s^2)(x^2 - 1/s^2)."""
    K = s.K
    c = (s * s + 1) ** 2 / (4 * s * s)
    lhs = Poly(K, [1, 0, 2 - 4 * c, 0, 1])
    rhs = EvenQuartic(s * s, 1 / (s * s)).rhs()
    return lhs == rhs


@dataclass
class Section5Verdict:
    equal: bool
    sign_free_equal: bool
    signs: tuple
    dual_relation: int  # phi21 o phi12 = dual_relation * [3]
    quartics_1: tuple
    quartics_2: tuple
    status: str = "ok"


@dataclass
class Section5Setup:
    """phi12, phi21 between E_{s1}, E_{s2} (Weierstrass forms) up to sign."""

    c1: DoubleCover
    c2: DoubleCover
    S1: EllPoint
    S2: EllPoint
    v12: object
    v21: object
    u12: Elem
    u21: Elem
    signs: tuple | None = None

    def phi12(self, P, sign=None):
        e = self.signs[0] if sign is None else sign
        Q = apply_scale(self.v12(P), self.u12)
        return Q if e > 0 else self.c2.W.E.neg(Q)

    def phi21(self, P, sign=None):
        e = self.signs[1] if sign is None else sign
        Q = apply_scale(self.v21(P), self.u21)
        return Q if e > 0 else self.c1.W.E.neg(Q)


def common_three_torsion_x(c1: DoubleCover, c2: DoubleCover):
    g = poly_gcd(c1.xset(3).poly, c2.xset(3).poly)
    return sorted(roots(g), key=lambda e: e.v) if g.deg > 0 else []


def _rational_y(cover: DoubleCover, x):
    v = cover.model.rhs()(x)
    return v.sqrt() if v.is_square() else None


def section5_setup(s1, s2, xi=None) -> Section5Setup:
    """Kernels from a common 3-torsion x whose points are rational on both curves."""
    c1, c2 = e_s_cover(s1), e_s_cover(s2)
    xs = [xi] if xi is not None else common_three_torsion_x(c1, c2)
    for xi in xs:
        y1, y2 = _rational_y(c1, xi), _rational_y(c2, xi)
        if y1 is not None and y2 is not None:
            break
    else:
        raise PreconditionError("no common 3-torsion point rational on both curves")
    S1 = c1.W.to_W(xi, y1)
    S2 = c2.W.to_W(xi, y2)
    v12 = velu_isogeny(c1.W.E, S1, 3)
    v21 = velu_isogeny(c2.W.E, S2, 3)
    k12 = isomorphism_scale(v12.codomain, c2.W.E)
    k21 = isomorphism_scale(v21.codomain, c1.W.E)
    if k12 is None or k21 is None:
        raise PreconditionError("3-isogenous images are not isomorphic to the partner curve")
    return Section5Setup(c1, c2, S1, S2, v12, v21, k12.sqrt(), k21.sqrt())


def _halving_quartics(st: Section5Setup, P1, P2, signs):
    E1, E2 = st.c1.W.E, st.c2.W.E
    f21 = st.phi21(P2, signs[1])
    f12 = st.phi12(P1, signs[0])
    out1, out2 = [], []
    for e in (1, -1):
        R1 = E1.add(E1.neg(P1), f21 if e > 0 else E1.neg(f21))
        R2 = E2.add(E2.neg(P2), f12 if e > 0 else E2.neg(f12))
        out1.append(transport_poly_inv(st.c1, halving_poly(E1, R1), R1.is_zero))
        out2.append(transport_poly_inv(st.c2, halving_poly(E2, R2), R2.is_zero))
    return tuple(out1), tuple(out2)


def transport_poly_inv(cover: DoubleCover, H: Poly, with_origin: bool) -> XSet:
    """Roots of H given in Weierstrass x, as a set in the cover's x-coordinate."""
    from .curves import _transport_w_set

    return _transport_w_set(cover.W, H, with_origin)


def resolve_signs(st: Section5Setup, P1, P2):
    """Relative sign of (phi12, phi21) making the '+' and '-' quartics match."""
    for signs in ((1, 1), (1, -1)):
        q1, q2 = _halving_quartics(st, P1, P2, signs)
        if q1 == q2:
            return signs
    return None


def dual_relation(st: Section5Setup, P) -> int:
    """e with phi21(phi12(P)) = e * 3P on E_{s1} (e in {1, -1}, 0 if neither)."""
    E1 = st.c1.W.E
    img = st.phi21(st.phi12(P))
    P3 = E1.mul(3, P)
    if img == P3:
        return 1
    if img == E1.neg(P3):
        return -1
    return 0


def section5_crosscheck(s1, s2, P1, P2, setup: Section5Setup | None = None) -> Section5Verdict:
    """Compare the halving quartics on both sides (model x-coordinates).

    ``P1``, ``P2`` are model points (x, y) on E_{s1}, E_{s2} with equal x.
    When ``setup.signs`` is unset, the relative sign is fixed on this point.
    """
    st = setup or section5_setup(s1, s2)
    if P1[0] != P2[0]:
        raise PreconditionError("P1 and P2 must have the same x-coordinate")
    W1 = st.c1.W.to_W(*P1)
    W2 = st.c2.W.to_W(*P2)
    if not (st.c1.W.E.contains_point(W1) and st.c2.W.E.contains_point(W2)):
        raise PreconditionError("points are not on the curves")
    if st.signs is None:
        signs = resolve_signs(st, W1, W2)
        if signs is None:
            q1, q2 = _halving_quartics(st, W1, W2, (1, 1))
            return Section5Verdict(False, set(q1) == set(q2), (0, 0), 0, q1, q2, "both signs fail")
        st.signs = signs
    q1, q2 = _halving_quartics(st, W1, W2, st.signs)
    return Section5Verdict(
        q1 == q2, set(q1) == set(q2), st.signs, dual_relation(st, W1), q1, q2
    )


def three_torsion_condition(xi_val, p: int) -> Poly:
    """Polynomial in s over GF(p) vanishing when xi is a 3-torsion x on E_s."""
    G = _three_torsion_bivariate()
    K = PrimeField(p, check=False)
    xi = int(xi_val) % p
    coeffs = {}
    for (i, j), c in G.items():
        coeffs[j] = (coeffs.get(j, 0) + c * pow(xi, i, p)) % p
    n = max(coeffs) + 1 if coeffs else 0
    return Poly(K, [coeffs.get(j, 0) for j in range(n)])


_G_CACHE = {}


def _three_torsion_bivariate():
    """Numerator of psi_3(x_W(xi)) for E_s with origin (s, 0), as {(i, j): c} in xi^i s^j."""
    if "G" in _G_CACHE:
        return _G_CACHE["G"]
    import sympy as sp

    x, s = sp.symbols("xi s")
    A = s**2 + 1 / s**2
    d1 = 4 * s**3 - 2 * A * s
    d2 = 6 * s**2 - A
    d3 = 4 * s
    d4 = 1
    a = d3 * d1 - d2**2 / 3
    b = d4 * d1**2 - d3 * d2 * d1 / 3 + 2 * d2**3 / 27
    xw = d1 / (x - s) + d2 / 3
    psi3 = 3 * xw**4 + 6 * a * xw**2 + 12 * b * xw - a**2
    num, _ = sp.fraction(sp.together(sp.expand(psi3)))
    P = sp.Poly(sp.expand(num), x, s)
    den = sp.ilcm(*[sp.Rational(c).q for c in P.coeffs()])
    G = {m: int(c * den) for m, c in zip(P.monoms(), P.coeffs())}
    _G_CACHE["G"] = G
    return G


@dataclass
class Section5Instance:
    p: int
    s1: Elem
    s2: Elem
    xi: Elem


def construct_section5_instance(p: int, rng: random.Random, tries: int = 200):
    """Random s1 over GF(p) and s2 sharing a 3-torsion x-coordinate with it."""
    K = PrimeField(p, check=False)
    for _ in range(tries):
        s1 = K(rng.randrange(2, p - 1))
        if s1**4 == 1 or not s1:
            continue
        try:
            c1 = e_s_cover(s1)
        except PreconditionError:
            continue
        # x-values of exact order 3 (the set also holds the origin s1)
        x3 = [x for x in roots(c1.xset(3).poly) if x != s1]
        rng.shuffle(x3)
        for xi in x3:
            cond = three_torsion_condition(xi, p)
            if cond.deg <= 0:
                continue
            bad = {s1.v, (-s1).v, (1 / s1).v, (-1 / s1).v}
            cands = [r for r in roots(cond) if r.v not in bad and r and r**4 != 1]
            for s2 in sorted(cands, key=lambda e: e.v):
                try:
                    c2 = e_s_cover(s2)
                except PreconditionError:
                    continue
                if xi == s2 or c2.xset(3).poly(xi):
                    continue
                if _rational_y(c1, xi) is None or _rational_y(c2, xi) is None:
                    continue
                try:
                    section5_setup(s1, s2, xi)
                except PreconditionError:
                    continue
                return Section5Instance(p, s1, s2, xi)
    return None


def random_common_point(s1, s2, rng: random.Random, tries: int = 500):
    """Model points (x, y1), (x, y2) on E_{s1}, E_{s2} with the same x."""
    K = s1.K
    q1 = EvenQuartic(s1 * s1, 1 / (s1 * s1)).rhs()
    q2 = EvenQuartic(s2 * s2, 1 / (s2 * s2)).rhs()
    for _ in range(tries):
        x = K(rng.randrange(K.p))
        a, b = q1(x), q2(x)
        if a and b and a.is_square() and b.is_square():
            return (x, a.sqrt()), (x, b.sqrt())
    return None
