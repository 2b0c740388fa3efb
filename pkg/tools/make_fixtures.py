"""Regenerate the bundled pair and curve descriptions."""

import json
from pathlib import Path

from commontorsion.algebra.fields import QQ, NumberField
from commontorsion.algebra.poly import Poly
from commontorsion.covers import CoverPair, DoubleCover
from commontorsion.curves import INF, Cubic, CubicWith0, EvenQuartic, Mobius, SexticModel
from commontorsion.genus2 import Genus2Curve
from commontorsion.io import curve_to_json, pair_to_json

OUT = Path(__file__).resolve().parents[1] / "src" / "commontorsion" / "fixtures"


def dump(name, obj):
    (OUT / name).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")


def main():
    K = NumberField([81, 0, 0, 0, 174, 0, 0, 0, 1])
    s = K.gen()
    c1 = DoubleCover(EvenQuartic(s * s, 1 / (s * s)), s, (s, -s, 1 / s, -1 / s))
    c2 = DoubleCover(EvenQuartic(s * s / 9, 9 / (s * s)), s / 3, (s / 3, -s / 3, 3 / s, -3 / s))
    dump("thm13.pair", pair_to_json(
        CoverPair(c1, c2), "branch values +-s, +-1/s and +-s/3, +-3/s; x -> -x and x -> 1/x are common"))

    u, v, w = QQ(1), QQ(2), QQ(3)
    pair = CoverPair(DoubleCover(Cubic(u, v, w), INF), DoubleCover(CubicWith0(u, v, w), QQ(0)))
    dump("sec3.pair", pair_to_json(
        pair, "quotients of y^2 = (x^2 - 1)(x^2 - 2)(x^2 - 3) by its two extra involutions"))

    L = NumberField([-13, 0, 0, 0, 0, 0, 1], "l")
    l = L.gen()
    C = Genus2Curve(SexticModel(Poly(L, [13, 0, 0, 130, 0, 0, 1])), Mobius(0, l * l, 1, 0, L))
    dump("record.curve", curve_to_json(C, [L(0), INF], "y^2 = x^6 + 130 x^3 + 13, extra involution x -> l^2/x"))

    R = NumberField([-3, 0, 1], "r")
    r = R.gen()
    f = Poly(R, [3 * r + 9, 0, 13 * r - 38, 0, -63 * r + 113, 0, -9 * r + 16])
    C2 = Genus2Curve(SexticModel(f), Mobius(-1, 0, 0, 1, R))
    dump("poonen_example.curve", curve_to_json(
        C2, [r, -r, r / 3, -r / 3, r + 2, -r - 2], "bielliptic along x -> -x, r^2 = 3"))


if __name__ == "__main__":
    main()
