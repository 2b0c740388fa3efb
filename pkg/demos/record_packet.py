"""Bounded torsion packet of the bundled bielliptic genus-2 curve over Q(l), l^6 = 13."""
from importlib import resources

from commontorsion.genus2 import packet_report
from commontorsion.io import parse_curve

C, claimed = parse_curve(resources.files("commontorsion.fixtures").joinpath("record.curve").read_text())
rep = packet_report(C, 48, primes=2)
print("#I' =", rep.iprime_count, " meets {0, oo}:", rep.iprime_zero_inf)
print("packet size:", rep.size, " formula:", rep.formula, " Weierstrass points:", rep.weierstrass)
print("packet x-polynomial degree:", rep.affine_degree, " over infinity:", rep.inf_in_packet)
for row in rep.profile:
    print("  quotient orders", row[0], "count", row[1])
