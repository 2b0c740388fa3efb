"""Quotient the (0,4) pair twice by a common 2-torsion translation.

Bounded set sizes follow #I = 2 #I' - 2 at each step.
"""
from importlib import resources

from commontorsion.covers import common_torsion_x, common_klein, descend_pair, invariant_pair
from commontorsion.io import parse_pair

N = 48
pair = parse_pair(resources.files("commontorsion.fixtures").joinpath("thm13.pair").read_text())
sizes = [common_torsion_x(pair, N, primes=1).count]
for step in range(2):
    alpha = next(g for g in common_klein(pair) if not g.is_identity())
    down = descend_pair(pair, alpha)
    pair = down.pair
    sizes.append(common_torsion_x(pair, N, primes=1).count)
    print(f"step {step + 1}: invariants {invariant_pair(pair).as_tuple()}, #I = {sizes[-1]}")

print("chain:", sizes)
print("doubling holds:", all(a == 2 * b - 2 for a, b in zip(sizes, sizes[1:])))
