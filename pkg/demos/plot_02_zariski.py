"""
Zariski decomposition on a curve lattice
========================================

A lattice is a list of named curves plus their Gram matrix.  Curves marked
active are Mori generators: nefness is tested against them, and those with
negative self-intersection may enter a negative part.
"""

from fractions import Fraction

from deltakit import CurveLattice, NotPseudoeffective

# Three exceptional-type curves and the nef curve B = e0 + e1.
lat = CurveLattice(
    [("e0", True), ("e1", True), ("e2", True), ("B", True)],
    [[-1, 1, 1, 0], [1, -1, 0, 0], [1, 0, -1, 1], [0, 0, 1, 0]],
)

L = lat.divisor({"e0": 3, "e1": 2, "e2": 2})
print("L nef:", lat.is_nef(L), " L^2 =", lat.pair(L, L))

# Subtracting B pushes the class out of the nef cone; e2 gets split off.
D = L - lat.basis("B") * Fraction(3, 2)
zp = lat.zariski_decompose(D)
print("P =", lat.describe(zp.P))
print("N =", lat.describe(zp.N))

# The exhaustive oracle enumerates negative-definite supports and agrees.
assert lat.zariski_oracle(D) == zp

try:
    lat.zariski_decompose(L - lat.basis("B") * 3)
except NotPseudoeffective as exc:
    print("not pseudoeffective:", exc)
