"""
Sweeping Zariski chambers
=========================

For a family Q(u) on a surface and a curve C, the sweep tiles the region
0 <= v <= t(u) by cells on which the negative part of Q(u) - vC has a fixed
support and is affine in (u, v).
"""

from fractions import Fraction

from deltakit import bundled, cell_psquare, surface_sweeps

sc = bundled("e2")
strips = surface_sweeps(sc.lattice, sc.chambers, "l2")

for s in strips:
    res = s.result
    print(f"u in [{res.interval[0]}, {res.interval[1]}]  t(u) = {res.t}")
    for lo, hi, cells in res.pieces():
        for cell in cells:
            n = {k: str(x) for k, x in cell.n_coeffs.items() if not x.is_zero()}
            print(f"   [{lo}, {hi}]  {cell.v_lo} <= v <= {cell.v_hi}  N = {n}  P^2 = {cell_psquare(cell)}")

# Every cell is checked against the direct decomposition at a sample point.
lat = sc.lattice
res = strips[0].result
u0, v0 = Fraction(1, 2), Fraction(3, 2)
(cell,) = res.locate(u0, v0)
q = [p(u=u0) for p in strips[0].Q]
D = lat.divisor(q) - lat.basis("l2") * v0
print("sweep N =", {k: str(x(u=u0, v=v0)) for k, x in cell.n_coeffs.items()})
print("direct N =", lat.describe(lat.zariski_decompose(D).N))
