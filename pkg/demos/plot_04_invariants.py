"""
S-invariants and the delta chain
================================

The volume family gives S_X, the chamber sweep gives S(V; C), and each
point on C gives F_p and S(W; p).  The delta bound is the smallest ratio
A/S across the levels of the flag.
"""

from deltakit import bundled, delta_chain, f_point, run, s_curve, s_divisor, s_point, surface_sweeps, vol_family

sc = bundled("e2")
vol = vol_family(sc.model, sc.chambers)
print("vol(u) =", vol.pieces, "on", vol.breaks)
print("S_X =", s_divisor(vol))

ref = sc.refinements[0]
strips = surface_sweeps(sc.lattice, sc.chambers, ref.curve)
print(f"S(V; {ref.curve}) =", s_curve(sc.lattice, strips, vol))
for p in ref.points:
    F = f_point(sc.lattice, strips, p, ref.sigma, vol)
    S = s_point(sc.lattice, strips, p, ref.sigma, vol)
    print(f"  point {p.name}: F = {F}, S(W) = {S}")

# The runner assembles the same numbers into a chain of levels.
rep = run(sc, check=True)
for level in rep.levels:
    print(f"  level {level.label}: A = {level.A}, S = {level.s_value}, A/S = {level.A / level.s_value}")
print("delta >=", rep.results["delta"], "attained at", rep.argmin)
print("cross checks:", len(rep.checks), "run,", len(rep.failed_checks), "failed")
assert delta_chain(rep.levels) == rep.results["delta"]
