"""
Okounkov bodies as an independent check
=======================================

On a surface with flag (C, p) the Okounkov body of a big class L is the
region alpha(t) <= y <= alpha(t) + length(t).  Its area is L^2 / 2 and its
first barycentric coordinate equals the expected vanishing order along C.
"""

from deltakit import CurveLattice, area, barycenter, body2d, bundled, s_curve, surface_sweeps, vol_family
from deltakit.okounkov import refinement_barycenter

lat = CurveLattice(
    [("e0", True), ("e1", True), ("e2", True), ("B", True)],
    [[-1, 1, 1, 0], [1, -1, 0, 0], [1, 0, -1, 1], [0, 0, 1, 0]],
)
L = {"e0": 3, "e1": 2, "e2": 2}

generic = body2d(lat, L, "B")
print("tau =", generic.tau, " area =", area(generic), " barycenter =", barycenter(generic))
print(generic.to_csv())

# At a point where B meets e2 the lower boundary lifts.
at_e2 = body2d(lat, L, "B", {"e2": 1})
print("vertices:", [(str(a), str(b)) for a, b in at_e2.vertices()])

# For a threefold refinement, the barycenter of the sliced bodies is S(V; C).
sc = bundled("qp")
vol = vol_family(sc.model, sc.chambers)
strips = surface_sweeps(sc.lattice, sc.chambers, "B")
print(refinement_barycenter(sc.lattice, strips, vol), "=", s_curve(sc.lattice, strips, vol))
