import json
import random
from fractions import Fraction
from pathlib import Path

import pytest

from deltakit.errors import DegenerateFamily, NotNefInput
from deltakit.exact import Poly
from deltakit.invariants import surface_sweeps
from deltakit.lattice import CurveLattice
from deltakit.scenario import bundled
from deltakit.sweep import cell_pc, cell_psquare, sweep

u, v = Poly.u(), Poly.v()
P = Poly.parse
DATA = Path(__file__).parent / "data"


def e2_lattice():
    return CurveLattice([("s", True), ("l2", True), ("CE", False)], [[-1, 1, 1], [1, 0, 2], [1, 2, 8]])


def all_sweeps():
    """Every (scenario, curve, strip) sweep of the bundled corpus."""
    out = []
    for name in bundled():
        sc = bundled(name)
        for ref in sc.refinements:
            for s in surface_sweeps(sc.lattice, sc.chambers, ref.curve):
                out.append((name, ref.curve, sc.lattice, s))
    return out


SWEEPS = all_sweeps()
IDS = [f"{n}-{c}-{s.chamber.range[0]}" for n, c, _, s in SWEEPS]


# --- worked examples -------------------------------------------------------

def test_e2_sweep():
    res = sweep(e2_lattice(), [1 + u, 2 + u, 0], (0, 1), "l2")
    lo, hi = res.cells
    assert (lo.v_lo, lo.v_hi, lo.support) == (Poly(), Poly.const(1), ())
    assert (hi.v_lo, hi.v_hi, hi.support) == (Poly.const(1), 2 + u, ("s",))
    assert hi.n_coeffs == {"s": v - 1}
    assert res.t(Fraction(1, 2)) == Fraction(5, 2)
    assert res.t.pieces == (2 + u,)
    assert cell_pc(hi, "l2") == 2 + u - v
    assert cell_psquare(lo) == (1 + u) * (3 + u - 2 * v)
    assert cell_psquare(hi) == (2 + u - v) ** 2


def test_r1_first_chamber_along_sR():
    sc = bundled("r1")
    ch = sc.chambers[0]
    assert [str(q) for q in ch.Q][:4] == ["-3 + 1/2*u", "-10 + 3/2*u", "-9 + u", "0"]
    res = sweep(sc.lattice, ch.Q, ch.range, "sR")
    assert len(res.u_breaks) == 2
    (cell,) = res.cells
    assert cell.support == ("tp",)
    assert cell.n_coeffs == {"tp": v}
    assert res.t.pieces == (u / 2,)


def test_qp_cells():
    sc = bundled("qp")
    first = surface_sweeps(sc.lattice, sc.chambers, "B")[0]
    bottom, top = first.result.cells
    assert cell_pc(bottom, "B") == Poly.const(2)
    assert cell_psquare(top) == (2 - v) * (4 - v)


def test_zero_family_is_empty():
    res = sweep(e2_lattice(), [0, 0, 0], (0, 1), "l2")
    assert res.cells == ()
    assert res.t(Fraction(1, 3)) == 0


def test_non_nef_family_is_rejected():
    with pytest.raises(NotNefInput):
        sweep(e2_lattice(), [1, 0, 0], (0, 1), "l2")


def test_numerically_trivial_curve_is_degenerate():
    lat = CurveLattice([("a", True), ("z", False)], [[-1, 0], [0, 0]])
    with pytest.raises(DegenerateFamily):
        sweep(lat, [0, 0], (0, 1), "z")


def test_non_affine_family_is_rejected():
    with pytest.raises(ValueError):
        sweep(e2_lattice(), [u * u, 2, 0], (0, 1), "l2")


# --- identities on every bundled sweep -------------------------------------

@pytest.mark.parametrize("name,C,lat,strip", SWEEPS, ids=IDS)
def test_cell_identities(name, C, lat, strip):
    res = strip.result
    c = lat.index(C)
    for cell in res.cells:
        p2, pc = cell_psquare(cell), cell_pc(cell, C)
        assert p2.diff("v") == -2 * pc
        # class identity P + N = Q - vC
        for i, name_i in enumerate(lat.names):
            lhs = cell.p_class[i] + cell.n_at(name_i)
            rhs = strip.Q[i] - (v if i == c else 0)
            assert lhs == rhs
        for k, n in cell.n_coeffs.items():
            assert n.coeff(0, 1) >= 0
    assert res.d.is_convex()
    assert (res.d + res.t).is_concave()


@pytest.mark.parametrize("name,C,lat,strip", SWEEPS, ids=IDS)
def test_boundary_and_interior(name, C, lat, strip):
    res = strip.result
    rng = random.Random(7)
    for a, b, cells in res.pieces():
        if not cells:
            continue
        top = cells[-1]
        for _ in range(5):
            x = a + (b - a) * Fraction(rng.randint(1, 99), 100)
            t = res.t(x)
            assert top.v_hi(x) == t
            assert cell_psquare(top)(x, t) == 0 or cell_pc(top, C)(x, t) == 0
            for cell in cells:
                y = cell.v_lo(x) + (cell.v_hi(x) - cell.v_lo(x)) * Fraction(rng.randint(1, 99), 100)
                assert cell_pc(cell, C)(x, y) > 0


@pytest.mark.parametrize("name,C,lat,strip", SWEEPS, ids=IDS)
def test_tiling_against_pointwise_decomposition(name, C, lat, strip):
    res = strip.result
    rng = random.Random(11)
    a, b = res.interval
    for _ in range(40):
        x = a + (b - a) * Fraction(rng.randint(1, 997), 998)
        t = res.t(x)
        if t == 0:
            continue
        y = t * Fraction(rng.randint(1, 997), 998)
        hits = res.locate(x, y)
        if not hits:  # on a wall between two cells
            continue
        assert len(hits) == 1
        cell = hits[0]
        cls = lat.divisor([q(x) - (1 if n == C else 0) * y for n, q in zip(lat.names, strip.Q)])
        z = lat.zariski_decompose(cls)
        assert list(z.N.coeffs) == [cell.n_at(n)(x, y) for n in lat.names]


# --- reference chamber tables ----------------------------------------------

def _reference_rows():
    small = json.loads((DATA / "reference_tables_small.json").read_text())
    small["r1"] = json.loads((DATA / "reference_tables_r1.json").read_text())
    for scn, curves in small.items():
        for C, rows in curves.items():
            yield scn, C, rows


@pytest.mark.parametrize("scn,C,rows", list(_reference_rows()), ids=lambda x: x if isinstance(x, str) else "")
def test_chamber_tables_match_reference(scn, C, rows):
    sc = bundled(scn)
    pieces = [pc for s in surface_sweeps(sc.lattice, sc.chambers, C) for pc in s.result.pieces()]
    blocks = {}
    for r in rows:
        blocks.setdefault((P(r["u"][0]).constant(), P(r["u"][1]).constant()), []).append(r)
    for (a, b), block in blocks.items():
        inside = [(lo, hi, cells) for lo, hi, cells in pieces if a <= lo and hi <= b]
        assert sum(hi - lo for lo, hi, _ in inside) == b - a
        for lo, hi, cells in inside:
            assert len(cells) == len(block), (a, b, lo, hi)
            for cell, row in zip(cells, block):
                assert cell.v_lo == P(row["v"][0]) and cell.v_hi == P(row["v"][1])
                n = {k: x for k, x in cell.n_coeffs.items() if not x.is_zero()}
                assert n == {k: P(x) for k, x in row["N"].items()}
                assert cell_psquare(cell) == P(row["P2"])


def test_reference_tables_are_complete():
    counts = {(s, c): len(rows) for s, c, rows in _reference_rows()}
    assert sum(counts.values()) == 153
    assert counts[("r1", "sR")] == 19 and counts[("d1", "l")] == 9
