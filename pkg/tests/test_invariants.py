import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltakit.errors import DiscontinuousVolume, NegativeOrdIntegrand
from deltakit.exact import PiecewiseFn, Poly, integrate_interval, integrate_strip
from deltakit.invariants import (
    Chamber1D,
    DeltaLevel,
    PointSpec,
    ThreefoldModel,
    base_term,
    bounds_interval,
    cross_checks,
    delta_chain,
    f_point,
    s_curve,
    s_divisor,
    s_point,
    surface_sweeps,
    vol_family,
)
from deltakit.scenario import bundled
from deltakit.sweep import cell_pc

F = Fraction
u = Poly.u()


def setup(name, C):
    sc = bundled(name)
    ref = next(r for r in sc.refinements if r.curve == C)
    strips = surface_sweeps(sc.lattice, sc.chambers, C)
    return sc, ref, strips, vol_family(sc.model, sc.chambers)


def point(ref, name):
    return next(p for p in ref.points if p.name == name)


# triple intersections on the smooth threefold shared by the first scenarios
H = ThreefoldModel(
    ["H1", "H2", "H3"],
    {"H1 H2 H2": 1, "H1 H2 H3": 2, "H1 H3 H3": 2, "H2 H2 H3": 1, "H2 H3 H3": 1, "H3 H3 H3": 1},
)


def test_model_cube():
    assert H.cube([Poly.const(1)] * 3) == Poly.const(28)
    assert H.cube([Poly(), Poly.const(1), Poly.const(1)]) == Poly.const(7)
    assert H == bundled("e2").model


def test_vol_family_e2():
    chambers = [
        Chamber1D((F(0), F(1)), p3_class=(Poly.const(1), 1 + u, 1 - u)),
        Chamber1D((F(1), F(2)), p3_class=(2 - u, 3 - u, Poly())),
    ]
    vol = vol_family(H, chambers)
    assert vol(0) == 28 and vol(2) == 0
    assert s_divisor(vol) == F(51, 56)


def test_vol_family_qp_second_piece():
    chambers = [
        Chamber1D((F(0), F(1)), p3_class=(1 - u, Poly.const(1), Poly.const(1))),
        Chamber1D((F(1), F(2)), p3_class=(Poly(), 2 - u, 2 - u)),
    ]
    vol = vol_family(H, chambers)
    assert vol.pieces[1] == 7 * (2 - u) ** 3
    assert s_divisor(vol) == F(11, 16)


def test_vol_family_from_polynomials():
    sc = bundled("r1")
    vol = vol_family(None, sc.chambers)
    assert vol(9) == 0 and vol(0) == 28
    assert vol.pieces[-1] == (9 - u) ** 3 / 8
    assert s_divisor(vol) == F(63, 16)


def test_discontinuous_volume():
    chambers = [
        Chamber1D((F(0), F(1)), vol_poly=Poly.const(28)),
        Chamber1D((F(1), F(2)), vol_poly=27 - u),
    ]
    with pytest.raises(DiscontinuousVolume):
        vol_family(None, chambers)


@pytest.mark.parametrize("name,value", [("qp", F(11, 16)), ("s-h3", F(227, 448)), ("e2", F(51, 56)), ("d1", F(289, 112)), ("r1", F(63, 16))])
def test_s_divisor_corpus(name, value):
    sc = bundled(name)
    assert s_divisor(vol_family(sc.model, sc.chambers)) == value


@pytest.mark.parametrize(
    "name,C,value",
    [
        ("qp", "B", F(95, 112)),
        ("s-h3", "e0", F(107, 56)),
        ("e2", "l2", F(25, 28)),
        ("d1", "g", F(307, 448)),
        ("d1", "l", F(309, 112)),
        ("d1", "r", F(75, 112)),
        ("r1", "sR", F(207, 224)),
        ("r1", "fS", F(3, 8)),
        ("r1", "fR", F(75, 112)),
        ("r1", "h2", F(309, 112)),
        ("r1", "f2", F(51, 56)),
        ("r1", "f", F(5, 16)),
    ],
)
def test_s_curve_corpus(name, C, value):
    sc, ref, strips, vol = setup(name, C)
    assert s_curve(sc.lattice, strips, vol) == value


def test_e2_point_functionals():
    sc, ref, strips, vol = setup("e2", "l2")
    lat = sc.lattice
    assert base_term(lat, strips, vol) == F(75, 112)
    assert f_point(lat, strips, point(ref, "s|l2"), None, vol) == F(15, 56)
    assert f_point(lat, strips, point(ref, "CE"), None, vol) == F(17, 112)
    assert s_point(lat, strips, point(ref, "tangent"), None, vol) == F(17, 56) + F(75, 112) == F(109, 112)
    assert f_point(lat, strips, PointSpec("empty", {}), None, vol) == 0


def test_qp_point():
    sc, ref, strips, vol = setup("qp", "B")
    p = point(ref, "p")
    assert f_point(sc.lattice, strips, p, None, vol) == F(1, 16)
    assert s_point(sc.lattice, strips, p, None, vol) == F(95, 112) + F(1, 16) == F(51, 56)


@pytest.mark.parametrize(
    "name,C,pt,F_value,S_value",
    [
        ("d1", "l", "p_h", F(3, 448), F(75, 224)),
        ("d1", "l", "p_e", F(23, 64), F(11, 16)),
        ("d1", "l", "p_g", F(5, 14), None),
        ("d1", "r", "q_e", F(23, 64), F(97, 112)),
        ("d1", "g", "generic", F(0), F(227, 448)),
        ("r1", "sR", "p2", F(15, 56), None),
        ("r1", "sR", "p4", F(23, 112), None),
        ("r1", "sR", "p8", F(25, 56), F(51, 56)),
        ("r1", "fS", "p_r1", F(103, 504), F(11, 16)),
        ("r1", "f2", "p9", F(839, 1344), F(25, 28)),
        ("r1", "f2", "p12", F(17, 112), None),
    ],
)
def test_point_values(name, C, pt, F_value, S_value):
    sc, ref, strips, vol = setup(name, C)
    p = point(ref, pt)
    assert f_point(sc.lattice, strips, p, ref.sigma, vol) == F_value
    if S_value is not None:
        assert s_point(sc.lattice, strips, p, ref.sigma, vol) == S_value


def test_delta_chain_examples():
    levels = [DeltaLevel("E2", F(1), F(51, 56)), DeltaLevel("l2", F(1), F(25, 28)), DeltaLevel("p", F(1), F(109, 112))]
    assert delta_chain(levels) == F(112, 109)
    assert delta_chain([DeltaLevel("R1", F(4), F(63, 16))]) == F(64, 63)
    assert delta_chain([DeltaLevel("x", F(1), F(1))]) == 1


def test_bounds_interval():
    assert bounds_interval(F(0), F(2)) == (F(1, 2), F(3, 2))
    lo, hi = bounds_interval(F(0), F(2))
    assert lo <= F(51, 56) <= hi


def test_negative_ord_integrand_warns():
    sc, ref, strips, vol = setup("e2", "l2")
    bad = PointSpec("bad", {}, offset=Poly.const(-1))
    with pytest.warns(NegativeOrdIntegrand):
        f_point(sc.lattice, strips, bad, None, vol)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        f_point(sc.lattice, strips, point(ref, "CE"), None, vol)


def test_qp_volume_slicing():
    sc, ref, strips, vol = setup("qp", "B")
    total = F(0)
    for s in strips:
        for cell in s.result.cells:
            total += integrate_interval(integrate_strip(cell_pc(cell, "B"), cell.v_lo, cell.v_hi), *cell.u_range)
    assert total == F(14, 3) == vol(0) / 6


@pytest.mark.parametrize("name", ["qp", "s-h3", "e2", "d1", "r1", "e2-q-case1", "e2-q-case2"])
def test_cross_checks_pass(name):
    sc = bundled(name)
    vol = vol_family(sc.model, sc.chambers)
    for ref in sc.refinements:
        strips = surface_sweeps(sc.lattice, sc.chambers, ref.curve)
        pts = [(p, s_point(sc.lattice, strips, p, ref.sigma, vol)) for p in ref.points]
        checks = cross_checks(
            sc.lattice, vol, strips,
            s_x=s_divisor(vol), s_c=s_curve(sc.lattice, strips, vol), points=pts, sigma=ref.sigma,
        )
        failed = [c for c in checks if not c.passed]
        assert not failed, failed
        assert len(checks) > 5


def test_cross_checks_report_both_sides():
    vol = PiecewiseFn([0, 2], [28 - 14 * u])
    checks = cross_checks(None, vol, (), s_x=F(2))
    bad = [c for c in checks if not c.passed]
    assert bad and bad[0].lhs == "2" and bad[0].rhs == "[1/2, 3/2]"


# --- properties ------------------------------------------------------------

mult = st.fractions(0, 3, max_denominator=4)


@settings(max_examples=25, deadline=None)
@given(mult, mult, mult, mult)
def test_f_point_is_additive(a1, b1, a2, b2):
    sc, ref, strips, vol = setup("e2", "l2")
    lat = sc.lattice
    p1 = PointSpec("p1", {"s": a1, "CE": b1})
    p2 = PointSpec("p2", {"s": a2, "CE": b2})
    p12 = PointSpec("p12", {"s": a1 + a2, "CE": b1 + b2})
    f1, f2 = f_point(lat, strips, p1, None, vol), f_point(lat, strips, p2, None, vol)
    assert f_point(lat, strips, p12, None, vol) == f1 + f2
    assert s_point(lat, strips, p12, None, vol) >= s_point(lat, strips, p1, None, vol)


def test_zero_mults_give_base_term():
    for name, C in [("qp", "B"), ("r1", "f2"), ("d1", "l")]:
        sc, ref, strips, vol = setup(name, C)
        assert s_point(sc.lattice, strips, PointSpec("z", {}), None, vol) == base_term(sc.lattice, strips, vol)
