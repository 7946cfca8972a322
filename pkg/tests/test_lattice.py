from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from deltakit.errors import InvalidScenario, NotPseudoeffective
from deltakit.lattice import CurveLattice, DivClass

F = Fraction


def qp_lattice():
    return CurveLattice(
        [("e0", True), ("e1", True), ("e2", True)],
        [[-1, 1, 1], [1, -1, 0], [1, 0, -1]],
    )


def e2_lattice():
    return CurveLattice([("s", True), ("l2", True)], [[-1, 1], [1, 0]])


def test_pair_examples():
    lat = qp_lattice()
    L = lat.divisor({"e0": 3, "e1": 2, "e2": 2})
    assert lat.pair(L, L) == 7
    assert lat.pair(lat.divisor({"e0": 1, "e1": 1}), lat.basis("e0")) == 0
    e2 = e2_lattice()
    c = e2.divisor({"s": 2, "l2": 3})
    assert e2.pair(c, c) == 8


def test_pair_dimension_mismatch():
    lat = qp_lattice()
    with pytest.raises(InvalidScenario):
        lat.pair(DivClass((F(1), F(0))), lat.basis("e0"))


def test_is_nef_examples():
    lat = qp_lattice()
    assert lat.is_nef(lat.divisor({"e0": 3, "e1": 2, "e2": 2}))
    assert not lat.is_nef(lat.basis("e0"))
    assert lat.is_nef(lat.divisor({}))


def test_negative_definite_examples():
    lat = qp_lattice()
    assert lat.is_negative_definite(["e2"])
    pair = CurveLattice([("sR", True), ("tp", True)], [[-3, 1], [1, -1]])
    assert pair.is_negative_definite(["sR", "tp"])
    flat = CurveLattice([("a", True), ("b", True)], [[-1, 1], [1, -1]])
    assert not flat.is_negative_definite(["a", "b"])


def test_zariski_examples():
    lat = qp_lattice()
    L = lat.divisor({"e0": 3, "e1": 2, "e2": 2})
    B = lat.divisor({"e0": 1, "e1": 1})
    z = lat.zariski_decompose(L - B * F(3, 2))
    assert z.N == lat.divisor({"e2": F(1, 2)})
    assert z.P == lat.divisor({"e0": F(3, 2), "e1": F(1, 2), "e2": F(3, 2)})
    assert z.support == frozenset({2})
    nef = lat.zariski_decompose(L)
    assert nef.N.is_zero() and nef.P == L
    with pytest.raises(NotPseudoeffective):
        lat.zariski_decompose(L - B * 3)
    with pytest.raises(NotPseudoeffective):
        lat.zariski_oracle(L - B * 3)


def test_gram_must_be_symmetric():
    with pytest.raises(InvalidScenario):
        CurveLattice([("a", True), ("b", True)], [[-1, 1], [0, -1]])


def test_passive_curves_never_enter_supports():
    # C^E ~ 2s + 3l2 is carried as a passive curve
    lat = CurveLattice([("s", True), ("l2", True), ("CE", False)], [[-1, 1, 1], [1, 0, 2], [1, 2, 8]])
    z = lat.zariski_decompose(lat.divisor({"s": 3, "l2": 1}))
    assert lat.index("CE") not in z.support
    assert z.N == lat.divisor({"s": 2})


# --- random lattices -------------------------------------------------------

@st.composite
def lattices(draw):
    n = draw(st.integers(2, 5))
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = draw(st.integers(-3, -1))
        for j in range(i + 1, n):
            g[i][j] = g[j][i] = draw(st.integers(0, 2))
    return CurveLattice([(f"c{i}", True) for i in range(n)], g)


@st.composite
def effective(draw, lat):
    return lat.divisor([draw(st.fractions(0, 4, max_denominator=3)) for _ in range(len(lat))])


def _check_pair(lat, c, z):
    assert z.P + z.N == c
    assert all(x >= 0 for x in z.N.coeffs)
    pc = lat.pairings(z.P)
    assert all(pc[i] >= 0 for i in range(len(lat)))
    assert all(pc[i] == 0 for i in z.support)
    assert lat.pair(z.P, z.N) == 0
    assert lat.is_negative_definite(sorted(z.support))


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_iterative_matches_exhaustive(data):
    lat = data.draw(lattices())
    c = data.draw(effective(lat))
    try:
        z = lat.zariski_decompose(c)
    except NotPseudoeffective:
        with pytest.raises(NotPseudoeffective):
            lat.zariski_oracle(c)
        return
    _check_pair(lat, c, z)
    assert lat.zariski_oracle(c) == z


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_negative_part_is_convex(data):
    lat = data.draw(lattices())
    c1 = data.draw(effective(lat))
    c2 = data.draw(effective(lat))
    s = data.draw(st.fractions(0, 1, max_denominator=6))
    try:
        n1 = lat.zariski_decompose(c1).N
        n2 = lat.zariski_decompose(c2).N
        n = lat.zariski_decompose(c1 * s + c2 * (1 - s)).N
    except NotPseudoeffective:
        assume(False)
    bound = n1 * s + n2 * (1 - s)
    assert all(x <= y for x, y in zip(n.coeffs, bound.coeffs))


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_scaling_is_linear(data):
    lat = data.draw(lattices())
    c = data.draw(effective(lat))
    k = data.draw(st.fractions(1, 5, max_denominator=4))
    try:
        z = lat.zariski_decompose(c)
    except NotPseudoeffective:
        assume(False)
    zk = lat.zariski_decompose(c * k)
    assert zk.N == z.N * k and zk.P == z.P * k
