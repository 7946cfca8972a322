"""Expected vanishing orders, point corrections, and the delta chain.

Notation used throughout:

* ``vol`` is the piecewise cubic u -> vol(L - uY) on the threefold;
* a restriction chamber carries Q(u), the nef part restricted to the surface,
  and N(u), the restricted negative part, both written in the surface basis;
* for a refinement curve C, ``d(u)`` is the C-coefficient of N(u) and the
  sweep of Q(u) - vC supplies P(u, v), N(u, v), t(u).
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    DiscontinuousVolume,
    Discontinuity,
    InvalidScenario,
    NegativeOrdIntegrand,
)
from .exact import (
    PiecewiseFn,
    Poly,
    as_rational,
    format_rational,
    integrate_interval,
    integrate_piecewise,
    integrate_strip,
)
from .lattice import CurveLattice
from .sweep import SupportCell, SweepResult, cell_pc, cell_psquare, sweep

__all__ = [
    "ThreefoldModel",
    "Chamber1D",
    "PointSpec",
    "Refinement",
    "DeltaLevel",
    "StripSweep",
    "Check",
    "vol_family",
    "s_divisor",
    "surface_sweeps",
    "s_curve",
    "base_term",
    "f_point",
    "s_point",
    "delta_chain",
    "argmin_level",
    "bounds_interval",
    "cross_checks",
]


# ---------------------------------------------------------------------------
# data

class ThreefoldModel:
    """Picard basis plus a symmetric trilinear intersection form."""

    def __init__(self, basis: Sequence[str], trilinear: Mapping):
        self.basis = tuple(basis)
        if len(set(self.basis)) != len(self.basis):
            raise InvalidScenario("duplicate names in the threefold basis")
        idx = {b: i for i, b in enumerate(self.basis)}
        table: dict[tuple[int, int, int], Fraction] = {}
        for key, val in trilinear.items():
            names = key.split() if isinstance(key, str) else list(key)
            if len(names) != 3 or any(n not in idx for n in names):
                raise InvalidScenario(f"bad trilinear key {key!r}")
            k = tuple(sorted(idx[n] for n in names))
            x = as_rational(val)
            if k in table and table[k] != x:
                raise InvalidScenario(f"trilinear form is not symmetric at {key!r}")
            table[k] = x
        self._t = table

    def triple(self, i: int, j: int, k: int) -> Fraction:
        return self._t.get(tuple(sorted((i, j, k))), Fraction(0))

    def cube(self, cls: Sequence) -> Poly:
        """(D)^3 for a class whose coefficients may be polynomials."""
        c = [Poly.lift(x) for x in cls]
        if len(c) != len(self.basis):
            raise InvalidScenario("class length does not match the threefold basis")
        out = Poly()
        n = len(c)
        for i, j, k in itertools.product(range(n), repeat=3):
            t = self.triple(i, j, k)
            if t and not (c[i].is_zero() or c[j].is_zero() or c[k].is_zero()):
                out = out + c[i] * c[j] * c[k] * t
        return out

    def to_json(self) -> dict:
        tri = {
            " ".join(self.basis[i] for i in k): format_rational(v)
            for k, v in sorted(self._t.items())
            if v
        }
        return {"basis": list(self.basis), "trilinear": tri}

    def __eq__(self, other):
        if not isinstance(other, ThreefoldModel):
            return NotImplemented
        strip = lambda t: {k: v for k, v in t.items() if v}
        return self.basis == other.basis and strip(self._t) == strip(other._t)


@dataclass(frozen=True)
class Chamber1D:
    range: tuple[Fraction, Fraction]
    p3_class: tuple[Poly, ...] | None = None
    vol_poly: Poly | None = None
    Q: tuple[Poly, ...] | None = None
    N: Mapping[str, Poly] = field(default_factory=dict)

    def __post_init__(self):
        a, b = self.range
        if not a < b:
            raise InvalidScenario(f"empty chamber [{a}, {b}]")
        if (self.p3_class is None) == (self.vol_poly is None):
            raise InvalidScenario("a chamber needs exactly one of a class or a volume polynomial")

    @property
    def has_restriction(self) -> bool:
        return self.Q is not None


@dataclass(frozen=True)
class PointSpec:
    name: str
    mults: Mapping[str, Fraction]
    A: Fraction = Fraction(1)
    offset: Poly = field(default_factory=Poly)

    def __post_init__(self):
        if any(m < 0 for m in self.mults.values()):
            raise InvalidScenario(f"point {self.name}: negative multiplicity")
        if self.A <= 0:
            raise InvalidScenario(f"point {self.name}: A must be positive")


@dataclass(frozen=True)
class Refinement:
    curve: str
    A: Fraction
    sigma: Mapping[str, Fraction] = field(default_factory=dict)
    points: tuple[PointSpec, ...] = ()

    def __post_init__(self):
        if self.A <= 0:
            raise InvalidScenario(f"refinement {self.curve}: A must be positive")
        for p in self.points:
            if self.curve in p.mults:
                raise InvalidScenario(f"point {p.name}: multiplicity against the refinement curve itself")


@dataclass(frozen=True)
class DeltaLevel:
    label: str
    A: Fraction
    s_value: Fraction

    def __post_init__(self):
        if self.A <= 0 or self.s_value <= 0:
            raise ValueError(f"level {self.label}: A and S must be positive")

    @property
    def ratio(self) -> Fraction:
        return self.A / self.s_value


@dataclass(frozen=True)
class StripSweep:
    """One restriction chamber swept along one refinement curve."""

    chamber: Chamber1D
    result: SweepResult
    d: Poly
    Q: tuple[Poly, ...]

    def n_input(self, name: str) -> Poly:
        return self.chamber.N.get(name, Poly())


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    lhs: str = ""
    rhs: str = ""
    detail: str = ""


# ---------------------------------------------------------------------------
# threefold level

def vol_family(model: ThreefoldModel | None, chambers: Sequence[Chamber1D]) -> PiecewiseFn:
    if not chambers:
        raise InvalidScenario("no chambers")
    breaks = [chambers[0].range[0]]
    pieces = []
    for ch in chambers:
        if ch.range[0] != breaks[-1]:
            raise InvalidScenario("chamber ranges do not abut")
        breaks.append(ch.range[1])
        if ch.vol_poly is not None:
            pieces.append(ch.vol_poly)
        else:
            if model is None:
                raise InvalidScenario("chamber class given without a threefold model")
            pieces.append(model.cube(ch.p3_class))
    try:
        return PiecewiseFn(breaks, pieces, continuous=True)
    except Discontinuity as exc:
        raise DiscontinuousVolume(str(exc)) from exc


def s_divisor(vol: PiecewiseFn) -> Fraction:
    v0 = vol(vol.domain[0])
    if v0 <= 0:
        raise ValueError("volume at the left endpoint must be positive")
    return integrate_piecewise(vol) / v0


# ---------------------------------------------------------------------------
# surface level

def _q_square(lat: CurveLattice, q: Sequence[Poly]) -> Poly:
    return lat.pair_param(q, q)


def surface_sweeps(lat: CurveLattice, chambers: Sequence[Chamber1D], C: str) -> list[StripSweep]:
    """Sweep every restriction chamber along C."""
    lat.index(C)
    out = []
    for ch in chambers:
        if not ch.has_restriction:
            raise InvalidScenario(f"chamber {ch.range} has no restriction data")
        q = tuple(Poly.lift(x) for x in ch.Q)
        d = ch.N.get(C, Poly())
        res = sweep(lat, q, ch.range, C, d=d)
        out.append(StripSweep(ch, res, d, q))
    return out


def _normalizer(lat: CurveLattice, strips: Sequence[StripSweep], vol) -> Fraction:
    if vol is not None:
        return vol(vol.domain[0]) if isinstance(vol, PiecewiseFn) else as_rational(vol)
    # vol(L) = 3 * int Q(u)^2 du when the chambers run down to vol = 0
    return 3 * sum(
        integrate_interval(_q_square(lat, s.Q), *s.chamber.range) for s in strips
    )


def _cells(strips: Sequence[StripSweep]):
    for s in strips:
        for cell in s.result.cells:
            yield s, cell


def _integrate_cell(p: Poly, cell: SupportCell) -> Fraction:
    return integrate_interval(integrate_strip(p, cell.v_lo, cell.v_hi), *cell.u_range)


def s_curve(lat: CurveLattice, strips: Sequence[StripSweep], vol=None) -> Fraction:
    """S(V;C) = (3/vol) sum int [ d Q^2 + int P(u,v)^2 dv ] du."""
    total = Fraction(0)
    for s in strips:
        if not s.d.is_zero():
            total += integrate_interval(s.d * _q_square(lat, s.Q), *s.chamber.range)
    for _, cell in _cells(strips):
        total += _integrate_cell(cell_psquare(cell), cell)
    return 3 * total / _normalizer(lat, strips, vol)


def base_term(lat: CurveLattice, strips: Sequence[StripSweep], vol=None) -> Fraction:
    """(3/vol) int int (P.C)^2, the point-independent part of S(W;p)."""
    total = Fraction(0)
    for s, cell in _cells(strips):
        pc = cell_pc(cell, s.result.curve)
        total += _integrate_cell(pc * pc, cell)
    return 3 * total / _normalizer(lat, strips, vol)


def ord_integrand(strip: StripSweep, cell: SupportCell, point: PointSpec, sigma: Mapping | None = None) -> Poly:
    """Multiplicity at p of the restricted negative part, as a polynomial on the cell."""
    C = strip.result.curve
    m = Poly.lift(point.offset)
    for name, mult in point.mults.items():
        if name == C or not mult:
            continue
        m = m + (strip.n_input(name) + cell.n_at(name)) * mult
    if sigma:
        w = sum((as_rational(sigma.get(n, 0)) * as_rational(x) for n, x in point.mults.items()), Fraction(0))
        if w:
            m = m - (Poly.v() + strip.d) * w
    return m


def _cell_vertices(cell: SupportCell):
    a, b = cell.u_range
    for u in (a, b):
        for v in (cell.v_lo(u), cell.v_hi(u)):
            yield u, v


def f_point(
    lat: CurveLattice,
    strips: Sequence[StripSweep],
    point: PointSpec,
    sigma: Mapping | None = None,
    vol=None,
) -> Fraction:
    """F_p = (6/vol) int int (P.C) * M_p dv du."""
    total = Fraction(0)
    negative = False
    for s, cell in _cells(strips):
        m = ord_integrand(s, cell, point, sigma)
        if m.is_zero():
            continue
        if any(m(u, v) < 0 for u, v in _cell_vertices(cell)):
            negative = True
        total += _integrate_cell(cell_pc(cell, s.result.curve) * m, cell)
    if negative:
        warnings.warn(f"ord integrand of point {point.name} is negative somewhere", NegativeOrdIntegrand, stacklevel=2)
    return 6 * total / _normalizer(lat, strips, vol)


def s_point(
    lat: CurveLattice,
    strips: Sequence[StripSweep],
    point: PointSpec,
    sigma: Mapping | None = None,
    vol=None,
) -> Fraction:
    return base_term(lat, strips, vol) + f_point(lat, strips, point, sigma, vol)


# ---------------------------------------------------------------------------
# chain

def delta_chain(levels: Iterable[DeltaLevel]) -> Fraction:
    levels = list(levels)
    if not levels:
        raise ValueError("empty delta chain")
    return min(l.ratio for l in levels)


def argmin_level(levels: Sequence[DeltaLevel]) -> int:
    best = delta_chain(levels)
    return next(i for i, l in enumerate(levels) if l.ratio == best)


# ---------------------------------------------------------------------------
# cross checks

def bounds_interval(lo: Fraction, hi: Fraction, dim: int = 3) -> tuple[Fraction, Fraction]:
    """Barycenter bounds for a convex body of the given dimension whose
    last coordinate ranges over [lo, hi]."""
    gap = (hi - lo) / (dim + 1)
    return lo + gap, hi - gap


def _curve_range(strips: Sequence[StripSweep]) -> tuple[Fraction, Fraction]:
    lo, hi = None, None
    for s in strips:
        for u in s.result.u_breaks:
            for val in (s.d(u=u), s.d(u=u) + s.result.t(u)):
                lo = val if lo is None or val < lo else lo
                hi = val if hi is None or val > hi else hi
    return lo, hi


def _point_range(strips, point, sigma) -> tuple[Fraction, Fraction]:
    lo, hi = None, None
    for s, cell in _cells(strips):
        m = ord_integrand(s, cell, point, sigma)
        pc = cell_pc(cell, s.result.curve)
        for u, v in _cell_vertices(cell):
            a, b = m(u, v), m(u, v) + pc(u, v)
            lo = a if lo is None or a < lo else lo
            hi = b if hi is None or b > hi else hi
    return lo, hi


def _bounds_check(name, S, lo, hi, dim=3) -> Check:
    a, b = bounds_interval(lo, hi, dim)
    return Check(
        name,
        a <= S <= b,
        format_rational(S),
        f"[{format_rational(a)}, {format_rational(b)}]",
    )


def cross_checks(
    lat: CurveLattice | None,
    vol: PiecewiseFn,
    strips: Sequence[StripSweep] = (),
    *,
    s_x: Fraction | None = None,
    s_c: Fraction | None = None,
    points: Sequence[tuple[PointSpec, Fraction]] = (),
    sigma: Mapping | None = None,
) -> list[Check]:
    """Exact identities tying the threefold volume to one refinement curve."""
    checks: list[Check] = []
    v0 = vol(vol.domain[0])
    if s_x is not None:
        checks.append(_bounds_check("bounds S_X", s_x, Fraction(0), vol.domain[1]))
    checks.append(Check("vol vanishes at the end", vol(vol.domain[1]) == 0, format_rational(vol(vol.domain[1])), "0"))
    if not strips:
        return checks
    C = strips[0].result.curve

    # vol'(u) = -3 Q(u)^2 on every restriction chamber
    ok = True
    for s in strips:
        piece = vol._piece_at((s.chamber.range[0] + s.chamber.range[1]) / 2)
        if piece.diff("u") != _q_square(lat, s.Q) * -3:
            ok = False
    checks.append(Check("vol' = -3 Q^2", ok))

    fiber_ok, deriv_ok, cert_ok, pos_ok, mono_ok = True, True, True, True, True
    slicing = Fraction(0)
    top_sq = Fraction(0)
    for s in strips:
        res = s.result
        q2 = _q_square(lat, s.Q)
        for a, b, cells in res.pieces():
            fiber = Poly()
            for cell in cells:
                pc, p2 = cell_pc(cell, C), cell_psquare(cell)
                if p2.diff("v") != pc * -2:
                    deriv_ok = False
                for name, n in cell.n_coeffs.items():
                    if n.coeff(0, 1) < 0:
                        mono_ok = False
                uc = (2 * a + b) / 3
                vc = (cell.v_lo(uc) + cell.v_hi(uc)) / 2
                if pc(uc, vc) <= 0:
                    pos_ok = False
                fiber = fiber + integrate_strip(pc, cell.v_lo, cell.v_hi)
                slicing += integrate_interval(integrate_strip(pc, cell.v_lo, cell.v_hi), a, b)
            top = cells[-1]
            top_p2 = cell_psquare(top).subs(v=top.v_hi)
            top_pc = cell_pc(top, C).subs(v=top.v_hi)
            if not (top_p2.is_zero() or top_pc.is_zero()):
                cert_ok = False
            top_sq += integrate_interval(top_p2, a, b)
            if fiber != (q2 - top_p2) * Fraction(1, 2):
                fiber_ok = False
    checks.append(Check("fiber identity int (P.C) dv = (Q^2 - P(t)^2)/2", fiber_ok))
    checks.append(Check("d(P^2)/dv = -2 (P.C)", deriv_ok))
    checks.append(Check("boundary certificate at t(u)", cert_ok))
    checks.append(Check("(P.C) > 0 inside cells", pos_ok))
    checks.append(Check("N coefficients nondecreasing in v", mono_ok))
    checks.append(
        Check(
            "volume slicing int int (P.C) + int P(t)^2 / 2 = vol/6",
            slicing + top_sq / 2 == v0 / 6,
            format_rational(slicing + top_sq / 2),
            format_rational(v0 / 6),
        )
    )

    d_fn = _joined([s.d for s in strips], [s.chamber.range for s in strips])
    t_fn = _joined_pw([s.result.t for s in strips])
    if d_fn is None or t_fn is None:
        checks.append(Check("d and t continuous", False))
    else:
        checks.append(Check("d convex", d_fn.is_convex()))
        checks.append(Check("d + t concave", (d_fn + t_fn).is_concave()))
    if s_c is not None:
        lo, hi = _curve_range(strips)
        checks.append(_bounds_check(f"bounds S(V;{C})", s_c, lo, hi))
    for point, value in points:
        lo, hi = _point_range(strips, point, sigma)
        checks.append(_bounds_check(f"bounds S(W;{point.name})", value, lo, hi))
    return checks


def _joined(polys, ranges):
    breaks = [ranges[0][0]] + [r[1] for r in ranges]
    try:
        return PiecewiseFn(breaks, polys, continuous=True)
    except Discontinuity:
        return None


def _joined_pw(fns: Sequence[PiecewiseFn]):
    breaks = [fns[0].breaks[0]]
    pieces = []
    for f in fns:
        breaks.extend(f.breaks[1:])
        pieces.extend(f.pieces)
    try:
        return PiecewiseFn(breaks, pieces, continuous=True)
    except Discontinuity:
        return None
