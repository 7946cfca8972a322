"""Parametric Zariski chambers of Q(u) - v*C over a strip u in [u0, u1].

Because the Gram block of a fixed support is constant, every N-coefficient
and every pairing (P . D) is affine in (u, v).  The sweep therefore works
with ``AffineForm`` values throughout:

1. at a fixed u*, walk upward in v.  At each wall the next support comes from
   the Zariski iteration run with lexicographic signs at (u*, v + 0), so no
   epsilon is ever chosen numerically;
2. every cell boundary is the zero line of one of these forms.  The v-stack
   at u* persists on a u-interval as long as no constraint line of a cell
   crosses that cell's bottom or top line, so the interval is split at those
   crossings and each piece is re-derived from its own midpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateFamily, InvariantViolation, NotNefInput, NotPseudoeffective
from .exact import AffineForm, PiecewiseFn, Poly, as_rational, format_rational
from .lattice import CurveLattice

__all__ = ["SupportCell", "SweepResult", "sweep", "cell_pc", "cell_psquare"]

_V = AffineForm(0, 0, 1)
_MAX_DEPTH = 64


@dataclass(frozen=True)
class SupportCell:
    support: tuple[str, ...]
    n_coeffs: dict[str, Poly]
    p_class: tuple[Poly, ...]
    u_range: tuple[Fraction, Fraction]
    v_lo: Poly
    v_hi: Poly
    names: tuple[str, ...] = field(repr=False)
    pc: tuple[Poly, ...] = field(repr=False)
    x_class: tuple[Poly, ...] = field(repr=False)

    def contains(self, u, v, *, strict: bool = True) -> bool:
        a, b = self.u_range
        lo, hi = self.v_lo(u), self.v_hi(u)
        if strict:
            return a < u < b and lo < v < hi
        return a <= u <= b and lo <= v <= hi

    def n_at(self, name: str) -> Poly:
        return self.n_coeffs.get(name, Poly())


@dataclass(frozen=True)
class SweepResult:
    curve: str
    interval: tuple[Fraction, Fraction]
    cells: tuple[SupportCell, ...]
    u_breaks: tuple[Fraction, ...]
    t: PiecewiseFn
    d: PiecewiseFn

    def pieces(self):
        """Yield (u_lo, u_hi, cells of that piece, bottom to top)."""
        for a, b in zip(self.u_breaks, self.u_breaks[1:]):
            yield a, b, [c for c in self.cells if c.u_range == (a, b)]

    def locate(self, u, v) -> list[SupportCell]:
        return [c for c in self.cells if c.contains(u, v)]

    def table(self) -> list[dict]:
        rows = []
        for c in self.cells:
            rows.append(
                {
                    "u": [format_rational(c.u_range[0]), format_rational(c.u_range[1])],
                    "v": [str(c.v_lo), str(c.v_hi)],
                    "support": list(c.support),
                    "N": {k: str(p) for k, p in c.n_coeffs.items()},
                    "P": [str(p) for p in c.p_class],
                    "P2": str(cell_psquare(c)),
                    "PC": str(cell_pc(c, self.curve)),
                }
            )
        return rows


def cell_pc(cell: SupportCell, curve: str) -> Poly:
    """(P(u, v) . C) on the cell, an affine polynomial."""
    return cell.pc[cell.names.index(curve)]


def cell_psquare(cell: SupportCell) -> Poly:
    """(P(u, v))^2 on the cell.  Uses P^2 = P . X since P . N = 0."""
    out = Poly()
    for x, p in zip(cell.x_class, cell.pc):
        if not x.is_zero() and not p.is_zero():
            out = out + x * p
    return out


# ---------------------------------------------------------------------------
# internals

@dataclass
class _Raw:
    support: tuple[int, ...]
    coeffs: dict
    pc: list
    lo: AffineForm
    hi: AffineForm


def _lex_sign(u, v):
    def sign(f: AffineForm) -> int:
        x = f.c0 + f.cu * u + f.cv * v
        if x:
            return 1 if x > 0 else -1
        return (f.cv > 0) - (f.cv < 0)

    return sign


def _pairing_forms(lat: CurveLattice, q: Sequence[Poly], c: int) -> list[AffineForm]:
    g = lat.gram
    n = len(lat)
    q0 = [p.coeff(0, 0) for p in q]
    q1 = [p.coeff(1, 0) for p in q]
    out = []
    for j in range(n):
        out.append(
            AffineForm(
                sum((q0[i] * g[i][j] for i in range(n) if q0[i]), Fraction(0)),
                sum((q1[i] * g[i][j] for i in range(n) if q1[i]), Fraction(0)),
                -g[c][j],
            )
        )
    return out


def _stack_at(lat: CurveLattice, b: list[AffineForm], u) -> list[_Raw]:
    cells: list[_Raw] = []
    v = Fraction(0)
    lo = _V
    for _ in range(4 * 2 ** min(len(lat.eligible), 12) + 8):
        try:
            support, coeffs, pc = lat.zariski_core(b, _lex_sign(u, v))
        except NotPseudoeffective:
            return cells
        best = None
        forms = [coeffs[i] for i in support]
        forms += [pc[j] for j in lat.active if j not in coeffs]
        for f in forms:
            if f.cv < 0:
                r = -(f.c0 + f.cu * u) / f.cv
                if r <= v:
                    raise InvariantViolation("wall behind the sweep front")
                if best is None or r < best[0]:
                    best = (r, f)
        if best is None:
            raise DegenerateFamily("the family never leaves the pseudoeffective cone")
        cells.append(_Raw(support, coeffs, pc, lo, best[1]))
        v, lo = best
    raise InvariantViolation("too many walls in one vertical line")


def _crossing(f: AffineForm, g: AffineForm):
    det = f.cu * g.cv - f.cv * g.cu
    if not det:
        return None
    return (g.c0 * f.cv - f.c0 * g.cv) / det


def _breakpoints(stack: list[_Raw], lat: CurveLattice, a, b) -> set[Fraction]:
    out: set[Fraction] = set()
    for cell in stack:
        lines = [cell.lo, cell.hi] + [cell.coeffs[i] for i in cell.support]
        lines += [cell.pc[j] for j in lat.active if j not in cell.coeffs]
        for f in lines:
            if f.cv == 0:
                if f.cu:
                    r = -f.c0 / f.cu
                    if a < r < b:
                        out.add(r)
                continue
            for g in (cell.lo, cell.hi):
                r = _crossing(f, g)
                if r is not None and a < r < b:
                    out.add(r)
    return out


def _signature(stack: list[_Raw], names) -> tuple:
    sig = []
    for c in stack:
        sig.append(
            (
                c.support,
                c.lo.v_line() if c.lo is not _V else Poly(),
                c.hi.v_line(),
                tuple(c.coeffs[i] for i in c.support),
            )
        )
    return tuple(sig)


def sweep(
    lat: CurveLattice,
    Q: Sequence,
    interval: tuple,
    C: str,
    d=None,
) -> SweepResult:
    """Tile {(u, v): u in interval, 0 <= v <= t(u)} by Zariski chambers of Q(u) - vC.

    ``Q`` is a coefficient vector of polynomials affine in u; ``d`` is the
    coefficient of C split off the incoming negative part (default 0), carried
    through only so that results are self-describing.
    """
    u0, u1 = (as_rational(x) for x in interval)
    if u0 >= u1:
        raise ValueError("empty sweep interval")
    q = [Poly.lift(p) for p in Q]
    if len(q) != len(lat):
        raise ValueError("family has the wrong number of coefficients")
    for p in q:
        if p.uses_v() or p.deg_u() > 1:
            raise ValueError(f"family coefficient {p} is not affine in u")
    c = lat.index(C)
    for uu in (u0, u1):
        pcs = [sum((p(u=uu) * lat.gram[i][j] for i, p in enumerate(q)), Fraction(0)) for j in range(len(lat))]
        if any(pcs[j] < 0 for j in lat.active):
            raise NotNefInput(f"family is not nef at u = {format_rational(uu)}")
    b = _pairing_forms(lat, q, c)

    pieces: list[tuple[Fraction, Fraction, list[_Raw]]] = []

    def refine(a, bb, depth):
        if depth > _MAX_DEPTH:
            raise InvariantViolation("u-subdivision did not terminate")
        stack = _stack_at(lat, b, (a + bb) / 2)
        cuts = sorted(_breakpoints(stack, lat, a, bb))
        if not cuts:
            pieces.append((a, bb, stack))
            return
        pts = [a] + cuts + [bb]
        for lo, hi in zip(pts, pts[1:]):
            refine(lo, hi, depth + 1)

    refine(u0, u1, 0)

    # safety net: the stack must look the same away from the midpoint
    for a, bb, stack in pieces:
        probe = _stack_at(lat, b, a + (bb - a) / 3)
        if _signature(probe, lat.names) != _signature(stack, lat.names):
            raise InvariantViolation(
                f"chamber stack not constant on [{format_rational(a)}, {format_rational(bb)}]"
            )

    merged: list[list] = []
    for a, bb, stack in pieces:
        sig = _signature(stack, lat.names)
        if merged and merged[-1][3] == sig:
            merged[-1][1] = bb
        else:
            merged.append([a, bb, stack, sig])

    v_poly = Poly.v()
    x_class = tuple(q[i] - (v_poly if i == c else 0) for i in range(len(lat)))
    cells: list[SupportCell] = []
    t_pieces: list[Poly] = []
    breaks = [u0]
    for a, bb, stack, _ in merged:
        breaks.append(bb)
        top = Poly()
        for raw in stack:
            v_lo = raw.lo.v_line() if raw.lo is not _V else Poly()
            v_hi = raw.hi.v_line()
            if v_lo == v_hi:
                continue
            n_coeffs = {lat.names[i]: raw.coeffs[i].to_poly() for i in raw.support}
            p_class = tuple(
                x_class[i] - (n_coeffs[lat.names[i]] if i in raw.coeffs else 0) for i in range(len(lat))
            )
            cells.append(
                SupportCell(
                    support=tuple(lat.names[i] for i in raw.support),
                    n_coeffs=n_coeffs,
                    p_class=p_class,
                    u_range=(a, bb),
                    v_lo=v_lo,
                    v_hi=v_hi,
                    names=lat.names,
                    pc=tuple(f.to_poly() for f in raw.pc),
                    x_class=x_class,
                )
            )
            top = v_hi
        t_pieces.append(top)
    try:
        t = PiecewiseFn(breaks, t_pieces, continuous=True)
    except ValueError as exc:
        raise DegenerateFamily(f"t(u) is discontinuous: {exc}") from exc
    d_poly = Poly.lift(d if d is not None else 0)
    d_fn = PiecewiseFn([u0, u1], [d_poly], continuous=True)
    return SweepResult(
        curve=C,
        interval=(u0, u1),
        cells=tuple(cells),
        u_breaks=tuple(breaks),
        t=t,
        d=d_fn,
    )
