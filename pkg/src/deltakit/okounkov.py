"""Okounkov bodies and barycenters, used as independent oracles for S.

A surface body for the flag (C, p) is stored by its boundary functions over
t in [0, tau]: the lower edge ``alpha(t)`` is the order at p of the negative
part restricted to C, and the fiber length is (P(t) . C).  Threefold bodies
are never built; their slice areas Q(u)^2 / 2 carry all the information the
barycenter identities need.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import NotPseudoeffective, ZeroArea
from .exact import PiecewiseFn, Poly, as_rational, format_rational, integrate_interval, integrate_strip
from .lattice import CurveLattice
from .sweep import cell_pc, sweep

__all__ = [
    "OkounkovBody2D",
    "body2d",
    "area",
    "barycenter",
    "check_bounds",
    "slice_barycenter",
    "refinement_barycenter",
]


@dataclass(frozen=True)
class OkounkovBody2D:
    tau: Fraction
    alpha: PiecewiseFn | None
    length: PiecewiseFn | None

    @property
    def t_range(self) -> tuple[Fraction, Fraction]:
        return Fraction(0), self.tau

    def breaks(self) -> tuple[Fraction, ...]:
        if self.length is None:
            return (Fraction(0),)
        return tuple(sorted(set(self.alpha.breaks) | set(self.length.breaks)))

    def vertices(self) -> list[tuple[Fraction, Fraction]]:
        """Boundary polygon, counterclockwise from (0, alpha(0))."""
        if self.length is None:
            return [(Fraction(0), Fraction(0))]
        ts = self.breaks()
        lower = [(t, self.alpha(t)) for t in ts]
        upper = [(t, self.alpha(t) + self.length(t)) for t in reversed(ts)]
        out: list[tuple[Fraction, Fraction]] = []
        for pt in lower + upper:
            if not out or out[-1] != pt:
                out.append(pt)
        if len(out) > 1 and out[0] == out[-1]:
            out.pop()
        return out

    def to_json(self) -> dict:
        return {
            "tau": format_rational(self.tau),
            "vertices": [[format_rational(a), format_rational(b)] for a, b in self.vertices()],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "alpha", "alpha_plus_length"])
        if self.length is not None:
            for t in self.breaks():
                a = self.alpha(t)
                w.writerow([format_rational(t), format_rational(a), format_rational(a + self.length(t))])
        return buf.getvalue()

    def scaled(self, k) -> "OkounkovBody2D":
        k = as_rational(k)
        if self.length is None:
            return self

        def sc(f: PiecewiseFn) -> PiecewiseFn:
            return PiecewiseFn(
                [b * k for b in f.breaks],
                [p.subs(v=Poly.v() / k) * k for p in f.pieces],
                f.continuous,
                f.var,
            )

        return OkounkovBody2D(self.tau * k, sc(self.alpha), sc(self.length))


def body2d(lat: CurveLattice, L_class, C: str, mults: Mapping[str, object] | None = None) -> OkounkovBody2D:
    """Body of a big class L for the flag (C, p); ``mults`` describes p."""
    L = lat.divisor(L_class) if not hasattr(L_class, "coeffs") else L_class
    if lat.pair(L, L) <= 0:
        raise NotPseudoeffective("the class is not big")
    lat.zariski_decompose(L)
    mults = {k: as_rational(x) for k, x in (mults or {}).items()}
    res = sweep(lat, list(L.coeffs), (0, 1), C)
    if len(res.u_breaks) != 2:
        raise AssertionError("constant family produced u-breaks")
    if not res.cells:
        return OkounkovBody2D(Fraction(0), None, None)
    breaks = [Fraction(0)]
    alphas, lengths = [], []
    for cell in res.cells:
        breaks.append(cell.v_hi(0))
        a = Poly()
        for name, m in mults.items():
            if name != C:
                a = a + cell.n_at(name).subs(u=0) * m
        alphas.append(a)
        lengths.append(cell_pc(cell, C).subs(u=0))
    return OkounkovBody2D(
        breaks[-1],
        PiecewiseFn(breaks, alphas, True, var="v"),
        PiecewiseFn(breaks, lengths, True, var="v"),
    )


def _int(p: Poly, a, b) -> Fraction:
    return integrate_interval(p, a, b)


def area(body: OkounkovBody2D) -> Fraction:
    if body.length is None:
        return Fraction(0)
    return sum((_int(p, a, b) for a, b, p in body.length.intervals()), Fraction(0))


def barycenter(body: OkounkovBody2D) -> tuple[Fraction, Fraction]:
    vol = area(body)
    if vol == 0:
        raise ZeroArea("barycenter of an empty body")
    t = Poly.v()
    mt = my = Fraction(0)
    for a, b, length in body.length.intervals():
        alpha = body.alpha._piece_at((a + b) / 2)
        mt += _int(t * length, a, b)
        my += _int(alpha * length + length * length / 2, a, b)
    return mt / vol, my / vol


def check_bounds(body: OkounkovBody2D, S, n: int, r: int = 1) -> bool:
    """U + (tau - U)/(r + n) <= S <= tau - (tau - U)/(r + n), U the lowest t in the body."""
    S = as_rational(S)
    if body.tau == 0:
        return S == 0
    U = Fraction(0)
    gap = (body.tau - U) / (r + n)
    return U + gap <= S <= body.tau - gap


# ---------------------------------------------------------------------------
# threefold oracles

def slice_barycenter(lat: CurveLattice, chambers: Sequence) -> Fraction:
    """First barycenter coordinate of the threefold body, from slice areas Q(u)^2 / 2."""
    num = den = Fraction(0)
    for ch in chambers:
        q = [Poly.lift(x) for x in ch.Q]
        a = lat.pair_param(q, q) / 2
        num += _int(a * Poly.u(), *ch.range)
        den += _int(a, *ch.range)
    if den == 0:
        raise ZeroArea("threefold body has no volume")
    return num / den


def refinement_barycenter(lat: CurveLattice, strips: Sequence, vol) -> Fraction:
    """Second barycenter coordinate: the ord along C averaged over the body."""
    from .sweep import cell_pc as _pc

    total = Fraction(0)
    v = Poly.v()
    for s in strips:
        if not s.d.is_zero():
            total += _int(s.d * lat.pair_param(s.Q, s.Q) / 2, *s.chamber.range)
        for cell in s.result.cells:
            pc = _pc(cell, s.result.curve)
            total += _int(integrate_strip(pc * v, cell.v_lo, cell.v_hi), *cell.u_range)
    v0 = vol(vol.domain[0]) if isinstance(vol, PiecewiseFn) else as_rational(vol)
    return 6 * total / v0
