"""Divisor classes on a surface given by named curves and a Gram matrix.

Curves may be linearly dependent (the 12 curves of a surface of Picard rank 7,
say), so a class is a coefficient vector and two vectors are the same class
exactly when all their pairings agree.

Two flags matter:

* ``active`` curves generate the Mori cone; nefness is tested against them.
* Of those, the ones with negative self-intersection are *eligible* to enter
  a Zariski support.  A fiber with C^2 = 0 is active but never eligible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np
from typing import Callable, Iterable, Mapping, Sequence

from .errors import InvalidScenario, InvariantViolation, NotPseudoeffective
from .exact import Poly, as_rational, format_rational

__all__ = [
    "CurveLattice",
    "DivClass",
    "ZariskiPair",
    "leading_minors",
    "inverse",
]


def leading_minors(m: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Leading principal minors via fraction-free (Bareiss) elimination."""
    n = len(m)
    a = [list(map(Fraction, row)) for row in m]
    minors = []
    prev = Fraction(1)
    for k in range(n):
        if a[k][k] == 0:
            # the k-th leading minor is zero; later ones need pivoting we
            # refuse to do, since callers only care about the sign pattern.
            minors.append(Fraction(0))
            minors.extend([Fraction(0)] * (n - k - 1))
            return minors
        minors.append(a[k][k])
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return minors


def inverse(m: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Exact Gauss-Jordan inverse; raises ZeroDivisionError when singular."""
    n = len(m)
    a = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class DivClass:
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(as_rational(c) for c in self.coeffs))

    def __len__(self):
        return len(self.coeffs)

    def __add__(self, o: "DivClass") -> "DivClass":
        _same_len(self, o)
        return DivClass(tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    def __sub__(self, o: "DivClass") -> "DivClass":
        _same_len(self, o)
        return DivClass(tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __neg__(self) -> "DivClass":
        return DivClass(tuple(-a for a in self.coeffs))

    def __mul__(self, k) -> "DivClass":
        k = as_rational(k)
        return DivClass(tuple(a * k for a in self.coeffs))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coeffs)


def _lcm_den(xs) -> int:
    out = 1
    for x in xs:
        out = lcm(out, Fraction(x).denominator)
    return out


def _same_len(a, b):
    if len(a) != len(b):
        raise InvalidScenario(f"dimension mismatch: {len(a)} vs {len(b)}")


@dataclass(frozen=True)
class ZariskiPair:
    P: DivClass
    N: DivClass
    support: frozenset[int]


class CurveLattice:
    """Named curves, active flags and a symmetric rational Gram matrix."""

    def __init__(self, curves: Sequence[tuple[str, bool]], gram: Sequence[Sequence]):
        self.names = tuple(str(n) for n, _ in curves)
        self.active_flags = tuple(bool(a) for _, a in curves)
        n = len(self.names)
        if len(set(self.names)) != n:
            raise InvalidScenario("curve names must be unique")
        if len(gram) != n or any(len(r) != n for r in gram):
            raise InvalidScenario(f"Gram matrix must be {n}x{n}")
        self.gram = tuple(tuple(as_rational(x) for x in row) for row in gram)
        for i in range(n):
            for j in range(i):
                if self.gram[i][j] != self.gram[j][i]:
                    raise InvalidScenario(
                        f"Gram matrix not symmetric at ({self.names[i]}, {self.names[j]})"
                    )
        self._index = {name: i for i, name in enumerate(self.names)}
        self.active = tuple(i for i in range(n) if self.active_flags[i])
        self.eligible = tuple(i for i in self.active if self.gram[i][i] < 0)
        self._inv_cache: dict[tuple[int, ...], list[list[Fraction]] | None] = {}
        self._nd_subsets: list[tuple[int, ...]] | None = None
        self._oracle_cache = None
        g_den = _lcm_den(x for row in self.gram for x in row)
        self._int_gram = (g_den, tuple(tuple(int(x * g_den) for x in row) for row in self.gram))

    # -- naming -----------------------------------------------------------
    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise InvalidScenario(f"unknown curve {name!r}") from None

    def indices(self, names: Iterable) -> tuple[int, ...]:
        return tuple(x if isinstance(x, int) else self.index(x) for x in names)

    def divisor(self, coeffs: Mapping[str, object] | Sequence) -> DivClass:
        if isinstance(coeffs, Mapping):
            vec = [Fraction(0)] * len(self)
            for name, c in coeffs.items():
                vec[self.index(name)] += as_rational(c)
            return DivClass(tuple(vec))
        if len(coeffs) != len(self):
            raise InvalidScenario(f"expected {len(self)} coefficients, got {len(coeffs)}")
        return DivClass(tuple(coeffs))

    def basis(self, name: str) -> DivClass:
        return self.divisor({name: 1})

    def describe(self, c: DivClass) -> str:
        out = ""
        for n, x in zip(self.names, c.coeffs):
            if x:
                sign = "-" if x < 0 else "+"
                term = n if abs(x) == 1 else f"{format_rational(abs(x))}*{n}"
                out += f" {sign} {term}" if out else ("-" if x < 0 else "") + term
        return out or "0"

    # -- bilinear form ----------------------------------------------------
    def pairings(self, c: DivClass) -> list[Fraction]:
        """(c . D_j) for every curve D_j."""
        _same_len(c, self.names)
        g_den, g_int = self._int_gram
        den = _lcm_den(c.coeffs)
        nz = [(i, int(x * den)) for i, x in enumerate(c.coeffs) if x]
        scale = den * g_den
        return [Fraction(sum(x * g_int[i][j] for i, x in nz), scale) for j in range(len(self))]

    def pair(self, a: DivClass, b: DivClass) -> Fraction:
        _same_len(a, self.names)
        _same_len(b, self.names)
        return sum((x * y for x, y in zip(self.pairings(a), b.coeffs)), Fraction(0))

    def pair_param(self, a: Sequence[Poly], b: Sequence[Poly]) -> Poly:
        """Pairing of two classes with polynomial coefficients."""
        _same_len(a, self.names)
        _same_len(b, self.names)
        out = Poly()
        g = self.gram
        for i, ai in enumerate(a):
            if ai.is_zero():
                continue
            row = Poly()
            for j, bj in enumerate(b):
                if g[i][j] and not bj.is_zero():
                    row = row + bj * g[i][j]
            out = out + ai * row
        return out

    def same_class(self, a: DivClass, b: DivClass) -> bool:
        return self.pairings(a) == self.pairings(b)

    def is_nef(self, c: DivClass) -> bool:
        pc = self.pairings(c)
        return all(pc[i] >= 0 for i in self.active)

    def is_negative_definite(self, curves: Iterable) -> bool:
        idx = self.indices(curves)
        if not idx:
            return True
        sub = [[self.gram[i][j] for j in idx] for i in idx]
        return all(_sign(m) == (-1) ** (k + 1) for k, m in enumerate(leading_minors(sub)))

    def _inverse(self, support: tuple[int, ...]):
        if support not in self._inv_cache:
            if self.is_negative_definite(support):
                self._inv_cache[support] = inverse([[self.gram[i][j] for j in support] for i in support])
            else:
                self._inv_cache[support] = None
        return self._inv_cache[support]

    # -- Zariski decomposition -------------------------------------------
    def zariski_core(self, b: Sequence, sign: Callable[[object], int] = _sign):
        """Iterative Zariski decomposition on pairing data.

        ``b[j]`` is (X . D_j) for the class X being decomposed.  Values may be
        Fractions or any type closed under subtraction and multiplication by
        Fractions whose order is given by ``sign``.  Returns the sorted
        support, the coefficients of N on it, and (P . D_j) for every curve.
        """
        g = self.gram
        support: tuple[int, ...] = ()
        coeffs: dict[int, object] = {}
        pc = list(b)
        for _ in range(len(self.active) + 1):
            bad = [j for j in self.active if j not in self.eligible and sign(pc[j]) < 0]
            if bad:
                raise NotPseudoeffective(
                    f"negative against the non-negative curve {self.names[bad[0]]}"
                )
            new = [j for j in self.eligible if j not in coeffs and sign(pc[j]) < 0]
            if not new:
                break
            support = tuple(sorted(support + tuple(new)))
            inv = self._inverse(support)
            if inv is None:
                raise NotPseudoeffective(
                    "support {" + ", ".join(self.names[i] for i in support) + "} is not negative definite"
                )
            coeffs = {}
            for r, i in enumerate(support):
                acc = None
                for c, k in enumerate(support):
                    if inv[r][c]:
                        term = b[k] * inv[r][c]
                        acc = term if acc is None else acc + term
                coeffs[i] = acc if acc is not None else b[support[0]] * 0
            pc = []
            for j in range(len(self)):
                x = b[j]
                for i in support:
                    if g[i][j]:
                        x = x - coeffs[i] * g[i][j]
                pc.append(x)
        else:
            raise NotPseudoeffective("iteration cap reached")
        for i in support:
            if sign(coeffs[i]) < 0:
                raise NotPseudoeffective(f"negative coefficient on {self.names[i]}")
        return support, coeffs, pc

    def zariski_decompose(self, c: DivClass) -> ZariskiPair:
        support, coeffs, pc = self.zariski_core(self.pairings(c))
        n_vec = [Fraction(0)] * len(self)
        for i in support:
            n_vec[i] = coeffs[i]
        N = DivClass(tuple(n_vec))
        P = c - N
        # defensive postconditions
        if any(pc[i] < 0 for i in self.active):
            raise InvariantViolation("P is not nef")
        if any(pc[i] != 0 for i in support):
            raise InvariantViolation("P is not orthogonal to the support")
        if any(x < 0 for x in N.coeffs):
            raise InvariantViolation("N has a negative coefficient")
        return ZariskiPair(P, N, frozenset(i for i in support if coeffs[i] != 0))

    # -- exhaustive oracle -----------------------------------------------
    def negative_definite_subsets(self) -> list[tuple[int, ...]]:
        """Every negative-definite subset of eligible curves (depth-first)."""
        if self._nd_subsets is None:
            out: list[tuple[int, ...]] = [()]
            elig = self.eligible

            def grow(cur: tuple[int, ...], start: int):
                for k in range(start, len(elig)):
                    nxt = cur + (elig[k],)
                    if self._inverse(nxt) is not None:
                        out.append(nxt)
                        grow(nxt, k + 1)

            grow((), 0)
            self._nd_subsets = out
        return self._nd_subsets

    def _oracle_table(self):
        """Every nonempty negative-definite support with its inverse cleared of
        denominators, stacked for vectorized sign tests."""
        if self._oracle_cache is None:
            n = len(self)
            g_den = _lcm_den(x for row in self.gram for x in row)
            g_int = [[int(x * g_den) for x in row] for row in self.gram]
            subs, dens, starts, inv_rows, owners = [], [], [], [], []
            for sub in self.negative_definite_subsets():
                if not sub:
                    continue
                inv = self._inverse(sub)
                den = _lcm_den(x for row in inv for x in row)
                starts.append(len(inv_rows))
                for r, row in enumerate(inv):
                    full = [0] * n
                    for k, i in enumerate(sub):
                        full[i] = int(row[k] * den)
                    inv_rows.append(full)
                    owners.append(sub[r])
                subs.append(sub)
                dens.append(den)
            self._oracle_cache = {
                "g_den": g_den,
                "g_int": g_int,
                "subs": subs,
                "dens": dens,
                "starts": np.array(starts, dtype=np.int64),
                "inv": np.array(inv_rows, dtype=np.int64).reshape(len(inv_rows), n),
                "grow": np.array([g_int[i] for i in owners], dtype=np.int64).reshape(len(owners), n),
                "inv_bound": max((sum(abs(x) for x in r) for r in inv_rows), default=0),
                "g_bound": max((abs(x) for r in g_int for x in r), default=0),
                "den_bound": max(dens, default=1),
                "row_count": max((len(sb) for sb in subs), default=0),
            }
        return self._oracle_cache

    def _oracle_candidates(self, bi: list[int]) -> list[int]:
        """Indices of supports passing the sign tests (N >= 0, P nef)."""
        t = self._oracle_table()
        if not t["subs"]:
            return []
        active = list(self.active)
        bmax = max(abs(x) for x in bi)
        a_bound = t["inv_bound"] * bmax
        p_bound = bmax * t["den_bound"] * t["g_den"] + t["row_count"] * a_bound * t["g_bound"]
        if max(a_bound, p_bound) < 2**62:
            b = np.array(bi, dtype=np.int64)
            a = t["inv"] @ b
            a_ok = np.minimum.reduceat(a, t["starts"]) >= 0
            corr = np.add.reduceat(t["grow"] * a[:, None], t["starts"], axis=0)
            dens = np.array(t["dens"], dtype=np.int64)
            p = np.outer(dens * t["g_den"], b) - corr
            p_ok = (p[:, active] >= 0).all(axis=1) if active else np.ones(len(dens), bool)
            return [int(k) for k in np.nonzero(a_ok & p_ok)[0]]
        out = []
        for k, (sub, den) in enumerate(zip(t["subs"], t["dens"])):
            lo = int(t["starts"][k])
            rows = t["inv"][lo : lo + len(sub)].tolist()
            a = [sum(x * y for x, y in zip(row, bi)) for row in rows]
            if any(x < 0 for x in a):
                continue
            if all(
                bi[j] * den * t["g_den"] - sum(a[r] * t["g_int"][i][j] for r, i in enumerate(sub)) >= 0
                for j in active
            ):
                out.append(k)
        return out

    def zariski_oracle(self, c: DivClass) -> ZariskiPair:
        """Try every negative-definite support; keep the valid decompositions.

        Independent of :meth:`zariski_core`: no iteration, no ordering.
        Raises NotPseudoeffective if none is valid and InvariantViolation if
        two valid ones disagree.  Sign tests run on exact integers after
        clearing denominators; survivors are re-solved in Fractions.
        """
        b = self.pairings(c)
        b_den = _lcm_den(b)
        bi = [int(x * b_den) for x in b]
        g = self.gram
        cands: list[tuple[int, ...]] = []
        if all(b[j] >= 0 for j in self.active):
            cands.append(())
        t = self._oracle_table()
        cands += [t["subs"][k] for k in self._oracle_candidates(bi)]
        found: dict[tuple, ZariskiPair] = {}
        for sub in cands:
            inv = self._inverse(sub) if sub else []
            a = [sum((inv[r][k] * b[sub[k]] for k in range(len(sub))), Fraction(0)) for r in range(len(sub))]
            if any(x < 0 for x in a):
                raise InvariantViolation("integer and rational sign tests disagree")
            for j in self.active:
                if b[j] - sum((a[r] * g[i][j] for r, i in enumerate(sub)), Fraction(0)) < 0:
                    raise InvariantViolation("integer and rational sign tests disagree")
            n_vec = [Fraction(0)] * len(self)
            for r, i in enumerate(sub):
                n_vec[i] = a[r]
            key = tuple(n_vec)
            if key not in found:
                N = DivClass(key)
                found[key] = ZariskiPair(c - N, N, frozenset(i for i, x in enumerate(key) if x))
        if not found:
            raise NotPseudoeffective("no negative-definite support gives a valid pair")
        if len(found) > 1:
            raise InvariantViolation("two different valid Zariski decompositions")
        return next(iter(found.values()))

    # -- construction helpers --------------------------------------------
    def to_json(self) -> dict:
        return {
            "curves": [{"name": n, "active": a} for n, a in zip(self.names, self.active_flags)],
            "gram": [[format_rational(x) for x in row] for row in self.gram],
        }

    def __eq__(self, other):
        if not isinstance(other, CurveLattice):
            return NotImplemented
        return (self.names, self.active_flags, self.gram) == (other.names, other.active_flags, other.gram)

    def __hash__(self):
        return hash((self.names, self.active_flags, self.gram))

    def __repr__(self) -> str:
        return f"CurveLattice({len(self)} curves: {', '.join(self.names)})"
