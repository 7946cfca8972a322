"""Exact rationals, sparse bivariate polynomials in (u, v), piecewise functions.

Nothing in here touches floating point.  Rationals are ``fractions.Fraction``;
polynomials are sparse maps ``(deg_u, deg_v) -> Fraction`` that never store
zero coefficients.

>>> p = Poly.parse("28 - u^3 + 1/2*(u-1)^3")
>>> str(p)
'55/2 + 3/2*u - 3/2*u^2 - 1/2*u^3'
>>> integrate_interval(Poly.parse("(2-v)*(4-v)"), 1, 2)
Fraction(4, 3)
"""

from __future__ import annotations

import ast
import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import Discontinuity, InvalidScenario

__all__ = [
    "Rational",
    "as_rational",
    "parse_rational",
    "format_rational",
    "Poly",
    "AffineForm",
    "PiecewiseFn",
    "integrate_interval",
    "integrate_strip",
    "integrate_piecewise",
]

Rational = Fraction
Scalar = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^\s*([+-]?)\s*(\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or ``"-p/q"`` (ASCII or U+2212 minus)."""
    if not isinstance(text, str):
        raise InvalidScenario(f"expected a rational string, got {text!r}")
    m = _RATIONAL_RE.match(text.replace("−", "-"))
    if not m:
        raise InvalidScenario(f"malformed rational {text!r}")
    sign, num, den = m.groups()
    if den is not None and int(den) == 0:
        raise InvalidScenario(f"zero denominator in {text!r}")
    q = Fraction(int(num), int(den) if den else 1)
    return -q if sign == "-" else q


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and rational strings. Floats are refused."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def format_rational(q) -> str:
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Poly:
    """Immutable sparse polynomial in u and v with rational coefficients."""

    __slots__ = ("_t", "_h")

    def __init__(self, terms: Mapping[tuple[int, int], Scalar] | None = None):
        t = {}
        if terms:
            for (i, j), c in terms.items():
                if i < 0 or j < 0:
                    raise ValueError("negative exponent")
                c = as_rational(c)
                if c:
                    t[(int(i), int(j))] = c
        self._t = t
        self._h = None

    @classmethod
    def _raw(cls, t: dict) -> "Poly":
        p = cls.__new__(cls)
        p._t = t
        p._h = None
        return p

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        c = as_rational(c)
        return cls._raw({(0, 0): c} if c else {})

    @classmethod
    def u(cls) -> "Poly":
        return cls._raw({(1, 0): Fraction(1)})

    @classmethod
    def v(cls) -> "Poly":
        return cls._raw({(0, 1): Fraction(1)})

    @classmethod
    def lift(cls, x) -> "Poly":
        if isinstance(x, Poly):
            return x
        if isinstance(x, AffineForm):
            return x.to_poly()
        if isinstance(x, str):
            return cls.parse(x)
        return cls.const(x)

    @classmethod
    def parse(cls, text: str) -> "Poly":
        """Parse an arithmetic expression in u, v with rational constants.

        Accepts both canonical output and hand-written factored input such
        as ``"1/2*(u-1)^3"``.  Division is allowed only by constants.
        """
        if not isinstance(text, str):
            raise InvalidScenario(f"expected a polynomial string, got {text!r}")
        src = text.replace("−", "-").replace("^", "**").strip()
        if not src:
            raise InvalidScenario("empty polynomial string")
        try:
            tree = ast.parse(src, mode="eval")
        except SyntaxError as exc:
            raise InvalidScenario(f"malformed polynomial {text!r}") from exc
        return _eval_ast(tree.body, text)

    # -- structure --------------------------------------------------------
    def items(self):
        return self._t.items()

    @property
    def terms(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._t)

    def coeff(self, i: int, j: int = 0) -> Fraction:
        return self._t.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self._t)

    def constant(self) -> Fraction:
        return self._t.get((0, 0), Fraction(0))

    def deg_u(self) -> int:
        return max((i for i, _ in self._t), default=0)

    def deg_v(self) -> int:
        return max((j for _, j in self._t), default=0)

    def total_degree(self) -> int:
        return max((i + j for i, j in self._t), default=0)

    def uses_u(self) -> bool:
        return any(i for i, _ in self._t)

    def uses_v(self) -> bool:
        return any(j for _, j in self._t)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self._t)
        for k, c in other._t.items():
            s = t.get(k, 0) + c
            if s:
                t[k] = s
            else:
                t.pop(k, None)
        return Poly._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({k: -c for k, c in self._t.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            c = Fraction(other)
            if not c:
                return Poly._raw({})
            return Poly._raw({k: a * c for k, a in self._t.items()})
        other = _coerce(other)
        if other is NotImplemented:
            return other
        t: dict = {}
        for (i1, j1), a in self._t.items():
            for (i2, j2), b in other._t.items():
                k = (i1 + i2, j1 + j2)
                t[k] = t.get(k, 0) + a * b
        return Poly._raw({k: c for k, c in t.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("division only by nonzero constants")
            other = other.constant()
        c = as_rational(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self * (1 / c)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out = Poly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._t == other._t
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._t == ({(0, 0): Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._t.items()))
        return self._h

    # -- evaluation and calculus -----------------------------------------
    def __call__(self, u: Scalar = 0, v: Scalar = 0) -> Fraction:
        u = as_rational(u)
        v = as_rational(v)
        total = Fraction(0)
        for (i, j), c in self._t.items():
            total += c * u**i * v**j
        return total

    def subs(self, u=None, v=None) -> "Poly":
        """Compose: replace u and/or v by polynomials (or scalars)."""
        pu = Poly.u() if u is None else Poly.lift(u)
        pv = Poly.v() if v is None else Poly.lift(v)
        out = Poly._raw({})
        cache_u: dict[int, Poly] = {}
        cache_v: dict[int, Poly] = {}
        for (i, j), c in self._t.items():
            if i not in cache_u:
                cache_u[i] = pu**i
            if j not in cache_v:
                cache_v[j] = pv**j
            out = out + cache_u[i] * cache_v[j] * c
        return out

    def diff(self, var: str) -> "Poly":
        t = {}
        for (i, j), c in self._t.items():
            if var == "u" and i:
                t[(i - 1, j)] = c * i
            elif var == "v" and j:
                t[(i, j - 1)] = c * j
        return Poly._raw(t)

    def antiderivative(self, var: str) -> "Poly":
        t = {}
        for (i, j), c in self._t.items():
            if var == "u":
                t[(i + 1, j)] = c / (i + 1)
            else:
                t[(i, j + 1)] = c / (j + 1)
        return Poly._raw(t)

    # -- text -------------------------------------------------------------
    def __str__(self) -> str:
        if not self._t:
            return "0"
        keys = sorted(self._t, key=lambda k: (k[0] + k[1], -k[0]))
        parts = []
        for n, k in enumerate(keys):
            c = self._t[k]
            mono = "*".join(
                f"{name}^{e}" if e > 1 else name
                for name, e in (("u", k[0]), ("v", k[1]))
                if e
            )
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{format_rational(mag)}*{mono}"
            else:
                body = format_rational(mag)
            if n == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


def _coerce(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, AffineForm):
        return x.to_poly()
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return Poly.const(x)
    return NotImplemented


_BINOPS = {ast.Add: "+", ast.Sub: "-", ast.Mult: "*", ast.Div: "/", ast.Pow: "**"}


def _eval_ast(node, text: str) -> Poly:
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        left = _eval_ast(node.left, text)
        right = _eval_ast(node.right, text)
        op = type(node.op)
        if op is ast.Add:
            return left + right
        if op is ast.Sub:
            return left - right
        if op is ast.Mult:
            return left * right
        if op is ast.Div:
            if not right.is_constant() or right.is_zero():
                raise InvalidScenario(f"division by a non-constant in {text!r}")
            return left / right.constant()
        c = right.constant()
        if not right.is_constant() or c.denominator != 1 or c < 0:
            raise InvalidScenario(f"exponent must be a nonnegative integer in {text!r}")
        return left ** int(c)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _eval_ast(node.operand, text)
        return -inner if isinstance(node.op, ast.USub) else inner
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return Poly.const(node.value)
    if isinstance(node, ast.Name) and node.id in ("u", "v"):
        return Poly.u() if node.id == "u" else Poly.v()
    raise InvalidScenario(f"unsupported token in polynomial {text!r}")


class AffineForm:
    """c0 + cu*u + cv*v.  The workhorse of chamber walls and N-coefficients."""

    __slots__ = ("c0", "cu", "cv")

    def __init__(self, c0: Scalar = 0, cu: Scalar = 0, cv: Scalar = 0):
        self.c0 = Fraction(c0)
        self.cu = Fraction(cu)
        self.cv = Fraction(cv)

    @classmethod
    def from_poly(cls, p: Poly) -> "AffineForm":
        if p.total_degree() > 1:
            raise ValueError(f"not affine: {p}")
        return cls(p.coeff(0, 0), p.coeff(1, 0), p.coeff(0, 1))

    def to_poly(self) -> Poly:
        return Poly({(0, 0): self.c0, (1, 0): self.cu, (0, 1): self.cv})

    def __add__(self, o: "AffineForm") -> "AffineForm":
        return AffineForm(self.c0 + o.c0, self.cu + o.cu, self.cv + o.cv)

    def __sub__(self, o: "AffineForm") -> "AffineForm":
        return AffineForm(self.c0 - o.c0, self.cu - o.cu, self.cv - o.cv)

    def __neg__(self) -> "AffineForm":
        return AffineForm(-self.c0, -self.cu, -self.cv)

    def __mul__(self, k) -> "AffineForm":
        return AffineForm(self.c0 * k, self.cu * k, self.cv * k)

    __rmul__ = __mul__

    def __eq__(self, o):
        if not isinstance(o, AffineForm):
            return NotImplemented
        return (self.c0, self.cu, self.cv) == (o.c0, o.cu, o.cv)

    def __hash__(self):
        return hash((self.c0, self.cu, self.cv))

    def __call__(self, u: Scalar = 0, v: Scalar = 0) -> Fraction:
        return self.c0 + self.cu * u + self.cv * v

    def is_zero(self) -> bool:
        return not (self.c0 or self.cu or self.cv)

    def v_line(self) -> Poly | None:
        """The zero set as a graph v = w(u), or None if v does not occur."""
        if not self.cv:
            return None
        return Poly({(0, 0): -self.c0 / self.cv, (1, 0): -self.cu / self.cv})

    def __repr__(self) -> str:
        return f"AffineForm({str(self.to_poly())!r})"


class PiecewiseFn:
    """Univariate piecewise polynomial on [t0, tk]."""

    __slots__ = ("breaks", "pieces", "continuous", "var")

    def __init__(
        self,
        breaks: Iterable[Scalar],
        pieces: Iterable[Poly],
        continuous: bool = True,
        var: str = "u",
    ):
        self.breaks = tuple(as_rational(b) for b in breaks)
        self.pieces = tuple(Poly.lift(p) for p in pieces)
        self.continuous = continuous
        self.var = var
        if len(self.breaks) < 2 or len(self.pieces) != len(self.breaks) - 1:
            raise ValueError("need k+1 breakpoints for k pieces, k >= 1")
        if any(a >= b for a, b in zip(self.breaks, self.breaks[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        other = "v" if var == "u" else "u"
        for p in self.pieces:
            if (p.uses_v() if other == "v" else p.uses_u()):
                raise ValueError(f"piece {p} depends on {other}")
        if continuous:
            for k in range(1, len(self.pieces)):
                x = self.breaks[k]
                left, right = self._at(self.pieces[k - 1], x), self._at(self.pieces[k], x)
                if left != right:
                    raise Discontinuity(
                        f"pieces disagree at {format_rational(x)}: "
                        f"{format_rational(left)} vs {format_rational(right)}"
                    )

    def _at(self, p: Poly, x) -> Fraction:
        return p(u=x) if self.var == "u" else p(v=x)

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self.breaks[0], self.breaks[-1]

    def intervals(self):
        return list(zip(self.breaks, self.breaks[1:], self.pieces))

    def __call__(self, x: Scalar) -> Fraction:
        x = as_rational(x)
        a, b = self.domain
        if not a <= x <= b:
            raise ValueError(f"{format_rational(x)} outside [{format_rational(a)}, {format_rational(b)}]")
        for lo, hi, p in self.intervals():
            if lo <= x < hi:
                return self._at(p, x)
        return self._at(self.pieces[-1], x)

    def integrate(self) -> Fraction:
        return integrate_piecewise(self)

    def is_affine(self) -> bool:
        return all(p.total_degree() <= 1 for p in self.pieces)

    def slopes(self) -> list[Fraction]:
        if not self.is_affine():
            raise ValueError("slopes need affine pieces")
        key = (1, 0) if self.var == "u" else (0, 1)
        return [p.coeff(*key) for p in self.pieces]

    def is_convex(self) -> bool:
        s = self.slopes()
        return all(a <= b for a, b in zip(s, s[1:]))

    def is_concave(self) -> bool:
        s = self.slopes()
        return all(a >= b for a, b in zip(s, s[1:]))

    def vertex_values(self) -> list[Fraction]:
        """Values at every breakpoint from both sides (extrema for affine pieces)."""
        out = []
        for lo, hi, p in self.intervals():
            out += [self._at(p, lo), self._at(p, hi)]
        return out

    def merged(self) -> "PiecewiseFn":
        """Drop breakpoints where the adjacent pieces are the same polynomial."""
        breaks = [self.breaks[0]]
        pieces: list[Poly] = []
        for lo, hi, p in self.intervals():
            if pieces and pieces[-1] == p:
                breaks[-1] = hi
            else:
                pieces.append(p)
                breaks.append(hi)
        return PiecewiseFn(breaks, pieces, self.continuous, self.var)

    def __add__(self, other: "PiecewiseFn") -> "PiecewiseFn":
        if self.domain != other.domain:
            raise ValueError("domains differ")
        bs = sorted(set(self.breaks) | set(other.breaks))
        pieces = []
        for lo, hi in zip(bs, bs[1:]):
            mid = (lo + hi) / 2
            pieces.append(self._piece_at(mid) + other._piece_at(mid))
        return PiecewiseFn(bs, pieces, self.continuous and other.continuous, self.var)

    def _piece_at(self, x) -> Poly:
        for lo, hi, p in self.intervals():
            if lo <= x <= hi:
                return p
        raise ValueError("outside domain")

    def __eq__(self, other):
        if not isinstance(other, PiecewiseFn):
            return NotImplemented
        a, b = self.merged(), other.merged()
        return a.breaks == b.breaks and a.pieces == b.pieces and a.var == b.var

    def __hash__(self):
        m = self.merged()
        return hash((m.breaks, m.pieces, m.var))

    def __repr__(self) -> str:
        body = ", ".join(
            f"[{format_rational(lo)},{format_rational(hi)}]: {p}" for lo, hi, p in self.intervals()
        )
        return f"PiecewiseFn({body})"


def integrate_interval(p: Poly, a: Scalar, b: Scalar) -> Fraction:
    """Exact definite integral of a univariate polynomial (in u or in v)."""
    p = Poly.lift(p)
    a, b = as_rational(a), as_rational(b)
    if a > b:
        raise ValueError("integrate_interval needs a <= b")
    if p.uses_u() and p.uses_v():
        raise ValueError(f"{p} is not univariate")
    var = "v" if p.uses_v() else "u"
    F = p.antiderivative(var)
    if var == "u":
        return F(u=b) - F(u=a)
    return F(v=b) - F(v=a)


def integrate_strip(p: Poly, lo, hi) -> Poly:
    """u -> integral of p(u, v) dv from lo(u) to hi(u), as a polynomial in u."""
    p = Poly.lift(p)
    lo, hi = Poly.lift(lo), Poly.lift(hi)
    if lo.uses_v() or hi.uses_v():
        raise ValueError("strip bounds must not depend on v")
    F = p.antiderivative("v")
    return F.subs(v=hi) - F.subs(v=lo)


def integrate_piecewise(f: PiecewiseFn) -> Fraction:
    total = Fraction(0)
    for lo, hi, p in f.intervals():
        total += integrate_interval(p, lo, hi)
    return total
