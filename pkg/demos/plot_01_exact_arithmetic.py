"""
Exact polynomials and integrals
===============================

Everything in deltakit is a ``Fraction``.  Polynomials live in two
variables ``u`` and ``v`` and integrate exactly over the strips the
chamber sweep produces.
"""

from fractions import Fraction

from deltakit import DeltaKitError, PiecewiseFn, Poly, integrate_interval, integrate_strip, parse_rational

u, v = Poly.u(), Poly.v()

# Hand-written factored input is accepted and printed in canonical form.
p = Poly.parse("(2 - v)*(4 - v)")
print("P^2 =", p)

# Rationals parse from strings; floats are refused outright.
print(parse_rational("3/7") + parse_rational("-1/14"))
try:
    parse_rational(0.5)
except DeltaKitError as exc:
    print("refused:", exc)

# Integrate v^2 over the strip 0 <= v <= 1 - u, then over u in [0, 1].
inner = integrate_strip(v**2, Poly(), 1 - u)
print("inner =", inner)
print("total =", integrate_interval(inner, 0, 1))  # 1/12

# Piecewise functions of one variable carry their breakpoints with them.
f = PiecewiseFn([0, 1, 2], [8 - u**3, 7 * (2 - u) ** 3])
print(f(Fraction(1, 2)), f(Fraction(3, 2)), f.breaks)
