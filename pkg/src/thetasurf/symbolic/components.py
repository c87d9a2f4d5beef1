"""Rational parametrizations of quartic components."""

from __future__ import annotations

import sympy as sp

from .quartic import x, y

w = sp.Symbol("w")


class ComponentParam:
    """One rational component of a quartic: x(w), y(w) with q(x(w), y(w)) = 0.

    The identity is verified exactly at construction.  ``excluded`` records
    parameter values where the map degenerates (poles of x or y).
    """

    def __init__(self, q, x_of_w, y_of_w, name=None):
        x_expr = sp.cancel(sp.sympify(x_of_w))
        y_expr = sp.cancel(sp.sympify(y_of_w))
        residual = sp.cancel(sp.sympify(q).subs({x: x_expr, y: y_expr}))
        if residual != 0:
            raise ValueError(f"parametrization does not satisfy the quartic: residual {residual}")
        self.q = sp.sympify(q)
        self.x_of_w = x_expr
        self.y_of_w = y_expr
        self.name = name
        poles = set()
        for e in (x_expr, y_expr):
            den = sp.denom(sp.together(e))
            if den.has(w):
                poles.update(sp.roots(sp.Poly(den, w)).keys())
        self.excluded = tuple(sorted(poles, key=sp.default_sort_key))

    def point(self, value):
        return (self.x_of_w.subs(w, value), self.y_of_w.subs(w, value))

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"ComponentParam{tag}(x={self.x_of_w}, y={self.y_of_w})"


def parametrize_line(q, a, b, c, name=None):
    """Component a*x + b*y + c = 0 of q, parametrized by the free coordinate."""
    a, b, c = map(sp.sympify, (a, b, c))
    if b != 0:
        return ComponentParam(q, w, -(a * w + c) / b, name=name)
    if a == 0:
        raise ValueError("not a line")
    return ComponentParam(q, -c / a, w, name=name)


def parametrize_conic(q, conic, point, name=None):
    """Rational parametrization of a conic component through a rational point.

    Lines of slope w through the point cut the conic in one residual point,
    which is rational in w.
    """
    conic = sp.expand(sp.sympify(conic))
    x0, y0 = map(sp.sympify, point)
    if sp.simplify(conic.subs({x: x0, y: y0})) != 0:
        raise ValueError("point is not on the conic")
    t = sp.Symbol("_t")
    restricted = sp.expand(conic.subs({x: x0 + t, y: y0 + w * t}))
    poly = sp.Poly(restricted, t)
    # restricted = t * (c1 + c2 t): residual intersection at t = -c1/c2
    c2 = poly.coeff_monomial(t**2)
    c1 = poly.coeff_monomial(t)
    t_res = sp.cancel(-c1 / c2)
    return ComponentParam(q, sp.cancel(x0 + t_res), sp.cancel(y0 + w * t_res), name=name)
