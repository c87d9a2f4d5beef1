"""Exact plane quartics and their holomorphic differential basis."""

from __future__ import annotations

import sympy as sp

from ..errors import VariableDivides

x, y, z = sp.symbols("x y z")


class PlaneQuartic:
    """Squarefree ternary quartic with exact coefficients.

    Accepts either a homogeneous degree-4 expression in (x, y, z) or a
    coefficient map {(i, j, k): value} with i+j+k = 4.  Coefficients may be
    rational, Gaussian rational, or rational in a free parameter (the conic
    pencil uses lambda).
    """

    def __init__(self, source):
        if isinstance(source, dict):
            expr = sp.Integer(0)
            for (i, j, k), c in source.items():
                if i + j + k != 4:
                    raise ValueError(f"exponent {(i, j, k)} does not sum to 4")
                expr += sp.sympify(c) * x**i * y**j * z**k
        else:
            expr = sp.expand(sp.sympify(source))
        poly = sp.Poly(expr, x, y, z)
        if not poly.is_homogeneous or poly.total_degree() != 4:
            raise ValueError("defining polynomial must be homogeneous of degree 4")
        g = sp.gcd(sp.gcd(poly.diff(x).as_expr(), poly.diff(y).as_expr()),
                   sp.gcd(poly.diff(z).as_expr(), expr))
        if sp.degree(sp.gcd(g, expr), gen=x) > 0 or sp.degree(sp.gcd(g, expr), gen=y) > 0 \
                or sp.degree(sp.gcd(g, expr), gen=z) > 0:
            raise ValueError("quartic is not squarefree")
        self.expr = expr
        self.poly = poly

    @property
    def coeffs(self):
        """Exponent map {(i, j, k): coefficient}."""
        return {tuple(m): c for m, c in zip(self.poly.monoms(), self.poly.coeffs())}

    def dehomogenized(self, variable=z):
        return dehomogenize(self, variable)

    def __repr__(self):
        return f"PlaneQuartic({self.expr})"


def dehomogenize(Q: PlaneQuartic, variable=z):
    """Set one projective coordinate to 1; error if it divides the quartic."""
    if variable not in (x, y, z):
        raise ValueError("variable must be one of x, y, z")
    if sp.expand(Q.expr.subs(variable, 0)) == 0:
        raise VariableDivides(f"{variable} divides the quartic")
    return sp.expand(Q.expr.subs(variable, 1))


class DifferentialBasis:
    """The basis (x/q_y, y/q_y, 1/q_y) dx and its dy-form counterpart.

    On the curve dq = q_x dx + q_y dy = 0, so the two forms agree; which one
    is usable on a given component depends on which partial survives there.
    """

    def __init__(self, q):
        self.q = sp.expand(q)
        self.q_x = sp.diff(self.q, x)
        self.q_y = sp.diff(self.q, y)
        self.dx_form = (x / self.q_y, y / self.q_y, 1 / self.q_y)
        self.dy_form = (-x / self.q_x, -y / self.q_x, -1 / self.q_x)


def differential_basis(q) -> DifferentialBasis:
    """Both exact forms of the size-3 differential basis of q(x, y)."""
    return DifferentialBasis(q)
