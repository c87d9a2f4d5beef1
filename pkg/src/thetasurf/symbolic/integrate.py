"""Exact abelian antiderivatives on rational components.

The differential basis pulled back to a rational component is a rational
function of the parameter.  Partial fractions over Q, Q(i) or one real
quadratic extension turn it into a sum of c*log(w - r) terms plus a rational
part; that exact antiderivative is the whole content of the symbolic
pipeline.  Constants of integration are fixed to 0 throughout (they only
translate the surface).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import sympy as sp

from ..errors import UnsupportedFieldExtension
from .components import ComponentParam, w
from .quartic import DifferentialBasis, x, y

s, t = sp.symbols("s t")


@dataclass(frozen=True)
class LogTerm:
    """coeff * log(var - root), exact."""

    coeff: sp.Expr
    root: sp.Expr


@dataclass(frozen=True)
class PartExpr:
    """Antiderivative in one parameter: logs + rational part.

    ``log_scale`` is a multiplicative constant under the exponential: the
    part stands for  sum c_j log(var - r_j) + rational + log(log_scale).
    It shows up when a factor like (1 + a*w) is rewritten as a*(w + 1/a).
    """

    var: sp.Symbol
    logs: tuple = ()
    rational: sp.Expr = sp.Integer(0)
    log_scale: sp.Expr = sp.Integer(1)

    def expr(self):
        total = sp.sympify(self.rational)
        for term in self.logs:
            total += term.coeff * sp.log(self.var - term.root)
        if self.log_scale != 1:
            total += sp.log(self.log_scale)
        return total

    def derivative(self):
        d = sp.diff(self.rational, self.var)
        for term in self.logs:
            d += term.coeff / (self.var - term.root)
        return sp.cancel(sp.together(d))

    def rename(self, new_var):
        return PartExpr(
            var=new_var,
            logs=tuple(LogTerm(c.coeff, c.root) for c in self.logs),
            rational=self.rational.subs(self.var, new_var),
            log_scale=self.log_scale,
        )

    def is_pure_rational(self):
        return not self.logs and self.log_scale == 1


@dataclass(frozen=True)
class LogParametrization:
    """Theta-surface parametrization: three coordinates, each an s-part
    plus a t-part (the translation structure)."""

    coords: tuple  # ((PartExpr_s, PartExpr_t), ...) for X, Y, Z

    def exprs(self):
        return tuple(a.expr() + b.expr() for a, b in self.coords)

    def coordinate(self, k):
        a, b = self.coords[k]
        return a.expr() + b.expr()


def _root_in_tower(root):
    """Accept roots of degree <= 2 over Q; return the discriminant tag."""
    root = sp.nsimplify(root, rational=False)
    if root.is_rational:
        return ("Q", None)
    minimal = sp.minimal_polynomial(root, sp.Symbol("_m"))
    if sp.degree(minimal) > 2:
        raise UnsupportedFieldExtension(f"root {root} has degree {sp.degree(minimal)} over Q")
    disc = sp.discriminant(minimal)
    if disc.is_negative and sp.sqrt(-disc).is_rational:
        return ("Qi", None)
    core = sp.factorint(sp.Rational(disc).p * sp.Rational(disc).q)
    d = sp.Integer(1)
    for p, e in core.items():
        if e % 2:
            d *= p
    return ("Qsqrt", sp.Integer(d))


def partial_fraction_antiderivative(f, var):
    """Exact antiderivative of a rational function of ``var``.

    Returns a PartExpr; raises UnsupportedFieldExtension when a denominator
    root needs more than Q(i) or a single real quadratic extension.
    """
    f = sp.cancel(sp.together(sp.sympify(f)))
    num, den = sp.fraction(f)
    num = sp.Poly(num, var)
    den = sp.Poly(den, var)
    quo, rem = sp.div(num, den)
    rational = sp.integrate(quo.as_expr(), var)

    logs = []
    if not rem.is_zero:
        roots = sp.roots(den)
        if sum(roots.values()) != den.degree():
            raise UnsupportedFieldExtension(
                f"denominator {den.as_expr()} does not split over a quadratic tower")
        sqrt_ds = set()
        for r in roots:
            kind, d = _root_in_tower(r)
            if kind == "Qsqrt":
                sqrt_ds.add(d)
        if len(sqrt_ds) > 1:
            raise UnsupportedFieldExtension(
                f"denominator roots need two distinct real quadratic fields: {sorted(sqrt_ds)}")
        lead = den.LC()
        g = rem.as_expr() / lead
        for r, mult in roots.items():
            # Laurent coefficients of g / prod(var - r_i)^{m_i} at var = r
            shifted = sp.cancel(g / sp.prod(
                [(var - r2) ** m2 for r2, m2 in roots.items() if r2 != r]))
            for j in range(1, mult + 1):
                order = mult - j
                c = sp.cancel(sp.diff(shifted, var, order).subs(var, r) / sp.factorial(order))
                c = sp.radsimp(sp.expand(c))
                if c == 0:
                    continue
                if j == 1:
                    logs.append(LogTerm(coeff=c, root=sp.expand(r)))
                else:
                    rational += -c / ((j - 1) * (var - r) ** (j - 1))
    rational = sp.cancel(sp.together(rational)) if rational != 0 else sp.Integer(0)
    logs.sort(key=lambda lt: sp.default_sort_key((lt.root, lt.coeff)))
    return PartExpr(var=var, logs=tuple(logs), rational=rational)


def pullback_integrand(q, comp: ComponentParam, which: int):
    """Restriction of omega_which to the component, as a function of w.

    Uses the dx-form unless x(w) is constant or q_y vanishes identically on
    the component, in which case dq = 0 lets us switch to the dy-form.
    """
    if which not in (1, 2, 3):
        raise ValueError("which must be 1, 2 or 3")
    basis = DifferentialBasis(q)
    subs = {x: comp.x_of_w, y: comp.y_of_w}
    dxdw = sp.diff(comp.x_of_w, w)
    qy_on = sp.cancel(basis.q_y.subs(subs))
    if dxdw == 0 or qy_on == 0:
        dydw = sp.diff(comp.y_of_w, w)
        qx_on = sp.cancel(basis.q_x.subs(subs))
        if dydw == 0 or qx_on == 0:
            raise ValueError("component degenerates both differential forms")
        numer = (-comp.x_of_w, -comp.y_of_w, sp.Integer(-1))[which - 1]
        return sp.cancel(sp.together(numer / qx_on * dydw))
    numer = (comp.x_of_w, comp.y_of_w, sp.Integer(1))[which - 1]
    return sp.cancel(sp.together(numer / qy_on * dxdw))


def integrate_on_component(q, comp: ComponentParam, which: int) -> PartExpr:
    """Exact antiderivative of omega_which restricted to the component."""
    return partial_fraction_antiderivative(pullback_integrand(q, comp, which), w)


def parametrize_theta_surface(q, comp1: ComponentParam, comp2: ComponentParam) -> LogParametrization:
    """Sum of the two antiderivative triples, in parameters s and t."""
    coords = []
    for which in (1, 2, 3):
        part_s = integrate_on_component(q, comp1, which).rename(s)
        part_t = integrate_on_component(q, comp2, which).rename(t)
        coords.append((part_s, part_t))
    return LogParametrization(coords=tuple(coords))
