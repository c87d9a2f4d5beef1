"""Exponent selection and resultant-based implicitization.

Given the log-parametrization of a theta surface, pick scalars
(alpha, beta, gamma) so that u = exp(alpha X), v = exp(beta Y),
w = exp(gamma Z) are rational in (s, t) -- or square roots of rational
functions when half-integer exponents are allowed -- then eliminate s and t
by resultants, strip spurious factors by exact substitution, and return the
content-1 polynomial Psi(u, v, w).

Purely rational parametrizations (no logs at all) go through
``implicitize_rational``, which eliminates the parameters from
X - X(s,t) = 0 directly, using elementary symmetric coordinates whenever the
parametrization is s <-> t symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy as sp

from ..errors import EliminationOverflow, NotImplicitizable, NotUnitCommensurable
from .integrate import LogParametrization, PartExpr, s, t

u, v, w3 = sp.symbols("u v w", commutative=True)
UVW = (u, v, w3)

DEGREE_CAP = 60


def _part_coeff_unit(coeffs):
    """Classify log coefficients as rational multiples of 1 or of i."""
    rationals, imag = [], []
    for c in coeffs:
        c = sp.nsimplify(sp.expand(c), rational=False)
        if c.is_rational:
            rationals.append(sp.Rational(c))
        else:
            ci = sp.expand(c / sp.I)
            if ci.is_rational:
                imag.append(sp.Rational(ci))
            else:
                raise NotUnitCommensurable(f"log coefficient {c} is neither rational nor i*rational")
    if rationals and imag:
        raise NotUnitCommensurable("coordinate mixes real and imaginary log coefficients")
    if imag:
        return sp.I, imag
    return sp.Integer(1), rationals


def auto_exponents(p: LogParametrization):
    """Smallest-magnitude scalars making exp(alpha X) etc. rational in (s, t).

    Each coordinate's log coefficients must be rational multiples of a single
    unit (1 or i); a nonzero non-log part means no exponent works.  The
    result is deterministic: positive real, or positive-imaginary when the
    unit is i.
    """
    out = []
    for part_s, part_t in p.coords:
        coeffs = [lt.coeff for lt in part_s.logs] + [lt.coeff for lt in part_t.logs]
        for part in (part_s, part_t):
            if sp.cancel(part.rational) != 0:
                raise NotUnitCommensurable(
                    "coordinate has a non-log term; no exponent makes it rational")
        if not coeffs:
            out.append(sp.Integer(1))
            continue
        unit, ratios = _part_coeff_unit(coeffs)
        M = 1
        for r in ratios:
            M = sp.ilcm(M, r.q)
        ints = [abs(int(r * M)) for r in ratios if r]
        G = 0
        for k in ints:
            G = sp.igcd(G, k)
        L = sp.Rational(M, G if G else 1)
        out.append(L * unit)
    return tuple(out)


@dataclass(frozen=True)
class ImplicitEquation:
    """Polynomial Psi(u, v, w) plus the substitution that makes it vanish.

    ``scales`` are unit constants absorbed into the substitution,
    u = scale * exp(alpha X): they encode a translation of the surface
    (integration constants are fixed to 0, so some classical normalizations
    differ from the raw antiderivatives by exactly such a translation).
    """

    psi: sp.Poly
    exponents: tuple
    scales: tuple = (sp.Integer(1), sp.Integer(1), sp.Integer(1))
    irreducible: bool = True

    @property
    def expr(self):
        return self.psi.as_expr()

    def substitution_rule(self):
        a, b, g = self.exponents
        su, sv, sw = self.scales
        return {u: su * sp.exp(a * sp.Symbol("X")), v: sv * sp.exp(b * sp.Symbol("Y")),
                w3: sw * sp.exp(g * sp.Symbol("Z"))}


class _ExpFactorization:
    """exp(alpha * part) as const * prod (var - root)^e with e half-integers."""

    def __init__(self):
        self.const = sp.Integer(1)
        self.powers = {}  # (var, root) -> Rational exponent

    def multiply(self, var, root, e):
        key = (var, sp.expand(root))
        self.powers[key] = self.powers.get(key, sp.Integer(0)) + e
        if self.powers[key] == 0:
            del self.powers[key]

    def integer_part(self):
        expr = self.const
        for (var, root), e in self.powers.items():
            k = sp.floor(e)
            if k:
                expr *= (var - root) ** int(k)
        return sp.cancel(expr)

    def radicand(self):
        expr = sp.Integer(1)
        for (var, root), e in self.powers.items():
            if e - sp.floor(e) != 0:
                expr *= (var - root)
        return sp.expand(expr)

    def half_keys(self):
        return frozenset(k for k, e in self.powers.items() if e - sp.floor(e) != 0)

    def squared(self):
        expr = self.const ** 2
        for (var, root), e in self.powers.items():
            expr *= (var - root) ** int(2 * e)
        return sp.cancel(expr)


def _exp_factorization(part_s: PartExpr, part_t: PartExpr, alpha):
    fac = _ExpFactorization()
    for part in (part_s, part_t):
        if sp.cancel(part.rational) != 0:
            raise NotImplicitizable("coordinate has a non-log term")
        for lt in part.logs:
            e = sp.nsimplify(sp.expand(alpha * lt.coeff), rational=False)
            if not e.is_rational or sp.Rational(e).q not in (1, 2):
                raise NotImplicitizable(
                    f"exponent {alpha} gives non half-integer power {e}")
            fac.multiply(part.var, lt.root, sp.Rational(e))
        if part.log_scale != 1:
            a_int = sp.nsimplify(alpha, rational=False)
            if not a_int.is_rational or sp.Rational(a_int).q != 1:
                raise NotImplicitizable(
                    "multiplicative constant with a non-integer exponent")
            fac.const *= part.log_scale ** int(a_int)
    return fac


def _eliminate(polys, elim_vars):
    """Resultant elimination of elim_vars from a list of polynomial exprs."""
    polys = [sp.expand(p) for p in polys if sp.expand(p) != 0]
    for var in elim_vars:
        with_var = [p for p in polys if p.has(var)]
        without = [p for p in polys if not p.has(var)]
        if not with_var:
            polys = without
            continue
        if len(with_var) == 1:
            raise NotImplicitizable(f"cannot eliminate {var}: only one equation involves it")
        with_var.sort(key=lambda p: sp.degree(p, gen=var))
        pivot = with_var[0]
        new = []
        for q in with_var[1:]:
            r = sp.expand(sp.resultant(pivot, q, var))
            if r == 0:
                # common factor; retry with the gcd removed
                g = sp.gcd(pivot, q)
                r = sp.expand(sp.resultant(sp.cancel(pivot / g), sp.cancel(q / g), var))
            if sp.total_degree(r) > DEGREE_CAP:
                raise EliminationOverflow(
                    f"resultant degree {sp.total_degree(r)} exceeds cap {DEGREE_CAP}")
            if r != 0:
                new.append(r)
        polys = without + new
        if not polys:
            raise NotImplicitizable("elimination collapsed to the zero ideal")
    return polys


def _certify_rational(factor_expr, subs_map):
    return sp.cancel(sp.together(factor_expr.subs(subs_map, simultaneous=True))) == 0


def _certify_half(factor_expr, facs):
    """Exact vanishing test when u, v, w carry half-integer exponents.

    Group the monomials of the factor by the parity class of their combined
    root exponents; two classes differ by a genuine square root, so each
    class sum must cancel on its own as a rational function.
    """
    poly = sp.Poly(factor_expr, *UVW)
    classes = {}
    for monom, coeff in zip(poly.monoms(), poly.coeffs()):
        powers = {}
        const = sp.Integer(1)
        for e_var, fac in zip(monom, facs):
            const *= fac.const ** e_var
            for key, e in fac.powers.items():
                powers[key] = powers.get(key, sp.Integer(0)) + e_var * e
        parity = frozenset(k for k, e in powers.items() if e - sp.floor(e) != 0)
        classes.setdefault(parity, []).append((coeff * const, powers))
    for parity, members in classes.items():
        ref = members[0][1]
        total = sp.Integer(0)
        for coeff, powers in members:
            ratio = sp.Integer(1)
            keys = set(powers) | set(ref)
            for key in keys:
                diff = powers.get(key, 0) - ref.get(key, 0)
                if diff:
                    var, root = key
                    ratio *= (var - root) ** int(diff)
            total += coeff * ratio
        if sp.cancel(sp.together(total)) != 0:
            return False
    return True


def _normalize(poly_expr, field_I):
    """Content 1 and a deterministic leading sign."""
    p = sp.Poly(sp.expand(poly_expr), *UVW, extension=sp.I if field_I else None)
    if p.is_zero:
        raise NotImplicitizable("normalized polynomial is zero")
    prim = p.primitive()[1]
    lc = prim.LC()
    if field_I:
        # rotate by a Gaussian unit so the leading coefficient has
        # positive real part (ties: positive imaginary)
        for unit in (1, -1, sp.I, -sp.I):
            c = sp.expand(lc * unit)
            re, im = sp.re(c), sp.im(c)
            if re > 0 or (re == 0 and im > 0):
                prim = sp.Poly(sp.expand(prim.as_expr() * unit), *UVW,
                               extension=sp.I)
                break
    elif lc < 0:
        prim = sp.Poly(-prim.as_expr(), *UVW)
    return prim


def implicitize(p: LogParametrization, exps=None, scales=None) -> ImplicitEquation:
    """Trivariate Psi with Psi(s1 exp(alpha X), s2 exp(beta Y), s3 exp(gamma Z)) = 0.

    ``exps`` defaults to auto_exponents(p).  Integer exponents give rational
    u, v, w; half-integer exponents are handled by eliminating with their
    squares and certifying factors through the parity decomposition.
    ``scales`` (unit constants, default 1) translate the surface; presets use
    them to land on the classical normalizations.
    """
    if exps is None:
        exps = auto_exponents(p)
    if scales is None:
        scales = (sp.Integer(1),) * 3
    scales = tuple(sp.sympify(c) for c in scales)
    facs = [_exp_factorization(ps, pt, sp.sympify(a))
            for (ps, pt), a in zip(p.coords, exps)]
    for fac, scale in zip(facs, scales):
        fac.const *= scale
    half = any(f.half_keys() for f in facs)
    eqs = []
    for var_uvw, fac in zip(UVW, facs):
        if fac.half_keys():
            rat = fac.squared()
            num, den = sp.fraction(sp.cancel(sp.together(rat)))
            eqs.append(sp.expand(var_uvw**2 * den - num))
        else:
            rat = sp.cancel(fac.integer_part())
            num, den = sp.fraction(sp.cancel(sp.together(rat)))
            eqs.append(sp.expand(var_uvw * den - num))

    candidates = _eliminate(eqs, (t, s))
    field_I = any(e.has(sp.I) for e in candidates) or any(
        fac.const.has(sp.I) or any(r.has(sp.I) for _, r in fac.powers) for fac in facs)

    subs_map = None
    if not half:
        subs_map = {var: sp.cancel(fac.integer_part())
                    for var, fac in zip(UVW, facs)}

    certified = []
    for cand in candidates:
        factors = sp.factor_list(cand, extension=sp.I if field_I else None)
        for fac_expr, _mult in factors[1]:
            if not any(fac_expr.has(var) for var in UVW):
                continue
            if any(fac_expr.has(var) for var in (s, t)):
                continue
            if half:
                ok = _certify_half(fac_expr, facs)
            else:
                ok = _certify_rational(fac_expr, subs_map)
            if ok:
                certified.append(fac_expr)
    if not certified:
        raise NotImplicitizable("no eliminant factor vanishes on the parametrization")
    # distinct certified irreducible factors would each cut out the same
    # surface; keep the one of smallest degree (then fewest terms)
    certified.sort(key=lambda f: (sp.total_degree(f), sp.count_ops(f)))
    psi = _normalize(certified[0], field_I)
    return ImplicitEquation(psi=psi, exponents=tuple(exps), irreducible=True)


# --- purely rational parametrizations (algebraic theta surfaces) -----------

XYZ = sp.symbols("X Y Z")


def _symmetrize_rational(expr):
    """Rewrite a symmetric rational function of (s, t) in e1 = s+t, e2 = st."""
    e1, e2 = sp.symbols("e1 e2")
    num, den = sp.fraction(sp.cancel(sp.together(expr)))
    den_sw = den.subs({s: t, t: s}, simultaneous=True)
    if sp.expand(den - den_sw) != 0:
        num = sp.expand(num * den_sw)
        den = sp.expand(den * den_sw)
    out = []
    for part in (num, den):
        sym, rem = sp.symmetrize(sp.Poly(part, s, t), formal=False)
        if rem != 0:
            return None
        out.append(sym.subs({sp.Symbol("s1"): e1, sp.Symbol("s2"): e2}))
    return out[0], out[1], (e1, e2)


def implicitize_rational(p: LogParametrization) -> sp.Poly:
    """Exact polynomial in (X, Y, Z) vanishing on a log-free parametrization."""
    exprs = []
    for part_s, part_t in p.coords:
        if part_s.logs or part_t.logs or part_s.log_scale != 1 or part_t.log_scale != 1:
            raise NotImplicitizable("parametrization has log terms; use implicitize")
        exprs.append(sp.cancel(part_s.expr() + part_t.expr()))

    symmetric = all(sp.cancel(e - e.subs({s: t, t: s}, simultaneous=True)) == 0
                    for e in exprs)
    eqs, elim = [], (t, s)
    if symmetric:
        rewritten = [_symmetrize_rational(e) for e in exprs]
        if all(r is not None for r in rewritten):
            gens = rewritten[0][2]
            eqs = [sp.expand(var * den - num) for var, (num, den, _) in zip(XYZ, rewritten)]
            elim = gens
    if not eqs:
        eqs = [sp.expand(var * sp.fraction(e)[1] - sp.fraction(e)[0])
               for var, e in zip(XYZ, exprs)]

    candidates = _eliminate(eqs, elim)
    subs_map = dict(zip(XYZ, exprs))
    certified = []
    for cand in candidates:
        for fac_expr, _mult in sp.factor_list(cand)[1]:
            if not any(fac_expr.has(var) for var in XYZ):
                continue
            if any(fac_expr.has(g) for g in elim):
                continue
            if sp.cancel(sp.together(fac_expr.subs(subs_map, simultaneous=True))) == 0:
                certified.append(fac_expr)
    if not certified:
        raise NotImplicitizable("no eliminant factor vanishes on the parametrization")
    certified.sort(key=lambda f: (sp.total_degree(f), sp.count_ops(f)))
    poly = sp.Poly(sp.expand(certified[0]), *XYZ).primitive()[1]
    if poly.LC() < 0:
        poly = sp.Poly(-poly.as_expr(), *XYZ)
    return poly
