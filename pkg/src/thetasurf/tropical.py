"""Tropical degenerations: dual graphs, Delaunay sets, degenerate theta sums.

A rational nodal quartic degenerates the Riemann theta function to a finite
exponential sum.  The combinatorics live in the integer Riemann matrix
B = Omega Omega^T of the dual graph and the Delaunay set of a Voronoi vertex
a: the lattice points n with a^T B a = (a-n)^T B (a-n).  All comparisons in
this module are exact big-rational arithmetic; there is no epsilon anywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence

import numpy as np

from .convention import extended_workprec, precision_mode
from .errors import NotInVoronoiCell, RankDeficient
from .theta import RiemannMatrix, theta_eval


def _rank_over_Q(rows):
    """Rank of an integer matrix by fraction-free Gaussian elimination."""
    m = [[Fraction(v) for v in row] for row in rows]
    rank, col = 0, 0
    n_rows, n_cols = len(m), len(m[0])
    while rank < n_rows and col < n_cols:
        piv = next((r for r in range(rank, n_rows) if m[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(rank + 1, n_rows):
            f = m[r][col] / m[rank][col]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        col += 1
    return rank


@dataclass(frozen=True)
class DualGraph:
    """Dual graph of a rational nodal quartic with an oriented cycle basis.

    ``edges`` are ordered pairs (tail, head); self loops are allowed and have
    zero boundary.  ``cycle_basis`` has one row per basis cycle, one column
    per edge.
    """

    vertices: tuple
    edges: tuple
    cycle_basis: tuple

    def __post_init__(self):
        verts = tuple(self.vertices)
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        omega = tuple(tuple(int(c) for c in row) for row in self.cycle_basis)
        if len(omega) != 3:
            raise RankDeficient("cycle basis must have exactly 3 rows")
        if any(len(row) != len(edges) for row in omega):
            raise RankDeficient("cycle rows must have one entry per edge")
        index = {v: i for i, v in enumerate(range(len(verts)))}
        for row in omega:
            bnd = [0] * len(verts)
            for coeff, (u, v) in zip(row, edges):
                bnd[index[v]] += coeff
                bnd[index[u]] -= coeff
            if any(bnd):
                raise RankDeficient(f"cycle row {row} is not in the kernel of the boundary map")
        if _rank_over_Q(omega) != 3:
            raise RankDeficient("cycle rows are linearly dependent")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "cycle_basis", omega)


@dataclass(frozen=True)
class TropicalRiemannMatrix:
    """Symmetric positive-definite integer 3x3 matrix."""

    entries: tuple

    def __post_init__(self):
        m = tuple(tuple(int(v) for v in row) for row in self.entries)
        if len(m) != 3 or any(len(r) != 3 for r in m):
            raise ValueError("expected a 3x3 integer matrix")
        if any(m[i][j] != m[j][i] for i in range(3) for j in range(3)):
            raise ValueError("matrix is not symmetric")
        minors = (m[0][0],
                  m[0][0] * m[1][1] - m[0][1] * m[1][0],
                  _det3(m))
        if any(d <= 0 for d in minors):
            raise ValueError("matrix is not positive definite")
        object.__setattr__(self, "entries", m)

    def quadratic(self, v):
        """v^T B v in exact arithmetic."""
        m = self.entries
        return sum(v[i] * m[i][j] * v[j] for i in range(3) for j in range(3))

    def as_array(self):
        return np.array(self.entries, dtype=float)


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def riemann_matrix_from_graph(g: DualGraph) -> TropicalRiemannMatrix:
    """B = Omega Omega^T of the oriented cycle basis, exact integers."""
    om = g.cycle_basis
    entries = [[sum(om[i][k] * om[j][k] for k in range(len(om[0]))) for j in range(3)]
               for i in range(3)]
    return TropicalRiemannMatrix(tuple(map(tuple, entries)))


@dataclass(frozen=True)
class DelaunayData:
    """Voronoi vertex a together with its Delaunay set."""

    a: tuple
    dset: tuple

    @property
    def is_vertex(self):
        """True when the Delaunay set spans 3 dimensions affinely."""
        pts = self.dset
        diffs = [[p[i] - pts[0][i] for i in range(3)] for p in pts[1:]]
        return len(pts) >= 4 and _rank_over_Q(diffs) == 3


def delaunay_set(B: TropicalRiemannMatrix, a: Sequence) -> DelaunayData:
    """All n in Z^3 with a^T B a = (a-n)^T B (a-n), by exact enumeration.

    The search box is derived from a^T B a and an exact lower bound on the
    smallest eigenvalue of B (1/trace(B^{-1})), so no solution can be missed.
    Raises NotInVoronoiCell if some n is strictly closer to a than the origin.
    """
    if not isinstance(B, TropicalRiemannMatrix):
        B = TropicalRiemannMatrix(tuple(map(tuple, B)))
    av = tuple(Fraction(x) for x in a)
    r2 = B.quadratic(av)
    # lambda_min >= 1/trace(B^{-1}); ||a-n||_B^2 <= r2 forces the box below.
    det = _det3(B.entries)
    m = B.entries
    adj_diag = (m[1][1] * m[2][2] - m[1][2] * m[2][1],
                m[0][0] * m[2][2] - m[0][2] * m[2][0],
                m[0][0] * m[1][1] - m[0][1] * m[1][0])
    trace_inv = Fraction(sum(adj_diag), det)
    bound2 = r2 * trace_inv
    width = Fraction(isqrt(bound2.numerator * bound2.denominator), bound2.denominator) + 1
    hits = []
    for n in itertools.product(*[
            range(int(av[d] - width) - 1, int(av[d] + width) + 2) for d in range(3)]):
        diff = tuple(av[d] - n[d] for d in range(3))
        val = B.quadratic(diff)
        if val < r2:
            raise NotInVoronoiCell(
                f"lattice point {n} is strictly closer to a={tuple(map(str, av))}")
        if val == r2:
            hits.append(tuple(n))
    return DelaunayData(a=av, dset=tuple(sorted(hits)))


@dataclass(frozen=True)
class DegenerateTheta:
    """Finite theta sum: terms (n, A_n) with A_n = e(-n^T B0 n / 2)."""

    terms: tuple   # ((n, A_n), ...) sorted by n
    B0: tuple      # 3x3 complex, symmetric

    def coefficient(self, n):
        for m, c in self.terms:
            if m == tuple(n):
                return c
        raise KeyError(n)


def _check_symmetric_3x3(M):
    M = np.asarray(M, dtype=complex)
    if M.shape != (3, 3) or not (M == M.T).all():
        raise ValueError("B0 must be an exactly symmetric 3x3 matrix")
    return M


def degenerate_theta(B: TropicalRiemannMatrix, a: Sequence, B0) -> DegenerateTheta:
    """Degenerate theta equation supported on the Delaunay set of (B, a)."""
    B0 = _check_symmetric_3x3(B0)
    data = delaunay_set(B, a)
    terms = []
    for n in data.dset:
        nv = np.array(n, dtype=float)
        A_n = complex(np.exp(-np.pi * (nv @ B0 @ nv)))
        terms.append((n, A_n))
    return DegenerateTheta(terms=tuple(terms), B0=tuple(map(tuple, B0)))


def _eval_degenerate_mp(dt: DegenerateTheta, x):
    # Coefficients are recomputed from B0 at working precision; the stored
    # A_n are double-rounded and would floor the residual near 1e-16.
    import mpmath
    with extended_workprec():
        B0 = [[mpmath.mpc(dt.B0[i][j]) for j in range(3)] for i in range(3)]
        total = mpmath.mpc(0)
        for n, _ in dt.terms:
            q = mpmath.fsum(n[i] * B0[i][j] * n[j] for i in range(3) for j in range(3))
            lin = mpmath.fsum(mpmath.mpc(complex(x[d])) * n[d] for d in range(3))
            total += mpmath.exp(-mpmath.pi * q + 2j * mpmath.pi * lin)
        return total


def eval_degenerate(dt: DegenerateTheta, x) -> complex:
    """sum_n A_n e(i n^T x), evaluated termwise."""
    x = np.asarray(x, dtype=complex)
    if precision_mode() == "extended":
        return complex(_eval_degenerate_mp(dt, x))
    total = 0j
    for n, A in dt.terms:
        total += A * np.exp(2j * np.pi * complex(np.array(n) @ x))
    return complex(total)


def degeneration_residual(B: TropicalRiemannMatrix, a, B0, x, t: float,
                          tol: float) -> float:
    """|theta(x - i t B a, tB + B0) - eval_degenerate| at one point.

    Theorem-level statement: this tends to 0 as t grows; the tests check the
    decrease, this function just measures it.  In extended mode the
    difference is taken before any rounding to double, so residuals far
    below 1e-16 are observable.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    B0 = _check_symmetric_3x3(B0)
    if not isinstance(B, TropicalRiemannMatrix):
        B = TropicalRiemannMatrix(tuple(map(tuple, B)))
    Barr = B.as_array()
    Bt = RiemannMatrix(t * Barr + B0)
    a_frac = [Fraction(v) for v in a]
    x = np.asarray(x, dtype=complex)
    dt_sum = degenerate_theta(B, a, B0)
    if precision_mode() == "extended":
        from .theta import theta_eval_mp
        import mpmath
        with extended_workprec():
            # B a is exact rational; the shift happens at working precision
            # so the finite sum and the theta series see the same argument.
            Ba = [sum(Fraction(B.entries[d][j]) * a_frac[j] for j in range(3))
                  for d in range(3)]
            shifted_mp = [mpmath.mpc(complex(x[d]))
                          - 1j * mpmath.mpf(t) * mpmath.mpf(Ba[d].numerator) / Ba[d].denominator
                          for d in range(3)]
            diff = theta_eval_mp(shifted_mp, Bt, tol) - _eval_degenerate_mp(dt_sum, x)
            return float(mpmath.fabs(diff))
    av = np.array([float(v) for v in a_frac])
    shifted = x - 1j * t * (Barr @ av)
    full = theta_eval(shifted, Bt, tol)
    finite = eval_degenerate(dt_sum, x)
    return abs(full - finite)


# --- the five preset dual graphs -------------------------------------------
#
# Vertex/edge data chosen so the printed cycle-basis rows are genuine cycles;
# self loops record nodes of a component.

GRAPH_PRESETS = {
    "rational quartic": DualGraph(
        vertices=("Q",),
        edges=((0, 0), (0, 0), (0, 0)),
        cycle_basis=((1, 0, 0), (0, 1, 0), (0, 0, 1))),
    "cubic+line": DualGraph(
        vertices=("cubic", "line"),
        edges=((0, 1), (0, 1), (0, 1), (0, 0)),
        cycle_basis=((1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 0, 1))),
    "2 conics": DualGraph(
        vertices=("conic1", "conic2"),
        edges=((0, 1), (0, 1), (0, 1), (0, 1)),
        cycle_basis=((1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1))),
    "conic+2lines": DualGraph(
        vertices=("conic", "line1", "line2"),
        edges=((0, 1), (0, 2), (1, 0), (1, 2), (2, 0)),
        cycle_basis=((1, 0, 1, 0, 0), (-1, 1, 0, -1, 0), (0, -1, 0, 0, -1))),
    "4 lines": DualGraph(
        vertices=("l1", "l2", "l3", "l4"),
        edges=((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)),
        cycle_basis=((1, -1, 0, 1, 0, 0), (-1, 0, 1, 0, -1, 0), (0, 1, -1, 0, 0, 1))),
}

# Reference quadratic forms (the "Form" column): the five inequivalent
# positive unimodular-zonotope lattices in rank 3.
FORM_PRESETS = {
    "rational quartic": ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    "cubic+line": ((2, -1, 0), (-1, 2, 0), (0, 0, 1)),
    "2 conics": ((2, -1, 0), (-1, 2, -1), (0, -1, 2)),
    "conic+2lines": ((2, -1, 0), (-1, 3, -1), (0, -1, 2)),
    "4 lines": ((3, -1, -1), (-1, 3, -1), (-1, -1, 3)),
}

# Voronoi-vertex table: (type, a, expected Delaunay set).
DELAUNAY_TABLE = (
    ("4 lines", (Fraction(3, 4), Fraction(1, 2), Fraction(1, 4)),
     ((0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1))),
    ("conic+2lines", (Fraction(3, 4), Fraction(1, 2), Fraction(1, 4)),
     ((0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1))),
    ("conic+2lines", (Fraction(5, 8), Fraction(1, 4), Fraction(5, 8)),
     ((0, 0, 0), (0, 0, 1), (1, 0, 0), (1, 0, 1), (1, 1, 1))),
    ("2 conics", (Fraction(3, 4), Fraction(1, 2), Fraction(1, 4)),
     ((0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1))),
    ("2 conics", (Fraction(1, 2), Fraction(1), Fraction(1, 2)),
     ((0, 0, 0), (0, 1, 0), (0, 1, 1), (1, 1, 0), (1, 1, 1), (1, 2, 1))),
    ("cubic+line", (Fraction(2, 3), Fraction(1, 3), Fraction(1, 2)),
     ((0, 0, 0), (0, 0, 1), (1, 0, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1))),
    ("rational quartic", (Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)),
     tuple(sorted(itertools.product((0, 1), repeat=3)))),
)


def preset_matrix(name: str) -> TropicalRiemannMatrix:
    return TropicalRiemannMatrix(FORM_PRESETS[name])


# Scherk's surface as a degeneration (conic + 2 lines row with a purely
# imaginary B0); x_of carries real (X, Y, Z) to the theta argument.
SCHERK_B0 = ((-1j, 0, 0), (0, 1j, 0), (0, 0, -1j))
SCHERK_A = (Fraction(3, 4), Fraction(1, 2), Fraction(1, 4))


def scherk_theta_argument(X, Y, Z):
    """x = (2X, -X+Y-iZ, -2Y) / (2 pi) for the Scherk degeneration."""
    return np.array([2.0 * X, -X + Y - 1j * Z, -2.0 * Y], dtype=complex) / (2.0 * np.pi)
