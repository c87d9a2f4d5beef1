"""Tropical module: graph presets, Delaunay sets, degenerate theta sums."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from thetasurf.errors import NotInVoronoiCell, RankDeficient
from thetasurf.tropical import (
    DELAUNAY_TABLE,
    FORM_PRESETS,
    GRAPH_PRESETS,
    SCHERK_A,
    SCHERK_B0,
    DualGraph,
    TropicalRiemannMatrix,
    degenerate_theta,
    degeneration_residual,
    delaunay_set,
    eval_degenerate,
    preset_matrix,
    riemann_matrix_from_graph,
    scherk_theta_argument,
)


def brute_force_delaunay(B, a, box=10):
    """Oracle: direct scan of the box ||n||_inf <= box, exact arithmetic."""
    B = TropicalRiemannMatrix(B) if not isinstance(B, TropicalRiemannMatrix) else B
    av = tuple(Fraction(v) for v in a)
    r2 = B.quadratic(av)
    out = []
    for n in itertools.product(range(-box, box + 1), repeat=3):
        d = tuple(av[i] - n[i] for i in range(3))
        if B.quadratic(d) == r2:
            out.append(n)
    return tuple(sorted(out))


def exact_hull_volume(points):
    """Exact volume of the convex hull of <= 8 integer points.

    Brute-force facet search: a triple spans a facet when all points lie on
    one side; fan-triangulate each facet and sum signed tetrahedra against
    the centroid, all in Fraction arithmetic.
    """
    pts = [tuple(Fraction(c) for c in p) for p in points]
    n = len(pts)
    centroid = tuple(sum(p[i] for p in pts) / n for i in range(3))

    def sub(p, q):
        return tuple(p[i] - q[i] for i in range(3))

    def cross(u, v):
        return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                u[0] * v[1] - u[1] * v[0])

    def dot(u, v):
        return sum(u[i] * v[i] for i in range(3))

    def det3(u, v, w):
        return dot(u, cross(v, w))

    vol = Fraction(0)
    seen = set()
    for i, j, k in itertools.combinations(range(n), 3):
        nrm = cross(sub(pts[j], pts[i]), sub(pts[k], pts[i]))
        if nrm == (0, 0, 0):
            continue
        d = [dot(nrm, sub(p, pts[i])) for p in pts]
        if not (all(v >= 0 for v in d) or all(v <= 0 for v in d)):
            continue
        face_idx = frozenset(m for m in range(n) if d[m] == 0)
        if face_idx in seen:
            continue
        seen.add(face_idx)
        face = [pts[m] for m in face_idx]
        # order face vertices around their centroid (floats only for sorting)
        fc = tuple(sum(p[i] for p in face) / len(face) for i in range(3))
        ax = sub(face[0], fc)
        ay = cross(nrm, ax)
        import math
        def angle(p):
            dp = sub(p, fc)
            return math.atan2(float(dot(dp, ay)), float(dot(dp, ax)))
        ring = sorted(face, key=angle)
        for m in range(1, len(ring) - 1):
            vol += abs(det3(sub(ring[m], ring[0]), sub(ring[m + 1], ring[0]),
                            sub(centroid, ring[0]))) / 6
    return vol


class TestDualGraphs:
    def test_identity_cycle_basis(self):
        g = GRAPH_PRESETS["rational quartic"]
        assert riemann_matrix_from_graph(g).entries == FORM_PRESETS["rational quartic"]

    def test_four_lines_product(self):
        # direct integer product of the printed 3x6 matrix with itself
        g = GRAPH_PRESETS["4 lines"]
        B = riemann_matrix_from_graph(g)
        assert B.entries == ((3, -1, -1), (-1, 3, -1), (-1, -1, 3))

    def test_conic_two_lines(self):
        g = GRAPH_PRESETS["conic+2lines"]
        B = riemann_matrix_from_graph(g)
        assert B.entries == ((2, -1, 0), (-1, 3, -1), (0, -1, 2))

    @pytest.mark.parametrize("name", sorted(GRAPH_PRESETS))
    def test_presets_reproduce_reference_forms(self, name):
        # verbatim equality happens to hold for every preset orientation we
        # ship; GL(3,Z) congruence is the contract, checked separately below.
        B = riemann_matrix_from_graph(GRAPH_PRESETS[name])
        assert B.entries == FORM_PRESETS[name]

    @pytest.mark.parametrize("name", sorted(GRAPH_PRESETS))
    def test_congruence_certificate(self, name):
        # a GL(3,Z) change of cycle basis conjugates B; the congruence class
        # is certified by determinant + representation numbers
        B1 = riemann_matrix_from_graph(GRAPH_PRESETS[name])
        U = ((1, 1, 0), (0, 1, 1), (0, 0, 1))  # unimodular
        Uarr = np.array(U)
        B2 = Uarr @ np.array(B1.entries) @ Uarr.T
        def rep_numbers(M, kmax=12, box=6):
            counts = {}
            for n in itertools.product(range(-box, box + 1), repeat=3):
                v = int(np.array(n) @ M @ np.array(n))
                if 0 < v <= kmax:
                    counts[v] = counts.get(v, 0) + 1
            return counts
        assert int(round(np.linalg.det(B2))) == int(round(np.linalg.det(np.array(B1.entries))))
        assert rep_numbers(np.array(B1.entries)) == rep_numbers(B2)

    def test_rank_deficient_rejected(self):
        with pytest.raises(RankDeficient):
            DualGraph(vertices=("Q",), edges=((0, 0), (0, 0), (0, 0)),
                      cycle_basis=((1, 0, 0), (2, 0, 0), (0, 0, 1)))

    def test_non_cycle_rejected(self):
        with pytest.raises(RankDeficient):
            DualGraph(vertices=("a", "b"), edges=((0, 1), (0, 1), (0, 0)),
                      cycle_basis=((1, 0, 0), (0, 1, 0), (0, 0, 1)))


class TestDelaunay:
    def test_cube(self):
        ds = delaunay_set(preset_matrix("rational quartic"), (Fraction(1, 2),) * 3)
        assert ds.dset == tuple(sorted(itertools.product((0, 1), repeat=3)))
        assert ds.is_vertex

    def test_conic_two_lines_pyramid(self):
        ds = delaunay_set(preset_matrix("conic+2lines"),
                          (Fraction(5, 8), Fraction(1, 4), Fraction(5, 8)))
        assert ds.dset == ((0, 0, 0), (0, 0, 1), (1, 0, 0), (1, 0, 1), (1, 1, 1))

    @pytest.mark.parametrize("row", DELAUNAY_TABLE, ids=lambda r: r[0])
    def test_table_rows(self, row):
        name, a, expect = row
        ds = delaunay_set(preset_matrix(name), a)
        assert ds.dset == tuple(sorted(expect))
        assert ds.is_vertex

    def test_matches_brute_force_on_random_cells(self):
        rng = np.random.default_rng(4)
        names = sorted(FORM_PRESETS)
        for _ in range(12):
            B = preset_matrix(names[rng.integers(len(names))])
            # random rational point, then scale it into the Voronoi cell by
            # retrying until no lattice point is strictly closer
            for _ in range(50):
                a = tuple(Fraction(int(rng.integers(-8, 9)), 24) for _ in range(3))
                try:
                    ds = delaunay_set(B, a)
                except NotInVoronoiCell:
                    continue
                assert ds.dset == brute_force_delaunay(B, a)
                break

    def test_outside_cell_raises(self):
        with pytest.raises(NotInVoronoiCell):
            delaunay_set(preset_matrix("rational quartic"), (Fraction(3, 2), 0, 0))

    def test_polytope_shapes(self):
        # vertex count + exact volume certify the affine type
        expected = {
            ("4 lines", "tetrahedron"): Fraction(1, 6),
            ("conic+2lines", "pyramid"): Fraction(1, 3),
            ("2 conics", "octahedron"): Fraction(2, 3),
            ("cubic+line", "prism"): Fraction(1, 2),
            ("rational quartic", "cube"): Fraction(1, 1),
        }
        vols = {}
        for name, a, dset in DELAUNAY_TABLE:
            vols.setdefault((name, len(dset)), exact_hull_volume(dset))
        assert vols[("4 lines", 4)] == expected[("4 lines", "tetrahedron")]
        assert vols[("conic+2lines", 5)] == expected[("conic+2lines", "pyramid")]
        assert vols[("2 conics", 6)] == expected[("2 conics", "octahedron")]
        assert vols[("cubic+line", 6)] == expected[("cubic+line", "prism")]
        assert vols[("rational quartic", 8)] == expected[("rational quartic", "cube")]


class TestDegenerateTheta:
    def test_scherk_coefficients(self):
        dt = degenerate_theta(preset_matrix("conic+2lines"), SCHERK_A, SCHERK_B0)
        ns = [n for n, _ in dt.terms]
        assert ns == [(0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1)]
        coeffs = [c for _, c in dt.terms]
        assert np.allclose(coeffs, [1, -1, 1, -1], atol=1e-14)

    def test_cube_eiesland_identity(self):
        # A_100 A_010 A_001 A_111 = A_000 A_011 A_101 A_110
        rng = np.random.default_rng(9)
        m = rng.uniform(-0.4, 0.4, (3, 3))
        B0 = (m + m.T) / 2
        dt = degenerate_theta(preset_matrix("rational quartic"), (Fraction(1, 2),) * 3, B0)
        assert len(dt.terms) == 8
        c = {n: v for n, v in dt.terms}
        lhs = c[(1, 0, 0)] * c[(0, 1, 0)] * c[(0, 0, 1)] * c[(1, 1, 1)]
        rhs = c[(0, 0, 0)] * c[(0, 1, 1)] * c[(1, 0, 1)] * c[(1, 1, 0)]
        assert abs(lhs - rhs) <= 1e-12

    def test_zero_matrix_gives_unit_coefficients(self):
        dt = degenerate_theta(preset_matrix("4 lines"),
                              (Fraction(3, 4), Fraction(1, 2), Fraction(1, 4)),
                              np.zeros((3, 3)))
        assert all(c == 1.0 for _, c in dt.terms)
        assert dt.coefficient((0, 0, 0)) == 1.0

    def test_term_counts_match_census(self):
        for name, a, dset in DELAUNAY_TABLE:
            dt = degenerate_theta(preset_matrix(name), a, np.zeros((3, 3)))
            assert len(dt.terms) == len(dset)
            assert len(dt.terms) in (4, 5, 6, 8)


class TestEvalDegenerate:
    def test_scherk_vanishes_on_surface(self):
        dt = degenerate_theta(preset_matrix("conic+2lines"), SCHERK_A, SCHERK_B0)
        rng = np.random.default_rng(10)
        for _ in range(50):
            X = rng.uniform(-2, 2)
            Z = rng.uniform(-1, 1)
            # pick Y with sin(Y) = sin(X) / exp(Z) when possible
            s = np.sin(X) / np.exp(Z)
            if abs(s) > 1:
                continue
            Y = np.arcsin(s)
            val = eval_degenerate(dt, scherk_theta_argument(X, Y, Z))
            assert abs(val) <= 1e-12

    def test_single_term_constant(self):
        from thetasurf.tropical import DegenerateTheta
        dt = DegenerateTheta(terms=(((0, 0, 0), 1.0 + 0j),), B0=tuple(map(tuple, np.zeros((3, 3)))))
        assert eval_degenerate(dt, np.array([0.3, 0.7, -0.1])) == 1.0 + 0j

    def test_termwise_oracle_extended_precision(self):
        import mpmath
        rng = np.random.default_rng(11)
        m = rng.uniform(-0.3, 0.3, (3, 3))
        B0 = (m + m.T) / 2 + 0.2j * np.eye(3)
        dt = degenerate_theta(preset_matrix("2 conics"),
                              (Fraction(1, 2), Fraction(1), Fraction(1, 2)), B0)
        x = rng.uniform(-1, 1, 3) + 1j * rng.uniform(-0.3, 0.3, 3)
        got = eval_degenerate(dt, x)
        mpmath.mp.prec = 120
        try:
            want = mpmath.mpc(0)
            for n, A in dt.terms:
                want += mpmath.mpc(A) * mpmath.exp(
                    2j * mpmath.pi * mpmath.fsum(n[d] * mpmath.mpc(complex(x[d])) for d in range(3)))
            assert abs(got - complex(want)) <= 1e-13 * max(1.0, abs(got))
        finally:
            mpmath.mp.prec = 53


class TestDegenerationResidual:
    def test_scherk_t10(self):
        rng = np.random.default_rng(12)
        B = preset_matrix("conic+2lines")
        for _ in range(5):
            X, Y, Z = rng.uniform(-1, 1, 3)
            r = degeneration_residual(B, SCHERK_A, SCHERK_B0,
                                      scherk_theta_argument(X, Y, Z), 10.0, 1e-10)
            assert r <= 1e-6

    def test_doubling_t_decreases_residual(self, extended_precision):
        rng = np.random.default_rng(13)
        B = preset_matrix("conic+2lines")
        for _ in range(10):
            X, Y, Z = rng.uniform(-1, 1, 3)
            x = scherk_theta_argument(X, Y, Z)
            r1 = degeneration_residual(B, SCHERK_A, SCHERK_B0, x, 10.0, 1e-28)
            r2 = degeneration_residual(B, SCHERK_A, SCHERK_B0, x, 20.0, 1e-28)
            assert r2 < r1

    def test_identity_case_t20(self):
        r = degeneration_residual(preset_matrix("rational quartic"),
                                  (Fraction(1, 2),) * 3, np.eye(3),
                                  np.array([0.1, 0.2, -0.3], dtype=complex), 20.0, 1e-10)
        assert r <= 1e-8
