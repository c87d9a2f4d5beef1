"""Riemann theta function in genus 3.

Evaluates

    theta(x, B) = sum_{n in Z^3} e(-n^T B n / 2 + i n^T x),   e(t) = exp(2 pi t),

for a symmetric B with positive-definite real part, plus the variant with
half-integer characteristics, to a requested absolute accuracy.  The lattice
sum is truncated over an ellipsoid in the Re(B) metric; the radius comes from
a Gaussian tail bound, and the enumeration is shared across points through a
:class:`LatticePlan` so batches against one matrix are cheap.

For strongly complex arguments the dominant terms sit near the lattice point
closest to -Re(B)^{-1} Im(x); the plan centers its ellipsoid there, which is
what keeps the degeneration checks (B_t = tB + B0 with huge shifts) stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np

from .convention import TWO_PI, extended_workprec, precision_mode
from .errors import NonPositiveDefinite, ToleranceTooTight

# Hard cap on lattice points in one plan; beyond this the tolerance is
# declared unreachable rather than thrashing memory.
PLAN_POINT_CAP = 2_000_000


class RiemannMatrix:
    """Symmetric 3x3 complex matrix with positive-definite real part."""

    __slots__ = ("entries", "_eig_min")

    def __init__(self, entries):
        m = np.asarray(entries, dtype=complex)
        if m.shape != (3, 3):
            raise NonPositiveDefinite(f"expected a 3x3 matrix, got shape {m.shape}")
        if not (m == m.T).all():
            raise NonPositiveDefinite("matrix is not exactly symmetric")
        eig = np.linalg.eigvalsh(m.real)
        if eig[0] <= 0.0:
            raise NonPositiveDefinite(f"Re(B) has eigenvalue {eig[0]:g} <= 0")
        m.setflags(write=False)
        self.entries = m
        self._eig_min = float(eig[0])

    @property
    def real_part(self):
        return self.entries.real

    @property
    def eig_min(self):
        """Smallest eigenvalue of Re(B)."""
        return self._eig_min

    def __repr__(self):
        return f"RiemannMatrix({self.entries.tolist()!r})"


@dataclass(frozen=True)
class ThetaCharacteristic:
    """Half-period characteristic: a pair of vectors in {0,1}^3."""

    eps: tuple
    delta: tuple

    def __post_init__(self):
        eps = tuple(int(v) for v in self.eps)
        delta = tuple(int(v) for v in self.delta)
        if len(eps) != 3 or len(delta) != 3:
            raise ValueError("characteristic vectors must have length 3")
        if any(v not in (0, 1) for v in eps + delta):
            raise ValueError("characteristic entries must be exactly 0 or 1")
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "delta", delta)

    def kappa(self, B: RiemannMatrix):
        """Half period kappa = (i B eps + delta) / 2."""
        eps = np.array(self.eps, dtype=float)
        delta = np.array(self.delta, dtype=float)
        return 0.5 * (1j * B.entries @ eps + delta)


ZERO_CHARACTERISTIC = ThetaCharacteristic((0, 0, 0), (0, 0, 0))


def _theta_1d(mu):
    """sum_k exp(-pi mu k^2) over the integers (mu > 0)."""
    total, k = 1.0, 1
    while True:
        term = 2.0 * np.exp(-np.pi * mu * k * k)
        total += term
        if term < 1e-18 or k > 400:
            return total
        k += 1


def _tail_constant(eig_min):
    # One dimension contributes at most theta_1d(mu)+1 for any fractional
    # center offset, with mu = eig_min/2 after peeling exp(-pi R^2/2).
    return (_theta_1d(eig_min / 2.0) + 1.0) ** 3


def truncation_radius(B: RiemannMatrix, tol: float) -> float:
    """Radius R with sum_{n^T Re(B) n > R^2} exp(-pi n^T Re(B) n) <= tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    C = _tail_constant(B.eig_min)
    R = np.sqrt(max(1.0, (2.0 / np.pi) * np.log(C / tol)))
    if R / np.sqrt(B.eig_min) > 0.5 * PLAN_POINT_CAP ** (1.0 / 3.0):
        raise ToleranceTooTight(
            f"truncation radius {R:.3g} needs more than {PLAN_POINT_CAP} lattice points")
    return float(R)


class LatticePlan:
    """Shared truncation of the lattice sum for one (B, tol, characteristic).

    ``points`` holds every integer vector n whose shifted point
    m = n + eps/2 satisfies (m - center)^T Re(B) (m - center) <= R_eff^2;
    ``weight_exponent`` holds the complex quantity -pi m^T B m so terms are
    exp(weight_exponent + 2 pi i m^T x) with no overflow-prone splitting.
    """

    __slots__ = ("matrix", "tol", "eps", "points", "shifted", "weight_exponent",
                 "center", "radius")

    def __init__(self, matrix: RiemannMatrix, tol: float, eps=(0, 0, 0),
                 imag_parts=None):
        if tol <= 0:
            raise ValueError("tol must be positive")
        A = matrix.real_part
        lam = matrix.eig_min
        eps_half = np.array(eps, dtype=float) / 2.0

        if imag_parts is None:
            bs = np.zeros((1, 3))
        else:
            bs = np.atleast_2d(np.asarray(imag_parts, dtype=float))
        Ainv = np.linalg.inv(A)
        centers = -bs @ Ainv  # row i: center for point i
        G = np.pi * float(np.max(np.einsum("ij,jk,ik->i", bs, Ainv, bs)))
        C = _tail_constant(lam)
        # Safety factor 4: budget tol/4 for the tail so enumeration slop,
        # rounding and the batch-center padding stay inside tol.
        R2 = max(1.0, (2.0 / np.pi) * (G + np.log(4.0 * C / tol)))
        cmid = 0.5 * (centers.min(axis=0) + centers.max(axis=0))
        spread = centers - cmid
        pad = 0.0
        if len(spread) > 1 or np.any(spread):
            pad = float(np.max(np.sqrt(np.einsum("ij,jk,ik->i", spread, A, spread))))
        R = np.sqrt(R2) + pad

        half = R / np.sqrt(lam)
        lo = np.floor(cmid - eps_half - half).astype(int)
        hi = np.ceil(cmid - eps_half + half).astype(int)
        counts = hi - lo + 1
        if int(np.prod(counts.astype(float))) > PLAN_POINT_CAP:
            raise ToleranceTooTight(
                f"lattice plan would need {np.prod(counts)} points (cap {PLAN_POINT_CAP})")
        axes = [np.arange(lo[d], hi[d] + 1) for d in range(3)]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
        shifted = grid + eps_half
        diff = shifted - cmid
        q = np.einsum("ij,jk,ik->i", diff, A, diff)
        keep = q <= R * R
        self.points = np.ascontiguousarray(grid[keep])
        self.shifted = np.ascontiguousarray(shifted[keep])
        order = np.lexsort((self.points[:, 2], self.points[:, 1], self.points[:, 0]))
        self.points = self.points[order]
        self.shifted = self.shifted[order]
        qB = np.einsum("ij,jk,ik->i", self.shifted, matrix.entries, self.shifted)
        self.weight_exponent = -np.pi * qB
        self.matrix = matrix
        self.tol = float(tol)
        self.eps = tuple(int(v) for v in eps)
        self.center = cmid
        self.radius = float(R)

    def evaluate(self, x):
        """Sum the truncated series at one complex 3-vector x."""
        x = np.asarray(x, dtype=complex)
        expo = self.weight_exponent + (TWO_PI * 1j) * (self.shifted @ x)
        return complex(np.exp(expo).sum())

    def evaluate_real(self, x):
        """Cosine form for real B and real x: exactly real output."""
        x = np.asarray(x, dtype=float)
        w = np.exp(self.weight_exponent.real)
        return float((w * np.cos(TWO_PI * (self.shifted @ x))).sum())


def _is_real_vec(x):
    return np.all(np.asarray(x, dtype=complex).imag == 0.0)


def _eval_extended(plan: LatticePlan, B: RiemannMatrix, x, delta_half, as_mpc=False):
    """mpmath re-summation over the plan's lattice points (>=113 bits)."""
    with extended_workprec():
        Bm = mpmath.matrix(3, 3)
        for i in range(3):
            for j in range(3):
                Bm[i, j] = mpmath.mpc(B.entries[i, j])
        xv = [mpmath.mpc(x[d]) + mpmath.mpf(delta_half[d]) for d in range(3)]
        two_pi = 2 * mpmath.pi
        total = mpmath.mpc(0)
        for m in plan.shifted:
            mv = [mpmath.mpf(float(v)) for v in m]
            q = mpmath.fsum(mv[i] * Bm[i, j] * mv[j] for i in range(3) for j in range(3))
            lin = mpmath.fsum(mv[d] * xv[d] for d in range(3))
            total += mpmath.exp(-mpmath.pi * q + two_pi * 1j * lin)
        return total if as_mpc else complex(total)


def theta_eval_mp(x, B: RiemannMatrix, tol: float):
    """Extended-precision theta value as an mpmath complex (not rounded).

    ``x`` may hold mpmath numbers; only its double shadow is used to center
    the truncation, the summation keeps full precision.
    """
    if not isinstance(B, RiemannMatrix):
        B = RiemannMatrix(B)
    x_shadow = np.array([complex(v) for v in x])
    plan = LatticePlan(B, tol, imag_parts=x_shadow.imag[None, :])
    return _eval_extended(plan, B, list(x), np.zeros(3), as_mpc=True)


def theta_eval(x, B: RiemannMatrix, tol: float, mode=None) -> complex:
    """theta(x, B) to absolute accuracy tol (relative for |value| > 1)."""
    return theta_char_eval(x, B, ZERO_CHARACTERISTIC, tol, mode=mode)


def theta_char_eval(x, B: RiemannMatrix, chi: ThetaCharacteristic, tol: float,
                    mode=None) -> complex:
    """theta[eps, delta](x, B): the lattice shifted by eps/2, x by delta/2."""
    if not isinstance(B, RiemannMatrix):
        B = RiemannMatrix(B)
    if tol <= 0:
        raise ValueError("tol must be positive")
    x = np.asarray(x, dtype=complex)
    plan = LatticePlan(B, tol, eps=chi.eps, imag_parts=x.imag[None, :])
    return _finish_eval(plan, B, x, chi, mode)


def _finish_eval(plan, B, x, chi, mode):
    delta_half = np.array(chi.delta, dtype=float) / 2.0
    if precision_mode(mode) == "extended":
        return _eval_extended(plan, B, x, delta_half)
    if np.all(B.entries.imag == 0.0) and _is_real_vec(x):
        return complex(plan.evaluate_real(x.real + delta_half))
    return plan.evaluate(x + delta_half)


def theta_batch(points: Sequence, B: RiemannMatrix, chi: ThetaCharacteristic = None,
                tol: float = 1e-10, mode=None):
    """Evaluate theta[chi](x_i, B) for many x_i sharing one LatticePlan.

    Results are identical to the per-point loop: the batch reuses one plan
    and sums each point independently in the same order.
    """
    if not isinstance(B, RiemannMatrix):
        B = RiemannMatrix(B)
    if chi is None:
        chi = ZERO_CHARACTERISTIC
    pts = [np.asarray(p, dtype=complex) for p in points]
    if not pts:
        raise ValueError("theta_batch needs a nonempty list of points")
    imag = np.stack([p.imag for p in pts])
    plan = LatticePlan(B, tol, eps=chi.eps, imag_parts=imag)
    return [_finish_eval(plan, B, p, chi, mode) for p in pts]


def char_prefactor(x, B: RiemannMatrix, chi: ThetaCharacteristic) -> complex:
    """Scalar relating the two forms:

    theta[eps,delta](x,B) = prefactor * theta(x + kappa, B),
    prefactor = e(-eps^T B eps/8 + i eps^T x/2 + i eps^T delta/4).
    """
    eps = np.array(chi.eps, dtype=float)
    delta = np.array(chi.delta, dtype=float)
    x = np.asarray(x, dtype=complex)
    t = (-eps @ B.entries @ eps / 8.0
         + 0.5j * (eps @ x)
         + 0.25j * (eps @ delta))
    return complex(np.exp(TWO_PI * t))
