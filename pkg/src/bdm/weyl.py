"""Two-point Weyl-Titchmarsh scalars, interior-reference m-functions, the
2x2 Weyl-Titchmarsh matrices M_alpha, and their Green's-function links.

The general scalar m(z; x0, xi; y0, eta) is the ratio -[B Theta]/[B Phi]
where (Theta, Phi) is the fundamental matrix rotated by xi at x0 and
B = [cos(eta), -sin(eta)] is applied at y0.  Its special values at the
endpoints are the diagonal of the Robin-to-Robin map; at an interior
reference point x0 the rotated pair (m-, m+) assembles M_alpha with
det M_alpha = -1/4 identically.

Green's-function identities are checked with wedge-respecting finite
differences: the kernel is smooth on each side of x = x', so derivative
limits onto the diagonal are taken on the x < x' wedge and extrapolated.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .bdmap import bdmap_robin, m_functions_from_fs
from .errors import DegenerateError, DomainError, PoleHitError
from .odecore import DEFAULT_TOL, SolutionEvaluator, _propagate_vec, fundamental_system
from .potential import PotentialSpec
from .resolvent import green_evaluator
from .traces import AnglePair


@dataclass(frozen=True)
class ReferenceFrame:
    """A normalization point x0 in [0, R] with its rotation angle."""

    x0: float
    angle: complex


@dataclass(frozen=True)
class WTMatrix:
    matrix: np.ndarray
    alpha: float
    x0: float
    z: complex


def wt_m(V: PotentialSpec, R: float, z: complex, x0: float, xi: complex,
         y0: float, eta: complex, tol: float = DEFAULT_TOL) -> complex:
    """m(z; x0, alpha(xi); y0, beta(eta)) for the fundamental matrix
    normalized at x0 by the xi-rotation."""
    if not (0.0 <= x0 <= R and 0.0 <= y0 <= R):
        raise DomainError("reference points must lie in [0, R]")
    cxi, sxi = cmath.cos(xi), cmath.sin(xi)
    # columns (theta, theta') = (cos xi, sin xi), (phi, phi') = (-sin xi, cos xi)
    y = _propagate_vec(V, z, x0, (cxi, sxi, -sxi, cxi), y0, tol)
    th, dth, ph, dph = y
    ce, se = cmath.cos(eta), cmath.sin(eta)
    den = ce * ph - se * dph
    num = ce * th - se * dth
    if abs(den) < max(1e-13, 50.0 * tol) * max(1.0, abs(num)):
        raise PoleHitError(f"wt_m pole: beta(eta)-trace of phi vanishes at z = {z}")
    return -num / den


def wt_m_frames(V: PotentialSpec, R: float, z: complex, src: ReferenceFrame,
                dst: ReferenceFrame, tol: float = DEFAULT_TOL) -> complex:
    """wt_m with the reference data packed as frames (src carries the
    alpha-type rotation, dst the beta-type boundary vector)."""
    return wt_m(V, R, z, src.x0, src.angle, dst.x0, dst.angle, tol)


def m_plus_via_wt(V: PotentialSpec, R: float, pair: AnglePair, z: complex,
                  tol: float = DEFAULT_TOL) -> complex:
    """m+ as the two-point scalar with frames (0, theta0) -> (R, thetaR)."""
    return wt_m(V, R, z, 0.0, pair.theta0, R, pair.thetaR, tol)


def m_minus_via_wt(V: PotentialSpec, R: float, pair: AnglePair, z: complex,
                   tol: float = DEFAULT_TOL) -> complex:
    """m- with frames at (R, beta(thetaR)) -> (0, alpha(theta0)); beta(t) =
    alpha(-t) maps the slots onto the (xi, eta) convention."""
    return wt_m(V, R, z, R, -pair.thetaR, 0.0, -pair.theta0, tol)


def _alpha_rotate(m0: complex, alpha: float) -> complex:
    c, s = math.cos(alpha), math.sin(alpha)
    den = c + s * m0
    if abs(den) < 1e-13 * max(1.0, abs(m0)):
        raise PoleHitError("alpha-rotation pole of the interior m-function")
    return (-s + c * m0) / den


def interior_m(V: PotentialSpec, R: float, z: complex, x0: float, sign: int,
               pair: AnglePair, alpha: float = 0.0,
               tol: float = DEFAULT_TOL) -> complex:
    """m_{+,alpha} (sign=+1) or m_{-,alpha} (sign=-1) at interior x0:
    the logarithmic derivative u±'/u± rotated by alpha."""
    if not 0.0 < x0 < R:
        raise DomainError("x0 must be interior to (0, R)")
    if isinstance(alpha, complex) and alpha.imag != 0.0:
        raise DomainError("alpha must be real in [0, pi)")
    alpha = float(alpha)
    if not 0.0 <= alpha < math.pi:
        raise DomainError("alpha must lie in [0, pi)")
    sol = SolutionEvaluator(V, z, pair.theta0, pair.thetaR, tol)
    d = sol.uplus(x0) if sign > 0 else sol.uminus(x0)
    if abs(d.u) < max(1e-13, 50.0 * tol) * max(1.0, abs(d.du)):
        raise PoleHitError(f"x0 = {x0} is a node of u{'+' if sign > 0 else '-'}")
    return _alpha_rotate(d.du / d.u, alpha)


def wt_matrix(V: PotentialSpec, R: float, z: complex, x0: float,
              pair: AnglePair, alpha: float = 0.0,
              tol: float = DEFAULT_TOL) -> WTMatrix:
    """M_alpha(z, x0): entries [1, (m-+m+)/2; (m-+m+)/2, m- m+]/(m- - m+)."""
    mm = interior_m(V, R, z, x0, -1, pair, alpha, tol)
    mp = interior_m(V, R, z, x0, +1, pair, alpha, tol)
    d = mm - mp
    if abs(d) < 1e-13 * max(1.0, abs(mm), abs(mp)):
        raise DegenerateError("m- = m+ at this (z, x0): M_alpha undefined")
    half = 0.5 * (mm + mp)
    mat = np.array([[1.0, half], [half, mm * mp]], dtype=complex) / d
    return WTMatrix(mat, alpha, x0, z)


def _wedge_limits(gk, x0: float, h: float):
    """(G, (d1+d2)G/..., d1 d2 G) at (x0, x0), from the x < x' wedge.

    The symmetrized first derivative and the mixed second derivative are
    evaluated at (x0 - d, x0 + d) by central differences inside the wedge
    and extrapolated d -> 0 (one Richardson step on the linear term).
    """
    gdiag = gk(x0, x0)

    def probes(d):
        s = (gk.d1(x0 - d, x0 + d) + gk.d2(x0 - d, x0 + d))
        m = (gk(x0 - d + h, x0 + d + h) - gk(x0 - d + h, x0 + d - h)
             - gk(x0 - d - h, x0 + d + h) + gk(x0 - d - h, x0 + d - h)) / (4 * h * h)
        return s, m

    # quadratic extrapolation d -> 0 through d, 2d, 4d
    s1, m1 = probes(3 * h)
    s2, m2 = probes(6 * h)
    s3, m3 = probes(12 * h)
    sym = (8.0 * s1 - 6.0 * s2 + s3) / 3.0
    mixed = (8.0 * m1 - 6.0 * m2 + m3) / 3.0
    return gdiag, 0.5 * sym, mixed


def wt_matrix_via_green(V: PotentialSpec, R: float, z: complex, x0: float,
                        pair: AnglePair, alpha: float = 0.0, h: float = 1e-4,
                        tol: float = DEFAULT_TOL) -> np.ndarray:
    """M_alpha assembled from the Green kernel only (finite differences on
    the off-diagonal wedge), for cross-checking the m-function route."""
    gk = green_evaluator(V, R, pair, z, tol)
    g, sym, mixed = _wedge_limits(gk, x0, h)
    c, s = math.cos(alpha), math.sin(alpha)
    m11 = c * c * g + 2.0 * c * s * sym + s * s * mixed
    m22 = s * s * g - 2.0 * c * s * sym + c * c * mixed
    m12 = -c * s * g + (c * c - s * s) * sym + s * c * mixed
    return np.array([[m11, m12], [m12, m22]], dtype=complex)


def _fd_second_mixed(gk, x: float, xp: float, h: float) -> complex:
    """d1 d2 G by a wedge-interior central stencil around (x, xp)."""
    return (gk(x + h, xp + h) - gk(x + h, xp - h)
            - gk(x - h, xp + h) + gk(x - h, xp - h)) / (4.0 * h * h)


def green_link_check(V: PotentialSpec, R: float, pair: AnglePair, z: complex,
                     tol: float = DEFAULT_TOL) -> dict:
    """Residuals of the Robin-map/Green-function identities.

    Returns a dict name -> residual; identities whose angle hypotheses fail
    (sin or cos of an angle vanishing) are skipped.
    """
    fs = fundamental_system(V, z, R, tol)
    mp, mm = m_functions_from_fs(fs, R, pair)
    lam = bdmap_robin(V, R, pair, z, tol).matrix
    sol = SolutionEvaluator(V, z, pair.theta0, pair.thetaR, tol)
    gk = green_evaluator(V, R, pair, z, tol)
    g00 = gk(0.0, 0.0)
    gRR = gk(R, R)
    t0, tR = pair.theta0, pair.thetaR
    s0, c0 = cmath.sin(t0), cmath.cos(t0)
    sR, cR = cmath.sin(tR), cmath.cos(tR)
    out = {}
    if abs(s0) > 1e-9:
        out["lambda11_from_green"] = abs(lam[0, 0] - (g00 + s0 * c0) / (s0 * s0))
        out["g00_from_mplus"] = abs(g00 - s0 * (-c0 + s0 * mp))
    if abs(sR) > 1e-9:
        out["lambda22_from_green"] = abs(lam[1, 1] - (gRR + sR * cR) / (sR * sR))
        out["gRR_from_mminus"] = abs(gRR - sR * (-cR - sR * mm))
    # off-diagonal links, each in whichever branch its angles allow
    if abs(sR) > 1e-9:
        branches = []
        if abs(c0) > 1e-9:
            branches.append(-sol.basis.uminus_at_0.du / c0)
        if abs(s0) > 1e-9:
            branches.append(sol.basis.uminus_at_0.u / s0)
        for i, br in enumerate(branches):
            out[f"lambda12_from_gRR_{i}"] = abs(lam[0, 1] - gRR * br / sR)
    if abs(s0) > 1e-9:
        branches = []
        if abs(cR) > 1e-9:
            branches.append(sol.basis.uplus_at_R.du / cR)
        if abs(sR) > 1e-9:
            branches.append(sol.basis.uplus_at_R.u / sR)
        for i, br in enumerate(branches):
            out[f"lambda12_from_g00_{i}"] = abs(lam[0, 1] - g00 * br / s0)
    # Dirichlet corner-derivative limits, step-refined one-sided differences
    # on the x < x' wedge, quadratically extrapolated toward the corner
    if abs(s0) <= 1e-9 and abs(sR) <= 1e-9:
        h = 2.5e-4
        f1, f2, f3 = (_fd_second_mixed(gk, d, 2.5 * d, h)
                      for d in (4 * h, 8 * h, 16 * h))
        out["dirichlet_corner_0"] = abs(lam[0, 0] - (8 * f1 - 6 * f2 + f3) / 3.0)
        f1, f2, f3 = (_fd_second_mixed(gk, R - 2.5 * d, R - d, h)
                      for d in (4 * h, 8 * h, 16 * h))
        out["dirichlet_corner_R"] = abs(lam[1, 1] - (8 * f1 - 6 * f2 + f3) / 3.0)
    return out
