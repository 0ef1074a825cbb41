"""Complex propagation of -u'' + V u = z u and everything built on it.

One adaptive Dormand-Prince 5(4) sweep from 0 to R produces the fundamental
system (theta, phi) normalized by theta(z,0) = phi'(z,0) = 1, theta'(z,0) =
phi(z,0) = 0.  The characteristic determinant

    Delta(z,R,theta0,thetaR) = cos(theta0) cos(thetaR) phi(z,R)
                             - cos(theta0) sin(thetaR) phi'(z,R)
                             - sin(theta0) cos(thetaR) theta(z,R)
                             + sin(theta0) sin(thetaR) theta'(z,R)

vanishes exactly on the spectrum of the Robin realization, and the
distinguished basis u-, u+ (boundary condition at 0 resp. R, unit value at
the opposite endpoint) has closed endpoint data in terms of Delta values:
no second solve and no boundary-value iteration is needed.

Interior knots of piecewise potentials are forced step boundaries so the
integrator keeps its order across jumps of V.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import (AccuracyError, DomainError, NearEigenvalueError,
                     StiffnessError)
from .potential import PotentialSpec, make_eval, sqrt_upper

DEFAULT_TOL = 1e-10

# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


@dataclass(frozen=True)
class CauchyData:
    """A solution's (value, derivative) at a point."""

    u: complex
    du: complex
    x: float


@dataclass(frozen=True)
class FundamentalEval:
    """(theta, theta', phi, phi') at x; Wronskian theta*phi' - theta'*phi = 1."""

    theta: complex
    dtheta: complex
    phi: complex
    dphi: complex
    z: complex
    x: float

    def wronskian(self) -> complex:
        return self.theta * self.dphi - self.dtheta * self.phi


@dataclass(frozen=True)
class BasisEndpoints:
    """Endpoint Cauchy data of the distinguished basis u-, u+ at fixed z."""

    uminus_at_0: CauchyData
    uminus_at_R: CauchyData
    uplus_at_0: CauchyData
    uplus_at_R: CauchyData
    z: complex


def _rk_segment(qfun, x0: float, y0: tuple, x1: float, tol: float) -> tuple:
    """Adaptive DP54 from x0 to x1 (either direction) for u'' = q(x) u.

    The state is a flat tuple of (value, derivative) pairs sharing the same
    q; the Dormand-Prince stages are unrolled with one q evaluation per
    stage applied to every pair.  Pure scalar complex arithmetic keeps the
    hot loop allocation-free.
    """
    span = x1 - x0
    if span == 0.0:
        return y0
    npair = len(y0) // 2
    direction = 1.0 if span > 0 else -1.0
    x, y = x0, list(y0)
    q0 = qfun(x)
    scale = max(1.0, abs(q0)) ** 0.5
    h = direction * min(abs(span), max(1e-8, 0.1 / scale))
    hmin = 1e-14 * max(1.0, abs(span))
    a21, = _A[1]
    a31, a32 = _A[2]
    a41, a42, a43 = _A[3]
    a51, a52, a53, a54 = _A[4]
    a61, a62, a63, a64, a65 = _A[5]
    a71, _, a73, a74, a75, a76 = _A[6]
    e1, _, e3, e4, e5, e6, e7 = _E
    # k-derivative at a point: pair (u, p) maps to (p, q*u)
    while (x1 - x) * direction > 0.0:
        if abs(h) < hmin:
            raise StiffnessError(f"step size underflow at x = {x}")
        if (x + h - x1) * direction > 0.0:
            h = x1 - x
        q2 = qfun(x + 0.2 * h)
        q3 = qfun(x + 0.3 * h)
        q4 = qfun(x + 0.8 * h)
        q5 = qfun(x + (8.0 / 9.0) * h)
        q6 = qfun(x + h)
        errnorm = 0.0
        ynew = [0.0] * (2 * npair)
        for i in range(npair):
            u, p = y[2 * i], y[2 * i + 1]
            k1u, k1p = p, q0 * u
            u2 = u + h * (a21 * k1u)
            p2 = p + h * (a21 * k1p)
            k2u, k2p = p2, q2 * u2
            u3 = u + h * (a31 * k1u + a32 * k2u)
            p3 = p + h * (a31 * k1p + a32 * k2p)
            k3u, k3p = p3, q3 * u3
            u4 = u + h * (a41 * k1u + a42 * k2u + a43 * k3u)
            p4 = p + h * (a41 * k1p + a42 * k2p + a43 * k3p)
            k4u, k4p = p4, q4 * u4
            u5 = u + h * (a51 * k1u + a52 * k2u + a53 * k3u + a54 * k4u)
            p5 = p + h * (a51 * k1p + a52 * k2p + a53 * k3p + a54 * k4p)
            k5u, k5p = p5, q5 * u5
            u6 = u + h * (a61 * k1u + a62 * k2u + a63 * k3u + a64 * k4u + a65 * k5u)
            p6 = p + h * (a61 * k1p + a62 * k2p + a63 * k3p + a64 * k4p + a65 * k5p)
            k6u, k6p = p6, q6 * u6
            un = u + h * (a71 * k1u + a73 * k3u + a74 * k4u + a75 * k5u + a76 * k6u)
            pn = p + h * (a71 * k1p + a73 * k3p + a74 * k4p + a75 * k5p + a76 * k6p)
            erru = h * (e1 * k1u + e3 * k3u + e4 * k4u + e5 * k5u + e6 * k6u + e7 * pn)
            errp = h * (e1 * k1p + e3 * k3p + e4 * k4p + e5 * k5p + e6 * k6p + e7 * q6 * un)
            eu = abs(erru) / (tol + tol * max(abs(u), abs(un)))
            ep = abs(errp) / (tol + tol * max(abs(p), abs(pn)))
            if eu > errnorm:
                errnorm = eu
            if ep > errnorm:
                errnorm = ep
            ynew[2 * i] = un
            ynew[2 * i + 1] = pn
        if errnorm <= 1.0:
            x += h
            y = ynew
            q0 = q6
            factor = 5.0 if errnorm == 0.0 else min(5.0, 0.9 * errnorm ** -0.2)
        else:
            factor = max(0.2, 0.9 * errnorm ** -0.2)
        h *= factor
    return tuple(y)


def _split_at_knots(V: PotentialSpec, x0: float, x1: float):
    """Waypoints from x0 to x1 with interior potential knots inserted."""
    pts = [x0]
    knots = V.interior_knots()
    if x1 >= x0:
        pts.extend(k for k in knots if x0 < k < x1)
    else:
        pts.extend(k for k in sorted(knots, reverse=True) if x1 < k < x0)
    pts.append(x1)
    return pts


def _propagate_vec(V: PotentialSpec, z: complex, x0: float, y0: tuple,
                   x1: float, tol: float) -> tuple:
    vx = make_eval(V)

    def qfun(x):
        return vx(x) - z

    y = y0
    pts = _split_at_knots(V, x0, x1)
    for a, b in zip(pts, pts[1:]):
        y = _rk_segment(qfun, a, y, b, tol)
    return y


def propagate(V: PotentialSpec, z: complex, data: CauchyData, to_x: float,
              tol: float = DEFAULT_TOL) -> CauchyData:
    """Propagate solution data to to_x (left or right), local error ~ tol."""
    if not (0.0 <= data.x <= V.R and 0.0 <= to_x <= V.R):
        raise DomainError("propagation endpoints must lie in [0, R]")
    u, du = _propagate_vec(V, z, data.x, (data.u, data.du), to_x, tol)
    return CauchyData(u, du, to_x)


def fundamental_system(V: PotentialSpec, z: complex, x: float,
                       tol: float = DEFAULT_TOL) -> FundamentalEval:
    """theta, phi and derivatives at x, both propagated in one sweep."""
    y = _propagate_vec(V, z, 0.0, (1.0 + 0j, 0.0 + 0j, 0.0 + 0j, 1.0 + 0j),
                       x, tol)
    return FundamentalEval(theta=y[0], dtheta=y[1], phi=y[2], dphi=y[3],
                           z=z, x=x)


def delta_from_fs(fs: FundamentalEval, theta0: complex, thetaR: complex) -> complex:
    """Delta evaluated from an already computed fundamental system at x = R."""
    c0, s0 = cmath.cos(theta0), cmath.sin(theta0)
    cR, sR = cmath.cos(thetaR), cmath.sin(thetaR)
    return (c0 * cR * fs.phi - c0 * sR * fs.dphi
            - s0 * cR * fs.theta + s0 * sR * fs.dtheta)


def char_det(V: PotentialSpec, z: complex, theta0: complex, thetaR: complex,
             tol: float = DEFAULT_TOL) -> complex:
    """Characteristic determinant; zeros = eigenvalues of the Robin
    realization with angles (theta0, thetaR)."""
    fs = fundamental_system(V, z, V.R, tol)
    return delta_from_fs(fs, theta0, thetaR)


def log_delta_scale(z: complex, R: float, theta0: complex = None,
                    thetaR: complex = None) -> float:
    """log of the natural magnitude scale of Delta away from its zeros.

    The four boundary-weighted terms grow like |z|^(1/2) e^(Im sqrt(z) R)
    (sin*sin), e^(...) (mixed) and |z|^(-1/2) e^(...) (cos*cos); without
    angles the generic |z|^(1/2) envelope is used, with angles the actual
    coefficient pattern, so Dirichlet-type pairs get the correct smaller
    scale.  Everything stays in log space so large |z| cannot overflow.
    """
    root = math.sqrt(max(1.0, abs(z)))
    growth = sqrt_upper(z).imag * R
    if theta0 is None:
        return math.log(root) + growth
    s0, c0 = abs(cmath.sin(theta0)), abs(cmath.cos(theta0))
    sR, cR = abs(cmath.sin(thetaR)), abs(cmath.cos(thetaR))
    amp = root * s0 * sR + s0 * cR + c0 * sR + c0 * cR / root
    return math.log(max(amp, 1e-300)) + growth


def is_near_eigenvalue(delta: complex, z: complex, R: float,
                       theta0: complex = None, thetaR: complex = None,
                       tol: float = 0.0) -> bool:
    """Scale-aware proximity test |Delta| < floor * scale, in log space so
    large-|z| scales cannot overflow.

    The floor is max(1e-12, 50 tol): a determinant computed at tolerance
    tol carries O(tol) relative error, so exact spectral hits land at
    |Delta| ~ tol * scale and a fixed 1e-12 floor would miss them.
    """
    if delta == 0.0:
        return True
    floor = max(1e-12, 50.0 * tol)
    return math.log(abs(delta)) < (math.log(floor)
                                   + log_delta_scale(z, R, theta0, thetaR))


def basis_endpoints(V: PotentialSpec, z: complex, theta0: complex,
                    thetaR: complex, tol: float = DEFAULT_TOL) -> BasisEndpoints:
    """Endpoint data of u- and u+ from a single fundamental-system solve.

    u- = (-sin(theta0) theta + cos(theta0) phi)/Delta(theta0, 0) and u+ from
    the analogous combination; collapsing the Wronskian gives the exact
    endpoint values

        u-(0)  = -sin(theta0)/Delta(theta0,0),  u-'(0) = cos(theta0)/Delta(theta0,0),
        u+(R)  = -sin(thetaR)/Delta(0,thetaR),  u+'(R) = -cos(thetaR)/Delta(0,thetaR),

    with u-(R) = u+(0) = 1 holding exactly by construction.
    """
    fs = fundamental_system(V, z, V.R, tol)
    return basis_endpoints_from_fs(fs, V.R, theta0, thetaR, tol)


def basis_endpoints_from_fs(fs: FundamentalEval, R: float, theta0: complex,
                            thetaR: complex,
                            tol: float = DEFAULT_TOL) -> BasisEndpoints:
    z = fs.z
    d_minus = delta_from_fs(fs, theta0, 0.0)   # cos(theta0) phi(R) - sin(theta0) theta(R)
    d_plus = delta_from_fs(fs, 0.0, thetaR)    # cos(thetaR) phi(R) - sin(thetaR) phi'(R)
    for name, th0, thR, d in (("H_{theta0,0}", theta0, 0.0, d_minus),
                              ("H_{0,thetaR}", 0.0, thetaR, d_plus)):
        if is_near_eigenvalue(d, z, R, th0, thR, tol):
            raise NearEigenvalueError(
                f"z = {z} is numerically an eigenvalue of the auxiliary "
                f"operator {name}; the u+/- normalization does not exist",
                z=z, operator=name)
    c0, s0 = cmath.cos(theta0), cmath.sin(theta0)
    cR, sR = cmath.cos(thetaR), cmath.sin(thetaR)
    um0 = CauchyData(-s0 / d_minus, c0 / d_minus, 0.0)
    umR = CauchyData(d_minus / d_minus,
                     (c0 * fs.dphi - s0 * fs.dtheta) / d_minus, R)
    up0 = CauchyData(d_plus / d_plus,
                     (sR * fs.dtheta - cR * fs.theta) / d_plus, 0.0)
    upR = CauchyData(-sR / d_plus, -cR / d_plus, R)
    return BasisEndpoints(uminus_at_0=um0, uminus_at_R=umR,
                          uplus_at_0=up0, uplus_at_R=upR, z=z)


def wronskian(basis: BasisEndpoints, rel_tol: float = 1e-7) -> complex:
    """W(u+, u-), cross-checked between the x = 0 and x = R evaluations."""
    w0 = (basis.uplus_at_0.u * basis.uminus_at_0.du
          - basis.uplus_at_0.du * basis.uminus_at_0.u)
    wR = (basis.uplus_at_R.u * basis.uminus_at_R.du
          - basis.uplus_at_R.du * basis.uminus_at_R.u)
    scale = max(abs(w0), abs(wR))
    if scale > 0.0 and abs(w0 - wR) > rel_tol * scale:
        raise AccuracyError(
            f"Wronskian endpoint evaluations disagree: {w0} vs {wR}")
    return w0


class SolutionEvaluator:
    """Cached interior evaluation of u-, u+ for one (V, z).

    u- is integrated rightward from 0 and u+ leftward from R: for
    Im(sqrt(z)) > 0 each solution grows along its integration direction, so
    the co-propagated complementary mode cannot swamp it.
    """

    def __init__(self, V: PotentialSpec, z: complex, theta0: complex,
                 thetaR: complex, tol: float = DEFAULT_TOL):
        self.V = V
        self.z = z
        self.tol = tol
        self.basis = basis_endpoints(V, z, theta0, thetaR, tol)
        self._minus_cache = {0.0: self.basis.uminus_at_0,
                             V.R: self.basis.uminus_at_R}
        self._plus_cache = {0.0: self.basis.uplus_at_0,
                            V.R: self.basis.uplus_at_R}

    def uminus(self, x: float) -> CauchyData:
        hit = self._minus_cache.get(x)
        if hit is None:
            hit = propagate(self.V, self.z, self.basis.uminus_at_0, x, self.tol)
            self._minus_cache[x] = hit
        return hit

    def uplus(self, x: float) -> CauchyData:
        hit = self._plus_cache.get(x)
        if hit is None:
            hit = propagate(self.V, self.z, self.basis.uplus_at_R, x, self.tol)
            self._plus_cache[x] = hit
        return hit

    def wronskian(self) -> complex:
        return wronskian(self.basis)


def map_over_z(fn, zs, jobs: int = 1):
    """Evaluate fn on a z grid; results in grid order.

    All operations here are pure functions without shared integrator state,
    so fan-out is safe; with jobs > 1 a process pool is used (fn must be
    picklable).
    """
    zs = list(zs)
    if jobs <= 1 or len(zs) <= 1:
        return [fn(z) for z in zs]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, zs))
