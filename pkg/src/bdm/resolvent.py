"""Green's function, boundary-trace resolvent kernels, and Krein-type
rank-<=2 resolvent corrections between different Robin realizations.

The resolvent kernel is G(z,x,x') = u-(z,min) u+(z,max) / W(z) with W the
Wronskian of the distinguished basis.  Applying a primed trace to the
resolvent produces integral kernels proportional to u+ and u-, and the
adjoint of the conjugated trace applied to the adjoint resolvent is a
two-dimensional family spanned by u+ and u- as well; together they build
the correction kernel that turns one realization's Green's function into
another's.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .bdmap import bdmap_general
from .errors import DomainError
from .odecore import DEFAULT_TOL, SolutionEvaluator
from .potential import PotentialSpec
from .traces import AnglePair, AngleQuad, trace_gamma

P1 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
P2 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)


@dataclass(frozen=True)
class GreenEval:
    value: complex
    z: complex
    x: float
    xp: float


def green_evaluator(V: PotentialSpec, R: float, pair: AnglePair, z: complex,
                    tol: float = DEFAULT_TOL) -> "GreenKernel":
    return GreenKernel(SolutionEvaluator(V, z, pair.theta0, pair.thetaR, tol))


class GreenKernel:
    """Pointwise Green's function of one Robin realization at fixed z."""

    def __init__(self, sol: SolutionEvaluator):
        self.sol = sol
        self.w = sol.wronskian()

    def __call__(self, x: float, xp: float) -> complex:
        lo, hi = (x, xp) if x <= xp else (xp, x)
        return self.sol.uminus(lo).u * self.sol.uplus(hi).u / self.w

    def d1(self, x: float, xp: float) -> complex:
        """d/dx G on the wedge containing (x, xp); on the diagonal the
        x < x' wedge is used."""
        if x < xp or (x == xp):
            return self.sol.uminus(x).du * self.sol.uplus(xp).u / self.w
        return self.sol.uminus(xp).u * self.sol.uplus(x).du / self.w

    def d2(self, x: float, xp: float) -> complex:
        if x < xp or (x == xp):
            return self.sol.uminus(x).u * self.sol.uplus(xp).du / self.w
        return self.sol.uminus(xp).du * self.sol.uplus(x).u / self.w


def green(V: PotentialSpec, R: float, pair: AnglePair, z: complex, x: float,
          xp: float, tol: float = DEFAULT_TOL) -> GreenEval:
    """G(z,x,x'); symmetric in (x,x'), satisfies the boundary condition in
    each variable."""
    if not (0.0 <= x <= R and 0.0 <= xp <= R):
        raise DomainError("x, x' must lie in [0, R]")
    k = green_evaluator(V, R, pair, z, tol)
    return GreenEval(k(x, xp), z, x, xp)


def _trace_coeffs(sol: SolutionEvaluator, primed: AnglePair):
    """The two bracket coefficients shared by the trace-row kernels and the
    adjoint trace kernel:

        c0 = cos(theta0') u-(0) + sin(theta0') u-'(0)
        cR = cos(thetaR') u+(R) - sin(thetaR') u+'(R)
    """
    um0 = sol.basis.uminus_at_0
    upR = sol.basis.uplus_at_R
    c0 = cmath.cos(primed.theta0) * um0.u + cmath.sin(primed.theta0) * um0.du
    cR = cmath.cos(primed.thetaR) * upR.u - cmath.sin(primed.thetaR) * upR.du
    return c0, cR


def gamma_resolvent_rows(V: PotentialSpec, R: float, pair: AnglePair,
                         primed: AnglePair, z: complex,
                         tol: float = DEFAULT_TOL):
    """Kernels (k1, k2) with (gamma_{primed} (H - z)^-1 f)_j = int k_j f.

    k1 is proportional to u+, k2 to u-; the proportionality factors vanish
    like sin(theta0'-theta0), sin(thetaR'-thetaR) as primed -> base.
    """
    sol = SolutionEvaluator(V, z, pair.theta0, pair.thetaR, tol)
    w = sol.wronskian()
    c0, cR = _trace_coeffs(sol, primed)

    def k1(xp: float) -> complex:
        return c0 * sol.uplus(xp).u / w

    def k2(xp: float) -> complex:
        return cR * sol.uminus(xp).u / w

    return k1, k2


def gamma_row_coefficients(V: PotentialSpec, R: float, pair: AnglePair,
                           primed: AnglePair, z: complex,
                           tol: float = DEFAULT_TOL):
    """The bracketed angle factors of the trace-row kernels, in raw form and
    in the two sine-extracted case forms (where defined), for cross-checks.

    Returns dict with keys 'raw0', 'rawR' and lists 'forms0', 'formsR' of
    values of c0/sin(theta0'-theta0) resp. cR/sin(thetaR'-thetaR); at
    theta_0 not in {0, pi} the first form is -u-(0)/sin(theta0), at
    theta_0 not in {pi/2, 3pi/2} the second is u-'(0)/cos(theta0); for the
    right endpoint -u+(R)/sin(thetaR) and -u+'(R)/cos(thetaR).
    """
    sol = SolutionEvaluator(V, z, pair.theta0, pair.thetaR, tol)
    c0, cR = _trace_coeffs(sol, primed)
    um0 = sol.basis.uminus_at_0
    upR = sol.basis.uplus_at_R
    forms0, formsR = [], []
    s0, c0a = cmath.sin(pair.theta0), cmath.cos(pair.theta0)
    sR, cRa = cmath.sin(pair.thetaR), cmath.cos(pair.thetaR)
    if abs(s0) > 1e-9:
        forms0.append(-um0.u / s0)
    if abs(c0a) > 1e-9:
        forms0.append(um0.du / c0a)
    if abs(sR) > 1e-9:
        formsR.append(-upR.u / sR)
    if abs(cRa) > 1e-9:
        formsR.append(-upR.du / cRa)
    return {"raw0": c0, "rawR": cR, "forms0": forms0, "formsR": formsR}


def adjoint_trace_kernel(V: PotentialSpec, R: float, pair: AnglePair,
                         primed: AnglePair, z: complex, v,
                         tol: float = DEFAULT_TOL):
    """The function x -> ([conjugated-trace of adjoint resolvent]^* v)(x)
    = (c0 v1 u+(z,x) + cR v2 u-(z,x)) / W(z)."""
    v1, v2 = complex(v[0]), complex(v[1])
    sol = SolutionEvaluator(V, z, pair.theta0, pair.thetaR, tol)
    w = sol.wronskian()
    c0, cR = _trace_coeffs(sol, primed)

    def func(x: float) -> complex:
        return (c0 * v1 * sol.uplus(x).u + cR * v2 * sol.uminus(x).u) / w

    return func


def lambda_times_s(V: PotentialSpec, R: float, quad: AngleQuad, z: complex,
                   tol: float = DEFAULT_TOL) -> np.ndarray:
    """gamma_{primed} applied to the adjoint-trace columns: assembles
    Lambda^{theta'}_{theta}(z) S_{theta'-theta} column by column, entirely
    from basis endpoint data (the resolvent-representation route)."""
    sol = SolutionEvaluator(V, z, quad.base.theta0, quad.base.thetaR, tol)
    w = sol.wronskian()
    c0, cR = _trace_coeffs(sol, quad.primed)
    up0, upR = sol.basis.uplus_at_0, sol.basis.uplus_at_R
    um0, umR = sol.basis.uminus_at_0, sol.basis.uminus_at_R
    gp_up = trace_gamma(quad.primed, (up0.u, up0.du, upR.u, upR.du))
    gp_um = trace_gamma(quad.primed, (um0.u, um0.du, umR.u, umR.du))
    out = np.empty((2, 2), dtype=complex)
    out[:, 0] = (c0 * gp_up[0] / w, c0 * gp_up[1] / w)
    out[:, 1] = (cR * gp_um[0] / w, cR * gp_um[1] / w)
    return out


@dataclass
class RankTwoKernel:
    """Separable kernel sum_{j,k} left_j(x) coupling[j,k] right_k(x')."""

    left: tuple
    coupling: np.ndarray
    right: tuple

    def __call__(self, x: float, xp: float) -> complex:
        lx = np.array([f(x) for f in self.left], dtype=complex)
        rx = np.array([f(xp) for f in self.right], dtype=complex)
        return complex(lx @ self.coupling @ rx)


_SAME_ANGLE_TOL = 1e-14


def _angles_equal(a: complex, b: complex) -> bool:
    return abs(a - b) <= _SAME_ANGLE_TOL * max(1.0, abs(a), abs(b))


def krein_kernel(V: PotentialSpec, R: float, pair: AnglePair,
                 primed: AnglePair, z: complex,
                 tol: float = DEFAULT_TOL) -> RankTwoKernel | None:
    """Correction kernel C with G_{primed}(z,x,x') = G_{pair}(z,x,x') - C(x,x').

    Case dispatch: both angles changed uses the full S^-1 Lambda^-1 sandwich;
    a single changed angle uses the sine-inverse with the matching
    coordinate projection.  Returns None when primed == pair (no formula
    applies; the correction is zero).
    """
    same0 = _angles_equal(primed.theta0, pair.theta0)
    sameR = _angles_equal(primed.thetaR, pair.thetaR)
    if same0 and sameR:
        return None
    quad = AngleQuad(pair, primed)
    sol = SolutionEvaluator(V, z, pair.theta0, pair.thetaR, tol)
    w = sol.wronskian()
    c0, cR = _trace_coeffs(sol, primed)
    lam = bdmap_general(V, R, quad, z, tol).matrix
    lam_inv = np.linalg.inv(lam)
    d0, dR = quad.diffs
    if not same0 and not sameR:
        s_inv = np.array([[1.0 / cmath.sin(d0), 0.0],
                          [0.0, 1.0 / cmath.sin(dR)]], dtype=complex)
        middle = s_inv @ lam_inv
    elif sameR:  # only theta0 changed
        middle = (1.0 / cmath.sin(d0)) * (P1 @ lam_inv @ P1)
    else:        # only thetaR changed
        middle = (1.0 / cmath.sin(dR)) * (P2 @ lam_inv @ P2)

    def left1(x):
        return c0 * sol.uplus(x).u / w

    def left2(x):
        return cR * sol.uminus(x).u / w

    # right factors are the trace-row kernels of gamma_{primed} (H - z)^-1
    return RankTwoKernel(left=(left1, left2), coupling=middle,
                         right=(left1, left2))


def krein_correction(V: PotentialSpec, R: float, pair: AnglePair,
                     primed: AnglePair, z: complex, x: float, xp: float,
                     tol: float = DEFAULT_TOL) -> complex:
    """Pointwise value of the Krein correction kernel (0 when primed == pair)."""
    k = krein_kernel(V, R, pair, primed, z, tol)
    if k is None:
        return 0.0 + 0.0j
    return k(x, xp)
