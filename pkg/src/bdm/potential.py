"""Potential representations and the two exact oracles.

The free (V = 0) problem has closed-form solutions built from the pair

    f(z,s,a,b) = z sin(a) sin(b) sin(sqrt(z) s) + sqrt(z) sin(a+b) cos(sqrt(z) s)
                 - cos(a) cos(b) sin(sqrt(z) s),
    g(z,s,a,b) = f(z,s,a+pi/2,b),

from which the free boundary data map and Green's function follow.  The
second oracle covers piecewise-constant potentials, where the propagator of
the Schrodinger equation on each piece is an explicit trig/hyperbolic
rotation with wavenumber sqrt(z - v).

sqrt(z) is always taken with Im >= 0 (nonnegative real root for z >= 0);
every module shares this branch.
"""

from __future__ import annotations

import bisect
import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EigenvalueHitError

# below this |z| s^2 the sin(sqrt(z) s)/sqrt(z) style terms switch to series
SERIES_CUTOFF = 1e-4


def sqrt_upper(z: complex) -> complex:
    """Branch of sqrt with Im(sqrt(z)) >= 0; real nonnegative for z >= 0."""
    w = cmath.sqrt(z)
    if w.imag < 0.0 or (w.imag == 0.0 and w.real < 0.0):
        w = -w
    return w


def _sin_series(w: complex) -> complex:
    # sin(sqrt(w) s)/(sqrt(w) s) as a series in w = z*s^2, |w| small
    return 1.0 - w / 6.0 + w * w / 120.0 - w * w * w / 5040.0


def _cos_series(w: complex) -> complex:
    return 1.0 - w / 2.0 + w * w / 24.0 - w * w * w / 720.0


def sinc_sqrt(z: complex, s: float) -> complex:
    """sin(sqrt(z) s)/sqrt(z), entire in z (equals s at z = 0)."""
    w = z * s * s
    if abs(w) < SERIES_CUTOFF:
        return s * _sin_series(w)
    rt = sqrt_upper(z)
    return cmath.sin(rt * s) / rt


def cos_sqrt(z: complex, s: float) -> complex:
    """cos(sqrt(z) s), entire in z."""
    w = z * s * s
    if abs(w) < SERIES_CUTOFF:
        return _cos_series(w)
    return cmath.cos(sqrt_upper(z) * s)


def _f_reduced(z: complex, s: float, alpha: complex, beta: complex) -> complex:
    """f(z,s,alpha,beta)/sqrt(z): entire in z, safe at z = 0."""
    sa, sb = cmath.sin(alpha), cmath.sin(beta)
    ca, cb = cmath.cos(alpha), cmath.cos(beta)
    snc = sinc_sqrt(z, s)
    return z * sa * sb * snc + cmath.sin(alpha + beta) * cos_sqrt(z, s) - ca * cb * snc


def _g_reduced(z: complex, s: float, alpha: complex, beta: complex) -> complex:
    return _f_reduced(z, s, alpha + math.pi / 2.0, beta)


def closed_form_f(z: complex, s: float, alpha: complex, beta: complex) -> complex:
    """The generating function of the free problem; symmetric in (alpha, beta)."""
    return sqrt_upper(z) * _f_reduced(z, s, alpha, beta)


def closed_form_g(z: complex, s: float, alpha: complex, beta: complex) -> complex:
    """closed_form_f with alpha advanced by pi/2."""
    return sqrt_upper(z) * _g_reduced(z, s, alpha, beta)


@dataclass(frozen=True)
class PotentialSpec:
    """A representative of V in L^1((0, R)); possibly complex-valued.

    kind is one of "zero", "piecewise_constant", "sampled".  Piecewise
    specs carry strictly increasing interior breakpoints and one value per
    piece; sampled specs carry a strictly increasing grid spanning [0, R]
    with piecewise-linear interpolation.  At a breakpoint the right-limit
    value is returned (fixed tie-break so tests are deterministic).
    """

    kind: str
    R: float
    breakpoints: tuple = ()
    values: tuple = ()
    grid: tuple = ()

    def __post_init__(self):
        if self.R <= 0.0 or not math.isfinite(self.R):
            raise DomainError("interval length R must be positive and finite")
        if self.kind == "zero":
            pass
        elif self.kind == "piecewise_constant":
            bp = self.breakpoints
            if any(not (0.0 < b < self.R) for b in bp):
                raise DomainError("breakpoints must lie inside (0, R)")
            if any(bp[i] >= bp[i + 1] for i in range(len(bp) - 1)):
                raise DomainError("breakpoints must be strictly increasing")
            if len(self.values) != len(bp) + 1:
                raise DomainError("need one piece value per breakpoint gap")
        elif self.kind == "sampled":
            g = self.grid
            if len(g) < 2 or g[0] != 0.0 or g[-1] != self.R:
                raise DomainError("sampled grid must span [0, R]")
            if any(g[i] >= g[i + 1] for i in range(len(g) - 1)):
                raise DomainError("sampled grid must be strictly increasing")
            if len(self.values) != len(g):
                raise DomainError("need one sample per grid point")
        else:
            raise DomainError(f"unknown potential kind {self.kind!r}")
        if any(not (math.isfinite(complex(v).real) and math.isfinite(complex(v).imag))
               for v in self.values):
            raise DomainError("potential values must be finite")

    @classmethod
    def zero(cls, R: float) -> "PotentialSpec":
        return cls("zero", float(R))

    @classmethod
    def piecewise_constant(cls, breakpoints, values, R: float) -> "PotentialSpec":
        return cls("piecewise_constant", float(R),
                   breakpoints=tuple(float(b) for b in breakpoints),
                   values=tuple(complex(v) for v in values))

    @classmethod
    def sampled(cls, grid, values, R: float) -> "PotentialSpec":
        return cls("sampled", float(R),
                   grid=tuple(float(x) for x in grid),
                   values=tuple(complex(v) for v in values))

    @property
    def is_real(self) -> bool:
        return all(complex(v).imag == 0.0 for v in self.values)

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero" or all(v == 0 for v in self.values)

    def interior_knots(self) -> tuple:
        """Interior points forced as integrator step boundaries."""
        if self.kind == "piecewise_constant":
            return self.breakpoints
        if self.kind == "sampled":
            return tuple(x for x in self.grid if 0.0 < x < self.R)
        return ()

    def l1_norm(self) -> float:
        if self.kind == "zero":
            return 0.0
        if self.kind == "piecewise_constant":
            edges = (0.0,) + self.breakpoints + (self.R,)
            return sum(abs(v) * (edges[i + 1] - edges[i])
                       for i, v in enumerate(self.values))
        total = 0.0
        for i in range(len(self.grid) - 1):
            h = self.grid[i + 1] - self.grid[i]
            total += 0.5 * (abs(self.values[i]) + abs(self.values[i + 1])) * h
        return total


def eval_potential(V: PotentialSpec, x: float) -> complex:
    """Pointwise value of the chosen representative of V (right limits at
    breakpoints)."""
    if not 0.0 <= x <= V.R:
        raise DomainError(f"x = {x} outside [0, {V.R}]")
    if V.kind == "zero":
        return 0.0 + 0.0j
    if V.kind == "piecewise_constant":
        return V.values[bisect.bisect_right(V.breakpoints, x)]
    i = bisect.bisect_right(V.grid, x) - 1
    if i >= len(V.grid) - 1:
        return V.values[-1]
    x0, x1 = V.grid[i], V.grid[i + 1]
    t = (x - x0) / (x1 - x0)
    return V.values[i] * (1.0 - t) + V.values[i + 1] * t


def make_eval(V: PotentialSpec):
    """Specialized fast evaluator x -> V(x) for the integrator hot loop."""
    if V.kind == "zero":
        return lambda x: 0.0
    if V.kind == "piecewise_constant":
        bp, vals = V.breakpoints, V.values
        return lambda x: vals[bisect.bisect_right(bp, x)]
    grid, vals, n = V.grid, V.values, len(V.grid)

    def ev(x):
        i = bisect.bisect_right(grid, x) - 1
        if i < 0:
            return vals[0]
        if i >= n - 1:
            return vals[-1]
        x0, x1 = grid[i], grid[i + 1]
        t = (x - x0) / (x1 - x0)
        return vals[i] * (1.0 - t) + vals[i + 1] * t

    return ev


def _raise_if_free_eigenvalue(fr: complex, z: complex, R: float,
                              theta0: complex, thetaR: complex) -> None:
    # fr is the entire part f/sqrt(z) = -Delta of the free problem; compare
    # against its angle-weighted natural magnitude, in log space
    root = math.sqrt(max(1.0, abs(z)))
    s0, c0 = abs(cmath.sin(theta0)), abs(cmath.cos(theta0))
    sR, cR = abs(cmath.sin(thetaR)), abs(cmath.cos(thetaR))
    amp = root * s0 * sR + s0 * cR + c0 * sR + c0 * cR / root
    log_scale = math.log(max(amp, 1e-300)) + sqrt_upper(z).imag * R
    if fr == 0.0 or math.log(abs(fr)) <= math.log(1e-12) + log_scale:
        raise EigenvalueHitError(
            f"z = {z} is an eigenvalue of the free operator with angles "
            f"({theta0}, {thetaR})", z=z, operator="H0")


def oracle_bdmap_zero(z: complex, R: float, theta0: complex,
                      thetaR: complex) -> np.ndarray:
    """Exact Robin-to-Robin map of the free problem (entries g/f, -sqrt(z)/f,
    written through the entire parts so z = 0 is a removable point)."""
    fr = _f_reduced(z, R, theta0, thetaR)
    _raise_if_free_eigenvalue(fr, z, R, theta0, thetaR)
    m11 = _g_reduced(z, R, theta0, thetaR) / fr
    m22 = _g_reduced(z, R, thetaR, theta0) / fr
    off = -1.0 / fr
    return np.array([[m11, off], [off, m22]], dtype=complex)


def oracle_green_zero(z: complex, R: float, theta0: complex, thetaR: complex,
                      x: float, xp: float) -> complex:
    """Exact Green's function of the free problem."""
    if not (0.0 <= x <= R and 0.0 <= xp <= R):
        raise DomainError("x, x' must lie in [0, R]")
    fr = _f_reduced(z, R, theta0, thetaR)
    _raise_if_free_eigenvalue(fr, z, R, theta0, thetaR)
    lo, hi = (x, xp) if x <= xp else (xp, x)
    return -_f_reduced(z, lo, theta0, 0.0) * _f_reduced(z, R - hi, 0.0, thetaR) / fr


def oracle_wronskian_zero(z: complex, R: float, theta0: complex,
                          thetaR: complex) -> complex:
    """Exact Wronskian W(u+, u-) of the free problem."""
    return -_f_reduced(z, R, theta0, thetaR) / (
        _f_reduced(z, R, theta0, 0.0) * _f_reduced(z, R, 0.0, thetaR))


def oracle_uplusminus_zero(z: complex, R: float, theta0: complex,
                           thetaR: complex, x: float) -> tuple:
    """Free-problem (u-, u-', u+, u+') at x, from the Example closed forms.

    d/dx f(z,x,a,0) = -f(z,x,a,pi/2) and d/dx f(z,R-x,0,b) = f(z,R-x,pi/2,b).
    """
    fm = _f_reduced(z, R, theta0, 0.0)
    fp = _f_reduced(z, R, 0.0, thetaR)
    um = _f_reduced(z, x, theta0, 0.0) / fm
    dum = -_f_reduced(z, x, theta0, math.pi / 2.0) / fm
    up = _f_reduced(z, R - x, 0.0, thetaR) / fp
    dup = _f_reduced(z, R - x, math.pi / 2.0, thetaR) / fp
    return um, dum, up, dup


def _piece_matrix(k2: complex, d: float) -> np.ndarray:
    """Propagator over length d for u'' = -k2 u (k2 = z - v)."""
    c = cos_sqrt(k2, d)
    s = sinc_sqrt(k2, d)           # sin(k d)/k, equals d at k = 0
    return np.array([[c, s], [-k2 * s, c]], dtype=complex)


def transfer_matrix_piecewise(V: PotentialSpec, z: complex, a: float,
                              b: float) -> np.ndarray:
    """Exact 2x2 propagator T with (u(b), u'(b))^T = T (u(a), u'(a))^T for
    piecewise-constant V; det T = 1."""
    if V.kind != "piecewise_constant" and not (V.kind == "zero"):
        raise DomainError("transfer matrices require a piecewise-constant potential")
    if not (0.0 <= a <= b <= V.R):
        raise DomainError("need 0 <= a <= b <= R")
    if V.kind == "zero":
        return _piece_matrix(z, b - a)
    edges = (0.0,) + V.breakpoints + (V.R,)
    T = np.eye(2, dtype=complex)
    for i, v in enumerate(V.values):
        lo = max(edges[i], a)
        hi = min(edges[i + 1], b)
        if hi > lo:
            T = _piece_matrix(z - v, hi - lo) @ T
    return T
