"""General boundary data maps, the Robin-to-Robin special case, and the
scalar Weyl-Titchmarsh functions on their diagonal.

Entries are assembled from characteristic-determinant ratios.  Expanding
the distinguished basis u-, u+ in the fundamental system and collapsing
the Wronskian terms gives the exact form

    Lambda^{theta'}_{theta}(z)
        = 1/Delta(theta0,thetaR) * [ Delta(theta0',thetaR)   sin(theta0'-theta0) ]
                                   [ sin(thetaR'-thetaR)     Delta(theta0,thetaR') ]

so the removable singularities at the auxiliary spectra sigma(H_{theta0,0})
and sigma(H_{0,thetaR}) cancel identically (only Delta at the requested
angle pairs appears), realizing the meromorphic continuation numerically.
The determinant identity det Lambda = Delta(theta')/Delta(theta) makes the
group laws exact at this level.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, DomainError, EigenvalueHitError
from .odecore import (DEFAULT_TOL, FundamentalEval, delta_from_fs,
                      fundamental_system, is_near_eigenvalue)
from .potential import PotentialSpec, sqrt_upper
from .traces import AnglePair, AngleQuad, angles_mod_pi_zero, diag_sin


@dataclass(frozen=True)
class BoundaryDataMap:
    matrix: np.ndarray
    z: complex
    quad: AngleQuad


def _check_spectrum(delta: complex, z: complex, R: float, pair: AnglePair,
                    tol: float = 0.0) -> None:
    if is_near_eigenvalue(delta, z, R, pair.theta0, pair.thetaR, tol):
        raise EigenvalueHitError(
            f"z = {z} is numerically an eigenvalue of H_({pair.theta0}, "
            f"{pair.thetaR}); the boundary data map has a pole there",
            z=z, operator=f"H_{{{pair.theta0},{pair.thetaR}}}")


def lambda_from_fs(fs: FundamentalEval, R: float, quad: AngleQuad,
                   tol: float = 0.0) -> np.ndarray:
    t0, tR = quad.base.theta0, quad.base.thetaR
    t0p, tRp = quad.primed.theta0, quad.primed.thetaR
    den = delta_from_fs(fs, t0, tR)
    _check_spectrum(den, fs.z, R, quad.base, tol)
    return np.array(
        [[delta_from_fs(fs, t0p, tR) / den, cmath.sin(t0p - t0) / den],
         [cmath.sin(tRp - tR) / den, delta_from_fs(fs, t0, tRp) / den]],
        dtype=complex)


def bdmap_general(V: PotentialSpec, R: float, quad: AngleQuad, z: complex,
                  tol: float = DEFAULT_TOL) -> BoundaryDataMap:
    """The map sending the (theta0,thetaR)-trace of a solution to its
    (theta0',thetaR')-trace, as a 2x2 matrix."""
    fs = fundamental_system(V, z, R, tol)
    return BoundaryDataMap(lambda_from_fs(fs, R, quad, tol), z, quad)


def bdmap_robin(V: PotentialSpec, R: float, pair: AnglePair, z: complex,
                tol: float = DEFAULT_TOL) -> BoundaryDataMap:
    """Robin-to-Robin map: primed angles are base + pi/2; the diagonal is
    (m+, -m-) and the off-diagonal entries coincide."""
    q = AngleQuad(pair, pair.robin_primed())
    return bdmap_general(V, R, q, z, tol)


def m_functions_from_fs(fs: FundamentalEval, R: float, pair: AnglePair,
                        tol: float = 0.0):
    """(m+, m-) from one fundamental solve, in exact determinant-ratio form."""
    t0, tR = pair.theta0, pair.thetaR
    den = delta_from_fs(fs, t0, tR)
    _check_spectrum(den, fs.z, R, pair, tol)
    mplus = delta_from_fs(fs, t0 + math.pi / 2.0, tR) / den
    mminus = -delta_from_fs(fs, t0, tR + math.pi / 2.0) / den
    return mplus, mminus


def m_plus(V: PotentialSpec, R: float, theta0: complex, thetaR: complex,
           z: complex, tol: float = DEFAULT_TOL) -> complex:
    """m+ = (-sin(theta0) + cos(theta0) u+'(z,0)) / (cos(theta0) + sin(theta0) u+'(z,0))."""
    fs = fundamental_system(V, z, R, tol)
    return m_functions_from_fs(fs, R, AnglePair(theta0, thetaR), tol)[0]


def m_minus(V: PotentialSpec, R: float, theta0: complex, thetaR: complex,
            z: complex, tol: float = DEFAULT_TOL) -> complex:
    """m- = (sin(thetaR) + cos(thetaR) u-'(z,R)) / (cos(thetaR) - sin(thetaR) u-'(z,R))."""
    fs = fundamental_system(V, z, R, tol)
    return m_functions_from_fs(fs, R, AnglePair(theta0, thetaR), tol)[1]


def asymptotic_reference(pair: AnglePair, z: complex, R: float) -> np.ndarray:
    """Leading |z| -> infinity behavior of the Robin map (Im sqrt(z) > 0).

    Four cases by whether sin(theta0), sin(thetaR) vanish.  The (2,2)
    leading terms are +cot(thetaR) resp. +i sqrt(z), as the V = 0 closed
    forms dictate (and as they must be: the diagonal of a Herglotz matrix
    cannot have negative imaginary part on the upper half-plane).
    """
    rt = sqrt_upper(z)
    if rt.imag <= 0.0:
        raise DomainError("asymptotic reference needs Im sqrt(z) > 0")
    t0, tR = pair.theta0, pair.thetaR
    z0 = angles_mod_pi_zero(t0)
    zR = angles_mod_pi_zero(tR)
    e = cmath.exp(1j * rt * R)
    i = 1j
    if not z0 and not zR:
        off = 2.0 * i * e / (rt * cmath.sin(t0) * cmath.sin(tR))
        d1, d2 = 1.0 / cmath.tan(t0), 1.0 / cmath.tan(tR)
    elif z0 and not zR:
        off = -2.0 * e / cmath.sin(tR)
        d1, d2 = i * rt, 1.0 / cmath.tan(tR)
    elif not z0 and zR:
        off = -2.0 * e / cmath.sin(t0)
        d1, d2 = 1.0 / cmath.tan(t0), i * rt
    else:
        off = -2.0 * i * rt * e
        d1, d2 = i * rt, i * rt
    return np.array([[d1, off], [off, d2]], dtype=complex)


def herglotz_imag(V: PotentialSpec, R: float, quad: AngleQuad, z: complex,
                  tol: float = DEFAULT_TOL) -> np.ndarray:
    """Im(Lambda^{theta'}_{theta}(z) S_{theta'-theta}) as a Hermitian matrix.

    Positive definite for real V, real admissible angles and Im z > 0;
    the caller asserts definiteness.
    """
    if not V.is_real:
        raise DomainError("the Herglotz property needs a real potential")
    if not quad.is_real:
        raise DomainError("the Herglotz property needs real boundary angles")
    d0, dR = quad.diffs
    if angles_mod_pi_zero(d0) or angles_mod_pi_zero(dR):
        raise DomainError("angle differences must be nonzero mod pi")
    if z.imag <= 0.0:
        raise DomainError("z must lie in the open upper half-plane")
    M = bdmap_general(V, R, quad, z, tol).matrix @ diag_sin(d0, dR)
    return (M - M.conj().T) / 2j


def _neville_to_zero(eps, vals):
    """Polynomial extrapolation of vals(eps) to eps = 0 (entrywise arrays).

    Returns (limit, error_estimate) where the estimate is the last
    correction's magnitude.
    """
    t = [np.asarray(v, dtype=complex) for v in vals]
    n = len(t)
    tops = [t[0]]
    for m in range(1, n):
        t = [(eps[i] * t[i + 1] - eps[i + m] * t[i]) / (eps[i] - eps[i + m])
             for i in range(n - m)]
        tops.append(t[0])
    est = float(np.max(np.abs(tops[-1] - tops[-2])))
    return tops[-1], est


def measure_point_mass(V: PotentialSpec, R: float, quad: AngleQuad,
                       lam: float, eps_sequence=(1e-3, 1e-4, 1e-5),
                       tol: float = DEFAULT_TOL) -> np.ndarray:
    """Jump Sigma({lam}) of the Herglotz measure at an isolated eigenvalue.

    Near a simple pole, Lambda(z) S ~ Sigma({lam})/(lam - z), so
    eps * Im[(Lambda S)(lam + i eps)] -> Sigma({lam}); the limit is taken by
    polynomial extrapolation over eps_sequence (the literal double limit of
    the Stieltjes inversion is not implementable).
    """
    eps = sorted((float(e) for e in eps_sequence), reverse=True)
    if len(eps) < 2:
        raise DomainError("need at least two epsilon values to extrapolate")
    vals = [e * herglotz_imag(V, R, quad, lam + 1j * e, tol) for e in eps]
    jump, est = _neville_to_zero(eps, vals)
    scale = max(1.0, float(np.max(np.abs(jump))))
    if est > 1e-3 * scale:
        raise AccuracyError(
            f"point-mass extrapolation at lambda = {lam} did not settle "
            f"(last correction {est:.3e}); is the eigenvalue isolated?")
    # exact jump is Hermitian PSD; symmetrize away the O(eps) residue
    return (jump + jump.conj().T) / 2.0
