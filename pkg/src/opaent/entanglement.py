"""Logarithmic negativity and squeezing diagnostics for the two cavity modes.

Convention: quadratures ``X = (a + a^dag)/sqrt2``, ``Y = i(a^dag - a)/sqrt2``, so
the vacuum has variance 1/2 and a physical Gaussian state has every
symplectic eigenvalue >= 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnphysicalError

__all__ = [
    "EntanglementReport",
    "symplectic_form",
    "cavity_block",
    "partial_transpose_mode2",
    "symplectic_eigenvalues_2mode",
    "symplectic_spectrum",
    "log_negativity",
    "min_symplectic_eigenvalue_pt",
    "squeezing_ratios",
    "entanglement_report",
]

PHYS_TOL = 1e-9
# |2 nu - 1| below this is rounding noise, not entanglement
CLAMP_TOL = 1e-12

_PT2 = np.diag([1.0, 1.0, 1.0, -1.0])


@dataclass(frozen=True)
class EntanglementReport:
    E_N: float
    nu_minus_tilde: float
    variances: tuple
    ratio_mode1: float
    ratio_mode2: float


def symplectic_form(n: int) -> np.ndarray:
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def cavity_block(V) -> np.ndarray:
    """The 4x4 ``(X1, Y1, X2, Y2)`` block of the full covariance matrix."""
    V = np.asarray(V)
    return V[2:6, 2:6].copy()


def partial_transpose_mode2(Vc) -> np.ndarray:
    return _PT2 @ np.asarray(Vc) @ _PT2


def symplectic_eigenvalues_2mode(M):
    """Symplectic eigenvalues of a 4x4 two-mode covariance matrix.

    Uses the invariants of ``M = [[A, C], [C^T, B]]``::

        Delta = det A + det B + 2 det C
        nu_-+^2 = (Delta -+ sqrt(Delta^2 - 4 det M)) / 2

    Returns ``(nu_minus, nu_plus)``. Pass a partially transposed matrix to
    get the PT spectrum.
    """
    M = np.asarray(M, dtype=float)
    a, b, c = M[:2, :2], M[2:, 2:], M[:2, 2:]
    if np.any(np.diag(M) <= 0):
        raise UnphysicalError("covariance matrix has non-positive variances")
    det_m = float(np.linalg.det(M))
    delta = float(np.linalg.det(a) + np.linalg.det(b) + 2 * np.linalg.det(c))
    if det_m <= 0:
        raise UnphysicalError(f"covariance matrix has non-positive determinant {det_m:.3e}")
    disc = delta * delta - 4 * det_m
    if disc < 0:
        if disc < -PHYS_TOL * max(delta * delta, 1.0):
            raise UnphysicalError(f"complex symplectic eigenvalues (discriminant {disc:.3e})")
        disc = 0.0
    root = np.sqrt(disc)
    plus_sq = 0.5 * (delta + root)
    if plus_sq <= 0:
        raise UnphysicalError("negative symplectic invariant")
    # det M = nu_-^2 nu_+^2 avoids cancellation in (delta - root)
    minus_sq = det_m / plus_sq
    return float(np.sqrt(minus_sq)), float(np.sqrt(plus_sq))


def symplectic_spectrum(V, n=None) -> np.ndarray:
    """Symplectic eigenvalues: the positive eigenvalues of ``i Omega_n V``, ascending."""
    V = np.asarray(V, dtype=float)
    if n is None:
        n = V.shape[0] // 2
    eig = np.linalg.eigvals(1j * symplectic_form(n) @ V)
    tol = PHYS_TOL * max(1.0, float(np.max(np.abs(eig))))
    # physical V: i Omega V has real eigenvalues in +-nu pairs
    if np.any(np.abs(eig.imag) > tol):
        raise UnphysicalError(f"symplectic eigenvalues are not real: {eig}")
    ev = np.sort(eig.real)
    neg, pos = -ev[:n][::-1], ev[n:]
    if np.any(np.abs(neg - pos) > tol) or np.any(pos <= 0):
        raise UnphysicalError(f"symplectic eigenvalues do not pair: {ev}")
    return 0.5 * (neg + pos)


def min_symplectic_eigenvalue_pt(Vc) -> float:
    return symplectic_eigenvalues_2mode(partial_transpose_mode2(Vc))[0]


def log_negativity(Vc) -> tuple[float, float]:
    """Return ``(E_N, nu_minus_tilde)`` for the two-mode covariance ``Vc``."""
    nu = min_symplectic_eigenvalue_pt(Vc)
    x = 2 * nu
    if x >= 1 - CLAMP_TOL:
        return 0.0, nu
    return float(-np.log(x)), nu


def squeezing_ratios(V) -> tuple[float, float]:
    """``<dX1^2>/<dY1^2>`` and ``<dY2^2>/<dX2^2>``."""
    V = np.asarray(V)
    d = np.diag(V)[2:6]
    if np.any(d <= 0):
        raise UnphysicalError(f"non-positive quadrature variance: {d}")
    return float(d[0] / d[1]), float(d[3] / d[2])


def entanglement_report(V) -> EntanglementReport:
    V = np.asarray(V)
    en, nu = log_negativity(cavity_block(V))
    r1, r2 = squeezing_ratios(V)
    return EntanglementReport(
        E_N=en,
        nu_minus_tilde=nu,
        variances=tuple(float(x) for x in np.diag(V)),
        ratio_mode1=r1,
        ratio_mode2=r2,
    )
