"""Steady-state covariance from the continuous Lyapunov equation ``A V + V A^T = -D``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .dynamics import is_stable
from .errors import SingularError, UnstableError

__all__ = ["CovarianceMatrix", "solve_lyapunov", "lyapunov_residual"]

ASYMMETRY_RTOL = 1e-9
RESIDUAL_RTOL = 1e-8
# 36x36 systems with condition numbers above this are treated as marginal.
MAX_CONDITION = 1e14


@dataclass(frozen=True)
class CovarianceMatrix:
    """Symmetrized solution with its quality diagnostics.

    ``flagged`` is set when the raw solve was noticeably asymmetric or the
    relative Frobenius residual exceeds ``RESIDUAL_RTOL``.
    """

    V: np.ndarray
    residual_norm: float
    asymmetry: float
    flagged: bool


def lyapunov_residual(A, V, D) -> float:
    """Relative Frobenius residual ``||A V + V A^T + D|| / ||D||``."""
    R = A @ V + V @ A.T + D
    dn = np.linalg.norm(D)
    return float(np.linalg.norm(R) / (dn if dn > 0 else 1.0))


def _solve_kron(As, Ds):
    n = As.shape[0]
    eye = np.eye(n)
    # row-major vec: vec(A V) = (A kron I) vec V, vec(V A^T) = (I kron A) vec V
    K = np.kron(As, eye) + np.kron(eye, As)
    if np.linalg.cond(K) > MAX_CONDITION:
        raise SingularError("vectorized Lyapunov system is numerically singular")
    try:
        v = np.linalg.solve(K, -Ds.reshape(-1))
    except np.linalg.LinAlgError as exc:
        raise SingularError(str(exc)) from exc
    return v.reshape(n, n)


def solve_lyapunov(A, D, *, scale=None, method="kron", check_stability=True) -> CovarianceMatrix:
    """Solve ``A V + V A^T = -D`` for a stable drift matrix ``A``.

    Parameters
    ----------
    A, D : (n, n) array_like
        Drift and diffusion matrices (same units).
    scale : float, optional
        Both matrices are divided by ``scale`` before solving; the solution
        is unchanged. Defaults to the largest entry of ``A``.
    method : {"kron", "bartels-stewart"}
        Dense vectorized solve (default) or SciPy's Schur-based solver.

    Raises
    ------
    UnstableError
        If ``A`` is not strictly stable.
    SingularError
        If the vectorized system is numerically singular.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    if check_stability and not is_stable(A, scale):
        raise UnstableError("drift matrix is not strictly stable; no steady state")
    if scale is None:
        scale = float(np.max(np.abs(A))) or 1.0
    As, Ds = A / scale, D / scale
    if method == "kron":
        V = _solve_kron(As, Ds)
    elif method == "bartels-stewart":
        V = scipy.linalg.solve_continuous_lyapunov(As, -Ds)
    else:
        raise ValueError(f"unknown method {method!r}")
    vnorm = float(np.max(np.abs(V))) or 1.0
    asymmetry = float(np.max(np.abs(V - V.T))) / vnorm
    V = 0.5 * (V + V.T)
    residual = lyapunov_residual(As, V, Ds)
    flagged = asymmetry > ASYMMETRY_RTOL or residual > RESIDUAL_RTOL
    return CovarianceMatrix(V=V, residual_norm=residual, asymmetry=asymmetry, flagged=flagged)
