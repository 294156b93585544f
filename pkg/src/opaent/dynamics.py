"""Linearized fluctuation dynamics: drift and diffusion matrices, stability.

Quadrature ordering is fixed everywhere as ``(dq, dp, dX1, dY1, dX2, dY2)``
with 0-based indices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StabilityError
from .model import DerivedParams, PhysicalParams, SteadyState

__all__ = [
    "LinearModel",
    "build_drift",
    "build_diffusion",
    "build_linear_model",
    "spectral_abscissa",
    "stability_margin",
    "is_stable",
    "characteristic_polynomial",
    "routh_hurwitz_stable",
]

STABILITY_RTOL = 1e-9


@dataclass(frozen=True)
class LinearModel:
    A: np.ndarray
    D: np.ndarray
    steady: SteadyState
    derived: DerivedParams
    omega_m: float


def build_drift(steady: SteadyState, derived: DerivedParams, G, theta, omega_m, gamma_m):
    c, s = np.cos(theta), np.sin(theta)
    kappa = derived.kappa
    A = np.zeros((6, 6))
    A[0, 1] = omega_m
    A[1, 0] = -omega_m
    A[1, 1] = -gamma_m
    A[1, 2] = steady.Gcpl_1
    A[1, 4] = steady.Gcpl_2
    for k, (delta, coupling) in enumerate(
        ((steady.Delta_1, steady.Gcpl_1), (steady.Delta_2, steady.Gcpl_2))
    ):
        x, y = 2 + 2 * k, 3 + 2 * k
        A[x, x] = -kappa + 2 * G * c
        A[x, y] = delta + 2 * G * s
        A[y, x] = -delta + 2 * G * s
        A[y, y] = -kappa - 2 * G * c
        A[y, 0] = coupling
    return A


def build_diffusion(kappa, gamma_m, n_bar):
    return np.diag([0.0, gamma_m * (2 * n_bar + 1), kappa, kappa, kappa, kappa])


def build_linear_model(params: PhysicalParams, derived: DerivedParams, steady: SteadyState):
    A = build_drift(steady, derived, params.opa_gain, params.opa_phase,
                    params.omega_m, params.gamma_m)
    D = build_diffusion(derived.kappa, params.gamma_m, derived.n_bar)
    return LinearModel(A=A, D=D, steady=steady, derived=derived, omega_m=params.omega_m)


def _norm_max(A):
    return float(np.max(np.abs(A)))


def spectral_abscissa(A, scale=None) -> float:
    """Largest real part of the eigenvalues of ``A``.

    Eigenvalues are computed for ``A / scale`` (default: largest entry of ``A``;
    the pipeline passes the mechanical frequency) and rescaled afterwards.
    """
    A = np.asarray(A, dtype=float)
    if not np.all(np.isfinite(A)):
        raise StabilityError("drift matrix has non-finite entries")
    if scale is None:
        scale = _norm_max(A) or 1.0
    try:
        eig = np.linalg.eigvals(A / scale)
    except np.linalg.LinAlgError as exc:
        raise StabilityError(f"eigenvalue computation did not converge: {exc}") from exc
    return float(np.max(eig.real)) * scale


def stability_margin(A) -> float:
    return STABILITY_RTOL * _norm_max(A)


def is_stable(A, scale=None) -> bool:
    """Strict stability with a relative margin; marginal matrices count as unstable."""
    return spectral_abscissa(A, scale) < -stability_margin(A)


def characteristic_polynomial(A):
    """Coefficients ``[1, c1, ..., cn]`` of ``det(sI - A)`` by Faddeev-LeVerrier.

    Uses only matrix products and traces, so it is independent of any
    eigenvalue routine.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    coeffs = [1.0]
    M = np.zeros_like(A)
    eye = np.eye(n)
    for k in range(1, n + 1):
        M = A @ M + coeffs[-1] * eye
        coeffs.append(-np.trace(A @ M) / k)
    return np.array(coeffs)


def routh_hurwitz_stable(A) -> bool:
    """Routh-Hurwitz test on the characteristic polynomial of ``A``.

    A zero (or sign change) anywhere in the first column of the Routh array
    means "not strictly stable".
    """
    A = np.asarray(A, dtype=float)
    scale = _norm_max(A) or 1.0
    coeffs = characteristic_polynomial(A / scale)
    n = len(coeffs) - 1
    width = n // 2 + 1
    rows = np.zeros((n + 1, width + 1))
    rows[0, : len(coeffs[0::2])] = coeffs[0::2]
    rows[1, : len(coeffs[1::2])] = coeffs[1::2]
    for i in range(2, n + 1):
        pivot = rows[i - 1, 0]
        if pivot == 0:
            return False
        rows[i, :-1] = (pivot * rows[i - 2, 1:] - rows[i - 2, 0] * rows[i - 1, 1:]) / pivot
    first = rows[:, 0]
    return bool(np.all(first > 0))
