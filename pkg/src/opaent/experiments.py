"""Parameter sweeps and the optimal-OPA-gain search.

Every point runs the full pipeline (constants -> steady state -> drift and
diffusion -> stability -> Lyapunov -> negativity). A point that fails or is
unstable becomes a record with ``stable=False`` and an ``error`` message; it
never aborts a sweep.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import partial

import numpy as np

from .dynamics import build_linear_model, is_stable, spectral_abscissa
from .entanglement import entanglement_report, symplectic_spectrum
from .errors import NoStablePointError, OptoError
from .lyapunov import solve_lyapunov
from .model import AmplitudeModel, PhysicalParams, derive_constants, solve_steady_state

__all__ = [
    "SweepRecord",
    "OptimalGainResult",
    "evaluate_point",
    "covariance_at",
    "sweep",
    "sweep_theta",
    "sweep_gain",
    "sweep_ratios",
    "golden_section_max",
    "optimal_gain",
    "optimal_gain_vs_temperature",
    "gain_monotonicity",
    "default_theta_grid",
    "default_gain_grid",
    "default_temperature_grid",
]

PHYSICALITY_TOL = 1e-9


@dataclass(frozen=True)
class SweepRecord:
    sweep_value: float
    stable: bool
    E_N: float | None = None
    nu_minus_tilde: float | None = None
    ratio_mode1: float | None = None
    ratio_mode2: float | None = None
    spectral_abscissa: float | None = None
    residual: float | None = None
    min_symplectic: float | None = None
    error: str | None = None


@dataclass(frozen=True)
class OptimalGainResult:
    temperature: float
    kappa: float
    G_opt: float
    E_N_opt: float
    bracket: tuple[float, float]
    baseline_E_N: float
    enhancement_percent: float | None
    boundary_maximum: bool

    @property
    def G_opt_in_kappa(self) -> float:
        return self.G_opt / self.kappa


def default_theta_grid(num=201):
    return np.linspace(0.0, math.pi, num)


def default_gain_grid(kappa, num=141, max_in_kappa=7.0):
    return np.linspace(0.0, max_in_kappa * kappa, num)


def default_temperature_grid(num=25, lo=5e-3, hi=2.0):
    return np.geomspace(lo, hi, num)


def covariance_at(params: PhysicalParams, model=AmplitudeModel.PAPER):
    """Run the pipeline up to the Lyapunov solve; returns ``(linear_model, covariance)``."""
    derived = derive_constants(params)
    steady = solve_steady_state(params, derived, model)
    lin = build_linear_model(params, derived, steady)
    cov = solve_lyapunov(lin.A, lin.D, scale=params.omega_m)
    return lin, cov


def evaluate_point(params: PhysicalParams, model=AmplitudeModel.PAPER, sweep_value=math.nan) -> SweepRecord:
    try:
        derived = derive_constants(params)
        steady = solve_steady_state(params, derived, model)
        lin = build_linear_model(params, derived, steady)
        abscissa = spectral_abscissa(lin.A, params.omega_m)
        if not is_stable(lin.A, params.omega_m):
            return SweepRecord(sweep_value, False, spectral_abscissa=abscissa)
        cov = solve_lyapunov(lin.A, lin.D, scale=params.omega_m, check_stability=False)
        if cov.flagged:
            return SweepRecord(
                sweep_value, False, spectral_abscissa=abscissa, residual=cov.residual_norm,
                error=f"Lyapunov solve flagged (residual {cov.residual_norm:.2e}, "
                      f"asymmetry {cov.asymmetry:.2e})",
            )
        nu_min = float(symplectic_spectrum(cov.V)[0])
        if nu_min < 0.5 - PHYSICALITY_TOL:
            return SweepRecord(
                sweep_value, False, spectral_abscissa=abscissa, residual=cov.residual_norm,
                min_symplectic=nu_min, error=f"unphysical covariance (min nu = {nu_min:.12g})",
            )
        rep = entanglement_report(cov.V)
    except OptoError as exc:
        return SweepRecord(sweep_value, False, error=f"{type(exc).__name__}: {exc}")
    return SweepRecord(
        sweep_value=sweep_value,
        stable=True,
        E_N=rep.E_N,
        nu_minus_tilde=rep.nu_minus_tilde,
        ratio_mode1=rep.ratio_mode1,
        ratio_mode2=rep.ratio_mode2,
        spectral_abscissa=abscissa,
        residual=cov.residual_norm,
        min_symplectic=nu_min,
    )


def _evaluate(item, model):
    params, value = item
    return evaluate_point(params, model, value)


def sweep(points, model=AmplitudeModel.PAPER, workers=None):
    """Evaluate ``(params, sweep_value)`` pairs; order of the output matches the input.

    With ``workers > 1`` points are farmed out to a process pool. Each point
    is a pure function of its inputs, so the result does not depend on the
    number of workers.
    """
    points = list(points)
    model = AmplitudeModel(model)
    if workers is None or workers <= 1 or len(points) < 2:
        return [evaluate_point(p, model, v) for p, v in points]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(partial(_evaluate, model=model), points, chunksize=8))


def _check_grid(grid, increasing=False):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a nonempty 1-D sequence")
    if increasing and np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    return grid


def sweep_theta(base: PhysicalParams, theta_grid, model=AmplitudeModel.PAPER, workers=None):
    grid = _check_grid(theta_grid, increasing=True)
    return sweep(((replace(base, opa_phase=float(t)), float(t)) for t in grid), model, workers)


def sweep_gain(base: PhysicalParams, G_grid, model=AmplitudeModel.PAPER, workers=None):
    """Sweep the OPA gain (rad/s). ``sweep_value`` holds the gain in rad/s."""
    grid = _check_grid(G_grid)
    if np.any(grid < 0):
        raise ValueError("gain grid values must be non-negative")
    return sweep(((replace(base, opa_gain=float(g)), float(g)) for g in grid), model, workers)


# Both figures are produced from the same records; every record already
# carries E_N and the two squeezing ratios.
sweep_ratios = sweep_gain


def golden_section_max(f, lo, hi, tol, max_iter=200):
    """Maximize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``.

    The returned point is the best one evaluated, so it is never worse than
    the interior probes.
    """
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    best = max((fc, c), (fd, d))
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
            best = max(best, (fc, c))
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
            best = max(best, (fd, d))
    return best[1], best[0]


def _en_or_minus_inf(rec: SweepRecord) -> float:
    return rec.E_N if rec.stable and rec.E_N is not None else -math.inf


def optimal_gain(base: PhysicalParams, G_bounds=None, model=AmplitudeModel.PAPER,
                 tol_in_kappa=1e-3, step_in_kappa=0.05, workers=None) -> OptimalGainResult:
    """Gain that maximizes E_N at fixed phase.

    A coarse grid (step ``kappa/20``) brackets the best stable point, then
    golden-section search refines inside the neighbouring grid cells. Unstable
    gains count as ``E_N = -inf``.
    """
    model = AmplitudeModel(model)
    kappa = base.kappa
    if G_bounds is None:
        G_bounds = (0.0, 7.0 * kappa)
    g_lo, g_hi = map(float, G_bounds)
    if not 0 <= g_lo < g_hi:
        raise ValueError(f"invalid gain bounds {G_bounds!r}")
    num = int(round((g_hi - g_lo) / (step_in_kappa * kappa))) + 1
    grid = np.linspace(g_lo, g_hi, max(num, 3))
    coarse = [_en_or_minus_inf(r) for r in sweep_gain(base, grid, model, workers)]
    i = int(np.argmax(coarse))
    if coarse[i] == -math.inf:
        raise NoStablePointError(
            f"no stable gain in [{g_lo / kappa:.3g}, {g_hi / kappa:.3g}] kappa "
            f"at T={base.temperature:g} K"
        )
    boundary = i == 0 or i == len(grid) - 1
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]

    def objective(g):
        return _en_or_minus_inf(evaluate_point(replace(base, opa_gain=g), model))

    g_ref, e_ref = golden_section_max(objective, lo, hi, tol_in_kappa * kappa)
    if e_ref < coarse[i]:
        g_ref, e_ref = float(grid[i]), coarse[i]

    baseline_rec = evaluate_point(replace(base, opa_gain=0.0), model)
    baseline = baseline_rec.E_N if baseline_rec.stable else math.nan
    if baseline and math.isfinite(baseline):
        enhancement = 100.0 * (e_ref - baseline) / baseline
    else:
        enhancement = None
    return OptimalGainResult(
        temperature=base.temperature,
        kappa=kappa,
        G_opt=float(g_ref),
        E_N_opt=float(e_ref),
        bracket=(float(lo), float(hi)),
        baseline_E_N=float(baseline),
        enhancement_percent=enhancement,
        boundary_maximum=boundary,
    )


def _optimal_at(temperature, base, G_bounds, model):
    return optimal_gain(replace(base, temperature=float(temperature)), G_bounds, model)


def optimal_gain_vs_temperature(base: PhysicalParams, T_grid, G_bounds=None,
                                model=AmplitudeModel.PAPER, workers=None):
    grid = np.asarray(T_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or np.any(grid <= 0):
        raise ValueError("temperatures must be positive")
    if np.any(np.diff(grid) < 0):
        raise ValueError("temperatures must be ascending")
    model = AmplitudeModel(model)
    run = partial(_optimal_at, base=base, G_bounds=G_bounds, model=model)
    if workers is None or workers <= 1:
        return [run(t) for t in grid]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, grid))


def gain_monotonicity(results) -> dict:
    """How well G_opt and the enhancement follow a decreasing trend in temperature."""
    g = np.array([r.G_opt_in_kappa for r in results])
    enh = np.array([np.nan if r.enhancement_percent is None else r.enhancement_percent
                    for r in results])
    dg, de = np.diff(g), np.diff(enh)
    return {
        "g_opt_nonincreasing": bool(np.all(dg <= 0)),
        "g_opt_increasing_steps": int(np.sum(dg > 0)),
        "g_opt_overall_decrease": bool(g.size > 0 and g[-1] < g[0]),
        "enhancement_nonincreasing": bool(np.all(de <= 0)),
        "enhancement_increasing_steps": int(np.sum(de > 0)),
    }
