"""Lab parameters, derived rates and the classical steady state.

All rates, frequencies and detunings are angular (rad/s) internally. The
cavity amplitude decay rate ``kappa = pi c / (2 F L)`` is used as an angular
rate directly.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace

from .constants import BOLTZMANN, HBAR, SPEED_OF_LIGHT
from .errors import ConvergenceError, ThresholdError

__all__ = [
    "DetuningMode",
    "AmplitudeModel",
    "PhysicalParams",
    "DerivedParams",
    "SteadyState",
    "paper_params",
    "derive_constants",
    "thermal_occupation",
    "steady_amplitude_paper",
    "steady_amplitude_exact",
    "solve_steady_state",
]

MIN_QUALITY_FACTOR = 100.0
THRESHOLD_RTOL = 1e-12


class DetuningMode(enum.Enum):
    """How ``detuning_1``/``detuning_2`` are interpreted.

    ``BARE`` means cavity-laser detunings before the radiation-pressure shift
    (the mirror displacement is then solved self-consistently); ``EFFECTIVE``
    means the already shifted detunings, taken verbatim.
    """

    BARE = "bare"
    EFFECTIVE = "effective"


class AmplitudeModel(enum.Enum):
    PAPER = "paper"
    EXACT = "exact"


@dataclass(frozen=True)
class PhysicalParams:
    """Laboratory-level inputs. SI units, angular rates in rad/s."""

    mass: float
    omega_m: float
    gamma_m: float
    cavity_length: float
    finesse: float
    wavelength_1: float
    wavelength_2: float
    power_1: float
    power_2: float
    detuning_1: float
    detuning_2: float
    detuning_mode: DetuningMode = DetuningMode.EFFECTIVE
    opa_gain: float = 0.0
    opa_phase: float = math.pi / 2
    temperature: float = 0.0

    def __post_init__(self):
        if not isinstance(self.detuning_mode, DetuningMode):
            object.__setattr__(self, "detuning_mode", DetuningMode(self.detuning_mode))
        for name in ("mass", "omega_m", "gamma_m", "cavity_length", "finesse",
                     "wavelength_1", "wavelength_2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        for name in ("power_1", "power_2", "temperature", "opa_gain"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be non-negative and finite, got {value!r}")
        for name in ("detuning_1", "detuning_2", "opa_phase"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.omega_m / self.gamma_m < MIN_QUALITY_FACTOR:
            warnings.warn(
                f"mechanical quality factor {self.omega_m / self.gamma_m:.3g} is below "
                f"{MIN_QUALITY_FACTOR:g}; the Markovian Brownian-noise model is unreliable",
                stacklevel=3,
            )

    def replace(self, **changes) -> PhysicalParams:
        return replace(self, **changes)

    @property
    def kappa(self) -> float:
        return cavity_decay_rate(self.finesse, self.cavity_length)

    def with_gain_in_kappa(self, gain: float) -> PhysicalParams:
        """Copy with the OPA gain set to ``gain * kappa``."""
        return replace(self, opa_gain=gain * self.kappa)


def paper_params(**overrides) -> PhysicalParams:
    """The reference parameter set: 5 ng mirror at 10 MHz, 5 mm cavity of finesse 1e5,
    1064 nm drives of 100 mW and 80 mW on the red and blue sidebands, T = 10 mK."""
    omega_m = 2 * math.pi * 10e6
    values = dict(
        mass=5e-12,
        omega_m=omega_m,
        gamma_m=2 * math.pi * 100.0,
        cavity_length=5e-3,
        finesse=1e5,
        wavelength_1=1064e-9,
        wavelength_2=1064e-9,
        power_1=0.100,
        power_2=0.080,
        detuning_1=omega_m,
        detuning_2=-omega_m,
        detuning_mode=DetuningMode.EFFECTIVE,
        opa_gain=0.0,
        opa_phase=math.pi / 2,
        temperature=10e-3,
    )
    values.update(overrides)
    return PhysicalParams(**values)


@dataclass(frozen=True)
class DerivedParams:
    kappa: float
    omega_L1: float
    omega_L2: float
    omega_C1: float
    omega_C2: float
    g_1: float
    g_2: float
    eps_1: float
    eps_2: float
    n_bar: float
    fsr: float


@dataclass(frozen=True)
class SteadyState:
    q_s: float
    p_s: float
    alpha_1: complex
    alpha_2: complex
    Delta_1: float
    Delta_2: float
    Gcpl_1: float
    Gcpl_2: float
    iterations: int = 0


def cavity_decay_rate(finesse: float, length: float) -> float:
    return math.pi * SPEED_OF_LIGHT / (2.0 * finesse * length)


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation; exactly 0 at T = 0 and no overflow for tiny T."""
    if temperature <= 0:
        return 0.0
    x = HBAR * omega / (BOLTZMANN * temperature)
    if x > 700:
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def derive_constants(params: PhysicalParams) -> DerivedParams:
    kappa = params.kappa
    omega_L1 = 2 * math.pi * SPEED_OF_LIGHT / params.wavelength_1
    omega_L2 = 2 * math.pi * SPEED_OF_LIGHT / params.wavelength_2
    if params.detuning_mode is DetuningMode.BARE:
        omega_C1 = omega_L1 + params.detuning_1
        omega_C2 = omega_L2 + params.detuning_2
    else:
        omega_C1, omega_C2 = omega_L1, omega_L2
    zpf = math.sqrt(HBAR / (params.mass * params.omega_m))
    return DerivedParams(
        kappa=kappa,
        omega_L1=omega_L1,
        omega_L2=omega_L2,
        omega_C1=omega_C1,
        omega_C2=omega_C2,
        g_1=omega_C1 / params.cavity_length * zpf,
        g_2=omega_C2 / params.cavity_length * zpf,
        eps_1=math.sqrt(2 * kappa * params.power_1 / (HBAR * omega_L1)),
        eps_2=math.sqrt(2 * kappa * params.power_2 / (HBAR * omega_L2)),
        n_bar=thermal_occupation(params.omega_m, params.temperature),
        fsr=math.pi * SPEED_OF_LIGHT / params.cavity_length,
    )


def steady_amplitude_paper(eps, kappa, Delta, G, theta) -> complex:
    """Closed-form intracavity amplitude with the OPA folded into decay and detuning,

        alpha = eps / [(kappa - 2G cos theta) + i (Delta - 2G sin theta)].
    """
    denom = complex(kappa - 2 * G * math.cos(theta), Delta - 2 * G * math.sin(theta))
    scale = max(kappa, abs(Delta), 2 * G)
    if abs(denom) < THRESHOLD_RTOL * scale:
        raise ThresholdError(
            f"singular amplitude denominator |{denom:.3e}| at G={G:.6g}, theta={theta:.6g}"
        )
    return eps / denom


def steady_amplitude_exact(eps, kappa, Delta, G, theta) -> complex:
    """Fixed point of ``(kappa + i Delta) alpha - 2 G e^{i theta} conj(alpha) = eps``.

    Unlike :func:`steady_amplitude_paper` this keeps the conjugate coupling of
    the degenerate parametric term.
    """
    det = (kappa * kappa + Delta * Delta) - 4 * G * G
    scale = kappa * kappa + Delta * Delta + 4 * G * G
    if abs(det) < THRESHOLD_RTOL * scale:
        raise ThresholdError(f"parametric threshold reached: kappa^2+Delta^2-4G^2 = {det:.3e}")
    num = complex(kappa, -Delta) + 2 * G * complex(math.cos(theta), math.sin(theta))
    return eps * num / det


_AMPLITUDE = {
    AmplitudeModel.PAPER: steady_amplitude_paper,
    AmplitudeModel.EXACT: steady_amplitude_exact,
}


def solve_steady_state(
    params: PhysicalParams,
    derived: DerivedParams | None = None,
    amplitude_model: AmplitudeModel | str = AmplitudeModel.PAPER,
    *,
    damping: float = 0.5,
    rtol: float = 1e-12,
    max_iter: int = 10_000,
) -> SteadyState:
    """Classical fixed point of the driven cavity + mirror.

    In effective-detuning mode the detunings are used as given and the mirror
    displacement follows from one amplitude evaluation. In bare mode the
    displacement ``q_s`` enters the detunings, ``Delta_i = Delta_0i - g_i q_s``,
    and is found by damped fixed-point iteration starting from ``q_s = 0``.
    """
    if derived is None:
        derived = derive_constants(params)
    amplitude = _AMPLITUDE[AmplitudeModel(amplitude_model)]
    kappa, G, theta = derived.kappa, params.opa_gain, params.opa_phase
    g1, g2 = derived.g_1, derived.g_2

    def amplitudes(q):
        d1 = params.detuning_1 - g1 * q
        d2 = params.detuning_2 - g2 * q
        a1 = amplitude(derived.eps_1, kappa, d1, G, theta)
        a2 = amplitude(derived.eps_2, kappa, d2, G, theta)
        return d1, d2, a1, a2

    def displacement(a1, a2):
        return (g1 * abs(a1) ** 2 + g2 * abs(a2) ** 2) / params.omega_m

    iterations = 0
    if params.detuning_mode is DetuningMode.EFFECTIVE:
        d1, d2, a1, a2 = amplitudes(0.0)
        q = displacement(a1, a2)
    else:
        q = 0.0
        while True:
            d1, d2, a1, a2 = amplitudes(q)
            target = displacement(a1, a2)
            if abs(target - q) <= rtol * max(abs(target), 1e-300) or target == q:
                q = target
                d1, d2, a1, a2 = amplitudes(q)
                break
            iterations += 1
            if iterations >= max_iter:
                raise ConvergenceError(
                    f"mirror displacement did not converge in {max_iter} iterations "
                    f"(last q_s={q:.6g}, target {target:.6g}); possible bistability"
                )
            q = (1 - damping) * q + damping * target

    return SteadyState(
        q_s=q,
        p_s=0.0,
        alpha_1=a1,
        alpha_2=a2,
        Delta_1=d1,
        Delta_2=d2,
        Gcpl_1=math.sqrt(2) * g1 * abs(a1),
        Gcpl_2=math.sqrt(2) * g2 * abs(a2),
        iterations=iterations,
    )
