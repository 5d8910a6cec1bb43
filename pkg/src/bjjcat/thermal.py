"""Thermal activation versus quantum tunneling across the double-well barrier.

Inputs are SI (kelvin, rad/s) together with the dimensionless (s, lam) of
``ContinuumParams``; barrier energies are converted with hbar*omega_R.
"""

from dataclasses import dataclass
import math

from bjjcat.continuum import barrier_height, oscillation_frequency
from bjjcat.errors import ValidityError
from bjjcat.units import HBAR, K_B

DEFAULT_THRESHOLD = 10.0
REGIME_BAND = 3.0


@dataclass(frozen=True)
class ThermalParams:
    temperature: float
    gamma: float = 0.0

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")
        if self.gamma < 0:
            raise ValueError("damping rate must be non-negative")

    def underdamped(self, omega):
        return self.gamma < omega


@dataclass(frozen=True)
class CrossoverResult:
    omega: float
    alpha: float
    T_c: float
    B_c: float
    regime: str = ""


@dataclass(frozen=True)
class MetastabilityReport:
    thermal_ratio: float
    quantum_ratio: float
    threshold: float

    @property
    def thermal_ok(self):
        return self.thermal_ratio >= self.threshold

    @property
    def quantum_ok(self):
        return self.quantum_ratio >= self.threshold

    @property
    def ok(self):
        return self.thermal_ok and self.quantum_ok


def _require_double_well(lam):
    if lam <= 1:
        raise ValidityError(f"requires lambda > 1 (got {lam})")


def inverted_coeffs(p):
    """(c_2, c_4) of U(x) ~ U(0) - (c_2 x^2 + c_4 x^4) about the saddle, units hbar*omega_R."""
    _require_double_well(p.lam)
    return -0.5 * p.s * (p.lam - 1), p.s / 8


def thermon_frequency(lam, omega_R=1.0):
    """Oscillation frequency omega_R sqrt(lam - 1) at the top of the inverted barrier."""
    if lam < 1:
        raise ValidityError(f"requires lambda >= 1 (got {lam})")
    return omega_R * math.sqrt(lam - 1)


def damping_factor(gamma, omega):
    """alpha = sqrt(1 + (gamma/2omega)^2) - gamma/2omega, the positive root of a^2 + (gamma/omega) a = 1."""
    if omega <= 0:
        raise ValidityError("damping factor needs a positive thermon frequency")
    if gamma < 0:
        raise ValueError("damping rate must be non-negative")
    g = gamma / (2 * omega)
    # 1 / (sqrt(1+g^2) + g) avoids cancellation at large g
    return 1 / (math.hypot(1.0, g) + g)


def critical_temperature(lam, omega_R, gamma=0.0):
    """Crossover temperature hbar omega alpha / (2 pi k_B) in kelvin; zero at lam = 1."""
    omega = thermon_frequency(lam, omega_R)
    if omega == 0:
        return 0.0
    return HBAR * omega * damping_factor(gamma, omega) / (2 * math.pi * K_B)


def classical_rate(V0, omega0, T):
    """Arrhenius escape rate (omega0 / 2 pi) exp(-V0 / k_B T); V0 in joules."""
    if T <= 0:
        raise ValueError("temperature must be positive")
    if V0 < 0:
        raise ValueError("barrier height must be non-negative")
    return omega0 / (2 * math.pi) * math.exp(-V0 / (K_B * T))


def quantum_correction(omega0, omega, T):
    if T <= 0:
        raise ValueError("temperature must be positive")
    return math.exp(HBAR**2 * (omega0**2 + omega**2) / (24 * (K_B * T) ** 2))


def barrier_energy(p, omega_R):
    """Barrier height in joules."""
    return barrier_height(p) * HBAR * omega_R


def dissipative_rate(p, tp, omega_R, include_quantum_correction=True):
    """Escape rate with Ohmic damping and the leading quantum correction.

    Only defined above the crossover temperature; at or below T_c a
    ValidityError is raised rather than extrapolating.
    """
    _require_double_well(p.lam)
    omega = thermon_frequency(p.lam, omega_R)
    alpha = damping_factor(tp.gamma, omega)
    T_c = critical_temperature(p.lam, omega_R, tp.gamma)
    if tp.temperature <= T_c:
        raise ValidityError(
            f"T = {tp.temperature:.4g} K is not above the crossover temperature {T_c:.4g} K"
        )
    omega0 = oscillation_frequency(p.lam, omega_R)
    fq = quantum_correction(omega0, omega, tp.temperature) if include_quantum_correction else 1.0
    V0 = barrier_energy(p, omega_R)
    return omega0 * alpha / (2 * math.pi) * fq * math.exp(-V0 / (K_B * tp.temperature))


def crossover_exponent(p, alpha):
    """B_c = (s pi / (alpha lam)) (lam - 1)^(3/2), i.e. V0 / (k_B T_c)."""
    _require_double_well(p.lam)
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    return p.s * math.pi / (alpha * p.lam) * (p.lam - 1) ** 1.5


def metastability_check(p, T, omega_R, threshold=DEFAULT_THRESHOLD):
    """Barrier-to-thermal and barrier-to-quantum energy ratios against ``threshold``."""
    _require_double_well(p.lam)
    V0 = barrier_energy(p, omega_R)
    thermal = math.inf if T == 0 else V0 / (K_B * T)
    quantum = p.s / (2 * p.lam) * (p.lam - 1) ** 1.5 / math.sqrt(p.lam + 1)
    return MetastabilityReport(thermal, quantum, threshold)


def regime_classify(T, T_c):
    """'classical' above 3 T_c, 'quantum' below T_c / 3, else 'crossover'."""
    if T_c < 0 or T < 0:
        raise ValueError("temperatures must be non-negative")
    if T > REGIME_BAND * T_c:
        return "classical"
    if T < T_c / REGIME_BAND or T == 0:
        return "quantum"
    return "crossover"


def crossover(p, omega_R, gamma=0.0, T=None):
    """Thermon frequency, damping factor, T_c and B_c for one operating point."""
    _require_double_well(p.lam)
    omega = thermon_frequency(p.lam, omega_R)
    alpha = damping_factor(gamma, omega)
    T_c = critical_temperature(p.lam, omega_R, gamma)
    regime = regime_classify(T, T_c) if T is not None else ""
    return CrossoverResult(omega, alpha, T_c, crossover_exponent(p, alpha), regime)
