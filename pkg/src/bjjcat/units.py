"""Laboratory parameters to dimensionless model quantities.

All inputs and outputs are SI. Constants are CODATA 2018 exact/recommended values.
"""

from dataclasses import dataclass
import math

HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J / K

CONSTANTS = {"hbar": HBAR, "k_B": K_B}

# 7Li two-mode condensate used as the reference laboratory setting
LI7_MASS = 1.165e-26  # kg
LI7_SCATTERING_LENGTH = -0.21e-9  # m
LI7_OMEGA_PERP = 2 * math.pi * 967.0  # rad/s
LI7_OMEGA_R = 2 * math.pi * 208.0  # rad/s
LI7_N = 100


@dataclass(frozen=True)
class PhysicalParams:
    atom_mass: float
    scattering_length: float
    omega_perp: float
    omega_R: float
    N: int

    def __post_init__(self):
        if self.atom_mass <= 0 or self.omega_perp <= 0 or self.omega_R <= 0:
            raise ValueError("atom_mass, omega_perp and omega_R must be positive")
        if self.N < 1:
            raise ValueError(f"N must be positive, got {self.N}")
        if self.scattering_length >= 0:
            raise ValueError(
                "scattering_length must be negative (attractive interaction), "
                f"got {self.scattering_length!r}"
            )

    @classmethod
    def li7(cls, N=LI7_N):
        return cls(LI7_MASS, LI7_SCATTERING_LENGTH, LI7_OMEGA_PERP, LI7_OMEGA_R, N)


def transverse_length(mass, omega_perp):
    """Harmonic-oscillator length sqrt(hbar / (M omega_perp)) in metres."""
    if mass <= 0 or omega_perp <= 0:
        raise ValueError("mass and omega_perp must be positive")
    return math.sqrt(HBAR / (mass * omega_perp))


def interaction_strength(a_sc, a_perp, mass):
    """Kerr interaction strength u = 4 pi hbar^2 |a_sc| / (a_perp^3 M), in joules."""
    if a_perp <= 0 or mass <= 0:
        raise ValueError("a_perp and mass must be positive")
    return 4 * math.pi * HBAR**2 * abs(a_sc) / (a_perp**3 * mass)


def lambda_physical(u, N, omega_R):
    if omega_R <= 0:
        raise ValueError("omega_R must be positive")
    return u * N / (HBAR * omega_R)


def reference_temperature(omega_R):
    """T_0 = hbar omega_R / (2 pi k_B) in kelvin."""
    if omega_R <= 0:
        raise ValueError("omega_R must be positive")
    return HBAR * omega_R / (2 * math.pi * K_B)


def derive(phys):
    """All derived laboratory quantities for ``phys`` as a flat dict (SI units)."""
    a_perp = transverse_length(phys.atom_mass, phys.omega_perp)
    u = interaction_strength(phys.scattering_length, a_perp, phys.atom_mass)
    return {
        "a_perp": a_perp,
        "u": u,
        "uN_over_kB": u * phys.N / K_B,
        "lambda": lambda_physical(u, phys.N, phys.omega_R),
        "T_0": reference_temperature(phys.omega_R),
    }
