"""Large-N continuum picture: effective potential and Gaussian cat envelopes.

The Fock index maps to the imbalance x = 2n/N - 1 in [-1, 1]. Energies are
in units of hbar*omega_R, frequencies in units of omega_R unless an explicit
omega_R is passed.
"""

from dataclasses import dataclass
import math

import numpy as np

from bjjcat.errors import ValidityError
from bjjcat.units import HBAR

ENVELOPE_SUPPORT = 1e-3


@dataclass(frozen=True)
class ContinuumParams:
    s: float
    lam: float

    def __post_init__(self):
        if self.s < 1:
            raise ValueError(f"s must be >= 1, got {self.s!r}")
        if not math.isfinite(self.lam) or self.lam < 0:
            raise ValueError(f"lambda must be finite and non-negative, got {self.lam!r}")

    @classmethod
    def from_model(cls, params):
        return cls(params.N / 2, params.lam)

    @property
    def N(self):
        return 2 * self.s


def _check_domain(x, closed=True):
    x = np.asarray(x, dtype=float)
    bad = np.abs(x) > 1 if closed else np.abs(x) >= 1
    if np.any(bad):
        raise ValueError("imbalance must satisfy |x| <= 1" if closed else "|x| < 1 required")
    return x


def effective_potential(x, p):
    """V(x) = -(s/2)(lam x^2 + 2 sqrt(1 - x^2))."""
    x = _check_domain(x)
    v = -0.5 * p.s * (p.lam * x**2 + 2 * np.sqrt(1 - x**2))
    return float(v) if v.ndim == 0 else v


def effective_mass(x, p, omega_R=None):
    """Position-dependent mass 1/sqrt(1 - x^2) in units of m = s*hbar/omega_R.

    With ``omega_R`` given the value is returned in SI units (kg m^2 per unit
    of the dimensionless coordinate squared, i.e. J s^2).
    """
    x = _check_domain(x, closed=False)
    ratio = 1 / np.sqrt(1 - x**2)
    if omega_R is not None:
        ratio = ratio * p.s * HBAR / omega_R
    return float(ratio) if ratio.ndim == 0 else ratio


def minima(lam):
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    if lam <= 1:
        return (0.0,)
    x = math.sqrt(1 - lam**-2)
    return (-x, x)


def barrier_height(p):
    """V(0) - V(x_min) = (s/2)(lam - 1)^2 / lam for lam >= 1."""
    if p.lam < 1:
        raise ValidityError(f"no barrier for lambda < 1 (got {p.lam})")
    return 0.5 * p.s * (p.lam - 1) ** 2 / p.lam


def curvature_c2(p, x_min):
    """Quadratic coefficient of V about ``x_min``; negative at the saddle x=0 when lam > 1."""
    if abs(x_min) >= 1:
        raise ValueError("|x_min| < 1 required")
    c2 = 0.5 * p.s * ((1 - x_min**2) ** -1.5 - p.lam)
    if p.lam == 1 or abs(c2) <= 1e-14 * p.s:
        raise ValidityError("degenerate curvature: harmonic expansion invalid at lambda = 1")
    return c2


def packet_width(p):
    """Gaussian packet width in x-units, from the harmonic expansion about the minima."""
    if p.lam == 1:
        raise ValidityError("packet width undefined at the transition point lambda = 1")
    if p.lam < 1:
        return (p.s**2 * (1 - p.lam)) ** -0.25
    return (p.s**2 * p.lam**2 * (p.lam**2 - 1)) ** -0.25


def packet_width_asymptotic(p):
    """Large-lambda limit 1/(sqrt(s) lam)."""
    if p.lam <= 0:
        raise ValueError("lambda must be positive")
    return 1 / (math.sqrt(p.s) * p.lam)


def cat_amplitude(p):
    """C^2 = sqrt(s lam) (lam^2 - 1)^(1/4) / (2 sqrt(pi)), neglecting lobe overlap."""
    if p.lam <= 1:
        raise ValidityError(f"cat amplitude requires lambda > 1 (got {p.lam})")
    return math.sqrt(p.s * p.lam) / (2 * math.sqrt(math.pi)) * (p.lam**2 - 1) ** 0.25


def oscillation_frequency(lam, omega_R=1.0):
    """omega_0 = omega_R sqrt(lam^2 - 1) for small oscillations in either well."""
    if lam < 1:
        raise ValidityError(f"double well requires lambda >= 1 (got {lam})")
    return omega_R * math.sqrt(lam**2 - 1)


def anharmonic_window(N):
    """Half-width of the lambda interval around 1 where Gaussian envelopes are not trusted."""
    return 3 / N ** (2 / 3)


@dataclass(frozen=True)
class CatEnvelope:
    """Single (lam < 1) or double (lam > 1) Gaussian wavefunction in x."""

    x0: float
    sigma: float
    C: float
    kind: str
    lam: float
    valid: bool = True
    note: str = ""

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.kind == "single":
            if self.x0 != 0:
                raise ValueError("single envelope must be centred at x0 = 0")
            expected = 1 / (math.sqrt(self.sigma) * math.pi**0.25)
            if not math.isclose(self.C, expected, rel_tol=1e-12):
                raise ValueError("single envelope amplitude must be 1/(sqrt(sigma) pi^(1/4))")
        elif self.kind == "double":
            if self.lam <= 1:
                raise ValueError("double envelope requires lambda > 1")
            if not math.isclose(self.x0, math.sqrt(1 - self.lam**-2), rel_tol=1e-12):
                raise ValueError("double envelope must sit at x0 = sqrt(1 - lambda^-2)")
        else:
            raise ValueError(f"unknown envelope kind {self.kind!r}")

    @property
    def centers(self):
        return (0.0,) if self.kind == "single" else (-self.x0, self.x0)

    @property
    def overlap(self):
        """exp(-x0^2/sigma^2), the lobe overlap dropped in the asymptotic amplitude."""
        return math.exp(-self.x0**2 / self.sigma**2) if self.kind == "double" else 1.0

    @property
    def C_asymptotic(self):
        return 1 / (math.sqrt(2 * self.sigma) * math.pi**0.25)

    def psi(self, x):
        x = np.asarray(x, dtype=float)
        w = 2 * self.sigma**2
        if self.kind == "single":
            return self.C * np.exp(-(x**2) / w)
        return self.C * (np.exp(-((x - self.x0) ** 2) / w) + np.exp(-((x + self.x0) ** 2) / w))

    def density(self, x):
        return self.psi(x) ** 2

    def discrete(self, N):
        """Envelope probability per Fock bin, |psi(x_n)|^2 * 2/N."""
        x = 2 * np.arange(N + 1) / N - 1
        return self.density(x) * (2 / N)


def envelope(p):
    """Gaussian envelope for the ground state of ``p``.

    Inside the anharmonic window around lam = 1, or when the packet is
    narrower than two Fock bins, the envelope is returned with ``valid``
    False and an explanatory ``note``.
    """
    if p.lam == 1:
        raise ValidityError("Gaussian envelope undefined at lambda = 1")
    sigma = packet_width(p)
    notes = []
    if abs(p.lam - 1) < anharmonic_window(p.N):
        notes.append("anharmonic region near lambda = 1")
    if sigma * p.N < 2:
        notes.append("packet narrower than two Fock bins")
    if p.lam < 1:
        env = CatEnvelope(0.0, sigma, 1 / (math.sqrt(sigma) * math.pi**0.25), "single", p.lam)
    else:
        x0 = minima(p.lam)[1]
        C = (2 * sigma * math.sqrt(math.pi) * (1 + math.exp(-(x0**2) / sigma**2))) ** -0.5
        env = CatEnvelope(x0, sigma, C, "double", p.lam)
    if notes:
        env = CatEnvelope(env.x0, env.sigma, env.C, env.kind, env.lam, False, "; ".join(notes))
    return env


def fit_error(P, env):
    """Largest bin deviation between ``P`` and the envelope, relative to max(P).

    Only bins where the envelope exceeds 1e-3 of its own peak are compared.
    """
    P = np.asarray(P, dtype=float)
    if P.ndim != 1 or len(P) < 3:
        raise ValueError("P must be a 1-d distribution over at least 3 Fock states")
    N = len(P) - 1
    model = env.discrete(N)
    peak = float(np.max(env.density(np.array(env.centers)))) * 2 / N
    support = model > ENVELOPE_SUPPORT * peak
    if not np.any(support):
        raise ValueError("envelope has empty support on the Fock grid")
    return float(np.max(np.abs(P[support] - model[support])) / P.max())
