"""Two-mode Fock-basis Hamiltonian and state observables.

Energies are in units of hbar*omega_R. Index ``n`` counts particles in well
``a``; the imbalance coordinate is ``x = 2n/N - 1``.
"""

from dataclasses import dataclass
import math

import numpy as np

NORM_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    N: int
    lam: float
    omega_R: float = 1.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"N must be an integer >= 2, got {self.N!r}")
        if not math.isfinite(self.lam) or self.lam < 0:
            raise ValueError(f"lambda must be finite and non-negative, got {self.lam!r}")
        if not self.omega_R > 0:
            raise ValueError(f"omega_R must be positive, got {self.omega_R!r}")

    @property
    def s(self):
        return self.N / 2


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class TridiagonalOperator:
    """Real symmetric tridiagonal matrix stored as diagonal + one off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = _frozen(self.diag)
        e = _frozen(self.offdiag)
        if d.ndim != 1 or e.ndim != 1 or len(e) != len(d) - 1:
            raise ValueError("offdiag must have exactly one element fewer than diag")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def dimension(self):
        return len(self.diag)

    def matvec(self, v):
        v = np.asarray(v, dtype=float)
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out

    def to_dense(self):
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def gershgorin(self):
        """Interval ``(lo, hi)`` containing every eigenvalue."""
        r = np.zeros_like(self.diag)
        r[:-1] += np.abs(self.offdiag)
        r[1:] += np.abs(self.offdiag)
        return float(np.min(self.diag - r)), float(np.max(self.diag + r))

    def is_mirror_symmetric(self, tol=0.0):
        return bool(
            np.all(np.abs(self.diag - self.diag[::-1]) <= tol)
            and np.all(np.abs(self.offdiag - self.offdiag[::-1]) <= tol)
        )


def fix_sign(v):
    """Return ``v`` with the global sign chosen so that sum(v) > 0.

    Odd-parity vectors sum to zero; for those the first entry above 1e-3 of
    the largest magnitude is made positive instead.
    """
    v = np.asarray(v, dtype=float)
    total = v.sum()
    scale = np.max(np.abs(v))
    if abs(total) > 1e-8 * scale * math.sqrt(len(v)):
        return v if total > 0 else -v
    first = v[np.argmax(np.abs(v) >= 1e-3 * scale)]
    return v if first > 0 else -v


def parity(v):
    """Mirror map (Pv)_n = v_{N-n}."""
    return np.asarray(v)[::-1].copy()


@dataclass(frozen=True, eq=False)
class FockAmplitudes:
    """Normalized real amplitudes A_0..A_N over |n, N-n>."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = _frozen(self.coefficients)
        if c.ndim != 1 or len(c) < 3:
            raise ValueError("coefficients must be a 1-d array of length N+1 >= 3")
        norm = float(np.dot(c, c))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"amplitudes not normalized: sum A_n^2 = {norm!r}")
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def from_vector(cls, v):
        """Normalize and sign-fix an arbitrary nonzero vector."""
        v = np.asarray(v, dtype=float)
        norm = np.linalg.norm(v)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(fix_sign(v / norm))

    @classmethod
    def noon(cls, N):
        v = np.zeros(N + 1)
        v[0] = v[-1] = 1 / math.sqrt(2)
        return cls.from_vector(v)

    @property
    def N(self):
        return len(self.coefficients) - 1

    def parity(self):
        return FockAmplitudes(parity(self.coefficients))

    def parity_asymmetry(self):
        c = self.coefficients
        return float(np.max(np.abs(c - c[::-1])))

    def imbalance(self):
        return 2 * np.arange(self.N + 1) / self.N - 1


def build_hamiltonian(params):
    """Fock-basis Hamiltonian in units of hbar*omega_R.

    alpha_n = -(s*lam/2)(2n/N - 1)^2 and beta_n = -(1/2)sqrt((n+1)(N-n)).
    The constant shift from the squared total imbalance is dropped.
    """
    N = int(params.N)
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    n = np.arange(N + 1, dtype=float)
    s = N / 2
    # (2n - N)^2 is an exact integer, so the diagonal is exactly mirror-symmetric
    k = (2 * np.arange(N + 1) - N).astype(float)
    diag = -0.5 * s * params.lam * (k * k) / (N * N)
    m = n[:-1]
    offdiag = -0.5 * np.sqrt((m + 1) * (N - m))
    return TridiagonalOperator(diag, offdiag)


def _check_dims(H, A):
    if H.dimension != len(A.coefficients):
        raise ValueError(
            f"dimension mismatch: operator {H.dimension}, state {len(A.coefficients)}"
        )


def energy_expectation(H, A):
    _check_dims(H, A)
    c = A.coefficients
    return float(np.dot(H.diag, c * c) + 2 * np.dot(H.offdiag, c[:-1] * c[1:]))


def fidelity_noon(A):
    """Overlap |<N00N|psi>|^2 = (A_0 + A_N)^2 / 2 for real amplitudes."""
    c = A.coefficients
    return float(min(1.0, (c[0] + c[-1]) ** 2 / 2))


def imbalance_distribution(A):
    return A.coefficients**2


def lobe_center(P):
    """|x| of the most probable Fock state, searching the upper half of the distribution."""
    P = np.asarray(P)
    N = len(P) - 1
    start = (N + 1) // 2
    n_peak = start + int(np.argmax(P[start:]))
    return abs(2 * n_peak / N - 1)


def is_bimodal(P):
    """True when the distribution peaks away from the central Fock state(s)."""
    N = len(P) - 1
    return lobe_center(P) > 1 / N + 1e-12
