"""Wigner quasiprobability functions of the continuum envelopes.

Conventions: W(x, p) = (1/pi) int psi*(x + z) psi(x - z) exp(2ipz) dz, with
momentum wavefunction phi(p) = (2 pi)^(-1/2) int psi(x) exp(-ipx) dx so that
the marginals are |psi(x)|^2 and |phi(p)|^2.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from bjjcat.errors import ConvergenceError, ValidityError

TAIL_MASS_LIMIT = 1e-8
SUPPORT_WIDTHS = 6.0
WIGNER_BOUND = 1 / math.pi


def wigner_single(x, p, sigma):
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    x, p = np.asarray(x, dtype=float), np.asarray(p, dtype=float)
    return np.exp(-(x**2) / sigma**2 - sigma**2 * p**2) / math.pi


def wigner_cat(x, p, x0, sigma, normalized=True):
    """Closed-form Wigner function of a symmetric two-Gaussian cat.

    Two displaced lobes of weight 1/(2 pi) plus the interference term
    (1/pi) exp(-x^2/sigma^2 - sigma^2 p^2) cos(2 p x0). With ``normalized``
    the sum is divided by 1 + exp(-x0^2/sigma^2) so that it integrates to one
    and matches the exactly normalized envelope; otherwise the bare sum is
    returned.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if not 0 < x0 < 1:
        raise ValueError("x0 must lie in (0, 1)")
    x, p = np.asarray(x, dtype=float), np.asarray(p, dtype=float)
    pgauss = np.exp(-(sigma**2) * p**2)
    lobes = 0.5 * (np.exp(-((x + x0) ** 2) / sigma**2) + np.exp(-((x - x0) ** 2) / sigma**2))
    fringe = np.exp(-(x**2) / sigma**2) * np.cos(2 * p * x0)
    w = (lobes + fringe) * pgauss / math.pi
    if normalized:
        w = w / (1 + math.exp(-(x0**2) / sigma**2))
    return w


def _simpson_weights(n, h):
    w = np.ones(n + 1)
    w[1:-1:2] = 4
    w[2:-1:2] = 2
    return w * h / 3


def _simpson(f, lo, hi, tol, n0=64, n_max=1 << 16):
    """Composite Simpson with panel doubling; ``f`` maps nodes to (..., nodes) values."""
    n = n0
    z = np.linspace(lo, hi, n + 1)
    prev = f(z) @ _simpson_weights(n, (hi - lo) / n)
    while n < n_max:
        n *= 2
        z = np.linspace(lo, hi, n + 1)
        cur = f(z) @ _simpson_weights(n, (hi - lo) / n)
        if np.max(np.abs(cur - prev)) <= tol:
            return cur
        prev = cur
    raise ConvergenceError(f"Simpson refinement exceeded {n_max} panels")


def _check_tails(psi, lo, hi, sigma):
    """Fraction of |psi|^2 lying outside [lo, hi]."""
    far = 30 * sigma
    dens = lambda z: np.abs(psi(z)) ** 2
    inner = _simpson(dens, lo, hi, 1e-12)
    outer = _simpson(dens, lo - far, lo, 1e-12) + _simpson(dens, hi, hi + far, 1e-12)
    mass = float(outer / (inner + outer))
    if mass > TAIL_MASS_LIMIT:
        raise ValidityError(
            f"wavefunction tail mass {mass:.2e} outside the sampled range exceeds {TAIL_MASS_LIMIT:.0e}"
        )
    return mass


def wigner_quadrature(psi, x, p, centers, sigma, tol=1e-12):
    """Wigner function by direct quadrature of the defining integral.

    ``psi`` is a callable wavefunction whose mass sits within a few
    ``sigma`` of ``centers``. Returns an array of shape (len(x), len(p)).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    p = np.atleast_1d(np.asarray(p, dtype=float))
    reach = SUPPORT_WIDTHS * sigma
    lo_c, hi_c = min(centers) - reach, max(centers) + reach
    _check_tails(psi, lo_c, hi_c, sigma)
    out = np.empty((len(x), len(p)))
    for i, xi in enumerate(x):
        # psi(xi + z) is negligible outside this window
        lo, hi = lo_c - xi, hi_c - xi

        def integrand(z, xi=xi):
            f = np.conj(psi(xi + z)) * psi(xi - z)
            return np.exp(2j * np.outer(p, z)) * f

        out[i] = _simpson(integrand, lo, hi, tol).real / math.pi
    return out


def momentum_density(psi, p, centers, sigma, tol=1e-12):
    """|phi(p)|^2 with phi(p) = (2 pi)^(-1/2) int psi(x) exp(-ipx) dx."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    reach = SUPPORT_WIDTHS * sigma
    lo, hi = min(centers) - reach, max(centers) + reach
    phi = _simpson(lambda z: np.exp(-1j * np.outer(p, z)) * psi(z), lo, hi, tol)
    return np.abs(phi) ** 2 / (2 * math.pi)


def _trapezoid(y, dx, axis=-1):
    return np.trapezoid(y, dx=dx, axis=axis)


@dataclass(frozen=True, eq=False)
class PhaseSpaceGrid:
    x_axis: np.ndarray
    p_axis: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def dx(self):
        return float(self.x_axis[1] - self.x_axis[0])

    @property
    def dp(self):
        return float(self.p_axis[1] - self.p_axis[0])

    def normalization(self):
        return float(_trapezoid(_trapezoid(self.values, self.dp, axis=1), self.dx))

    def position_marginal(self):
        return _trapezoid(self.values, self.dp, axis=1)

    def momentum_marginal(self):
        return _trapezoid(self.values, self.dx, axis=0)

    def min(self):
        return float(self.values.min())


def _closed_form(env, X, P):
    if env.kind == "single":
        return wigner_single(X, P, env.sigma)
    return wigner_cat(X, P, env.x0, env.sigma)


def wigner_grid(env, N, nx=201, np_=201, p_max=None, x_max=1.2, method="closed"):
    """Fill a uniform (x, p) grid for ``env``.

    ``method`` is "closed" for the analytic forms or "quadrature" for the
    direct integral. Validity flags and basic checks go into ``metadata``.
    """
    if nx < 16 or np_ < 16:
        raise ValueError("grid needs at least 16 points per axis")
    if method not in ("closed", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if p_max is None:
        p_max = 3 / env.sigma
    x_axis = np.linspace(-x_max, x_max, nx)
    p_axis = np.linspace(-p_max, p_max, np_)
    if method == "closed":
        X, P = np.meshgrid(x_axis, p_axis, indexing="ij")
        values = _closed_form(env, X, P)
    else:
        values = wigner_quadrature(env.psi, x_axis, p_axis, env.centers, env.sigma)
    grid = PhaseSpaceGrid(x_axis, p_axis, values)
    marginal_dev = float(np.max(np.abs(grid.position_marginal() - env.density(x_axis))))
    flags = []
    if not env.valid:
        flags.append(env.note)
    if env.sigma * N < 2:
        flags.append("packet narrower than two Fock bins; continuum Wigner function unreliable")
    grid.metadata.update(
        {
            "kind": env.kind,
            "lambda": env.lam,
            "N": N,
            "x0": env.x0,
            "sigma": env.sigma,
            "method": method,
            "nx": nx,
            "np": np_,
            "x_max": x_max,
            "p_max": p_max,
            "dx": grid.dx,
            "dp": grid.dp,
            "min_W": grid.min(),
            "max_abs_W": float(np.max(np.abs(values))),
            "normalization": grid.normalization(),
            "position_marginal_max_dev": marginal_dev,
            "valid": not flags,
            "flags": flags,
        }
    )
    return grid


def quadrature_checks(env, n=161, widths=8.0):
    """Normalization and marginal identities of the quadrature Wigner function.

    The grid spans ``widths`` packet widths beyond the lobes in x and
    ``widths / sigma`` in p so that truncation is negligible.
    """
    reach = widths * env.sigma
    x_axis = np.linspace(min(env.centers) - reach, max(env.centers) + reach, n)
    p_axis = np.linspace(-widths / env.sigma, widths / env.sigma, n)
    W = wigner_quadrature(env.psi, x_axis, p_axis, env.centers, env.sigma)
    grid = PhaseSpaceGrid(x_axis, p_axis, W)
    pdens = momentum_density(env.psi, p_axis, env.centers, env.sigma)
    return {
        "normalization": grid.normalization(),
        "position_marginal_max_dev": float(
            np.max(np.abs(grid.position_marginal() - env.density(x_axis)))
        ),
        "momentum_marginal_max_dev": float(np.max(np.abs(grid.momentum_marginal() - pdens))),
        "min_W": grid.min(),
    }
