"""Lowest eigenpairs of the symmetric tridiagonal Fock Hamiltonian.

Eigenvalues come from Sturm-sequence bisection, eigenvectors from inverse
iteration. The ground state is kept in the even-parity sector, which
resolves the exponentially small cat doublet splitting at lam > 1.
``dense_oracle`` is a cyclic Jacobi solver that shares no code with this
path and exists for cross-checking.
"""

from dataclasses import dataclass
import math

import numpy as np

from bjjcat.errors import ConvergenceError
from bjjcat.model import FockAmplitudes, TridiagonalOperator, fix_sign

BISECTION_STEPS = 60
INVERSE_ITERATION_CAP = 50
ORACLE_MAX_DIM = 256
_EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class EigenResult:
    energies: np.ndarray
    states: tuple
    residuals: np.ndarray

    @property
    def ground_energy(self):
        return float(self.energies[0])

    @property
    def ground(self):
        return self.states[0]

    @property
    def gap(self):
        """Splitting E_1 - E_0 between the two lowest levels."""
        if len(self.energies) < 2:
            raise ValueError("gap requires at least two eigenvalues")
        return float(self.energies[1] - self.energies[0])


def sturm_count(H, x):
    """Number of eigenvalues of ``H`` strictly below ``x``."""
    d = H.diag.tolist()
    e2 = (H.offdiag**2).tolist()
    pivmin = _pivmin(H)
    count = 0
    q = d[0] - x
    if abs(q) <= pivmin:
        q = -pivmin
    if q < 0:
        count += 1
    for i in range(1, len(d)):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) <= pivmin:
            q = -pivmin
        if q < 0:
            count += 1
    return count


def _pivmin(H):
    e2max = float(np.max(H.offdiag**2)) if len(H.offdiag) else 0.0
    return np.finfo(float).tiny * max(1.0, e2max)


def bisect_eigenvalue(H, index, steps=BISECTION_STEPS):
    """The ``index``-th smallest eigenvalue (0-based) by Sturm bisection."""
    if not 0 <= index < H.dimension:
        raise ValueError(f"eigenvalue index {index} out of range")
    lo, hi = H.gershgorin()
    width = max(hi - lo, 1.0)
    lo -= _EPS * width
    hi += _EPS * width
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if sturm_count(H, mid) > index:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


class _ShiftedLU:
    """Partial-pivoting LU of (H - shift*I), tridiagonal with one fill-in band."""

    def __init__(self, H, shift):
        n = H.dimension
        d = (H.diag - shift).tolist()
        du = H.offdiag.tolist()
        dl = H.offdiag.tolist()
        du2 = [0.0] * max(n - 2, 0)
        fact = [0.0] * (n - 1)
        swap = [False] * (n - 1)
        small = _EPS * max(1.0, float(np.max(np.abs(H.diag)) + 2 * np.max(np.abs(H.offdiag))))
        for i in range(n - 1):
            if abs(d[i]) >= abs(dl[i]):
                if d[i] == 0.0:
                    d[i] = small
                f = dl[i] / d[i]
                d[i + 1] -= f * du[i]
            else:
                f = d[i] / dl[i]
                d[i] = dl[i]
                tmp = d[i + 1]
                d[i + 1] = du[i] - f * tmp
                if i < n - 2:
                    du2[i] = du[i + 1]
                    du[i + 1] = -f * du[i + 1]
                du[i] = tmp
                swap[i] = True
            fact[i] = f
        for i in range(n):
            if abs(d[i]) < small:
                d[i] = math.copysign(small, d[i]) if d[i] else small
        self.n, self.d, self.du, self.du2, self.fact, self.swap = n, d, du, du2, fact, swap

    def solve(self, rhs):
        n, d, du, du2 = self.n, self.d, self.du, self.du2
        b = [float(v) for v in rhs]
        for i in range(n - 1):
            if self.swap[i]:
                b[i], b[i + 1] = b[i + 1], b[i] - self.fact[i] * b[i + 1]
            else:
                b[i + 1] -= self.fact[i] * b[i]
        x = [0.0] * n
        x[n - 1] = b[n - 1] / d[n - 1]
        if n > 1:
            x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2]
        for i in range(n - 3, -1, -1):
            x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i]
        return np.array(x)


def _project_parity(v, sign):
    return 0.5 * (v + sign * v[::-1])


def parity_blocks(H):
    """Restrictions of a mirror-symmetric ``H`` to its even and odd sectors.

    Returns ``(even, odd)`` operators; ``odd`` is None for a 3x3 or smaller
    problem without an odd sector. Basis vectors are (|j> +- |N-j>)/sqrt(2),
    plus the lone centre state |N/2> in the even sector when N is even.
    """
    a, b = H.diag, H.offdiag
    n = H.dimension
    m = n // 2
    if n % 2:  # N even: centre state belongs to the even sector only
        even_d = a[: m + 1].copy()
        even_e = b[:m].copy()
        if m >= 1:
            even_e[m - 1] *= math.sqrt(2.0)
        odd_d = a[:m].copy()
        odd_e = b[: m - 1].copy() if m >= 1 else np.empty(0)
    else:  # N odd: the two central states couple through b[m-1]
        even_d = a[:m].copy()
        even_e = b[: m - 1].copy()
        odd_d = a[:m].copy()
        odd_e = b[: m - 1].copy()
        even_d[m - 1] += b[m - 1]
        odd_d[m - 1] -= b[m - 1]
    even = TridiagonalOperator(even_d, even_e)
    odd = TridiagonalOperator(odd_d, odd_e) if len(odd_d) else None
    return even, odd


def _lift(u, n, sign):
    """Map a sector vector back to the full Fock basis."""
    v = np.zeros(n)
    k = len(u)
    half = u / math.sqrt(2.0)
    if n % 2 and sign > 0:
        v[: k - 1] = half[:-1]
        v[n - k + 1 :] = half[-2::-1]
        v[k - 1] = u[-1]
    else:
        v[:k] = half
        v[n - k :] = sign * half[::-1]
    return v


def _twisted_vector(H, shift):
    """Solve (H - shift) z = gamma_k e_k with the twist index minimizing |gamma_k|.

    For the lowest eigenvalue of an operator with negative off-diagonals the
    pivots are positive, so every component comes out strictly positive.
    """
    a = (H.diag - shift).tolist()
    b = H.offdiag.tolist()
    n = len(a)
    pivmin = _pivmin(H)

    def guard(q):
        return q if abs(q) > pivmin else -pivmin

    dp = [0.0] * n
    dm = [0.0] * n
    dp[0] = guard(a[0])
    for i in range(1, n):
        dp[i] = guard(a[i] - b[i - 1] ** 2 / dp[i - 1])
    dm[n - 1] = guard(a[n - 1])
    for i in range(n - 2, -1, -1):
        dm[i] = guard(a[i] - b[i] ** 2 / dm[i + 1])
    gamma = [dp[i] + dm[i] - a[i] for i in range(n)]
    k = min(range(n), key=lambda i: abs(gamma[i]))
    z = [0.0] * n
    z[k] = 1.0
    for i in range(k - 1, -1, -1):
        z[i] = -b[i] * z[i + 1] / dp[i]
    for i in range(k + 1, n):
        z[i] = -b[i - 1] * z[i - 1] / dm[i]
    z = np.array(z)
    return z / np.linalg.norm(z)


def _eigenvector(H, shift, previous, tol):
    """Eigenvector at ``shift``: twisted solve, then inverse iteration if needed."""
    v = _twisted_vector(H, shift)
    residual = float(np.linalg.norm(H.matvec(v) - shift * v))
    if residual <= tol and all(abs(np.dot(u, v)) <= tol for u in previous):
        return v, residual
    lu = _ShiftedLU(H, shift)
    for _ in range(INVERSE_ITERATION_CAP):
        y = lu.solve(v)
        for _ in range(2):
            for u in previous:
                y -= np.dot(u, y) * u
        norm = np.linalg.norm(y)
        if not np.isfinite(norm) or norm == 0:
            break
        v = y / norm
        residual = float(np.linalg.norm(H.matvec(v) - shift * v))
        if residual <= tol:
            return v, residual
    raise ConvergenceError(
        f"inverse iteration did not converge at shift {shift!r}: "
        f"residual {residual:.3e} > tol {tol:.1e}",
        residual=residual,
    )


def spectrum(H, k, tol=1e-10):
    """The ``k`` lowest eigenpairs of ``H``, each of definite parity.

    H commutes with the mirror map, so the even and odd sectors are solved
    as separate tridiagonal problems and merged. The ground state is the
    lowest even-sector state, i.e. the symmetric member of the cat doublet
    at lam > 1, and the doublet partner is the lowest odd-sector state.
    """
    if not isinstance(H, TridiagonalOperator):
        raise TypeError("H must be a TridiagonalOperator")
    if not 1 <= k <= H.dimension:
        raise ValueError(f"k must be in [1, {H.dimension}], got {k}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not H.is_mirror_symmetric(tol=1e-12 * max(1.0, float(np.max(np.abs(H.diag))))):
        raise ValueError("operator is not mirror symmetric")
    n = H.dimension
    sectors = [(s, blk) for s, blk in zip((1.0, -1.0), parity_blocks(H)) if blk is not None]

    candidates = []
    for sign, blk in sectors:
        for j in range(min(k, blk.dimension)):
            candidates.append((bisect_eigenvalue(blk, j), sign, j))
    candidates.sort(key=lambda c: (c[0], -c[1]))
    # Perron-Frobenius: the ground state is the lowest even state even when
    # rounding puts its odd partner a few ulps lower
    ground = next(c for c in candidates if c[1] > 0 and c[2] == 0)
    candidates.remove(ground)
    chosen = [ground] + candidates[: k - 1]

    found = {1.0: [], -1.0: []}
    energies, vectors, residuals = [], [], []
    for energy, sign, j in sorted(chosen, key=lambda c: (-c[1], c[2])):
        blk = dict(sectors)[sign]
        u, _ = _eigenvector(blk, energy, found[sign], tol)
        found[sign].append(u)
    for energy, sign, j in chosen:
        u = found[sign][j]
        v = fix_sign(_lift(u, n, sign))
        v /= np.linalg.norm(v)
        residual = float(np.linalg.norm(H.matvec(v) - energy * v))
        if residual > tol:
            raise ConvergenceError(
                f"eigenpair {len(energies)} residual {residual:.3e} exceeds tol {tol:.1e}",
                residual=residual,
            )
        energies.append(energy)
        vectors.append(v)
        residuals.append(residual)
    return EigenResult(
        energies=np.array(energies),
        states=tuple(FockAmplitudes.from_vector(v) for v in vectors),
        residuals=np.array(residuals),
    )


def ground_state(H, tol=1e-10):
    return spectrum(H, 1, tol=tol)


def _jacobi_eigh(a, max_sweeps=60):
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    negligible = 1e-18 * max(np.linalg.norm(a), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= negligible:
                    a[p, q] = a[q, p] = 0.0
                    continue
                rotated = True
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                colp = a[:, p].copy()
                a[:, p] = c * colp - s * a[:, q]
                a[:, q] = s * colp + c * a[:, q]
                rowp = a[p, :].copy()
                a[p, :] = c * rowp - s * a[q, :]
                a[q, :] = s * rowp + c * a[q, :]
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
        if not rotated:
            break
    else:
        raise ConvergenceError("Jacobi sweeps did not converge")
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def dense_oracle(H):
    """Full spectrum by cyclic Jacobi rotations on the dense matrix. Test use only."""
    if H.dimension > ORACLE_MAX_DIM:
        raise ValueError(
            f"dense oracle limited to dimension {ORACLE_MAX_DIM}, got {H.dimension}"
        )
    dense = H.to_dense()
    w, v = _jacobi_eigh(dense)
    vecs = [fix_sign(v[:, j] / np.linalg.norm(v[:, j])) for j in range(len(w))]
    residuals = np.array([np.linalg.norm(dense @ x - e * x) for e, x in zip(w, vecs)])
    return EigenResult(
        energies=w,
        states=tuple(FockAmplitudes.from_vector(x) for x in vecs),
        residuals=residuals,
    )


def symmetric_ground_vector(result, degeneracy_tol=1e-8):
    """Even-parity ground vector from a full eigen-decomposition.

    When the two lowest levels are quasi-degenerate the oracle may return any
    rotation inside the doublet; the even component is recovered from
    whichever of the two vectors carries more of it.
    """
    candidates = [result.states[0].coefficients]
    if len(result.energies) > 1 and result.energies[1] - result.energies[0] < degeneracy_tol:
        candidates.append(result.states[1].coefficients)
    even = max((_project_parity(c, 1.0) for c in candidates), key=np.linalg.norm)
    return fix_sign(even / np.linalg.norm(even))


def doublet_splitting(H, tol=1e-10):
    """Splitting between the lowest odd and lowest even state, to relative accuracy.

    Eigenvalue differences lose all digits once the splitting drops below
    the rounding level of E_0. Summing the discrete flux identity
    v(Hu) - u(Hv) over the left half of the chain instead gives
    (E_odd - E_even) * sum_{n<m} u_n v_n = -beta_{m-1} (boundary amplitudes),
    where every factor is an eigenvector amplitude the twisted solves
    deliver with small relative error, however tiny.
    """
    even, odd = parity_blocks(H)
    if odd is None:
        raise ValueError("operator too small to have an odd sector")
    n = H.dimension
    vecs = []
    for sign, blk in ((1.0, even), (-1.0, odd)):
        shift = bisect_eigenvalue(blk, 0)
        u, _ = _eigenvector(blk, shift, [], tol)
        vecs.append(_lift(u, n, sign))
    u, v = vecs
    u = u if u.sum() > 0 else -u
    m = n // 2
    v = v if v[:m].sum() > 0 else -v
    b = H.offdiag
    if n % 2:  # centre state m, where the odd vector vanishes
        flux = b[m - 1] * v[m - 1] * u[m]
    else:
        flux = 2 * b[m - 1] * u[m - 1] * v[m - 1]
    return float(-flux / np.dot(u[:m], v[:m]))
