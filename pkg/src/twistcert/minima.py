"""The minimum possible twisted commutation value over unitary pairs of a
given dimension, its closed form for (p, k) Schatten-Ky Fan norms with p >= 2,
the clock/shift family that saturates it, and a gradient-descent oracle for
the underlying minimization over pairs of unitaries."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL
from .linalg import (
    NormSpec,
    OPERATOR,
    as_matrix,
    haar_unitary,
    is_unitary,
    operator_norm,
    polar_unitary,
    schatten_kyfan_norm,
    twisted_commutator,
)

__all__ = [
    "TwistedPair",
    "round_half_away",
    "lambda_min",
    "lambda_upper_bound",
    "excluded_dimensions",
    "clock_matrix",
    "shift_matrix",
    "optimal_pair",
    "optimal_angles",
    "permutation_cost",
    "brute_min",
]


def round_half_away(x: float) -> int:
    """Nearest integer with half-integers rounded away from zero.

    At a tie |x - round(x)| = 1/2 either way, so the minimum value below is
    unaffected; only the saturating shift exponent depends on the convention.
    """
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


@dataclass
class TwistedPair:
    """Two unitaries with a twisting parameter and their measured
    twisted commutation value (operator norm)."""

    u: np.ndarray
    v: np.ndarray
    alpha: float
    eta: complex = field(init=False)
    delta: float = field(init=False)

    def __post_init__(self):
        self.u = as_matrix(self.u, square=True)
        self.v = as_matrix(self.v, square=True)
        if self.u.shape != self.v.shape:
            raise ValueError("twisted pair members must have equal dimension")
        if not (0.0 <= self.alpha < 1.0):
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha}")
        for name, m in (("u", self.u), ("v", self.v)):
            if not is_unitary(m, 100 * DEFAULT_TOL.unitarity):
                raise ValueError(f"{name} is not unitary to tolerance")
        self.eta = complex(np.exp(2j * np.pi * self.alpha))
        self.delta = operator_norm(self.commutator())

    @property
    def dim(self) -> int:
        return self.u.shape[0]

    def commutator(self) -> np.ndarray:
        return twisted_commutator(self.u, self.v, self.alpha)


def lambda_min(g: int, alpha: float, spec: NormSpec = OPERATOR) -> float:
    """Closed-form minimum of || [[u, v]]_alpha ||_(p,k) over unitary pairs of
    dimension g, valid for p >= 2:

        2 k^(1/p) sin(pi |round(g alpha) - g alpha| / g)

    Zero exactly when g * alpha is an integer.
    """
    if g < 1:
        raise ValueError(f"dimension must be positive, got {g}")
    if spec.p < 2.0:
        raise ValueError(f"closed form requires p >= 2, got p = {spec.p}")
    if spec.k > g:
        raise ValueError(f"k = {spec.k} exceeds dimension {g}")
    m = round_half_away(g * alpha)
    prefactor = 1.0 if math.isinf(spec.p) else spec.k ** (1.0 / spec.p)
    return float(2.0 * prefactor * np.sin(np.pi * abs(m - g * alpha) / g))


def lambda_upper_bound(g: int, spec: NormSpec = OPERATOR) -> float:
    """Twist-independent upper bound 2 k^(1/p) sin(pi / 2g), from
    |x - round(x)| <= 1/2."""
    prefactor = 1.0 if math.isinf(spec.p) else spec.k ** (1.0 / spec.p)
    return float(2.0 * prefactor * np.sin(np.pi / (2.0 * g)))


def excluded_dimensions(delta: float, alpha: float, g_max: int,
                        spec: NormSpec = OPERATOR) -> list[int]:
    """Dimensions g <= g_max that are impossible for a unitary pair whose
    twisted commutation value is delta: those with delta < lambda_min(g).

    The minimum is not monotone in g, so this is a classification rather than
    a single threshold.  For k > g the norm is evaluated with k clamped to g.
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    out = []
    for g in range(1, g_max + 1):
        eff = NormSpec(spec.p, min(spec.k, g))
        if delta < lambda_min(g, alpha, eff):
            out.append(g)
    return out


def clock_matrix(g: int) -> np.ndarray:
    """diag(1, w, w^2, ..., w^(g-1)) with w = exp(2 pi i / g)."""
    if g < 1:
        raise ValueError(f"dimension must be positive, got {g}")
    omega = np.exp(2j * np.pi / g)
    return np.diag(omega ** np.arange(g))


def shift_matrix(g: int) -> np.ndarray:
    """The cyclic permutation |j> -> |j + 1 mod g>."""
    if g < 1:
        raise ValueError(f"dimension must be positive, got {g}")
    s = np.zeros((g, g), dtype=np.complex128)
    s[(np.arange(g) + 1) % g, np.arange(g)] = 1.0
    return s


def optimal_pair(g: int, alpha: float) -> TwistedPair:
    """The clock/shift pair (C, S^round(g alpha)) saturating lambda_min.

    With C = diag(w^j) and S the increment permutation, C S^k = w^k S^k C, so
    the twisted commutator of (C, S^k) at twist alpha is (w^k - eta) S^k C and
    its norm is minimized by k = round(g alpha).  The commutator is a scalar
    multiple of a unitary, so its singular values are flat and the (p, k) norm
    equals lambda_min for every p >= 2 and k <= g.  At a rounding tie both
    candidate exponents saturate.
    """
    m = round_half_away(g * alpha)
    c = clock_matrix(g)
    s = shift_matrix(g)
    v = np.linalg.matrix_power(s, m % g)
    return TwistedPair(u=c, v=v, alpha=alpha)


def optimal_angles(g: int, alpha: float) -> np.ndarray:
    """The minimizing eigenvalue angles for the cyclic pairing:
    theta_j = 2 pi round(g alpha) (j - 1) / g, j = 1..g (theta_1 = 0 gauge),
    evenly spaced with step 2 pi round(g alpha) / g."""
    m = round_half_away(g * alpha)
    return 2.0 * np.pi * m * np.arange(g) / g


def permutation_cost(angles, alpha: float, perm=None) -> float:
    """Sum of squared chord lengths sum_j 4 sin^2((theta_perm(j) - theta_j -
    2 pi alpha)/2); perm defaults to the cyclic shift j -> j+1.

    The square root of its minimum over angles is the spectral-distance lower
    bound on the Frobenius twisted commutation value.
    """
    theta = np.asarray(angles, dtype=float)
    g = theta.size
    if perm is None:
        perm = (np.arange(g) + 1) % g
    perm = np.asarray(perm, dtype=int)
    return float(np.sum(4.0 * np.sin((theta[perm] - theta - 2.0 * np.pi * alpha) / 2.0) ** 2))


def _descend(u: np.ndarray, v: np.ndarray, alpha: float, iters: int,
             step0: float) -> tuple[np.ndarray, np.ndarray]:
    """Projected gradient descent on the smooth Frobenius-squared objective
    ||u v - eta v u||_F^2, with polar retraction to the unitary group and a
    backtracking line search.  Frobenius minimizers have flat-spectrum twisted
    commutators, so they minimize every (p, k) norm simultaneously."""
    eta = np.exp(2j * np.pi * alpha)
    step = step0
    t = twisted_commutator(u, v, alpha)
    fval = float(np.linalg.norm(t) ** 2)
    for _ in range(iters):
        gu = t @ v.conj().T - np.conj(eta) * (v.conj().T @ t)
        gv = u.conj().T @ t - np.conj(eta) * (t @ u.conj().T)
        gnorm2 = float(np.linalg.norm(gu) ** 2 + np.linalg.norm(gv) ** 2)
        if gnorm2 < 1e-30:
            break
        improved = False
        while step > 1e-14:
            u2 = polar_unitary(u - step * gu)
            v2 = polar_unitary(v - step * gv)
            t2 = twisted_commutator(u2, v2, alpha)
            f2 = float(np.linalg.norm(t2) ** 2)
            if f2 <= fval - 1e-4 * step * gnorm2:
                u, v, t, fval = u2, v2, t2, f2
                step = min(step * 1.3, 1.0)
                improved = True
                break
            step *= 0.5
        if not improved:
            break
    return u, v


def brute_min(g: int, alpha: float, spec: NormSpec = OPERATOR,
              restarts: int = 50, seed: int = 0, iters: int = 300,
              step0: float = 0.25, trace: bool = False):
    """Locally minimize the twisted commutation value over pairs of g x g
    unitaries by seeded random restarts and projected descent.

    One-sided oracle for the closed form: the returned value can never fall
    below lambda_min (up to numerical tolerance).  Restart r starts from Haar
    unitaries drawn from default_rng([seed, r]), so runs are reproducible.
    Restricted to g <= 4; the cost grows quickly beyond desk scale.

    Returns the best value found in the requested norm; with trace=True also
    returns the list of final (u, v) pairs, one per restart.
    """
    if g > 4:
        raise ValueError("brute_min is restricted to g <= 4")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    best = math.inf
    finals = []
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        u0 = haar_unitary(g, rng)
        v0 = haar_unitary(g, rng)
        u, v = _descend(u0, v0, alpha, iters=iters, step0=step0)
        val = schatten_kyfan_norm(twisted_commutator(u, v, alpha), spec)
        if val < best:
            best = val
        if trace:
            finals.append((u, v))
    if trace:
        return best, finals
    return best
