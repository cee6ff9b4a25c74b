"""Empirical covariance operators of codeword sets and their spectral bounds.

For n unit codewords the Gram operator X = (1/n) sum_j |psi_j><psi_j| is a
sample covariance matrix with entry variance 1/d, so its extreme eigenvalues
converge to (1 +/- sqrt(d/n))^2 / d.  This module builds X, solves for the
spectral edges, evaluates the closed-form limits, measures how often finite
samples violate them by a slack delta, and evaluates the scalar
second-moment tail bound used by the concentration arguments.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DomainError, NumericError
from .ensemble import sample_phases
from .rng import substream

HERMITIAN_TOL = 1e-10
RESIDUAL_TOL = 1e-8
DEFAULT_MAX_DIM = 4096


def max_dim() -> int:
    """Dense eigensolve dimension cap; QDL_MAX_DIM overrides the default."""
    env = os.environ.get("QDL_MAX_DIM")
    return int(env) if env else DEFAULT_MAX_DIM


@dataclass
class GramOperator:
    """X = (1/n) sum_j |psi_j><psi_j| plus its sampling metadata."""

    matrix: np.ndarray  # (d, d) complex128, Hermitian
    n: int
    sigma2: float

    @property
    def d(self) -> int:
        return self.matrix.shape[0]


@dataclass
class SpectralReport:
    """One trial's extreme eigenvalues against the closed-form limits."""

    d: int
    n: int
    y: float
    lambda_min: float
    lambda_max: float
    predicted_min: float | None
    predicted_max: float
    deviation: float


@dataclass
class DeviationReport:
    """Empirical frequency of spectral-edge violations at slack delta."""

    d: int
    n: int
    delta: float
    trials: int
    violations_max: int
    violations_min: int

    @property
    def freq_max(self) -> float:
        return self.violations_max / self.trials

    @property
    def freq_min(self) -> float:
        return self.violations_min / self.trials


def gram_operator(vectors: np.ndarray, sigma2: float | None = None) -> GramOperator:
    """Average of rank-1 projectors of the given unit vectors.

    ``vectors`` is an (n, d) array or a sequence of length-d vectors.
    """
    V = np.asarray(vectors, dtype=np.complex128)
    if V.ndim == 1:
        V = V[None, :]
    if V.ndim != 2:
        raise DomainError(
            "expected a list of equal-length vectors; got mixed dimensions"
        )
    n, d = V.shape
    if n == 0:
        raise DomainError("empty vector list")
    X = (V.T @ V.conj()) / n
    X = 0.5 * (X + X.conj().T)  # kill rounding asymmetry
    return GramOperator(matrix=X, n=n, sigma2=1.0 / d if sigma2 is None else sigma2)


def extreme_eigenvalues(X: GramOperator | np.ndarray) -> tuple[float, float]:
    """Smallest and largest eigenvalues of a Hermitian operator.

    Verifies Hermiticity on entry and the eigenpair residuals on exit.
    """
    A = X.matrix if isinstance(X, GramOperator) else np.asarray(X)
    if A.shape[0] != A.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {A.shape}")
    if A.shape[0] > max_dim():
        raise CapacityError(
            f"dimension {A.shape[0]} exceeds the eigensolve cap {max_dim()}"
        )
    herm_gap = np.max(np.abs(A - A.conj().T))
    if herm_gap > HERMITIAN_TOL:
        raise NumericError(f"matrix is not Hermitian (max asymmetry {herm_gap:.3e})")
    vals, vecs = np.linalg.eigh(A)
    lam_min, lam_max = float(vals[0]), float(vals[-1])
    for lam, v in ((lam_min, vecs[:, 0]), (lam_max, vecs[:, -1])):
        residual = np.linalg.norm(A @ v - lam * v)
        if residual > RESIDUAL_TOL:
            raise NumericError(f"eigenpair residual {residual:.3e} exceeds tolerance")
    return lam_min, lam_max


def bai_yin_limits(
    d: int, n: int, sigma2: float
) -> tuple[float | None, float]:
    """Closed-form extreme-eigenvalue limits (1 +/- sqrt(y))^2 * sigma2, y = d/n.

    The lower limit is defined only for d <= n; ``None`` otherwise.
    """
    if d < 1 or n < 1:
        raise DomainError("d and n must be positive")
    y = d / n
    predicted_max = (1.0 + np.sqrt(y)) ** 2 * sigma2
    predicted_min = (1.0 - np.sqrt(y)) ** 2 * sigma2 if d <= n else None
    return predicted_min, predicted_max


def spectral_trial(
    d: int, n: int, alphabet: str, rng: np.random.Generator
) -> SpectralReport:
    """Sample n phase vectors, eigensolve their Gram operator, compare to limits."""
    theta = np.stack([sample_phases(d, alphabet, rng) for _ in range(n)])
    V = np.exp(1j * theta) / np.sqrt(d)
    X = gram_operator(V)
    lam_min, lam_max = extreme_eigenvalues(X)
    pred_min, pred_max = bai_yin_limits(d, n, X.sigma2)
    dev = abs(lam_max - pred_max) / pred_max
    if pred_min is not None and pred_min > 0:
        dev = max(dev, abs(lam_min - pred_min) / pred_min)
    return SpectralReport(
        d=d,
        n=n,
        y=d / n,
        lambda_min=lam_min,
        lambda_max=lam_max,
        predicted_min=pred_min,
        predicted_max=pred_max,
        deviation=dev,
    )


def deviation_rate(
    d: int,
    n: int,
    delta: float,
    trials: int,
    seed: int,
    alphabet: str = "binary",
) -> DeviationReport:
    """Fraction of trials whose spectral edges escape the delta-padded limits.

    A trial violates the upper edge when lambda_max > [(1+sqrt(y))^2 + delta]
    * sigma2, and the lower edge (only when d < n) when
    lambda_min < [(1-sqrt(y))^2 - delta] * sigma2.
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    y = d / n
    sigma2 = 1.0 / d
    hi = ((1.0 + np.sqrt(y)) ** 2 + delta) * sigma2
    lo = ((1.0 - np.sqrt(y)) ** 2 - delta) * sigma2 if d < n else None
    viol_max = 0
    viol_min = 0
    for t in range(trials):
        rng = substream(seed, "spectra.trial", t)
        rep = spectral_trial(d, n, alphabet, rng)
        if rep.lambda_max > hi:
            viol_max += 1
        if lo is not None and rep.lambda_min < lo:
            viol_min += 1
    return DeviationReport(
        d=d,
        n=n,
        delta=delta,
        trials=trials,
        violations_max=viol_max,
        violations_min=viol_min,
    )


def maurer_bound(K: int, tau: float, second_moment: float) -> float:
    """Scalar tail bound exp(-K * tau^2 / (2 * E[X^2])) for i.i.d. positive X."""
    if K < 1:
        raise DomainError(f"K must be >= 1, got {K}")
    if tau <= 0:
        raise DomainError(f"tau must be positive, got {tau}")
    if second_moment <= 0:
        raise DomainError(f"second moment must be positive, got {second_moment}")
    return float(np.exp(-K * tau**2 / (2.0 * second_moment)))
