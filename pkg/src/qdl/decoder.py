"""Bob's decoding measurements and their success-probability bounds.

For i.i.d. codebooks the decoder is the pretty good measurement built from
the M codewords sharing the key value: Lambda_m = S^{-1/2} P_m S^{-1/2}
with S the sum of codeword projectors and the inverse square root taken on
the support.  Each element is rank one, so the PGM is stored through its
factor vectors a_m = S^{-1/2} psi_m and full operators are materialized
only on demand.  The unitary scheme decodes exactly by undoing the phase
modulation and projecting onto the Fourier basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensemble import Codebook, ORIGIN_UNITARY, fourier_basis
from .errors import ContractError, DomainError, NumericError

# Support cutoff relative to the largest eigenvalue of S; S has rank <= M << d.
SUPPORT_CUTOFF = 1e-10


@dataclass
class PGM:
    """Pretty good measurement for one key value.

    ``factors`` holds the vectors a_m with Lambda_m = a_m a_m^dagger;
    ``support`` is an orthonormal basis (d, r) of the span of the codewords.
    """

    factors: np.ndarray  # (M, d) complex128
    support: np.ndarray  # (d, r) complex128
    k: int
    d: int
    M: int
    codebook_seed: int

    @property
    def support_rank(self) -> int:
        return self.support.shape[1]

    def element(self, m: int) -> np.ndarray:
        """Full operator Lambda_m for 1-based m."""
        if not (1 <= m <= self.M):
            raise DomainError(f"element index {m} outside 1..{self.M}")
        a = self.factors[m - 1]
        return np.outer(a, a.conj())

    def elements_sum(self) -> np.ndarray:
        return np.einsum("mi,mj->ij", self.factors, self.factors.conj())

    def residual(self) -> np.ndarray:
        """Completion element I - sum_m Lambda_m (the failure outcome)."""
        return np.eye(self.d) - self.elements_sum()


def build_pgm(codebook: Codebook, k: int) -> PGM:
    """Construct the PGM for 1-based key value k.

    The inverse square root of S = sum_m |psi_mk><psi_mk| is taken on the
    support (pseudo-inverse); singular directions below the relative cutoff
    are dropped.
    """
    vectors = codebook.key_slice(k)  # (M, d)
    M, d = vectors.shape
    V = vectors.T  # (d, M) columns are codewords; S = V V^dagger
    P, s, Wh = np.linalg.svd(V, full_matrices=False)
    if not np.all(np.isfinite(s)):
        raise NumericError("singular values of the codeword matrix are not finite")
    keep = s > np.sqrt(SUPPORT_CUTOFF) * s[0]
    r = int(np.count_nonzero(keep))
    # a_m = S^{-1/2} psi_m = P_r W_r[:, m]; the singular values cancel.
    factors = (P[:, :r] @ Wh[:r, :]).T  # (M, d)
    return PGM(
        factors=factors,
        support=P[:, :r],
        k=k,
        d=d,
        M=M,
        codebook_seed=codebook.params.seed,
    )


def _check_match(pgm: PGM, codebook: Codebook, k: int) -> None:
    p = codebook.params
    if pgm.k != k or pgm.d != p.d or pgm.M != p.M or pgm.codebook_seed != p.seed:
        raise ContractError(
            "PGM was not built from this codebook/key "
            f"(pgm: k={pgm.k} d={pgm.d} M={pgm.M} seed={pgm.codebook_seed}; "
            f"given: k={k} d={p.d} M={p.M} seed={p.seed})"
        )


def success_probability(pgm: PGM, codebook: Codebook, k: int) -> float:
    """Average probability (1/M) sum_m Tr(Lambda_m |psi_mk><psi_mk|).

    Evaluated exactly through the trace formula, not by sampling outcomes.
    """
    _check_match(pgm, codebook, k)
    vectors = codebook.key_slice(k)
    overlaps = np.einsum("mi,mi->m", vectors.conj(), pgm.factors)
    p = float(np.mean(np.abs(overlaps) ** 2))
    if not (0.0 - 1e-12 <= p <= 1.0 + 1e-12):
        raise NumericError(f"success probability {p} escaped [0, 1]")
    return min(max(p, 0.0), 1.0)


def sample_outcome(
    pgm: PGM, state: np.ndarray, rng: np.random.Generator
) -> int:
    """Draw one measurement outcome; returns 1-based message, or 0 for the
    residual (failure) element.  Demo helper; analysis uses the trace formula.
    """
    probs = np.abs(pgm.factors.conj() @ state) ** 2
    residual = max(0.0, 1.0 - float(probs.sum()))
    full = np.append(probs.real, residual)
    full /= full.sum()
    j = int(rng.choice(len(full), p=full))
    return 0 if j == pgm.M else j + 1


def pgm_lower_bound(d: int, M: int, delta: float) -> float:
    """Closed-form success bound (d/M) / [(1 + sqrt(d/M))^2 + delta]."""
    if M > d:
        raise DomainError(f"bound requires M <= d, got M={M}, d={d}")
    if delta < 0:
        raise DomainError(f"delta must be >= 0, got {delta}")
    ratio = d / M
    return ratio / ((1.0 + np.sqrt(ratio)) ** 2 + delta)


def unitary_decode(codebook: Codebook, k: int, received: np.ndarray) -> int:
    """Exact decoder for the unitary scheme: undo U_k, project on the
    Fourier basis, return the 1-based message with the largest overlap.
    """
    if codebook.origin != ORIGIN_UNITARY or codebook.unitary_phases is None:
        raise ContractError("unitary_decode requires a phase-unitaries codebook")
    p = codebook.params
    if not (1 <= k <= p.K):
        raise DomainError(f"key index {k} outside 1..{p.K}")
    if received.shape != (p.d,):
        raise ContractError(
            f"received vector has shape {received.shape}, expected ({p.d},)"
        )
    rotated = np.exp(-1j * codebook.unitary_phases[k - 1]) * received
    overlaps = fourier_basis(p.d).conj() @ rotated
    return int(np.argmax(np.abs(overlaps) ** 2)) + 1
