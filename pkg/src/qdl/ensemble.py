"""Phase-ensemble codewords, phase unitaries, and codebook assembly.

Codewords are vectors (1/sqrt(d)) * sum_w exp(i theta(w)) |w> with i.i.d.
zero-mean phases.  Two alphabets are supported: ``binary`` draws
theta in {0, pi} (the default), ``uniform`` draws theta in [0, 2*pi).
The unitary scheme applies diagonal phase unitaries to the Fourier basis,
producing codebooks whose rows with fixed key are orthonormal.

Message and key indices are 1-based at the API surface and 0-based in the
underlying arrays.
"""

from __future__ import annotations

import json
import os
import struct
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CapacityError,
    ContractError,
    DomainError,
    InvalidDimensionError,
    UsageError,
)
from .rng import substream

ALPHABETS = ("binary", "uniform")
ORIGIN_IID = "iid-vectors"
ORIGIN_UNITARY = "phase-unitaries"

# Dense complex128 codebook budget: d*M*K entries (~1 GiB at the default).
DEFAULT_MAX_ELEMENTS = 1 << 26


@dataclass(frozen=True)
class ProtocolParams:
    """The tuple (d, M, K, alphabet, seed) defining one locking instance."""

    d: int
    M: int
    K: int
    alphabet: str = "binary"
    seed: int = 0

    def __post_init__(self):
        if self.d < 2:
            raise InvalidDimensionError(f"d must be >= 2, got {self.d}")
        if self.M < 1:
            raise DomainError(f"M must be >= 1, got {self.M}")
        if self.K < 1:
            raise DomainError(f"K must be >= 1, got {self.K}")
        if self.alphabet not in ALPHABETS:
            raise DomainError(
                f"unknown alphabet {self.alphabet!r}; expected one of {ALPHABETS}"
            )

    @property
    def decoder_regime_ok(self) -> bool:
        """True when M <= d, the regime where the decoder success bound applies."""
        return self.M <= self.d


@dataclass(frozen=True)
class PhaseUnitary:
    """Diagonal unitary with phase angles theta(w); preserves vector norm."""

    phases: np.ndarray  # (d,) float64 radians

    @property
    def d(self) -> int:
        return self.phases.shape[0]

    def apply(self, vec: np.ndarray) -> np.ndarray:
        if vec.shape[-1] != self.d:
            raise ContractError(
                f"vector dimension {vec.shape[-1]} != unitary dimension {self.d}"
            )
        return np.exp(1j * self.phases) * vec

    def inverse(self) -> "PhaseUnitary":
        return PhaseUnitary(-self.phases)


@dataclass
class Codebook:
    """M x K grid of unit codeword vectors.

    ``words`` has shape (M, K, d).  For the unitary scheme,
    ``unitary_phases`` keeps the K phase arrays so the decoder can invert
    the modulation exactly.
    """

    params: ProtocolParams
    words: np.ndarray  # (M, K, d) complex128
    origin: str
    unitary_phases: np.ndarray | None = field(default=None)

    def __post_init__(self):
        p = self.params
        if self.words.shape != (p.M, p.K, p.d):
            raise ContractError(
                f"words shape {self.words.shape} does not match params "
                f"(M={p.M}, K={p.K}, d={p.d})"
            )
        if self.origin not in (ORIGIN_IID, ORIGIN_UNITARY):
            raise DomainError(f"unknown codebook origin {self.origin!r}")

    def word(self, m: int, k: int) -> np.ndarray:
        """Codeword for 1-based message m and key k."""
        p = self.params
        if not (1 <= m <= p.M):
            raise DomainError(f"message index {m} outside 1..{p.M}")
        if not (1 <= k <= p.K):
            raise DomainError(f"key index {k} outside 1..{p.K}")
        return self.words[m - 1, k - 1]

    def key_slice(self, k: int) -> np.ndarray:
        """All M codewords for 1-based key k, shape (M, d)."""
        if not (1 <= k <= self.params.K):
            raise DomainError(f"key index {k} outside 1..{self.params.K}")
        return self.words[:, k - 1, :]


def sample_phases(d: int, alphabet: str, rng: np.random.Generator) -> np.ndarray:
    """Draw d i.i.d. zero-mean phase angles."""
    if d < 2:
        raise InvalidDimensionError(f"d must be >= 2, got {d}")
    if alphabet == "binary":
        return np.pi * rng.integers(0, 2, size=d).astype(np.float64)
    if alphabet == "uniform":
        return rng.uniform(0.0, 2.0 * np.pi, size=d)
    raise DomainError(f"unknown alphabet {alphabet!r}; expected one of {ALPHABETS}")


def sample_phase_vector(d: int, alphabet: str, rng: np.random.Generator) -> np.ndarray:
    """Sample one phase-ensemble codeword; every amplitude has modulus 1/sqrt(d)."""
    theta = sample_phases(d, alphabet, rng)
    return np.exp(1j * theta) / np.sqrt(d)


def sample_phase_unitary(d: int, alphabet: str, rng: np.random.Generator) -> PhaseUnitary:
    """Sample a diagonal phase unitary from the same ensemble."""
    return PhaseUnitary(sample_phases(d, alphabet, rng))


def _check_budget(d: int, M: int, K: int, max_elements: int) -> None:
    if d * M * K > max_elements:
        raise CapacityError(
            f"codebook of {d * M * K} complex entries exceeds the budget of "
            f"{max_elements}; raise max_elements explicitly if intended"
        )


def sample_codebook(
    params: ProtocolParams, max_elements: int = DEFAULT_MAX_ELEMENTS
) -> Codebook:
    """Draw M*K i.i.d. phase-ensemble codewords.

    Each (m, k) cell owns its RNG substream keyed on (seed, m, k), so the
    result is independent of generation order and reproducible from the
    params alone.
    """
    p = params
    _check_budget(p.d, p.M, p.K, max_elements)
    words = np.empty((p.M, p.K, p.d), dtype=np.complex128)
    for m in range(p.M):
        for k in range(p.K):
            rng = substream(p.seed, "ensemble.word", m, k)
            words[m, k] = sample_phase_vector(p.d, p.alphabet, rng)
    return Codebook(params=p, words=words, origin=ORIGIN_IID)


def fourier_state(d: int, m: int) -> np.ndarray:
    """The m-th Fourier-transformed basis vector (1-based, 1 <= m <= d)."""
    if d < 2:
        raise InvalidDimensionError(f"d must be >= 2, got {d}")
    if not (1 <= m <= d):
        raise DomainError(f"Fourier index {m} outside 1..{d}")
    omega = np.arange(d)
    return np.exp(2j * np.pi * m * omega / d) / np.sqrt(d)


def fourier_basis(d: int) -> np.ndarray:
    """All d Fourier states stacked as rows, shape (d, d)."""
    m = np.arange(1, d + 1)
    omega = np.arange(d)
    return np.exp(2j * np.pi * np.outer(m, omega) / d) / np.sqrt(d)


def unitary_codebook(
    d: int,
    K: int,
    alphabet: str = "binary",
    seed: int = 0,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
) -> Codebook:
    """Codebook words[m][k] = U_k applied to the m-th Fourier state (M = d)."""
    params = ProtocolParams(d=d, M=d, K=K, alphabet=alphabet, seed=seed)
    _check_budget(d, d, K, max_elements)
    basis = fourier_basis(d)  # (d, d) rows are Fourier states
    phases = np.empty((K, d), dtype=np.float64)
    words = np.empty((d, K, d), dtype=np.complex128)
    for k in range(K):
        rng = substream(seed, "ensemble.unitary", k)
        phases[k] = sample_phases(d, alphabet, rng)
        words[:, k, :] = basis * np.exp(1j * phases[k])[None, :]
    return Codebook(
        params=params, words=words, origin=ORIGIN_UNITARY, unitary_phases=phases
    )


# ---------------------------------------------------------------------------
# Serialization: binary container and JSON debug dump.
# ---------------------------------------------------------------------------

_MAGIC = b"QDLC"
_VERSION = 1
_ALPHABET_CODE = {"binary": 0, "uniform": 1}
_ORIGIN_CODE = {ORIGIN_IID: 0, ORIGIN_UNITARY: 1}
_HEADER = struct.Struct("<4sHBBIIIQ")  # magic, version, alphabet, origin, d, M, K, seed

JSON_DUMP_MAX_ELEMENTS = 4096


def save_codebook(codebook: Codebook, path: str | os.PathLike) -> None:
    """Write the binary container atomically (temp file + rename).

    Layout: header, then the (M, K, d) words as row-major interleaved
    (re, im) float64, then the (K, d) unitary phases when present.
    """
    p = codebook.params
    header = _HEADER.pack(
        _MAGIC,
        _VERSION,
        _ALPHABET_CODE[p.alphabet],
        _ORIGIN_CODE[codebook.origin],
        p.d,
        p.M,
        p.K,
        p.seed,
    )
    payload = np.ascontiguousarray(codebook.words).tobytes()
    phases = (
        np.ascontiguousarray(codebook.unitary_phases).tobytes()
        if codebook.unitary_phases is not None
        else b""
    )
    directory = os.path.dirname(os.fspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(header)
            fh.write(payload)
            fh.write(phases)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_codebook(path: str | os.PathLike) -> Codebook:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size or raw[:4] != _MAGIC:
        raise UsageError(f"{os.fspath(path)}: not a codebook container")
    magic, version, alpha_code, origin_code, d, M, K, seed = _HEADER.unpack(
        raw[: _HEADER.size]
    )
    if version != _VERSION:
        raise ContractError(f"unsupported codebook container version {version}")
    alphabet = {v: k for k, v in _ALPHABET_CODE.items()}[alpha_code]
    origin = {v: k for k, v in _ORIGIN_CODE.items()}[origin_code]
    n_words = d * M * K
    offset = _HEADER.size
    words = np.frombuffer(
        raw, dtype=np.complex128, count=n_words, offset=offset
    ).reshape(M, K, d)
    offset += n_words * 16
    phases = None
    if origin == ORIGIN_UNITARY:
        phases = np.frombuffer(raw, dtype=np.float64, count=K * d, offset=offset)
        phases = phases.reshape(K, d)
    params = ProtocolParams(d=d, M=M, K=K, alphabet=alphabet, seed=seed)
    return Codebook(
        params=params, words=words.copy(), origin=origin,
        unitary_phases=None if phases is None else phases.copy(),
    )


def codebook_debug_json(codebook: Codebook) -> str:
    """Human-readable JSON dump, guarded to small codebooks."""
    p = codebook.params
    if p.d * p.M * p.K > JSON_DUMP_MAX_ELEMENTS:
        raise CapacityError(
            f"JSON dump limited to {JSON_DUMP_MAX_ELEMENTS} entries, "
            f"codebook has {p.d * p.M * p.K}"
        )
    doc = {
        "d": p.d,
        "M": p.M,
        "K": p.K,
        "alphabet": p.alphabet,
        "seed": p.seed,
        "origin": codebook.origin,
        "words": [
            [
                [[float(a.real), float(a.imag)] for a in codebook.words[m, k]]
                for k in range(p.K)
            ]
            for m in range(p.M)
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True)
