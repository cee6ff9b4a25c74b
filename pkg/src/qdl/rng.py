"""Splittable, order-independent random streams.

Every stochastic draw in the package owns a generator derived from
(master seed, module tag, integer indices).  Streams are independent of
the order in which they are created, so trials can run on any number of
workers and still reproduce bit-identically.
"""

import zlib

import numpy as np

_MASK64 = (1 << 64) - 1


def substream(seed: int, tag: str, *indices: int) -> np.random.Generator:
    """Return a generator keyed on (seed, tag, indices).

    The tag is hashed with CRC-32 so unrelated modules drawing with the
    same indices never share a stream.
    """
    entropy = [int(seed) & _MASK64, zlib.crc32(tag.encode("utf-8"))]
    entropy.extend(int(i) & _MASK64 for i in indices)
    return np.random.default_rng(np.random.SeedSequence(entropy))


def haar_unit_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    """Sample a Haar-random unit vector in C^d."""
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)
