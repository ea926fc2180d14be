"""
Reproducible uniform draws of monic polynomials.

Draws are grouped in blocks of ``SAMPLE_BLOCK``. Block b comes from a Philox
generator keyed by the seed with b in the top counter word, so any block can
be regenerated on its own and the draw with index i depends only on
(seed, i).
"""
import numpy as np

SAMPLE_BLOCK = 4096

_SEED_MASK = 2**64 - 1


def block_rng(seed, block):
    bitgen = np.random.Philox(key=int(seed) & _SEED_MASK, counter=[0, 0, 0, int(block)])
    return np.random.Generator(bitgen)


def draw_block(seed, block, q, n, size=SAMPLE_BLOCK):
    """Array of shape (size, n): low-order coefficients of monic draws."""
    return block_rng(seed, block).integers(0, q, size=(size, n), dtype=np.int64)


def iter_draw_blocks(seed, samples, q, n, blocks=None):
    """Draw arrays for draws 0..samples-1, one per block; the last may be short.

    ``blocks`` restricts to a subset of block indices, for sharded sampling.
    """
    nblocks = -(-samples // SAMPLE_BLOCK)
    wanted = range(nblocks) if blocks is None else blocks
    for b in wanted:
        size = min(SAMPLE_BLOCK, samples - b * SAMPLE_BLOCK)
        if size > 0:
            yield draw_block(seed, b, q, n)[:size]


def iter_draws(seed, samples, q, n, blocks=None):
    """Coefficient lists (monic, low degree first) for draws 0..samples-1."""
    for arr in iter_draw_blocks(seed, samples, q, n, blocks):
        for row in arr.tolist():
            row.append(1)
            yield row
