"""Seed derivation so every random choice in a run descends from one 64-bit seed.

Components (splits, LDA chains, weight init, epoch shuffles) each get their own
stream derived via splitmix64, so adding a consumer never perturbs the others.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def splitmix64(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state; returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def derive_seed(base: int, *labels: int | str) -> int:
    """Derive a child seed from `base` and a label path, deterministically."""
    state = base & _MASK64
    for label in labels:
        if isinstance(label, str):
            for byte in label.encode("utf-8"):
                state, _ = splitmix64(state ^ byte)
        else:
            state, _ = splitmix64(state ^ (label & _MASK64))
    _, out = splitmix64(state)
    return out


def generator(base: int, *labels: int | str) -> np.random.Generator:
    """numpy Generator on the stream named by (base, labels)."""
    return np.random.Generator(np.random.PCG64(derive_seed(base, *labels)))
