"""Deterministic RNG derivation shared by the bootstrap, optimizers, and importance code.

Every stochastic component derives its generator from (master_seed, *tags) so
that results never depend on execution order or worker count. String tags are
hashed with sha256 (Python's builtin hash() is salted per process and would
break reproducibility).
"""

import hashlib

import numpy as np


def _tag_to_int(tag) -> int:
    if isinstance(tag, (int, np.integer)):
        return int(tag) & 0xFFFFFFFFFFFFFFFF
    if isinstance(tag, str):
        return int.from_bytes(hashlib.sha256(tag.encode("utf-8")).digest()[:8], "big")
    raise TypeError(f"seed tag must be int or str, got {type(tag).__name__}")


def derive_seed_sequence(master_seed: int, *tags) -> np.random.SeedSequence:
    entropy = [int(master_seed) & 0xFFFFFFFFFFFFFFFF] + [_tag_to_int(t) for t in tags]
    return np.random.SeedSequence(entropy)


def derive_rng(master_seed: int, *tags) -> np.random.Generator:
    """Generator for one logical stream, e.g. derive_rng(seed, 'boot', rep)."""
    return np.random.default_rng(derive_seed_sequence(master_seed, *tags))


def derive_int_seed(master_seed: int, *tags) -> int:
    """Collapse a derived stream to a single int seed (for APIs taking ints)."""
    return int(derive_seed_sequence(master_seed, *tags).generate_state(1, np.uint64)[0])
