"""Deterministic seed derivation shared by every stochastic step."""

import hashlib

import numpy as np


def derive_seed(*parts) -> int:
    """Hash an arbitrary tuple of ints/strings/floats into a 63-bit seed.

    Python's builtin ``hash`` is salted per process for strings, so it
    cannot be used for reproducible sub-seeds.
    """
    h = hashlib.blake2b(digest_size=8)
    for p in parts:
        h.update(repr(p).encode("utf-8"))
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "little") >> 1


def make_rng(*parts) -> np.random.Generator:
    return np.random.default_rng(derive_seed(*parts))
