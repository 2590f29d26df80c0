"""
Named random substreams derived from a single run seed.

Each consumer asks for its stream by name, so adding a consumer never shifts
the draws of another.
"""
import hashlib
from typing import List

import numpy as np

from ..exceptions import ConfigError

MAX_SEED = 2 ** 64 - 1


def _name_key(name: str) -> int:
    digest = hashlib.sha256(name.encode('utf-8')).digest()
    return int.from_bytes(digest[:8], 'little')


def validate_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= int(seed) <= MAX_SEED:
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


class SeedStreams:
    """Factory of independent, order-free generators keyed by name."""

    def __init__(self, seed: int):
        self.seed = validate_seed(seed)

    def sequence(self, name: str) -> np.random.SeedSequence:
        return np.random.SeedSequence(entropy=[self.seed, _name_key(name)])

    def generator(self, name: str) -> np.random.Generator:
        return np.random.default_rng(self.sequence(name))

    def spawn(self, name: str, count: int) -> List[np.random.Generator]:
        """`count` child generators of the named stream, one per task."""
        return [np.random.default_rng(s) for s in self.sequence(name).spawn(count)]


def as_seed_sequence(seed) -> np.random.SeedSequence:
    """Accept an int seed, a SeedSequence or a Generator's sequence."""
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(validate_seed(seed))
