from __future__ import annotations

import numpy as np
import pytest

FUZZ_SEED = 20240817
FUZZ_COUNT = 10_000
FUZZ_MAX_LEN = 2048
FUZZ_ALPHABETS = (1, 2, 4, 256)


def make_fuzz_strings(count: int, seed: int = FUZZ_SEED) -> list[bytes]:
    """Deterministic fuzz corpus: short strings over tiny and full alphabets."""
    rng = np.random.default_rng(seed)
    lengths = rng.integers(1, FUZZ_MAX_LEN + 1, size=count)
    sigmas = rng.choice(FUZZ_ALPHABETS, size=count)
    return [
        rng.integers(0, sig, size=int(n), dtype=np.uint8).tobytes()
        for n, sig in zip(lengths, sigmas)
    ]


@pytest.fixture(scope="session")
def fuzz_corpus() -> list[bytes]:
    return make_fuzz_strings(FUZZ_COUNT)
