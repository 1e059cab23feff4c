"""
Незалежні потоки випадкових чисел, похідні від головного seed
"""

from typing import Union

import numpy as np

# Простори ключів для spawn_key
STREAM_EVALUATION = 1
STREAM_VARIATION = 2
STREAM_CEM = 3
STREAM_RUN = 4
STREAM_COMMAND = 5


def derive_stream(seed: int, *keys: int) -> np.random.Generator:
    """Генератор для (seed, ключі...) - не залежить від порядку виконання"""
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(sequence))


def derive_seed(seed: int, *keys: int) -> int:
    """64-бітний seed для підзапуску (наприклад, для серії незалежних запусків)"""
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def as_generator(rng: Union[np.random.Generator, int, None]) -> np.random.Generator:
    """Прийняти Generator або seed"""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)
