"""
Онлайн-генератор вибірок за деревом CDF
k послідовних зважених підкидань обирають один з 2^k рівних кошиків на [a, b].
Вага кожної монетки - частка маси верхньої половини поточного інтервалу.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from core.errors import ZeroMassInterval
from core.llg_core import SimConfig
from core.mtj_device import DeviceParams, Protocol, SCurve, ScurveInverter, flip_batch

CdfFunction = Callable[[float], float]

MAX_BITS = 16


class CoinSource(ABC):
    """Джерело зважених монеток з обліком енергії та кількості підкидань"""

    def __init__(self):
        self.energy_total = 0.0
        self.flip_count = 0

    @abstractmethod
    def flip_many(self, p_targets: np.ndarray) -> np.ndarray:
        """Незалежні підкидання з ймовірностями p_targets; повертає масив бітів"""

    def flip(self, p_target: float) -> int:
        return int(self.flip_many(np.array([p_target], dtype=float))[0])

    @property
    def average_energy(self) -> float:
        """Середня енергія на підкидання [Дж]"""
        return self.energy_total / self.flip_count if self.flip_count else 0.0

    def reset_counters(self):
        self.energy_total = 0.0
        self.flip_count = 0


class IdealCoinSource(CoinSource):
    """Псевдовипадкові монетки з точною вагою і нульовою енергією"""

    def __init__(self, rng: np.random.Generator):
        super().__init__()
        self.rng = rng

    def flip_many(self, p_targets: np.ndarray) -> np.ndarray:
        p_targets = np.asarray(p_targets, dtype=float)
        bits = (self.rng.random(p_targets.shape) < p_targets).astype(np.int8)
        self.flip_count += bits.size
        return bits


class DeviceCoinSource(CoinSource):
    """Монетки на пристрої MTJ: вага -> струм зміщення за S-кривою -> протокол підкидання"""

    def __init__(self, params: DeviceParams, proto: Protocol, scurve: SCurve, cfg: SimConfig,
                 rng: np.random.Generator, max_batch: int = 20000):
        super().__init__()
        self.params = params
        self.proto = proto
        self.inverter = ScurveInverter(scurve)
        self.cfg = cfg
        self.rng = rng
        self.max_batch = max_batch

    def flip_many(self, p_targets: np.ndarray) -> np.ndarray:
        p_targets = np.asarray(p_targets, dtype=float)
        biases = self.inverter.invert_many(p_targets)
        bits = np.empty(p_targets.shape, dtype=np.int8)
        for start in range(0, p_targets.size, self.max_batch):
            chunk = slice(start, start + self.max_batch)
            result = flip_batch(self.params, self.proto, self.cfg, self.rng, bias=biases[chunk])
            bits[chunk] = result.bits
            self.energy_total += result.energy.total()
        self.flip_count += bits.size
        return bits


@dataclass
class TreeState:
    """Поточний інтервал обходу: x1 - середина [x0, x2]"""
    x0: float
    x1: float
    x2: float
    bits_emitted: int = 0

    def descend(self, bit: int):
        if bit:
            self.x0 = self.x1
        else:
            self.x2 = self.x1
        self.x1 = (self.x0 + self.x2) / 2.0
        self.bits_emitted += 1


@dataclass
class SampleResult:
    """Результат серії обходів дерева"""
    counts: np.ndarray
    bin_indices: np.ndarray
    energy_total: float
    flips: int

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def average_energy(self) -> float:
        """Середня енергія на підкидання [Дж]"""
        return self.energy_total / self.flips if self.flips else 0.0


def _weight(f0, f1, f2):
    denom = f2 - f0
    if np.any(denom <= 0.0):
        raise ZeroMassInterval("Інтервал дерева не містить маси розподілу: перевірте [a, b] та k")
    return np.clip((f2 - f1) / denom, 0.0, 1.0)


def coin_weight(F: CdfFunction, x0: float, x1: float, x2: float) -> float:
    """Ймовірність того, що наступний біт вибирає верхню половину [x1, x2]"""
    if not x0 < x1 < x2:
        raise ValueError(f"Потрібно x0 < x1 < x2, отримано ({x0}, {x1}, {x2})")
    return float(_weight(F(x0), F(x1), F(x2)))


class _EdgeCdf:
    """CDF на краях кошиків з мемоізацією за цілим індексом краю"""

    def __init__(self, F: CdfFunction, a: float, b: float, k: int):
        self.F = F
        self.a = a
        self.b = b
        self.n_bins = 2 ** k
        self.values = np.full(self.n_bins + 1, np.nan)

    def x(self, index):
        return self.a + (self.b - self.a) * (np.asarray(index) / self.n_bins)

    def __call__(self, indices: np.ndarray) -> np.ndarray:
        indices = np.asarray(indices)
        needed = np.unique(indices)
        missing = needed[np.isnan(self.values[needed])]
        for i in missing:
            # крайні індекси відповідають рівно a та b
            x = self.b if i == self.n_bins else float(self.x(i))
            self.values[i] = self.F(x)
        return self.values[indices]


def _check_bits(k: int):
    if not 1 <= k <= MAX_BITS:
        raise ValueError(f"k має бути в [1, {MAX_BITS}], отримано {k}")


def sample(F: CdfFunction, a: float, b: float, k: int, coins: CoinSource) -> Tuple[int, float]:
    """Один обхід: рівно k підкидань, біт 1 піднімає нижню межу; повертає (кошик, середина кошика)"""
    _check_bits(k)
    edges = _EdgeCdf(F, a, b, k)
    lo, hi = 0, edges.n_bins
    state = TreeState(a, (a + b) / 2.0, b)
    index = 0
    for _ in range(k):
        mid = (lo + hi) // 2
        f0, f1, f2 = edges(np.array([lo, mid, hi]))
        bit = coins.flip(float(_weight(f0, f1, f2)))
        if bit:
            lo = mid
        else:
            hi = mid
        state.descend(bit)
        index = 2 * index + bit
    return index, state.x1


def sample_many(F: CdfFunction, a: float, b: float, k: int, coins: CoinSource, n: int) -> SampleResult:
    """
    n незалежних обходів, що просуваються разом: одне пакетне підкидання на рівень дерева

    Повне дерево ваг не будується: CDF обчислюється лише у відвіданих краях.
    """
    _check_bits(k)
    n_bins = 2 ** k
    if n <= 0:
        return SampleResult(np.zeros(n_bins, dtype=np.int64), np.zeros(0, dtype=np.int64), 0.0, 0)

    edges = _EdgeCdf(F, a, b, k)
    energy_before = coins.energy_total
    lo = np.zeros(n, dtype=np.int64)
    hi = np.full(n, n_bins, dtype=np.int64)
    for _ in range(k):
        mid = (lo + hi) // 2
        weights = _weight(edges(lo), edges(mid), edges(hi))
        bits = coins.flip_many(weights).astype(bool)
        lo = np.where(bits, mid, lo)
        hi = np.where(bits, hi, mid)

    counts = np.bincount(lo, minlength=n_bins)
    return SampleResult(counts=counts, bin_indices=lo, energy_total=coins.energy_total - energy_before,
                        flips=n * k)


def bin_midpoints(a: float, b: float, k: int) -> np.ndarray:
    n_bins = 2 ** k
    edges = a + (b - a) * (np.arange(n_bins + 1) / n_bins)
    return (edges[:-1] + edges[1:]) / 2.0


def path_probabilities(F: CdfFunction, a: float, b: float, k: int) -> np.ndarray:
    """Добуток ваг монеток уздовж кожного з 2^k шляхів (вузли без маси дають нуль)"""
    _check_bits(k)
    edges = _EdgeCdf(F, a, b, k)
    lo = np.array([0], dtype=np.int64)
    hi = np.array([edges.n_bins], dtype=np.int64)
    probs = np.array([1.0])
    for _ in range(k):
        mid = (lo + hi) // 2
        f0, f1, f2 = edges(lo), edges(mid), edges(hi)
        denom = f2 - f0
        safe = np.where(denom > 0.0, denom, 1.0)
        w_up = np.where(denom > 0.0, (f2 - f1) / safe, 0.0)
        # нащадки в порядку (0, 1) для кожного вузла, старший біт першим
        probs = np.column_stack((probs * (1.0 - w_up), probs * w_up)).ravel()
        lo = np.column_stack((lo, mid)).ravel()
        hi = np.column_stack((mid, hi)).ravel()
    return probs



def weight_span(F: CdfFunction, a: float, b: float, k: int) -> Tuple[float, float]:
    """
    Найменша та найбільша вага монетки серед усіх вузлів дерева з ненульовою масою

    Пристрій, що реалізує ці ваги, обходить дерево без OutOfRange.
    """
    _check_bits(k)
    edges = _EdgeCdf(F, a, b, k)
    values = edges(np.arange(edges.n_bins + 1))
    low, high = 1.0, 0.0
    for level in range(k):
        step = edges.n_bins >> level
        lo = np.arange(0, edges.n_bins, step)
        f0, f1, f2 = values[lo], values[lo + step // 2], values[lo + step]
        denom = f2 - f0
        reachable = denom > 0.0
        if not np.any(reachable):
            continue
        weights = (f2[reachable] - f1[reachable]) / denom[reachable]
        low = min(low, float(weights.min()))
        high = max(high, float(weights.max()))
    if low > high:
        raise ZeroMassInterval("Дерево не містить маси розподілу: перевірте [a, b] та k")
    return low, high
