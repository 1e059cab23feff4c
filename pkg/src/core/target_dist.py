"""
Цільовий розподіл для генератора
Усічений гамма-розподіл (або інша база з CDF), ймовірності кошиків
та апостеріорний розподіл коефіцієнта тертя з траєкторії частинки.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, Optional, Union

import numpy as np

from core.errors import DegenerateTrace, NonConvergence, OutOfSupport
from utils.random_streams import as_generator

# Наближення Ланцоша, g = 7
LANCZOS_G = 7.0
LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

INC_GAMMA_EPS = 1e-15
INC_GAMMA_MAX_ITER = 500
_FPMIN = 1e-300


def log_gamma(x: float) -> float:
    """ln Г(x) для x > 0"""
    if x <= 0.0:
        raise ValueError(f"log_gamma визначена для x > 0, отримано {x}")
    if x < 0.5:
        # відбиття
        return math.log(math.pi / abs(math.sin(math.pi * x))) - log_gamma(1.0 - x)
    x -= 1.0
    acc = LANCZOS_COEFFS[0]
    for i, coeff in enumerate(LANCZOS_COEFFS[1:], start=1):
        acc += coeff / (x + i)
    t = x + LANCZOS_G + 0.5
    return 0.5 * math.log(2.0 * math.pi) + (x + 0.5) * math.log(t) - t + math.log(acc)


def _gamma_prefactor(a: float, x: float) -> float:
    return math.exp(-x + a * math.log(x) - log_gamma(a))


def _lower_series(a: float, x: float) -> float:
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(INC_GAMMA_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * INC_GAMMA_EPS:
            return total * _gamma_prefactor(a, x)
    raise NonConvergence(f"Ряд для P({a}, {x}) не збігся за {INC_GAMMA_MAX_ITER} ітерацій")


def _upper_continued_fraction(a: float, x: float) -> float:
    # модифікований метод Лентца
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, INC_GAMMA_MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < INC_GAMMA_EPS:
            return h * _gamma_prefactor(a, x)
    raise NonConvergence(f"Ланцюговий дріб для Q({a}, {x}) не збігся за {INC_GAMMA_MAX_ITER} ітерацій")


def _check_inc_gamma_args(a: float, x: float):
    if not a > 0.0:
        raise ValueError(f"Параметр форми має бути > 0, отримано {a}")
    if x < 0.0 or math.isnan(x):
        raise ValueError(f"Аргумент неповної гамма-функції має бути >= 0, отримано {x}")


def reg_lower_inc_gamma(a: float, x: float) -> float:
    """Регуляризована нижня неповна гамма-функція P(a, x)"""
    _check_inc_gamma_args(a, x)
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return _lower_series(a, x)
    return 1.0 - _upper_continued_fraction(a, x)


def reg_upper_inc_gamma(a: float, x: float) -> float:
    """Регуляризована верхня неповна гамма-функція Q(a, x) = 1 - P(a, x)"""
    _check_inc_gamma_args(a, x)
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return 1.0 - _lower_series(a, x)
    return _upper_continued_fraction(a, x)


class BaseDistribution(ABC):
    """Базовий розподіл з CDF та густиною"""

    family: str = ""

    @abstractmethod
    def cdf(self, x: float) -> float:
        ...

    @abstractmethod
    def pdf(self, x: float) -> float:
        ...

    @abstractmethod
    def to_dict(self) -> Dict[str, object]:
        ...


@dataclass(frozen=True)
class GammaSpec(BaseDistribution):
    """Гамма-розподіл з формою shape та інтенсивністю rate"""
    shape: float
    rate: float

    family = "gamma"

    def __post_init__(self):
        if not (self.shape > 0.0 and self.rate > 0.0):
            raise ValueError(f"Гамма-розподіл потребує shape > 0 та rate > 0, отримано ({self.shape}, {self.rate})")

    @property
    def mean(self) -> float:
        return self.shape / self.rate

    @property
    def mode(self) -> float:
        return max(self.shape - 1.0, 0.0) / self.rate

    def cdf(self, x: float) -> float:
        if x <= 0.0:
            return 0.0
        return reg_lower_inc_gamma(self.shape, self.rate * x)

    def pdf(self, x: float) -> float:
        if x <= 0.0:
            return 0.0
        log_density = (self.shape * math.log(self.rate) + (self.shape - 1.0) * math.log(x)
                       - self.rate * x - log_gamma(self.shape))
        return math.exp(log_density)

    def to_dict(self) -> Dict[str, object]:
        return {"family": self.family, "shape": self.shape, "rate": self.rate}


@dataclass(frozen=True)
class UniformSpec(BaseDistribution):
    """Рівномірний розподіл на [low, high]"""
    low: float
    high: float

    family = "uniform"

    def __post_init__(self):
        if not self.low < self.high:
            raise ValueError(f"Потрібно low < high, отримано [{self.low}, {self.high}]")

    def cdf(self, x: float) -> float:
        return min(max((x - self.low) / (self.high - self.low), 0.0), 1.0)

    def pdf(self, x: float) -> float:
        return 1.0 / (self.high - self.low) if self.low <= x <= self.high else 0.0

    def to_dict(self) -> Dict[str, object]:
        return {"family": self.family, "low": self.low, "high": self.high}


def exponential(rate: float) -> GammaSpec:
    """Експоненційний розподіл як гамма з формою 1"""
    return GammaSpec(shape=1.0, rate=rate)


def make_base_distribution(family: str, shape: float = 50.0, rate: float = 311.44,
                           low: Optional[float] = None, high: Optional[float] = None) -> BaseDistribution:
    """Фабрика базового розподілу за назвою сімейства"""
    family = family.lower()
    if family == "gamma":
        return GammaSpec(shape, rate)
    if family == "exponential":
        return exponential(rate)
    if family == "uniform":
        if low is None or high is None:
            raise ValueError("Рівномірний розподіл потребує low та high")
        return UniformSpec(low, high)
    raise ValueError(f"Невідоме сімейство розподілу: {family}")


@dataclass(frozen=True)
class TruncatedDistribution:
    """Базовий розподіл, усічений до [a, b] і перенормований"""
    base: BaseDistribution
    a: float
    b: float
    norm: float = field(init=False)
    _F_a: float = field(init=False, repr=False)

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"Потрібно a < b, отримано [{self.a}, {self.b}]")
        F_a = self.base.cdf(self.a)
        norm = self.base.cdf(self.b) - F_a
        if not norm > 0.0:
            raise ValueError(f"Інтервал [{self.a}, {self.b}] не містить маси розподілу")
        object.__setattr__(self, "_F_a", F_a)
        object.__setattr__(self, "norm", norm)

    def _check_support(self, x: float):
        if x < self.a or x > self.b or math.isnan(x):
            raise OutOfSupport(f"x={x} поза носієм [{self.a}, {self.b}]")

    def cdf(self, x: float) -> float:
        self._check_support(x)
        if x == self.a:
            return 0.0
        if x == self.b:
            return 1.0
        return (self.base.cdf(x) - self._F_a) / self.norm

    def pdf(self, x: float) -> float:
        self._check_support(x)
        return self.base.pdf(x) / self.norm

    def bin_edges(self, k: int) -> np.ndarray:
        n_bins = 2 ** k
        edges = np.array([self.a + (self.b - self.a) * (i / n_bins) for i in range(n_bins + 1)])
        edges[-1] = self.b
        return edges

    def bin_probs(self, k: int) -> np.ndarray:
        """Маса кожного з 2^k рівних кошиків"""
        if k < 0:
            raise ValueError(f"k має бути >= 0, отримано {k}")
        cdf_values = np.array([self.cdf(x) for x in self.bin_edges(k)])
        return np.diff(cdf_values)

    def to_dict(self) -> Dict[str, object]:
        data = dict(self.base.to_dict())
        data.update({"a": self.a, "b": self.b})
        return data


def trunc_cdf(d: TruncatedDistribution, x: float) -> float:
    return d.cdf(x)


def trunc_pdf(d: TruncatedDistribution, x: float) -> float:
    return d.pdf(x)


def bin_probs(d: TruncatedDistribution, k: int) -> np.ndarray:
    return d.bin_probs(k)


@dataclass
class ParticleTrace:
    """Траєкторія частинки у в'язкому середовищі"""
    positions: np.ndarray        # мкм
    dt: float                    # с
    kBT: float                   # пН·мкм
    alpha_true: Optional[float] = None  # пН·с/мкм

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=float)
        if self.positions.ndim != 1 or len(self.positions) < 2:
            raise ValueError("Траєкторія має містити щонайменше дві позиції")

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.positions)


def simulate_particle(x0: float, alpha: float, kBT: float, dt: float, n: int,
                      seed: Union[int, np.random.Generator, None] = None) -> ParticleTrace:
    """Ейлер-Маруяма для dX = sqrt(2 kBT / alpha) dW: n кроків, n + 1 позицій"""
    if n < 1:
        raise ValueError(f"Кількість кроків має бути >= 1, отримано {n}")
    if not (alpha > 0.0 and dt > 0.0 and kBT >= 0.0):
        raise ValueError("Потрібно alpha > 0, dt > 0, kBT >= 0")
    rng = as_generator(seed)
    step_std = math.sqrt(2.0 * kBT * dt / alpha)
    steps = step_std * rng.standard_normal(n)
    positions = x0 + np.concatenate(([0.0], np.cumsum(steps)))
    return ParticleTrace(positions=positions, dt=dt, kBT=kBT, alpha_true=alpha)


def posterior_gamma(trace: ParticleTrace) -> GammaSpec:
    """Апостеріорний розподіл alpha: форма n/2, інтенсивність сума(dx²) / (4 kBT dt)"""
    if not (trace.kBT > 0.0 and trace.dt > 0.0):
        raise ValueError("Апостеріорний розподіл потребує kBT > 0 та dt > 0")
    increments = trace.increments
    sum_sq = float(np.sum(increments ** 2))
    if sum_sq == 0.0:
        raise DegenerateTrace("Усі прирости траєкторії нульові")
    return GammaSpec(shape=len(increments) / 2.0, rate=sum_sq / (4.0 * trace.kBT * trace.dt))


# Параметри експерименту з відстеженням частинки
PARTICLE_DEFAULTS: Dict[str, float] = {
    "x0": 3.2,
    "alpha": 0.16,
    "kBT": 0.0041,
    "dt": 0.001,
    "n": 100,
}
