"""
Оцінювання конфігурацій пристрою
KL-дивергенція до цільових кошиків, середня енергія на підкидання, Config_Score,
та шов DeviceModel між фізичною моделлю MTJ і швидким сурогатом.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from core.device_validator import ValidationSettings, ValidityReport, validate_device
from core.errors import CodesignError, EmptyHistogram, EvaluatorFailure
from core.llg_core import DeviceParams, SimConfig
from core.mtj_device import (
    Protocol, ProtocolSOT, SCurve, SCurvePoint, build_scurve, default_sweep, keff,
)
from core.param_space import ParamSpace, apply_overrides
from core.target_dist import TruncatedDistribution
from core.tree_sampler import CoinSource, DeviceCoinSource, sample_many
from utils.performance import profile
from utils.random_streams import STREAM_EVALUATION, derive_stream
from utils.simple_logger import get_logger_instance

# Штраф невалідної конфігурації (енергія, KL)
INVALID_OBJECTIVES = (1e6, 1e6)
# Дж -> пДж
PICOJOULE = 1e12


@dataclass(frozen=True)
class ObjectivePair:
    """Обидві цілі мінімізуються"""
    energy: float  # Дж на підкидання
    kl: float      # нати

    def as_tuple(self) -> Tuple[float, float]:
        return self.energy, self.kl

    def dominates(self, other: 'ObjectivePair') -> bool:
        return (self.energy <= other.energy and self.kl <= other.kl
                and (self.energy < other.energy or self.kl < other.kl))

    @classmethod
    def invalid(cls) -> 'ObjectivePair':
        return cls(*INVALID_OBJECTIVES)


@dataclass(frozen=True)
class ScoreWeights:
    w1: float = 0.2  # на пДж
    w2: float = 1.0


def kl_divergence(counts: np.ndarray, Q: np.ndarray) -> float:
    """KL(P || Q) з P = counts / sum(counts); 0 ln 0 = 0"""
    counts = np.asarray(counts, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if counts.shape != Q.shape:
        raise ValueError(f"Розміри гістограми {counts.shape} та цільових ймовірностей {Q.shape} різні")
    total = counts.sum()
    if total <= 0.0:
        raise EmptyHistogram("Гістограма не містить жодного відліку")
    P = counts / total
    mask = P > 0.0
    if np.any(Q[mask] <= 0.0):
        return math.inf
    return float(max(np.sum(P[mask] * np.log(P[mask] / Q[mask])), 0.0))


def config_score(avg_energy: float, kl: float, w1: float = 0.2, w2: float = 1.0) -> float:
    """w1 * (енергія в пДж) + w2 * KL"""
    return w1 * avg_energy * PICOJOULE + w2 * kl


INVALID_SCORE = config_score(*INVALID_OBJECTIVES)


@dataclass
class EvaluationSettings:
    """Налаштування оцінювання конфігурації"""
    n_samples: int = 2500
    k: int = 8
    scurve_points: int = 21
    scurve_flips: int = 200


@dataclass
class Evaluation:
    """Результат оцінювання однієї конфігурації"""
    objectives: ObjectivePair
    valid: bool
    score: float
    reason: str = "ok"
    params: Dict[str, float] = field(default_factory=dict)
    counts: Optional[np.ndarray] = None
    report: Optional[ValidityReport] = None
    messages: List[str] = field(default_factory=list)

    @classmethod
    def invalid(cls, reason: str, params: Optional[Dict[str, float]] = None,
                weights: ScoreWeights = ScoreWeights(), messages: Optional[List[str]] = None,
                report: Optional[ValidityReport] = None) -> 'Evaluation':
        objectives = ObjectivePair.invalid()
        return cls(objectives=objectives, valid=False,
                   score=config_score(objectives.energy, objectives.kl, weights.w1, weights.w2),
                   reason=reason, params=dict(params or {}), report=report,
                   messages=list(messages or []))


@dataclass
class CoinCalibration:
    """Пристрій, готовий слугувати джерелом монеток, або причина відмови"""
    valid: bool
    reason: str
    coins: Optional[CoinSource] = None
    report: Optional[ValidityReport] = None
    messages: List[str] = field(default_factory=list)


class DeviceModel(ABC):
    """Модель пристрою: значення параметрів -> каліброване джерело монеток"""

    kind: str = "sot"

    @abstractmethod
    def calibrate(self, values: Dict[str, float], rng: np.random.Generator) -> CoinCalibration:
        ...


class MTJDeviceModel(DeviceModel):
    """Фізична модель: валідація, S-крива калібрування, підкидання через LLG"""

    def __init__(self, base_params: DeviceParams, base_proto: Protocol, sim: SimConfig,
                 validation: Optional[ValidationSettings] = None,
                 scurve_points: int = 21, scurve_flips: int = 200,
                 required_span: Optional[Tuple[float, float]] = None):
        self.base_params = base_params
        self.base_proto = base_proto
        self.sim = sim
        self.validation = validation or ValidationSettings()
        self.scurve_points = scurve_points
        self.scurve_flips = scurve_flips
        # ваги монеток, які має реалізувати S-крива (weight_span цільового дерева)
        self.required_span = required_span
        self.kind = base_proto.kind

    def calibrate(self, values: Dict[str, float], rng: np.random.Generator) -> CoinCalibration:
        params, proto = apply_overrides(values, self.base_params, self.base_proto)
        report = validate_device(params, proto, self.sim, rng, self.validation.covering(self.required_span))
        if not report.valid:
            return CoinCalibration(False, report.reason.value, report=report, messages=report.errors)

        proto = report.protocol or proto
        j_min, j_max = default_sweep(params, proto)
        sc = build_scurve(params, proto, j_min, j_max, self.scurve_points, self.scurve_flips, self.sim, rng)
        coins = DeviceCoinSource(params, proto, sc, self.sim, rng)
        return CoinCalibration(True, "ok", coins=coins, report=report, messages=report.warnings)


class SurrogateCoinSource(CoinSource):
    """Монетки сурогату: вага спотворюється шумом зчитування eps, фіксована енергія на підкидання"""

    def __init__(self, rng: np.random.Generator, noise: float = 0.0, energy_per_flip: float = 0.0):
        super().__init__()
        self.rng = rng
        self.noise = noise
        self.energy_per_flip = energy_per_flip

    def flip_many(self, p_targets: np.ndarray) -> np.ndarray:
        p_targets = np.asarray(p_targets, dtype=float)
        p_eff = self.noise + (1.0 - 2.0 * self.noise) * p_targets
        bits = (self.rng.random(p_targets.shape) < p_eff).astype(np.int8)
        self.flip_count += bits.size
        self.energy_total += self.energy_per_flip * bits.size
        return bits


class SurrogateDeviceModel(DeviceModel):
    """
    Швидкий сурогат пристрою для тестів і пробних запусків

    S-крива логістична з центром J0 і шириною width, тому обернення точне.
    Конфігурація валідна, якщо K_eff > 0. Шум зчитування
    eps = noise_scale * (0.1 - alpha) / 0.09 спадає з alpha, а енергія
    energy_scale * (alpha / 0.03) * (t_pulse / 10 нс) зростає з alpha * t_pulse.
    """

    def __init__(self, base_params: Optional[DeviceParams] = None,
                 base_proto: Optional[Protocol] = None, noise_scale: float = 0.0,
                 energy_scale: float = 0.0, J0: float = 0.0, width: float = 1e10):
        self.base_params = base_params or DeviceParams()
        self.base_proto = base_proto or ProtocolSOT()
        self.noise_scale = noise_scale
        self.energy_scale = energy_scale
        self.J0 = J0
        self.width = width
        self.kind = self.base_proto.kind

    def noise(self, params: DeviceParams) -> float:
        return float(np.clip(self.noise_scale * (0.1 - params.alpha) / 0.09, 0.0, 0.49))

    def energy_per_flip(self, params: DeviceParams, proto: Protocol) -> float:
        return self.energy_scale * (params.alpha / 0.03) * (proto.t_pulse / 10e-9)

    def scurve(self, params: DeviceParams, j_grid: np.ndarray, n_samples: int = 10 ** 6) -> SCurve:
        """Аналітична S-крива сурогату на сітці струмів"""
        eps = self.noise(params)
        p = 1.0 / (1.0 + np.exp(-(np.asarray(j_grid) - self.J0) / self.width))
        p = eps + (1.0 - 2.0 * eps) * p
        points = [SCurvePoint(J=float(J), p_one=float(pi), n_samples=n_samples) for J, pi in zip(j_grid, p)]
        return SCurve(points=points, params=params, kind=self.kind)

    def calibrate(self, values: Dict[str, float], rng: np.random.Generator) -> CoinCalibration:
        params, proto = apply_overrides(values, self.base_params, self.base_proto)
        if keff(params) <= 0.0:
            return CoinCalibration(False, "span", messages=[f"K_eff={keff(params):.3e} <= 0: немає PMA"])
        coins = SurrogateCoinSource(rng, self.noise(params), self.energy_per_flip(params, proto))
        return CoinCalibration(True, "ok", coins=coins)


def evaluate_config(values: Dict[str, float], model: DeviceModel, target: TruncatedDistribution,
                    settings: EvaluationSettings, weights: ScoreWeights,
                    rng: np.random.Generator, n_samples: Optional[int] = None) -> Evaluation:
    """
    Оцінювання конфігурації: валідація, калібрування, n_samples обходів дерева

    Невалідні конфігурації та помилки симуляції дають штрафну пару (1e6, 1e6).
    """
    n_samples = settings.n_samples if n_samples is None else n_samples
    try:
        calibration = model.calibrate(values, rng)
        if not calibration.valid:
            return Evaluation.invalid(calibration.reason, values, weights, calibration.messages, calibration.report)

        result = sample_many(target.cdf, target.a, target.b, settings.k, calibration.coins, n_samples)
        kl = kl_divergence(result.counts, target.bin_probs(settings.k))
    except (CodesignError, ArithmeticError, ValueError) as e:
        return Evaluation.invalid("simulation_error", values, weights, [str(e)])

    objectives = ObjectivePair(energy=result.average_energy, kl=kl)
    return Evaluation(
        objectives=objectives,
        valid=True,
        score=config_score(objectives.energy, objectives.kl, weights.w1, weights.w2),
        params=dict(values),
        counts=result.counts,
        report=calibration.report,
        messages=calibration.messages,
    )


class GenomeEvaluator:
    """Геном -> оцінка; кожне оцінювання має власний потік (seed, індекс оцінювання)"""

    def __init__(self, space: ParamSpace, model: DeviceModel, target: TruncatedDistribution,
                 settings: EvaluationSettings, weights: ScoreWeights, seed: int):
        self.space = space
        self.model = model
        self.target = target
        self.settings = settings
        self.weights = weights
        self.seed = seed
        self.logger = get_logger_instance().get_logger()

    @profile
    def __call__(self, genome: np.ndarray, eval_index: int) -> Evaluation:
        values = self.space.decode(genome)
        rng = derive_stream(self.seed, STREAM_EVALUATION, eval_index)
        try:
            return evaluate_config(values, self.model, self.target, self.settings, self.weights, rng)
        except Exception as e:
            self.logger.error(f"Оцінювання #{eval_index} завершилось помилкою: {e}")
            raise EvaluatorFailure(f"Оцінювання #{eval_index} ({values}) не вдалося: {e}") from e

    def reevaluate(self, values: Dict[str, float], n_samples: int, stream_key: int) -> Evaluation:
        """Повторне оцінювання з більшою кількістю вибірок (звітні розподіли)"""
        rng = derive_stream(self.seed, STREAM_EVALUATION, stream_key)
        return evaluate_config(values, self.model, self.target, self.settings, self.weights, rng,
                               n_samples=n_samples)

