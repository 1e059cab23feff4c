"""
Валідатор пристроїв MTJ
Перевіряє, що S-крива пристрою має сигмоїдальну форму і перекриває потрібні ваги монеток
"""

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from core.errors import CodesignError, OutOfRange, ResetFailed
from core.llg_core import DeviceParams, SimConfig
from core.mtj_device import (
    Protocol, ProtocolSTT, SCurve, build_scurve, calibrated_reset_current,
    default_sweep, resolve_reset_current,
)
from utils.simple_logger import get_logger_instance


class ValidityReason(Enum):
    OK = "ok"
    SPAN = "span"
    MONOTONICITY = "monotonicity"
    SIMULATION_ERROR = "simulation_error"
    RESET_FAILED = "reset_failed"
    STOCHASTIC_REGIME = "stochastic_regime"


@dataclass
class ValidationSettings:
    """Пороги перевірки S-кривої"""
    n_points: int = 11
    n_per_point: int = 200
    p_low_max: float = 0.10
    p_high_min: float = 0.90
    z_sigma: float = 3.0
    violation_tolerance: int = 1
    stochastic_mz_threshold: float = 0.5
    reject_stochastic_regime: bool = False

    def covering(self, span: Optional[Tuple[float, float]]) -> 'ValidationSettings':
        """Пороги, звужені так, щоб S-крива перекривала ваги span = (w_min, w_max)"""
        if span is None:
            return self
        w_min, w_max = span
        return replace(self, p_low_max=min(self.p_low_max, w_min), p_high_min=max(self.p_high_min, w_max))


@dataclass
class ValidityReport:
    """Результат валідації пристрою"""
    valid: bool
    reason: ValidityReason
    monotonicity_violations: int = 0
    p_low: float = float("nan")
    p_high: float = float("nan")
    stochastic_regime: bool = False
    j_reset: Optional[float] = None
    scurve: Optional[SCurve] = None
    protocol: Optional[Protocol] = None
    errors: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)


def wilson_interval(k: int, n: int, z: float = 3.0) -> Tuple[float, float]:
    """Інтервал Вілсона для біноміальної частки k/n"""
    if n <= 0:
        return 0.0, 1.0
    p_hat = k / n
    denom = 1.0 + z * z / n
    centre = (p_hat + z * z / (2.0 * n)) / denom
    half = z * math.sqrt(p_hat * (1.0 - p_hat) / n + z * z / (4.0 * n * n)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def count_monotonicity_violations(sc: SCurve, z: float = 3.0) -> int:
    """Кількість сусідніх пар, де спад ймовірності статистично значущий"""
    intervals = [wilson_interval(point.n_ones, point.n_samples, z) for point in sc.points]
    violations = 0
    for (low_prev, _), (_, high_next) in zip(intervals, intervals[1:]):
        if high_next < low_prev:
            violations += 1
    return violations


def judge_scurve(sc: SCurve, settings: ValidationSettings) -> ValidityReport:
    """Вердикт за вже побудованою S-кривою (без симуляції)"""
    report = ValidityReport(valid=True, reason=ValidityReason.OK, p_low=sc.p_low, p_high=sc.p_high,
                            scurve=sc)
    report.monotonicity_violations = count_monotonicity_violations(sc, settings.z_sigma)

    if sc.p_low > settings.p_low_max or sc.p_high < settings.p_high_min:
        report.valid = False
        report.reason = ValidityReason.SPAN
        report.errors.append(
            f"S-крива не перекриває [{settings.p_low_max}, {settings.p_high_min}]: "
            f"p_low={sc.p_low:.3f}, p_high={sc.p_high:.3f}"
        )
    elif report.monotonicity_violations > settings.violation_tolerance:
        report.valid = False
        report.reason = ValidityReason.MONOTONICITY
        report.errors.append(f"Порушень монотонності: {report.monotonicity_violations}")

    if sc.kind == "sot" and np.isfinite(sc.pulse_mean_abs_mz) \
            and sc.pulse_mean_abs_mz > settings.stochastic_mz_threshold:
        report.stochastic_regime = True
        message = (f"Середнє |m_z| під час імпульсу SOT {sc.pulse_mean_abs_mz:.2f}: "
                   f"пристрій працює в стохастичному режимі, а не обертанням у площину")
        if settings.reject_stochastic_regime and report.valid:
            report.valid = False
            report.reason = ValidityReason.STOCHASTIC_REGIME
            report.errors.append(message)
        else:
            report.warnings.append(message)

    return report


def validate_device(p: DeviceParams, proto: Protocol, cfg: SimConfig, rng: np.random.Generator,
                    settings: Optional[ValidationSettings] = None,
                    sweep: Optional[Tuple[float, float]] = None) -> ValidityReport:
    """
    Валідація пристрою за грубою S-кривою

    Для STT без заданого J_reset розгортка виконується з провізорним скиданням,
    після чого J_reset калібрується як -3 |J50| і повертається у звіті.
    Помилки симуляції не поширюються, а стають причиною невалідності.
    """
    settings = settings or ValidationSettings()
    logger = get_logger_instance().get_logger()

    calibrate = isinstance(proto, ProtocolSTT) and proto.J_reset is None
    if calibrate:
        proto = proto.with_reset(resolve_reset_current(p, proto))

    try:
        j_min, j_max = sweep if sweep is not None else default_sweep(p, proto)
        sc = build_scurve(p, proto, j_min, j_max, settings.n_points, settings.n_per_point, cfg, rng)
    except ResetFailed as e:
        logger.debug(f"Скидання не вдалося: {e}")
        return ValidityReport(valid=False, reason=ValidityReason.RESET_FAILED, errors=[str(e)])
    except (CodesignError, ArithmeticError, ValueError) as e:
        logger.debug(f"Помилка симуляції під час валідації: {e}")
        return ValidityReport(valid=False, reason=ValidityReason.SIMULATION_ERROR, errors=[str(e)])

    report = judge_scurve(sc, settings)
    report.protocol = proto

    if report.valid and isinstance(proto, ProtocolSTT):
        try:
            report.j_reset = calibrated_reset_current(sc) if calibrate else proto.J_reset
            report.protocol = proto.with_reset(report.j_reset)
        except OutOfRange as e:
            report.valid = False
            report.reason = ValidityReason.SPAN
            report.errors.append(str(e))

    logger.debug(f"Валідація {proto.kind}: valid={report.valid}, reason={report.reason.value}, "
                 f"p=[{report.p_low:.3f}, {report.p_high:.3f}]")
    return report
