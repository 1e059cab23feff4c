"""
MTJ як керована монетка
Протоколи SOT та STT, енергія на підкидання, S-криві та їх обернення,
аналіз чутливості до розкиду параметрів і температури.

Усі підкидання виконуються ансамблями: масив станів (n, 3) з одним
потоком випадкових чисел. Біт = 1, якщо m_z > 0 після релаксації.
"""

import math
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import trapezoid
from scipy.optimize import isotonic_regression

from core.errors import OutOfRange, ResetFailed
from core.llg_core import (
    E_CHARGE, HBAR, K_B, MU0, ArrayLike, DeviceParams, DriveSegment, SimConfig,
    Trajectory, run_segment,
)
from utils.simple_logger import get_logger_instance

# Після скидання STT вільний шар має бути не вище цього m_z
RESET_MZ_MAX = -0.9
# Мінімальна кількість підкидань на точку S-кривої
MIN_FLIPS_PER_POINT = 100
# Нижня межа критичного струму, коли K_eff <= 0 [А/м²]
J_C0_FLOOR = 1e9
# Провізорне скидання (в одиницях J_c0) та каліброване (в одиницях |J50|)
PROVISIONAL_RESET_FACTOR = 6.0
CALIBRATED_RESET_FACTOR = 3.0
# Бар'єр утримання (в kT), який спіновий момент скидання створює для пристроїв з малою стабільністю
RESET_PINNING_BARRIER = 200.0

# Параметри, що збурюються при аналізі розкиду
VARIATION_FIELDS = ("alpha", "K_i", "M_s", "R_p", "eta")


@dataclass(frozen=True)
class ProtocolSOT:
    """Імпульс SOT повертає вільний шар у площину, далі релаксація; J_stt_bias зміщує ймовірність"""
    J_sot: float = -4e11
    t_pulse: float = 10e-9
    t_relax: float = 15e-9
    J_stt_bias: float = 0.0

    kind = "sot"

    def __post_init__(self):
        if not (self.t_pulse > 0.0 and self.t_relax > 0.0):
            raise ValueError("Тривалості імпульсу та релаксації мають бути > 0")

    @property
    def bias(self) -> float:
        return self.J_stt_bias

    def with_bias(self, J: float) -> 'ProtocolSOT':
        return replace(self, J_stt_bias=float(J))


@dataclass(frozen=True)
class ProtocolSTT:
    """Скидання до -z, імпульс STT, релаксація; J_stt - ручка зміщення"""
    J_stt: float = 0.0
    t_pulse: float = 1e-9
    t_relax: float = 10e-9
    t_reset: float = 10e-9
    J_reset: Optional[float] = None

    kind = "stt"

    def __post_init__(self):
        if not (self.t_pulse > 0.0 and self.t_relax > 0.0 and self.t_reset > 0.0):
            raise ValueError("Тривалості скидання, імпульсу та релаксації мають бути > 0")
        if self.J_reset is not None and self.J_reset >= 0.0:
            raise ValueError(f"Струм скидання має бути від'ємним, отримано {self.J_reset}")

    @property
    def bias(self) -> float:
        return self.J_stt

    def with_bias(self, J: float) -> 'ProtocolSTT':
        return replace(self, J_stt=float(J))

    def with_reset(self, J_reset: float) -> 'ProtocolSTT':
        return replace(self, J_reset=float(J_reset))


Protocol = Union[ProtocolSOT, ProtocolSTT]


@dataclass(frozen=True)
class EnergyRecord:
    """Джоулеве тепло одного підкидання (або масиву підкидань) [Дж]"""
    e_mtj: ArrayLike = 0.0
    e_hm: ArrayLike = 0.0

    @property
    def e_total(self) -> ArrayLike:
        return self.e_mtj + self.e_hm

    def __add__(self, other: 'EnergyRecord') -> 'EnergyRecord':
        return EnergyRecord(self.e_mtj + other.e_mtj, self.e_hm + other.e_hm)

    def total(self) -> float:
        """Сумарна енергія всього ансамблю"""
        return float(np.sum(self.e_total))

    def member(self, index: int) -> 'EnergyRecord':
        return EnergyRecord(float(np.asarray(self.e_mtj)[index]), float(np.asarray(self.e_hm)[index]))


@dataclass
class FlipBatch:
    """Результат ансамблю підкидань"""
    bits: np.ndarray
    energy: EnergyRecord
    m: np.ndarray
    pulse_mean_abs_mz: Optional[np.ndarray] = None
    trajectory: Optional[Trajectory] = None
    duration: float = 0.0


@dataclass(frozen=True)
class SCurvePoint:
    J: float
    p_one: float
    n_samples: int
    mean_energy: float = 0.0

    @property
    def n_ones(self) -> int:
        return int(round(self.p_one * self.n_samples))


@dataclass
class SCurve:
    """Залежність ймовірності біта 1 від струму зміщення"""
    points: List[SCurvePoint]
    params: DeviceParams
    kind: str
    pulse_mean_abs_mz: float = float("nan")

    def __post_init__(self):
        if not self.points:
            raise ValueError("S-крива без жодної точки")
        J = self.J
        if np.any(np.diff(J) <= 0.0):
            raise ValueError("Значення струму S-кривої мають строго зростати")
        if np.any((self.p < 0.0) | (self.p > 1.0)):
            raise ValueError("Ймовірності S-кривої мають лежати в [0, 1]")

    @property
    def J(self) -> np.ndarray:
        return np.array([point.J for point in self.points])

    @property
    def p(self) -> np.ndarray:
        return np.array([point.p_one for point in self.points])

    @property
    def n(self) -> np.ndarray:
        return np.array([point.n_samples for point in self.points])

    @property
    def p_low(self) -> float:
        return self.points[0].p_one

    @property
    def p_high(self) -> float:
        return self.points[-1].p_one

    @property
    def grid_spacing(self) -> float:
        if len(self.points) < 2:
            return 0.0
        return float(np.mean(np.diff(self.J)))

    def __len__(self) -> int:
        return len(self.points)


def resistance(p: DeviceParams, m_z: ArrayLike) -> ArrayLike:
    """Опір стеку: лінійна інтерполяція провідності між R_p (m_z=+1) та R_AP (m_z=-1)"""
    return p.R_p * (1.0 + p.tmr) / (1.0 + p.tmr * (1.0 + np.asarray(m_z)) / 2.0)


def heavy_metal_resistance(p: DeviceParams) -> float:
    """Опір каналу важкого металу [Ом]"""
    return p.rho_hm * p.hm_length / (p.hm_width * p.hm_thickness)


def stack_current(p: DeviceParams, J_stt: ArrayLike) -> ArrayLike:
    """Струм крізь стовпчик MTJ [А]"""
    return np.asarray(J_stt, dtype=float) * p.area


def heavy_metal_current(p: DeviceParams, J_sot: ArrayLike) -> ArrayLike:
    """Струм у каналі важкого металу [А]"""
    return np.asarray(J_sot, dtype=float) * p.hm_width * p.hm_thickness


def energy_of_trace(trace: Trajectory, p: DeviceParams, seg: DriveSegment) -> EnergyRecord:
    """
    Енергія записаної траєкторії відрізка

    e_mtj = інтеграл I_stt² R(m_z) dt (трапеції по відліках траєкторії),
    e_hm = I_sot² R_hm * duration.
    """
    if len(trace) < 2:
        e_mtj = np.zeros(np.shape(trace.m)[1:-1]) if len(trace) else 0.0
    else:
        power = stack_current(p, trace.J_stt) ** 2 * resistance(p, trace.m_z)
        e_mtj = trapezoid(power, trace.t, axis=0)
    e_hm = heavy_metal_current(p, seg.J_sot) ** 2 * heavy_metal_resistance(p) * seg.duration
    return EnergyRecord(_as_scalar(e_mtj), _as_scalar(e_hm))


def keff(p: DeviceParams) -> float:
    """Ефективна анізотропія K_u - mu0 Ms²/2 [Дж/м³]; межа PMA там, де вона дорівнює нулю"""
    return p.K_u - 0.5 * MU0 * p.M_s ** 2


def thermal_stability(p: DeviceParams) -> float:
    """Фактор стабільності K_eff V / (k_B T)"""
    if p.T <= 0.0:
        return math.inf
    return keff(p) * p.volume / (K_B * p.T)


def critical_current_density(p: DeviceParams) -> float:
    """Критична густина струму STT при T=0 [А/м²], не менша за J_C0_FLOOR"""
    k_eff = keff(p)
    if k_eff <= 0.0:
        return J_C0_FLOOR
    H_k = 2.0 * k_eff / (MU0 * p.M_s)
    j_c0 = 2.0 * E_CHARGE * MU0 * p.M_s * p.t_f * p.alpha * H_k / (HBAR * p.P_spin * (1.0 + p.alpha ** 2))
    return max(j_c0, J_C0_FLOOR)


def default_sweep(p: DeviceParams, proto: Protocol) -> Tuple[float, float]:
    """Діапазон струму зміщення для S-кривої за замовчуванням"""
    if isinstance(proto, ProtocolSOT):
        j_s = (p.eta / p.P_spin) * abs(proto.J_sot)
        if j_s == 0.0:
            j_s = critical_current_density(p)
        return -j_s, j_s
    return 0.0, 4.0 * critical_current_density(p)


def reset_pinning_current(p: DeviceParams) -> float:
    """
    Густина струму, за якої момент STT утримує шар біля -z попри теплові флуктуації [А/м²]

    Антизатухальний момент діє як поле H_stt / alpha; потрібно
    mu0 Ms V H_stt / alpha >= RESET_PINNING_BARRIER kT. Для стабільних пристроїв
    ця межа нижча за 6 J_c0 і не впливає на скидання.
    """
    return RESET_PINNING_BARRIER * p.alpha * K_B * p.T * 2.0 * E_CHARGE / (p.area * HBAR * p.P_spin)


def resolve_reset_current(p: DeviceParams, proto: ProtocolSTT) -> float:
    """Заданий струм скидання або провізорний -max(6 J_c0, струм утримання)"""
    if proto.J_reset is not None:
        return proto.J_reset
    return -max(PROVISIONAL_RESET_FACTOR * critical_current_density(p), reset_pinning_current(p))


def _as_scalar(value):
    array = np.asarray(value)
    return float(array) if array.ndim == 0 else array


def _batch_shape(m0: Optional[np.ndarray], n: Optional[int], bias: ArrayLike) -> Tuple[int, ...]:
    if m0 is not None:
        return np.shape(m0)[:-1]
    if n is not None:
        return (int(n),)
    bias = np.asarray(bias)
    return bias.shape


def _initial_state(m0: Optional[np.ndarray], batch_shape: Tuple[int, ...],
                   rng: np.random.Generator) -> np.ndarray:
    """Стартовий стан: заданий або +-z з рівною ймовірністю"""
    if m0 is not None:
        return np.array(m0, dtype=float)
    signs = np.where(rng.random(batch_shape) < 0.5, 1.0, -1.0)
    m = np.zeros(batch_shape + (3,))
    m[..., 2] = signs
    return m


def _resistance_integrand(p: DeviceParams):
    return lambda m: resistance(p, m[..., 2])


def _abs_mz(m: np.ndarray) -> np.ndarray:
    return np.abs(m[..., 2])


def flip_sot_batch(p: DeviceParams, proto: ProtocolSOT, cfg: SimConfig, rng: np.random.Generator,
                   n: Optional[int] = None, bias: Optional[ArrayLike] = None,
                   m0: Optional[np.ndarray] = None, record: bool = False,
                   t_offset: float = 0.0) -> FlipBatch:
    """Ансамбль підкидань SOT: імпульс (J_sot та зміщення) і релаксація без струму"""
    bias = proto.J_stt_bias if bias is None else bias
    batch_shape = _batch_shape(m0, n, bias)
    m = _initial_state(m0, batch_shape, rng)
    bias = np.broadcast_to(np.asarray(bias, dtype=float), batch_shape) if batch_shape else float(bias)

    pulse = DriveSegment(proto.t_pulse, J_sot=proto.J_sot, J_stt=bias)
    integrands = {"abs_mz": _abs_mz}
    bias_on = bool(np.any(np.asarray(bias) != 0.0))
    if bias_on:
        integrands["resistance"] = _resistance_integrand(p)
    pulse_result = run_segment(m, p, pulse, cfg, rng, record=record,
                               integrands=integrands, t_offset=t_offset)

    relax = DriveSegment(proto.t_relax)
    relax_result = run_segment(pulse_result.m, p, relax, cfg, rng, record=record,
                               t_offset=t_offset + proto.t_pulse)

    e_mtj = stack_current(p, bias) ** 2 * pulse_result.integrals["resistance"] if bias_on \
        else np.zeros(batch_shape)
    e_hm = np.broadcast_to(heavy_metal_current(p, proto.J_sot) ** 2 * heavy_metal_resistance(p)
                           * proto.t_pulse, batch_shape).copy()

    trajectory = None
    if record:
        trajectory = Trajectory.concat([pulse_result.trajectory, relax_result.trajectory])

    return FlipBatch(
        bits=(relax_result.m[..., 2] > 0.0).astype(np.int8),
        energy=EnergyRecord(_as_scalar(e_mtj), _as_scalar(e_hm)),
        m=relax_result.m,
        pulse_mean_abs_mz=pulse_result.integrals["abs_mz"] / proto.t_pulse,
        trajectory=trajectory,
        duration=proto.t_pulse + proto.t_relax,
    )


def flip_stt_batch(p: DeviceParams, proto: ProtocolSTT, cfg: SimConfig, rng: np.random.Generator,
                   n: Optional[int] = None, bias: Optional[ArrayLike] = None,
                   m0: Optional[np.ndarray] = None, record: bool = False,
                   t_offset: float = 0.0) -> FlipBatch:
    """Ансамбль підкидань STT: скидання до -z, імпульс J_stt, релаксація"""
    bias = proto.J_stt if bias is None else bias
    batch_shape = _batch_shape(m0, n, bias)
    m = _initial_state(m0, batch_shape, rng)
    bias = np.broadcast_to(np.asarray(bias, dtype=float), batch_shape) if batch_shape else float(bias)
    J_reset = resolve_reset_current(p, proto)
    r_integrand = {"resistance": _resistance_integrand(p)}

    reset = DriveSegment(proto.t_reset, J_stt=J_reset)
    reset_result = run_segment(m, p, reset, cfg, rng, record=record,
                               integrands=r_integrand, t_offset=t_offset)
    worst_mz = float(np.max(reset_result.m[..., 2]))
    if worst_mz > RESET_MZ_MAX:
        raise ResetFailed(
            f"Скидання не довело шар до -z: m_z={worst_mz:.3f} > {RESET_MZ_MAX} (J_reset={J_reset:.3e} А/м²)",
            worst_mz=worst_mz,
        )

    pulse = DriveSegment(proto.t_pulse, J_stt=bias)
    bias_on = bool(np.any(np.asarray(bias) != 0.0))
    pulse_result = run_segment(reset_result.m, p, pulse, cfg, rng, record=record,
                               integrands=r_integrand if bias_on else None,
                               t_offset=t_offset + proto.t_reset)

    relax = DriveSegment(proto.t_relax)
    relax_result = run_segment(pulse_result.m, p, relax, cfg, rng, record=record,
                               t_offset=t_offset + proto.t_reset + proto.t_pulse)

    e_mtj = stack_current(p, J_reset) ** 2 * reset_result.integrals["resistance"]
    if bias_on:
        e_mtj = e_mtj + stack_current(p, bias) ** 2 * pulse_result.integrals["resistance"]

    trajectory = None
    if record:
        trajectory = Trajectory.concat([reset_result.trajectory, pulse_result.trajectory,
                                        relax_result.trajectory])

    return FlipBatch(
        bits=(relax_result.m[..., 2] > 0.0).astype(np.int8),
        energy=EnergyRecord(_as_scalar(e_mtj), _as_scalar(np.zeros(batch_shape))),
        m=relax_result.m,
        trajectory=trajectory,
        duration=proto.t_reset + proto.t_pulse + proto.t_relax,
    )


def flip_batch(p: DeviceParams, proto: Protocol, cfg: SimConfig, rng: np.random.Generator,
               **kwargs) -> FlipBatch:
    """Ансамбль підкидань за протоколом відповідного типу"""
    if isinstance(proto, ProtocolSOT):
        return flip_sot_batch(p, proto, cfg, rng, **kwargs)
    return flip_stt_batch(p, proto, cfg, rng, **kwargs)


def flip_sot(p: DeviceParams, proto: ProtocolSOT, cfg: SimConfig, rng: np.random.Generator,
             m0: Optional[np.ndarray] = None) -> Tuple[int, EnergyRecord]:
    """Одне підкидання SOT"""
    result = flip_sot_batch(p, proto, cfg, rng, m0=m0)
    return int(result.bits), result.energy


def flip_stt(p: DeviceParams, proto: ProtocolSTT, cfg: SimConfig, rng: np.random.Generator,
             m0: Optional[np.ndarray] = None) -> Tuple[int, EnergyRecord]:
    """Одне підкидання STT"""
    result = flip_stt_batch(p, proto, cfg, rng, m0=m0)
    return int(result.bits), result.energy


def measure_p_one(p: DeviceParams, proto: Protocol, J: float, n: int, cfg: SimConfig,
                  rng: np.random.Generator) -> float:
    """Частка одиниць серед n підкидань при струмі зміщення J"""
    result = flip_batch(p, proto, cfg, rng, n=n, bias=float(J))
    return float(np.mean(result.bits))


def build_scurve(p: DeviceParams, proto: Protocol, j_min: float, j_max: float, n_points: int,
                 n_per_point: int, cfg: SimConfig, rng: np.random.Generator) -> SCurve:
    """
    S-крива методом Монте-Карло

    Усі n_points * n_per_point підкидань виконуються одним ансамблем;
    J - зміщення J_stt_bias для SOT або амплітуда J_stt для STT.
    """
    if n_points < 1:
        raise ValueError(f"n_points має бути >= 1, отримано {n_points}")
    if n_points > 1 and not j_min < j_max:
        raise ValueError(f"Потрібно j_min < j_max, отримано [{j_min}, {j_max}]")
    if n_per_point < MIN_FLIPS_PER_POINT:
        raise ValueError(f"n_per_point має бути >= {MIN_FLIPS_PER_POINT}, отримано {n_per_point}")

    logger = get_logger_instance().get_logger()
    grid = np.linspace(j_min, j_max, n_points)
    biases = np.repeat(grid, n_per_point)
    logger.debug(f"S-крива {proto.kind}: {n_points} точок x {n_per_point} підкидань, "
                 f"J в [{j_min:.3e}, {j_max:.3e}] А/м²")

    result = flip_batch(p, proto, cfg, rng, bias=biases)
    bits = result.bits.reshape(n_points, n_per_point)
    energies = np.broadcast_to(np.asarray(result.energy.e_total), biases.shape).reshape(n_points, n_per_point)

    points = [
        SCurvePoint(J=float(grid[i]), p_one=float(bits[i].mean()), n_samples=n_per_point,
                    mean_energy=float(energies[i].mean()))
        for i in range(n_points)
    ]
    pulse_mz = float(np.mean(result.pulse_mean_abs_mz)) if result.pulse_mean_abs_mz is not None else float("nan")
    return SCurve(points=points, params=p, kind=proto.kind, pulse_mean_abs_mz=pulse_mz)


class ScurveInverter:
    """
    Обернення S-кривої: ізотонічна регресія (ваги = кількість підкидань),
    плато зводяться до середнього J, далі кусково-лінійна інтерполяція.
    """

    def __init__(self, sc: SCurve):
        if len(sc) < 2:
            raise ValueError("Обернення потребує щонайменше двох точок S-кривої")
        J = sc.J
        fitted = isotonic_regression(sc.p, weights=sc.n.astype(float), increasing=True).x

        levels, inverse = np.unique(np.round(fitted, 15), return_inverse=True)
        self.p_levels = levels
        self.J_levels = np.array([J[inverse == i].mean() for i in range(len(levels))])
        self.p_low = float(levels[0])
        self.p_high = float(levels[-1])

    def _check(self, p_target: np.ndarray):
        bad = (p_target < self.p_low) | (p_target > self.p_high) | ~np.isfinite(p_target)
        if np.any(bad):
            value = float(p_target[bad][0])
            raise OutOfRange(
                f"Ймовірність {value:.4f} поза досяжним діапазоном [{self.p_low:.4f}, {self.p_high:.4f}]",
                p_target=value, p_low=self.p_low, p_high=self.p_high,
            )

    def invert(self, p_target: float) -> float:
        return float(self.invert_many(np.array([p_target]))[0])

    def invert_many(self, p_target: np.ndarray) -> np.ndarray:
        p_target = np.asarray(p_target, dtype=float)
        self._check(p_target)
        if len(self.p_levels) == 1:
            return np.full(p_target.shape, self.J_levels[0])
        return np.interp(p_target, self.p_levels, self.J_levels)


def invert_scurve(sc: SCurve, p_target: float) -> float:
    """Струм зміщення, що дає ймовірність p_target"""
    return ScurveInverter(sc).invert(p_target)


def calibrated_reset_current(sc: SCurve) -> float:
    """J_reset = -3 |J50| за S-кривою STT, не слабший за струм утримання пристрою"""
    j50 = invert_scurve(sc, 0.5)
    return -max(CALIBRATED_RESET_FACTOR * max(abs(j50), J_C0_FLOOR), reset_pinning_current(sc.params))


def calibrate_reset_current(p: DeviceParams, proto: ProtocolSTT, cfg: SimConfig,
                            rng: np.random.Generator, n_points: int = 11,
                            n_per_point: int = 200) -> Tuple[float, SCurve]:
    """Калібрування струму скидання: розгортка з провізорним скиданням, потім -3 |J50|"""
    provisional = proto.with_reset(resolve_reset_current(p, proto))
    j_min, j_max = default_sweep(p, provisional)
    sc = build_scurve(p, provisional, j_min, j_max, n_points, n_per_point, cfg, rng)
    return calibrated_reset_current(sc), sc


def _ready_protocol(p: DeviceParams, proto: Protocol, cfg: SimConfig,
                    rng: np.random.Generator) -> Protocol:
    if isinstance(proto, ProtocolSTT) and proto.J_reset is None:
        J_reset, _ = calibrate_reset_current(p, proto, cfg, rng)
        return proto.with_reset(J_reset)
    return proto


def perturb_params(p: DeviceParams, spread: float, rng: np.random.Generator,
                   fields: Sequence[str] = VARIATION_FIELDS) -> DeviceParams:
    """Незалежне рівномірне збурення параметрів у межах +-spread"""
    if spread < 0.0:
        raise ValueError(f"Розкид має бути >= 0, отримано {spread}")
    factors = rng.uniform(1.0 - spread, 1.0 + spread, size=len(fields))
    changes = {name: getattr(p, name) * factor for name, factor in zip(fields, factors)}
    if "alpha" in changes:
        changes["alpha"] = min(changes["alpha"], 0.999)
    return p.replace(**changes)


def scurve_variation(p: DeviceParams, spread: float, n_devices: int, proto: Protocol,
                     cfg: SimConfig, rng: np.random.Generator, n_points: int = 11,
                     n_per_point: int = 200,
                     sweep: Optional[Tuple[float, float]] = None) -> List[SCurve]:
    """S-криві пристроїв з розкидом параметрів на спільній сітці струмів"""
    if n_devices < 1:
        raise ValueError(f"n_devices має бути >= 1, отримано {n_devices}")
    proto = _ready_protocol(p, proto, cfg, rng)
    j_min, j_max = sweep if sweep is not None else default_sweep(p, proto)
    curves = []
    for _ in range(n_devices):
        device = perturb_params(p, spread, rng)
        curves.append(build_scurve(device, proto, j_min, j_max, n_points, n_per_point, cfg, rng))
    return curves


def _bias_point(p: DeviceParams, proto: Protocol, cfg: SimConfig, rng: np.random.Generator,
                n_points: int, n_per_point: int) -> Tuple[Protocol, float]:
    proto = _ready_protocol(p, proto, cfg, rng)
    j_min, j_max = default_sweep(p, proto)
    sc = build_scurve(p, proto, j_min, j_max, n_points, n_per_point, cfg, rng)
    return proto, invert_scurve(sc, 0.5)


def temperature_sensitivity(p: DeviceParams, proto: Protocol, dT: float, cfg: SimConfig,
                            rng: np.random.Generator, n_points: int = 11, n_per_point: int = 200,
                            n_measure: int = 2000) -> float:
    """
    Зсув ймовірності p(T + dT) - 0.5 при струмі, що дає 50% при T

    OutOfRange, якщо 50% недосяжні на розгортці.
    """
    proto, j50 = _bias_point(p, proto, cfg, rng, n_points, n_per_point)
    shifted = p.replace(T=p.T + dT)
    return measure_p_one(shifted, proto, j50, n_measure, cfg, rng) - 0.5


def temperature_sweep(p: DeviceParams, proto: Protocol, dT: float, pulse_widths: Sequence[float],
                      cfg: SimConfig, rng: np.random.Generator, n_points: int = 11,
                      n_per_point: int = 200, n_measure: int = 2000) -> List[Tuple[float, float]]:
    """dP як функція тривалості імпульсу для фіксованого dT"""
    results = []
    for t_pulse in pulse_widths:
        variant = replace(proto, t_pulse=float(t_pulse))
        dP = temperature_sensitivity(p, variant, dT, cfg, rng, n_points, n_per_point, n_measure)
        results.append((float(t_pulse), dP))
    return results


def parameter_sensitivity(p: DeviceParams, proto: Protocol, changes: Dict[str, float],
                          cfg: SimConfig, rng: np.random.Generator, n_points: int = 11,
                          n_per_point: int = 200, n_measure: int = 2000) -> float:
    """
    Зсув ймовірності при струмі 50% базового пристрою після відносної зміни параметрів

    changes: {назва: відносна зміна}, наприклад {"M_s": 0.05}.
    """
    proto, j50 = _bias_point(p, proto, cfg, rng, n_points, n_per_point)
    perturbed = p.replace(**{name: getattr(p, name) * (1.0 + frac) for name, frac in changes.items()})
    return measure_p_one(perturbed, proto, j50, n_measure, cfg, rng) - 0.5


def sensitivity_map(p: DeviceParams, proto: Protocol, ms_fractions: Sequence[float],
                    ki_fractions: Sequence[float], cfg: SimConfig, rng: np.random.Generator,
                    n_points: int = 11, n_per_point: int = 200,
                    n_measure: int = 2000) -> np.ndarray:
    """Карта dP на сітці (відносна зміна M_s) x (відносна зміна K_i)"""
    proto, j50 = _bias_point(p, proto, cfg, rng, n_points, n_per_point)
    result = np.zeros((len(ms_fractions), len(ki_fractions)))
    for i, d_ms in enumerate(ms_fractions):
        for j, d_ki in enumerate(ki_fractions):
            perturbed = p.replace(M_s=p.M_s * (1.0 + d_ms), K_i=p.K_i * (1.0 + d_ki))
            result[i, j] = measure_p_one(perturbed, proto, j50, n_measure, cfg, rng) - 0.5
    return result
