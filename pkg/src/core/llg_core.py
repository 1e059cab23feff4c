"""
Макроспінова модель вільного шару MTJ
Стохастичне рівняння Ландау–Ліфшиця–Гільберта з STT/SOT моментами,
анізотропією, розмагнічуванням та тепловим полем.

Поля в А/м. Швидкість прецесії: GAMMA_0 = GAMMA_E * MU0.
Спінові моменти задаються еквівалентними полями
    H_st = hbar * P * J_stt / (2 e mu0 Ms t_f),   H_so = hbar * eta * J_sot / (2 e mu0 Ms t_f)
і входять як -GAMMA_0 * H * m x (m x p): додатний струм тягне m до осі поляризації.

Стан може бути одним вектором (3,) або ансамблем незалежних пристроїв (n, 3).
"""

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from core.errors import NonFiniteState

# гіромагнітне відношення електрона [рад/(с·Тл)]
GAMMA_E = 1.760859e11
# магнітна стала [Гн/м]
MU0 = 1.25663706212e-6
# гіромагнітне відношення для полів у А/м [м/(А·с)]
GAMMA_0 = GAMMA_E * MU0
# зведена стала Планка [Дж·с]
HBAR = 1.054571817e-34
# елементарний заряд [Кл]
E_CHARGE = 1.602176634e-19
# стала Больцмана [Дж/К]
K_B = 1.380649e-23

# Межа стабільності інтегратора
MAX_DT = 10e-12

# Вісь закріпленого шару та напрям спінової поляризації SOT
FIXED_LAYER_AXIS = 2
SOT_POLARIZATION_AXIS = 1

ArrayLike = Union[float, np.ndarray]
Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class DeviceParams:
    """Параметри матеріалу, пристрою та середовища (SI)"""
    alpha: float = 0.03          # затухання Гільберта
    K_i: float = 1e-3            # поверхнева анізотропія [Дж/м²]
    M_s: float = 1.2e6           # намагніченість насичення [А/м]
    R_p: float = 5000.0          # паралельний опір [Ом]
    eta: float = 0.3             # спіновий кут Холла (SOT)
    t_f: float = 1.1e-9          # товщина вільного шару [м]
    d_mtj: float = 50e-9         # діаметр стовпчика MTJ [м]
    hm_thickness: float = 3e-9   # товщина важкого металу [м]
    hm_width: float = 100e-9     # ширина каналу важкого металу [м]
    hm_length: float = 100e-9    # довжина каналу важкого металу [м]
    rho_hm: float = 2e-7         # питомий опір важкого металу [Ом·м]
    tmr: float = 1.0             # TMR: R_AP = R_p * (1 + tmr)
    P_spin: float = 0.6          # спінова поляризація
    T: float = 300.0             # температура [К]
    demag: Tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self):
        errors = self.validation_errors()
        if errors:
            raise ValueError("Некоректні параметри пристрою: " + "; ".join(errors))

    def validation_errors(self) -> List[str]:
        """Перелік порушених інваріантів (порожній, якщо все гаразд)"""
        errors = []
        if not 0.0 < self.alpha < 1.0:
            errors.append(f"alpha={self.alpha} поза (0, 1)")
        for name in ("K_i", "M_s", "R_p", "eta", "t_f", "d_mtj", "hm_thickness",
                     "hm_width", "hm_length", "rho_hm"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                errors.append(f"{name}={value} має бути > 0")
        if self.tmr < 0.0:
            errors.append(f"tmr={self.tmr} < 0")
        if not 0.0 < self.P_spin <= 1.0:
            errors.append(f"P_spin={self.P_spin} поза (0, 1]")
        if self.T < 0.0:
            errors.append(f"T={self.T} < 0")
        if len(self.demag) != 3 or min(self.demag) < 0.0 or abs(sum(self.demag) - 1.0) > 1e-9:
            errors.append(f"demag={self.demag}: потрібні три невід'ємні коефіцієнти з сумою 1")
        return errors

    @property
    def K_u(self) -> float:
        """Об'ємна анізотропія K_i / t_f [Дж/м³]"""
        return self.K_i / self.t_f

    @property
    def area(self) -> float:
        """Площа перерізу стовпчика MTJ [м²]"""
        return math.pi * (self.d_mtj / 2.0) ** 2

    @property
    def volume(self) -> float:
        """Об'єм вільного шару [м³]"""
        return self.area * self.t_f

    def replace(self, **changes) -> 'DeviceParams':
        """Копія з заміненими полями"""
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, object]:
        data = asdict(self)
        data["demag"] = list(self.demag)
        return data


@dataclass(frozen=True)
class DriveSegment:
    """Відрізок керування: густини струмів, тривалість, зовнішнє поле"""
    duration: float
    J_sot: ArrayLike = 0.0       # струм у важкому металі [А/м²]
    J_stt: ArrayLike = 0.0       # струм крізь стек [А/м²]
    H_ext: Tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if not self.duration > 0.0:
            raise ValueError(f"Тривалість відрізка має бути > 0, отримано {self.duration}")

    @property
    def is_driven(self) -> bool:
        return bool(np.any(np.asarray(self.J_sot) != 0.0) or np.any(np.asarray(self.J_stt) != 0.0))


@dataclass(frozen=True)
class SimConfig:
    """Налаштування інтегрування"""
    dt: float = 1e-12
    seed: int = 0
    renorm_every: int = 1
    record_every: int = 10

    def __post_init__(self):
        if not 0.0 < self.dt <= MAX_DT:
            raise ValueError(f"dt={self.dt} має бути в (0, {MAX_DT}]")
        if self.renorm_every < 1 or self.record_every < 1:
            raise ValueError("renorm_every та record_every мають бути >= 1")


@dataclass
class Trajectory:
    """Записані відліки (t, m) разом зі струмами"""
    t: np.ndarray
    m: np.ndarray
    J_sot: np.ndarray
    J_stt: np.ndarray

    @property
    def m_z(self) -> np.ndarray:
        return self.m[..., 2]

    def __len__(self) -> int:
        return len(self.t)

    def shifted(self, offset: float) -> 'Trajectory':
        return Trajectory(self.t + offset, self.m, self.J_sot, self.J_stt)

    @staticmethod
    def concat(parts: List['Trajectory']) -> 'Trajectory':
        """Послідовне з'єднання траєкторій (час кожної частини вже абсолютний)"""
        if not parts:
            return Trajectory(np.zeros(0), np.zeros((0, 3)), np.zeros(0), np.zeros(0))
        return Trajectory(
            np.concatenate([part.t for part in parts]),
            np.concatenate([part.m for part in parts]),
            np.concatenate([part.J_sot for part in parts]),
            np.concatenate([part.J_stt for part in parts]),
        )


@dataclass
class SegmentResult:
    """Результат інтегрування відрізка"""
    m: np.ndarray
    steps: int
    step_size: float
    trajectory: Optional[Trajectory] = None
    integrals: Dict[str, np.ndarray] = field(default_factory=dict)


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ax, ay, az = a[..., 0], a[..., 1], a[..., 2]
    bx, by, bz = b[..., 0], b[..., 1], b[..., 2]
    return np.stack((ay * bz - az * by, az * bx - ax * bz, ax * by - ay * bx), axis=-1)


def _axis_double_cross(m: np.ndarray, axis: int) -> np.ndarray:
    """m x (m x e_axis) = m * m_axis - e_axis * |m|^2"""
    result = m * m[..., axis:axis + 1]
    result[..., axis] -= np.sum(m * m, axis=-1)
    return result


def spin_torque_field(p: DeviceParams, efficiency: float, J: ArrayLike) -> ArrayLike:
    """Еквівалентне поле спінового моменту [А/м] для густини струму J"""
    return HBAR * efficiency * np.asarray(J, dtype=float) / (2.0 * E_CHARGE * MU0 * p.M_s * p.t_f)


def thermal_sigma(p: DeviceParams, dt: float) -> float:
    """Стандартне відхилення компоненти теплового поля [А/м] за крок dt"""
    if p.T <= 0.0:
        return 0.0
    variance = 2.0 * p.alpha * K_B * p.T / (GAMMA_E * MU0 ** 2 * p.M_s * p.volume * dt)
    return math.sqrt(variance)


def draw_thermal_field(p: DeviceParams, dt: float, shape: Tuple[int, ...],
                       rng: np.random.Generator) -> np.ndarray:
    """Незалежні гаусові компоненти теплового поля"""
    sigma = thermal_sigma(p, dt)
    if sigma == 0.0:
        return np.zeros(shape)
    return sigma * rng.standard_normal(shape)


class LLGKernel:
    """Права частина LLG та крок стохастичного методу Гойна для фіксованих параметрів"""

    def __init__(self, p: DeviceParams):
        self.p = p
        self.gamma_prime = GAMMA_0 / (1.0 + p.alpha ** 2)
        self.anisotropy_coeff = 2.0 * p.K_u / (MU0 * p.M_s)
        self.demag_factors = -p.M_s * np.asarray(p.demag, dtype=float)

    def field(self, m: np.ndarray, h_thermal: np.ndarray, H_ext: np.ndarray) -> np.ndarray:
        """H_eff = H_anis + H_demag + H_thermal + H_ext"""
        H = m * self.demag_factors
        H[..., 2] += self.anisotropy_coeff * m[..., 2]
        H += h_thermal
        H += H_ext
        return H

    def drift(self, m: np.ndarray, H: np.ndarray, h_stt: np.ndarray, h_sot: np.ndarray,
              stt_on: bool, sot_on: bool) -> np.ndarray:
        mxH = _cross(m, H)
        dm = -self.gamma_prime * (mxH + self.p.alpha * _cross(m, mxH))
        if stt_on:
            dm -= GAMMA_0 * h_stt * _axis_double_cross(m, FIXED_LAYER_AXIS)
        if sot_on:
            dm -= GAMMA_0 * h_sot * _axis_double_cross(m, SOT_POLARIZATION_AXIS)
        return dm

    def heun_step(self, m: np.ndarray, dt: float, h_thermal: np.ndarray, H_ext: np.ndarray,
                  h_stt: np.ndarray, h_sot: np.ndarray, stt_on: bool, sot_on: bool) -> np.ndarray:
        """Предиктор-коректор (Стратонович); теплове поле стале впродовж кроку"""
        k1 = self.drift(m, self.field(m, h_thermal, H_ext), h_stt, h_sot, stt_on, sot_on)
        m_pred = m + dt * k1
        k2 = self.drift(m_pred, self.field(m_pred, h_thermal, H_ext), h_stt, h_sot, stt_on, sot_on)
        return m + 0.5 * dt * (k1 + k2)


def effective_field(m: np.ndarray, p: DeviceParams, h_thermal: Optional[np.ndarray] = None,
                    H_ext: Optional[np.ndarray] = None) -> np.ndarray:
    """Ефективне поле [А/м] для стану m"""
    m = np.asarray(m, dtype=float)
    h_thermal = np.zeros(3) if h_thermal is None else np.asarray(h_thermal, dtype=float)
    H_ext = np.zeros(3) if H_ext is None else np.asarray(H_ext, dtype=float)
    return LLGKernel(p).field(m, h_thermal, H_ext)


def magnetic_energy(m: np.ndarray, p: DeviceParams) -> np.ndarray:
    """Енергія анізотропії та розмагнічування [Дж] (без теплового та зовнішнього полів)"""
    m = np.asarray(m, dtype=float)
    demag_density = 0.5 * MU0 * p.M_s ** 2 * np.sum(np.asarray(p.demag) * m * m, axis=-1)
    return p.volume * (demag_density - p.K_u * m[..., 2] ** 2)


def normalize(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=float)
    norm = np.linalg.norm(m, axis=-1, keepdims=True)
    return m / norm


def _torque_fields(p: DeviceParams, seg: DriveSegment, batch_shape: Tuple[int, ...]):
    h_stt = spin_torque_field(p, p.P_spin, seg.J_stt)
    h_sot = spin_torque_field(p, p.eta, seg.J_sot)
    stt_on = bool(np.any(h_stt != 0.0))
    sot_on = bool(np.any(h_sot != 0.0))
    # (n,) -> (n, 1) для множення на (n, 3)
    h_stt = np.broadcast_to(h_stt, batch_shape)[..., None] if batch_shape else np.reshape(h_stt, (1,))
    h_sot = np.broadcast_to(h_sot, batch_shape)[..., None] if batch_shape else np.reshape(h_sot, (1,))
    return h_stt, h_sot, stt_on, sot_on


def _check_finite(m: np.ndarray, step: int):
    if not np.isfinite(m).all():
        raise NonFiniteState(f"Намагніченість стала нескінченною на кроці {step}: зменште dt або перевірте параметри")


def llg_step(m: np.ndarray, p: DeviceParams, seg: DriveSegment, cfg: SimConfig,
             rng: np.random.Generator) -> np.ndarray:
    """Один крок тривалістю cfg.dt з перенормуванням"""
    m = np.asarray(m, dtype=float)
    batch_shape = m.shape[:-1]
    h_stt, h_sot, stt_on, sot_on = _torque_fields(p, seg, batch_shape)
    h_thermal = draw_thermal_field(p, cfg.dt, m.shape, rng)
    kernel = LLGKernel(p)
    m_new = kernel.heun_step(m, cfg.dt, h_thermal, np.asarray(seg.H_ext, dtype=float),
                             h_stt, h_sot, stt_on, sot_on)
    _check_finite(m_new, 1)
    m_new = m_new / np.linalg.norm(m_new, axis=-1, keepdims=True)
    _check_finite(m_new, 1)
    return m_new


def step_count(duration: float, dt: float) -> int:
    """Кількість кроків ceil(duration / dt) зі стійкістю до похибки округлення"""
    return max(1, int(math.ceil(round(duration / dt, 9))))


def run_segment(m0: np.ndarray, p: DeviceParams, seg: DriveSegment, cfg: SimConfig,
                rng: np.random.Generator, record: bool = False,
                integrands: Optional[Dict[str, Integrand]] = None,
                t_offset: float = 0.0) -> SegmentResult:
    """
    Інтегрування відрізка керування

    Виконує ceil(duration/dt) кроків довжини duration/n. Якщо record=True,
    зберігає (t, m) кожні cfg.record_every кроків та в кінці відрізка.
    integrands: скалярні функції стану, інтеграли яких по часу (трапеції)
    повертаються в SegmentResult.integrals.
    """
    if seg.duration < cfg.dt * (1.0 - 1e-9):
        raise ValueError(f"Тривалість відрізка {seg.duration} менша за крок {cfg.dt}")

    n_steps = step_count(seg.duration, cfg.dt)
    h = seg.duration / n_steps
    m = normalize(m0)
    batch_shape = m.shape[:-1]

    kernel = LLGKernel(p)
    h_stt, h_sot, stt_on, sot_on = _torque_fields(p, seg, batch_shape)
    H_ext = np.asarray(seg.H_ext, dtype=float)
    sigma = thermal_sigma(p, h)
    zero_field = np.zeros(m.shape)

    integrands = integrands or {}
    integrals = {name: np.zeros(batch_shape) for name in integrands}
    previous = {name: func(m) for name, func in integrands.items()}

    times: List[float] = []
    states: List[np.ndarray] = []
    if record:
        times.append(t_offset)
        states.append(m.copy())

    for step in range(1, n_steps + 1):
        h_thermal = sigma * rng.standard_normal(m.shape) if sigma > 0.0 else zero_field
        m = kernel.heun_step(m, h, h_thermal, H_ext, h_stt, h_sot, stt_on, sot_on)
        if step % cfg.renorm_every == 0 or step == n_steps:
            m /= np.linalg.norm(m, axis=-1, keepdims=True)
        _check_finite(m, step)

        for name, func in integrands.items():
            current = func(m)
            integrals[name] += 0.5 * h * (previous[name] + current)
            previous[name] = current

        if record and (step % cfg.record_every == 0 or step == n_steps):
            times.append(t_offset + step * h)
            states.append(m.copy())

    trajectory = None
    if record:
        t = np.asarray(times)
        shape = (len(t),) + batch_shape
        trajectory = Trajectory(
            t=t,
            m=np.asarray(states),
            J_sot=np.broadcast_to(np.asarray(seg.J_sot, dtype=float), shape).copy(),
            J_stt=np.broadcast_to(np.asarray(seg.J_stt, dtype=float), shape).copy(),
        )

    return SegmentResult(m=m, steps=n_steps, step_size=h, trajectory=trajectory, integrals=integrals)
