"""
Конфігурація запуску
JSON з вкладеними секціями -> dataclass-и; порядок пріоритетів:
значення за замовчуванням < файл < --set секція.ключ=значення та окремі прапорці CLI.
"""

import copy
import json
import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from packaging import version

from core.codesign_env import CEMSettings
from core.device_validator import ValidationSettings
from core.errors import ConfigError
from core.llg_core import DeviceParams, SimConfig
from core.metrics import (
    DeviceModel, EvaluationSettings, MTJDeviceModel, ScoreWeights, SurrogateDeviceModel,
)
from core.mtj_device import Protocol, ProtocolSOT, ProtocolSTT
from core.nsga2 import NSGA2Settings
from core.param_space import ParamSpace, param_space
from core.target_dist import TruncatedDistribution, make_base_distribution
from core.tree_sampler import weight_span

FORMAT_VERSION = "1.0"
OUTPUT_ENV_VAR = "MTJ_CODESIGN_OUTPUT"
DEFAULT_OUTPUT_ROOT = "runs"

DEVICE_KINDS = ("sot", "stt")
COIN_KINDS = ("device", "ideal", "surrogate")
MODEL_KINDS = ("mtj", "surrogate")
OPTIMIZER_KINDS = ("nsga2", "cem")

# Дозволені ключі секції device.protocol
_STT_PROTOCOL_FIELDS = {f.name for f in fields(ProtocolSTT)}
_SOT_PROTOCOL_FIELDS = {f.name for f in fields(ProtocolSOT)}


@dataclass
class DeviceSection:
    kind: str = "sot"
    params: Dict[str, Any] = field(default_factory=dict)    # поля DeviceParams
    protocol: Dict[str, Any] = field(default_factory=dict)  # поля ProtocolSOT / ProtocolSTT


@dataclass
class DistributionSection:
    family: str = "gamma"
    shape: float = 50.0
    rate: float = 311.44
    low: Optional[float] = None
    high: Optional[float] = None
    a: float = 0.10
    b: float = 0.24


@dataclass
class SamplerSection:
    k: int = 8
    coin: str = "device"
    n_samples: int = 100000


@dataclass
class SimulationSection:
    dt: float = 1e-12
    renorm_every: int = 1
    record_every: int = 10
    n_flips: int = 50


@dataclass
class ScurveSection:
    n_points: int = 21
    n_per_point: int = 200
    j_min: Optional[float] = None
    j_max: Optional[float] = None
    spread: float = 0.0
    devices: int = 0
    dT: Optional[float] = None
    n_measure: int = 2000
    pulse_widths: List[float] = field(default_factory=list)  # с, для dP(t_pulse) при dT
    ms_fractions: List[float] = field(default_factory=list)  # відносні зміни M_s
    ki_fractions: List[float] = field(default_factory=list)  # відносні зміни K_i


@dataclass
class EvaluationSection:
    model: str = "mtj"
    n_samples: int = 2500
    k: int = 8
    scurve_points: int = 21
    scurve_flips: int = 200
    final_samples: int = 100000
    top_k: int = 5
    surrogate_noise: float = 0.0
    surrogate_energy: float = 0.0


@dataclass
class OptimizerSection:
    kind: str = "nsga2"
    pop_size: int = 50
    generations: int = 50
    mutation_sigma: float = 0.1
    mutation_prob: Optional[float] = None
    crossover_prob: float = 0.8
    runs: int = 1
    batch: int = 50
    elites: int = 10
    init_sigma: float = 0.3
    min_sigma: float = 0.01
    budget: int = 6000
    iterations: Optional[int] = None
    max_steps: int = 0
    hist_bins: int = 10


@dataclass
class WeightsSection:
    w1: float = 0.2
    w2: float = 1.0


@dataclass
class ParticleSection:
    x0: float = 3.2
    alpha: float = 0.16
    kBT: float = 0.0041
    dt: float = 0.001
    n: int = 100
    traces: int = 1


SECTION_TYPES = {
    "device": DeviceSection,
    "distribution": DistributionSection,
    "sampler": SamplerSection,
    "simulation": SimulationSection,
    "scurve": ScurveSection,
    "validation": ValidationSettings,
    "evaluation": EvaluationSection,
    "optimizer": OptimizerSection,
    "weights": WeightsSection,
    "particle": ParticleSection,
}


def _section_from_dict(cls, data: Any, path: str):
    if not isinstance(data, dict):
        raise ConfigError(f"Секція '{path}' має бути об'єктом JSON")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"Невідомі ключі в секції '{path}': {', '.join(unknown)}")
    try:
        return cls(**data)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Некоректна секція '{path}': {e}") from e


def parse_value(text: str) -> Any:
    """Значення з командного рядка: JSON-літерал або рядок"""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


@dataclass
class RunConfig:
    """Повна конфігурація запуску"""
    format_version: str = FORMAT_VERSION
    seed: int = 0
    threads: int = 1
    output_dir: Optional[str] = None
    run_name: Optional[str] = None
    device: DeviceSection = field(default_factory=DeviceSection)
    distribution: DistributionSection = field(default_factory=DistributionSection)
    sampler: SamplerSection = field(default_factory=SamplerSection)
    simulation: SimulationSection = field(default_factory=SimulationSection)
    scurve: ScurveSection = field(default_factory=ScurveSection)
    validation: ValidationSettings = field(default_factory=ValidationSettings)
    evaluation: EvaluationSection = field(default_factory=EvaluationSection)
    optimizer: OptimizerSection = field(default_factory=OptimizerSection)
    weights: WeightsSection = field(default_factory=WeightsSection)
    particle: ParticleSection = field(default_factory=ParticleSection)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RunConfig':
        if not isinstance(data, dict):
            raise ConfigError("Конфігурація має бути об'єктом JSON")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"Невідомі ключі конфігурації: {', '.join(unknown)}")

        _check_format_version(data.get("format_version", FORMAT_VERSION))
        kwargs: Dict[str, Any] = {}
        for name, value in data.items():
            if name in SECTION_TYPES:
                kwargs[name] = _section_from_dict(SECTION_TYPES[name], value, name)
            else:
                kwargs[name] = value
        return cls(**kwargs)

    @classmethod
    def load(cls, path: Path) -> 'RunConfig':
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except FileNotFoundError as e:
            raise ConfigError(f"Файл конфігурації не знайдено: {path}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"Помилка JSON у {path}: {e}") from e
        return cls.from_dict(data)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def save(self, path: Path):
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(self.to_dict(), f, indent=2, ensure_ascii=False, sort_keys=True)
            f.write("\n")

    def with_overrides(self, assignments: Sequence[str]) -> 'RunConfig':
        """Застосування присвоєнь 'секція.ключ=значення' (вкладеність довільна)"""
        data = copy.deepcopy(self.to_dict())
        for assignment in assignments:
            if "=" not in assignment:
                raise ConfigError(f"Очікується ключ=значення, отримано '{assignment}'")
            key, raw = assignment.split("=", 1)
            path = [part for part in key.strip().split(".") if part]
            if not path:
                raise ConfigError(f"Порожній ключ у '{assignment}'")
            target = data
            for part in path[:-1]:
                if not isinstance(target.get(part), dict):
                    raise ConfigError(f"Невідома секція '{part}' у '{assignment}'")
                target = target[part]
            target[path[-1]] = parse_value(raw)
        return RunConfig.from_dict(data)

    def validation_errors(self) -> List[str]:
        errors = []
        if self.device.kind not in DEVICE_KINDS:
            errors.append(f"device.kind має бути одним з {DEVICE_KINDS}")
        if self.sampler.coin not in COIN_KINDS:
            errors.append(f"sampler.coin має бути одним з {COIN_KINDS}")
        if self.evaluation.model not in MODEL_KINDS:
            errors.append(f"evaluation.model має бути одним з {MODEL_KINDS}")
        if self.optimizer.kind not in OPTIMIZER_KINDS:
            errors.append(f"optimizer.kind має бути одним з {OPTIMIZER_KINDS}")
        if self.threads < 1:
            errors.append("threads має бути >= 1")
        if not 1 <= self.sampler.k <= 16 or not 1 <= self.evaluation.k <= 16:
            errors.append("k має бути в [1, 16]")
        if self.optimizer.runs < 1:
            errors.append("optimizer.runs має бути >= 1")
        if errors:
            return errors

        try:
            params = self.device_params()
            proto = self.protocol()
            self.sim_config()
            self.target()
        except (TypeError, ValueError) as e:
            return [str(e)]

        # діапазони оптимізованих параметрів
        values = {name: getattr(params, name) for name in ("alpha", "K_i", "M_s", "R_p", "eta")}
        values["t_pulse"] = proto.t_pulse
        if isinstance(proto, ProtocolSOT):
            values["J_sot"] = abs(proto.J_sot)
        errors.extend(self.param_space().range_errors(values))
        return errors

    def validate(self) -> 'RunConfig':
        errors = self.validation_errors()
        if errors:
            raise ConfigError("Некоректна конфігурація:\n  " + "\n  ".join(errors))
        return self

    def device_params(self) -> DeviceParams:
        params = dict(self.device.params)
        if "demag" in params:
            params["demag"] = tuple(params["demag"])
        unknown = set(params) - {f.name for f in fields(DeviceParams)}
        if unknown:
            raise ConfigError(f"Невідомі параметри пристрою: {', '.join(sorted(unknown))}")
        return DeviceParams(**params)

    def protocol(self) -> Protocol:
        allowed = _SOT_PROTOCOL_FIELDS if self.device.kind == "sot" else _STT_PROTOCOL_FIELDS
        unknown = set(self.device.protocol) - allowed
        if unknown:
            raise ConfigError(f"Невідомі параметри протоколу {self.device.kind}: {', '.join(sorted(unknown))}")
        cls = ProtocolSOT if self.device.kind == "sot" else ProtocolSTT
        return cls(**self.device.protocol)

    def sim_config(self, seed: Optional[int] = None) -> SimConfig:
        return SimConfig(dt=self.simulation.dt, seed=self.seed if seed is None else seed,
                         renorm_every=self.simulation.renorm_every,
                         record_every=self.simulation.record_every)

    def target(self) -> TruncatedDistribution:
        d = self.distribution
        base = make_base_distribution(d.family, shape=d.shape, rate=d.rate, low=d.low, high=d.high)
        return TruncatedDistribution(base, d.a, d.b)

    def param_space(self) -> ParamSpace:
        return param_space(self.device.kind)

    def evaluation_settings(self) -> EvaluationSettings:
        e = self.evaluation
        return EvaluationSettings(n_samples=e.n_samples, k=e.k, scurve_points=e.scurve_points,
                                  scurve_flips=e.scurve_flips)

    def score_weights(self) -> ScoreWeights:
        return ScoreWeights(self.weights.w1, self.weights.w2)

    def device_model(self) -> DeviceModel:
        if self.evaluation.model == "surrogate":
            return SurrogateDeviceModel(self.device_params(), self.protocol(),
                                        noise_scale=self.evaluation.surrogate_noise,
                                        energy_scale=self.evaluation.surrogate_energy)
        return MTJDeviceModel(self.device_params(), self.protocol(), self.sim_config(),
                              replace(self.validation), self.evaluation.scurve_points,
                              self.evaluation.scurve_flips, self.required_weight_span())

    def required_weight_span(self) -> Tuple[float, float]:
        target = self.target()
        return weight_span(target.cdf, target.a, target.b, self.evaluation.k)

    def nsga2_settings(self, seed: int) -> NSGA2Settings:
        o = self.optimizer
        return NSGA2Settings(pop_size=o.pop_size, generations=o.generations, mutation_sigma=o.mutation_sigma,
                             mutation_prob=o.mutation_prob, crossover_prob=o.crossover_prob, seed=seed)

    def cem_settings(self, seed: int) -> CEMSettings:
        o = self.optimizer
        return CEMSettings(batch=o.batch, elites=o.elites, init_sigma=o.init_sigma, min_sigma=o.min_sigma,
                           budget=o.budget, iterations=o.iterations, seed=seed)


def _check_format_version(value: Any):
    try:
        requested = version.Version(str(value))
    except version.InvalidVersion as e:
        raise ConfigError(f"Некоректна format_version: {value}") from e
    current = version.Version(FORMAT_VERSION)
    if requested.major != current.major or requested > current:
        raise ConfigError(f"format_version {requested} не підтримується (поточна {current})")


def resolve_output_root(cli_output: Optional[str], config: RunConfig) -> Path:
    """--output > output_dir з конфігурації > змінна середовища > 'runs'"""
    if cli_output:
        return Path(cli_output)
    if config.output_dir:
        return Path(config.output_dir)
    return Path(os.environ.get(OUTPUT_ENV_VAR, DEFAULT_OUTPUT_ROOT))

