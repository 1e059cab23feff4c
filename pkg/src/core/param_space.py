"""
Нормалізований простір параметрів для оптимізації
Кожен ген лежить у [0, 1] і лінійно відображається на діапазон параметра.
"""

from dataclasses import dataclass, fields, replace
from typing import Dict, List, Sequence, Tuple

import numpy as np

from core.llg_core import DeviceParams
from core.mtj_device import Protocol


@dataclass(frozen=True)
class Gene:
    name: str
    low: float
    high: float
    unit: str = ""

    def __post_init__(self):
        if not self.low < self.high:
            raise ValueError(f"Ген {self.name}: потрібно low < high")

    def decode(self, g: float) -> float:
        return self.low + float(np.clip(g, 0.0, 1.0)) * (self.high - self.low)

    def encode(self, value: float) -> float:
        return (value - self.low) / (self.high - self.low)


_COMMON_GENES = (
    Gene("alpha", 0.01, 0.1),
    Gene("K_i", 0.2e-3, 1e-3, "J/m^2"),
    Gene("M_s", 0.3e6, 2e6, "A/m"),
    Gene("R_p", 500.0, 50000.0, "Ohm"),
)
_PULSE_GENES = (
    Gene("t_pulse", 0.5e-9, 75e-9, "s"),
    Gene("t_relax", 0.5e-9, 75e-9, "s"),
)

SOT_GENES = _COMMON_GENES + (
    Gene("eta", 0.1, 2.0),
    Gene("J_sot", 0.01e12, 5e12, "A/m^2"),
) + _PULSE_GENES

STT_GENES = _COMMON_GENES + _PULSE_GENES

_DEVICE_FIELDS = {f.name for f in fields(DeviceParams)}


@dataclass(frozen=True)
class ParamSpace:
    """Упорядкований набір генів для типу пристрою"""
    kind: str
    genes: Tuple[Gene, ...]

    @property
    def d(self) -> int:
        return len(self.genes)

    @property
    def names(self) -> List[str]:
        return [gene.name for gene in self.genes]

    def gene(self, name: str) -> Gene:
        for gene in self.genes:
            if gene.name == name:
                return gene
        raise KeyError(name)

    def decode(self, genome: Sequence[float]) -> Dict[str, float]:
        """Геном -> значення параметрів (компоненти обмежуються [0, 1])"""
        genome = np.asarray(genome, dtype=float)
        if genome.shape != (self.d,):
            raise ValueError(f"Геном має містити {self.d} компонент, отримано {genome.shape}")
        return {gene.name: gene.decode(g) for gene, g in zip(self.genes, genome)}

    def encode(self, values: Dict[str, float]) -> np.ndarray:
        return np.array([gene.encode(values[gene.name]) for gene in self.genes])

    def range_errors(self, values: Dict[str, float]) -> List[str]:
        """Параметри поза діапазонами простору"""
        errors = []
        for gene in self.genes:
            if gene.name in values and not gene.low <= values[gene.name] <= gene.high:
                errors.append(f"{gene.name}={values[gene.name]} поза [{gene.low}, {gene.high}]")
        return errors


def param_space(kind: str) -> ParamSpace:
    kind = kind.lower()
    if kind == "sot":
        return ParamSpace("sot", SOT_GENES)
    if kind == "stt":
        return ParamSpace("stt", STT_GENES)
    raise ValueError(f"Невідомий тип пристрою: {kind}")


def apply_overrides(values: Dict[str, float], base_params: DeviceParams,
                    base_proto: Protocol) -> Tuple[DeviceParams, Protocol]:
    """Розподіл значень між параметрами пристрою та протоколу"""
    device_changes = {name: value for name, value in values.items() if name in _DEVICE_FIELDS}
    proto_changes = {name: value for name, value in values.items() if name not in _DEVICE_FIELDS}
    if "J_sot" in proto_changes:
        # діапазон задає модуль струму, знак береться з базового протоколу
        sign = -1.0 if getattr(base_proto, "J_sot", -1.0) < 0.0 else 1.0
        proto_changes["J_sot"] = sign * abs(proto_changes["J_sot"])
    return base_params.replace(**device_changes), replace(base_proto, **proto_changes)
