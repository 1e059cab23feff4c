"""
Експорт даних у CSV
Заголовки містять одиниці; наявні файли не перезаписуються.
"""

import csv
from pathlib import Path
from typing import Iterable, List, Sequence


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """Запис CSV з заголовком; повертає шлях"""
    path = Path(path)
    if path.exists():
        raise FileExistsError(f"Файл вже існує: {path}")
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format(value) for value in row])
    return path


def read_csv(path: Path) -> List[List[str]]:
    with open(path, 'r', encoding='utf-8', newline='') as f:
        return list(csv.reader(f))


def _format(value):
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "item"):
        # скаляри numpy
        return _format(value.item())
    return value


TRAJECTORY_HEADER = ("flip", "t(s)", "m_x", "m_y", "m_z", "J_sot(A/m^2)", "J_stt(A/m^2)")
SCURVE_HEADER = ("device", "J(A/m^2)", "p_one", "n_samples", "mean_energy(J)")
HISTOGRAM_HEADER = ("bin_left", "bin_right", "count", "empirical_prob", "target_prob")
PDF_HEADER = ("x", "target_pdf")
