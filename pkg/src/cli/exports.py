"""
Експорт даних команд у CSV (дані для графіків, без рендерингу)
"""

from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from core.llg_core import Trajectory
from core.mtj_device import SCurve
from core.param_space import ParamSpace
from core.run_archive import ArchiveRecord
from core.target_dist import TruncatedDistribution
from utils.csv_export import (
    HISTOGRAM_HEADER, PDF_HEADER, SCURVE_HEADER, TRAJECTORY_HEADER, write_csv,
)

PDF_GRID_POINTS = 200


def _unit_suffix(space: Optional[ParamSpace], name: str) -> str:
    if space is None:
        return name
    try:
        unit = space.gene(name).unit
    except KeyError:
        return name
    return f"{name}({unit})" if unit else name


def trajectory_rows(flip: int, trajectory: Trajectory):
    for t, m, j_sot, j_stt in zip(trajectory.t, trajectory.m, trajectory.J_sot, trajectory.J_stt):
        yield (flip, float(t), float(m[0]), float(m[1]), float(m[2]), float(j_sot), float(j_stt))


def export_trajectory(path: Path, flips: Sequence[Trajectory]) -> Path:
    rows = (row for index, trajectory in enumerate(flips) for row in trajectory_rows(index, trajectory))
    return write_csv(path, TRAJECTORY_HEADER, rows)


def export_scurves(path: Path, curves: Sequence[SCurve]) -> Path:
    rows = ((device, point.J, point.p_one, point.n_samples, point.mean_energy)
            for device, sc in enumerate(curves) for point in sc.points)
    return write_csv(path, SCURVE_HEADER, rows)


def export_histogram(path: Path, target: TruncatedDistribution, k: int, counts: np.ndarray) -> Path:
    edges = target.bin_edges(k)
    probs = target.bin_probs(k)
    total = int(np.sum(counts))
    empirical = counts / total if total else np.zeros(len(counts))
    rows = ((edges[i], edges[i + 1], int(counts[i]), float(empirical[i]), float(probs[i]))
            for i in range(len(counts)))
    return write_csv(path, HISTOGRAM_HEADER, rows)


def export_target_pdf(path: Path, target: TruncatedDistribution) -> Path:
    grid = np.linspace(target.a, target.b, PDF_GRID_POINTS)
    grid[-1] = target.b
    return write_csv(path, PDF_HEADER, ((float(x), target.pdf(float(x))) for x in grid))


def export_records(path: Path, records: Sequence[ArchiveRecord], space: Optional[ParamSpace] = None,
                   extra: Optional[Dict[int, Dict[str, float]]] = None) -> Path:
    """Записи архіву (фронт Парето, top-k); extra - додаткові стовпці за eval_index"""
    names: List[str] = list(records[0].params.keys()) if records else (space.names if space else [])
    extra_names: List[str] = sorted({key for values in (extra or {}).values() for key in values})
    header = (["rank", "eval_index", "tag", "generation", "score", "energy(J)", "kl"]
              + [_unit_suffix(space, name) for name in names] + extra_names)

    def rows():
        for rank, record in enumerate(records):
            values = (extra or {}).get(rank, {})
            yield ([rank, record.eval_index, record.tag, record.generation, record.score,
                    record.objectives[0], record.objectives[1]]
                   + [record.params.get(name, float("nan")) for name in names]
                   + [values.get(name, float("nan")) for name in extra_names])

    return write_csv(path, header, rows())


def export_exploration(path: Path, hist: np.ndarray, names: Sequence[str]) -> Path:
    bins = hist.shape[1] if hist.ndim == 2 else 0
    edges = np.linspace(0.0, 1.0, bins + 1)
    rows = ((name, edges[j], edges[j + 1], int(hist[i, j]))
            for i, name in enumerate(names) for j in range(bins))
    return write_csv(path, ("gene", "bin_left(norm)", "bin_right(norm)", "count"), rows)


def export_top_pdfs(path: Path, target: TruncatedDistribution, k: int,
                    histograms: Sequence[np.ndarray], labels: Sequence[str]) -> Path:
    """Емпіричні ймовірності кошиків найкращих конфігурацій поряд з цільовими"""
    edges = target.bin_edges(k)
    probs = target.bin_probs(k)
    normalized = [h / h.sum() if h.sum() else np.zeros(len(h)) for h in histograms]
    header = ["bin_left", "bin_right", "target_prob"] + [f"{label}_prob" for label in labels]
    rows = ([edges[i], edges[i + 1], float(probs[i])] + [float(h[i]) for h in normalized]
            for i in range(len(probs)))
    return write_csv(path, header, rows)


def export_temperature_sweep(path: Path, dT: float, sweep: Sequence[Sequence[float]]) -> Path:
    return write_csv(path, ("t_pulse(s)", "dT(K)", "dP"), ((t_pulse, dT, dP) for t_pulse, dP in sweep))


def export_sensitivity_map(path: Path, ms_fractions: Sequence[float], ki_fractions: Sequence[float],
                           grid: np.ndarray) -> Path:
    """Довгий формат: одна комірка (dM_s, dK_i) на рядок"""
    rows = ((float(d_ms), float(d_ki), float(grid[i, j]))
            for i, d_ms in enumerate(ms_fractions) for j, d_ki in enumerate(ki_fractions))
    return write_csv(path, ("dM_s(frac)", "dK_i(frac)", "dP"), rows)


def export_keff_map(path: Path, rows: Sequence[Sequence]) -> Path:
    return write_csv(path, ("eval_index", "M_s(A/m)", "K_u(J/m^3)", "K_eff(J/m^3)", "valid"), rows)
