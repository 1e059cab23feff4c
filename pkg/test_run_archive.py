"""
Тести архіву оцінювань: JSONL, фронт, top-k, гістограми дослідження
"""

import json

import numpy as np
import pytest

from core.errors import EmptyArchive
from core.metrics import Evaluation, ObjectivePair
from core.run_archive import ArchiveRecord, RunArchive


def _record(index, energy, kl, valid=True, generation=0, genome=None):
    objectives = ObjectivePair(energy, kl) if valid else ObjectivePair.invalid()
    evaluation = Evaluation(objectives=objectives, valid=valid, score=energy * 1e12 * 0.2 + kl if valid else 2e17,
                            params={"alpha": 0.03, "M_s": 1e6}, reason="ok" if valid else "span")
    genome = np.full(2, 0.5) if genome is None else np.asarray(genome)
    return ArchiveRecord.from_evaluation(index, genome, evaluation, "nsga2", generation, seed=7)


def _archive(path=None):
    archive = RunArchive(path)
    archive.append(_record(0, 1e-12, 0.5))
    archive.append(_record(1, 2e-12, 0.1))
    archive.append(_record(2, 3e-12, 0.6))             # домінована
    archive.append(_record(3, 0.0, 0.0, valid=False))  # невалідна
    archive.append(_record(4, 0.5e-12, 0.9, generation=1))
    return archive


def test_pareto_front_ignores_invalid_and_dominated():
    front = _archive().pareto_front()
    assert [record.eval_index for record in front] == [4, 0, 1]


def test_top_k_orders_by_score():
    top = _archive().top_k(2)
    assert [record.eval_index for record in top] == [1, 0]
    assert _archive().best().eval_index == 1


def test_empty_archive_rejected():
    with pytest.raises(EmptyArchive):
        RunArchive().pareto_front()
    with pytest.raises(EmptyArchive):
        RunArchive().top_k(5)


def test_flush_appends_only_new_records(tmp_path):
    path = tmp_path / "archive.jsonl"
    archive = _archive(path)
    archive.flush()
    archive.flush()
    archive.append(_record(5, 1e-12, 0.2))
    archive.flush()
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 6
    assert json.loads(lines[-1])["eval_index"] == 5


def test_load_restores_records(tmp_path):
    path = tmp_path / "archive.jsonl"
    original = _archive(path)
    original.flush()
    loaded = RunArchive.load(path)
    assert len(loaded) == len(original)
    assert loaded.records[3].valid is False
    assert loaded.records[3].reason == "span"
    assert loaded.records[0].objectives == (1e-12, 0.5)
    assert [r.eval_index for r in loaded.pareto_front()] == [4, 0, 1]


def test_exploration_histogram():
    archive = RunArchive()
    for i, genome in enumerate([(0.0, 0.95), (0.05, 0.95), (0.5, 0.95), (1.0, 0.95)]):
        archive.append(_record(i, 1e-12, 0.1, genome=genome))
    hist = archive.exploration_hist(bins=10)
    assert hist.shape == (2, 10)
    assert list(hist[0]) == [2, 0, 0, 0, 0, 1, 0, 0, 0, 1]
    assert hist[1, 9] == 4
    assert archive.param_names() == ["alpha", "M_s"]


def test_best_score_by_generation():
    best = _archive().best_score_by_generation()
    assert set(best) == {0, 1}
    assert best[0] == pytest.approx(0.2 * 2.0 + 0.1)
