"""
Архів оцінювань запуску
Кожне оцінювання - один рядок JSON у archive.jsonl; архів лише доповнюється.
"""

import json
import math
import threading
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from core.errors import EmptyArchive
from core.metrics import Evaluation
from core.pareto import pareto_indices_2d


@dataclass
class ArchiveRecord:
    """Запис одного оцінювання"""
    eval_index: int
    genome: List[float]
    params: Dict[str, float]
    objectives: Tuple[float, float]
    valid: bool
    score: float
    tag: str = ""
    generation: int = 0
    seed: int = 0
    reason: str = "ok"

    @classmethod
    def from_evaluation(cls, eval_index: int, genome: np.ndarray, evaluation: Evaluation,
                        tag: str, generation: int, seed: int) -> 'ArchiveRecord':
        return cls(
            eval_index=eval_index,
            genome=[float(g) for g in genome],
            params={name: float(value) for name, value in evaluation.params.items()},
            objectives=evaluation.objectives.as_tuple(),
            valid=evaluation.valid,
            score=float(evaluation.score),
            tag=tag,
            generation=generation,
            seed=seed,
            reason=evaluation.reason,
        )

    def to_json(self) -> str:
        data = asdict(self)
        data["objectives"] = list(self.objectives)
        return json.dumps(data, ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_dict(cls, data: Dict) -> 'ArchiveRecord':
        data = dict(data)
        data["objectives"] = tuple(data["objectives"])
        return cls(**data)


class RunArchive:
    """Архів оцінювань; append серіалізовано, flush дописує нові записи у файл"""

    def __init__(self, path: Optional[Path] = None):
        self.path = Path(path) if path is not None else None
        self.records: List[ArchiveRecord] = []
        self._flushed = 0
        self._lock = threading.Lock()

    def append(self, record: ArchiveRecord):
        with self._lock:
            self.records.append(record)

    def flush(self):
        """Дописати в archive.jsonl записи, яких там ще немає"""
        if self.path is None:
            return
        with self._lock:
            pending = self.records[self._flushed:]
            if not pending:
                return
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, 'a', encoding='utf-8') as f:
                for record in pending:
                    f.write(record.to_json() + "\n")
            self._flushed = len(self.records)

    @classmethod
    def load(cls, path: Path) -> 'RunArchive':
        archive = cls(path)
        with open(path, 'r', encoding='utf-8') as f:
            for line in f:
                line = line.strip()
                if line:
                    archive.records.append(ArchiveRecord.from_dict(json.loads(line)))
        archive._flushed = len(archive.records)
        return archive

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[ArchiveRecord]:
        return iter(self.records)

    def _require_records(self):
        if not self.records:
            raise EmptyArchive("Архів не містить жодного оцінювання")

    def valid_records(self) -> List[ArchiveRecord]:
        return [record for record in self.records if record.valid]

    def pareto_front(self) -> List[ArchiveRecord]:
        """Недомінована множина валідних оцінювань, упорядкована за енергією"""
        self._require_records()
        valid = self.valid_records()
        indices = pareto_indices_2d([record.objectives for record in valid])
        front = [valid[i] for i in indices]
        return sorted(front, key=lambda record: (record.objectives[0], record.objectives[1], record.eval_index))

    def top_k(self, k: int) -> List[ArchiveRecord]:
        """k найкращих валідних оцінювань за Config_Score"""
        self._require_records()
        valid = sorted(self.valid_records(), key=lambda record: (record.score, record.eval_index))
        return valid[:k]

    def best(self) -> Optional[ArchiveRecord]:
        top = self.top_k(1)
        return top[0] if top else None

    def exploration_hist(self, bins: int = 10) -> np.ndarray:
        """Гістограми нормалізованих значень генів (форма: гени x кошики)"""
        self._require_records()
        genomes = np.array([record.genome for record in self.records], dtype=float)
        return np.array([np.histogram(genomes[:, j], bins=bins, range=(0.0, 1.0))[0]
                         for j in range(genomes.shape[1])])

    def param_names(self) -> List[str]:
        self._require_records()
        return list(self.records[0].params.keys())

    def best_score_by_generation(self) -> Dict[int, float]:
        """Найкращий Config_Score серед оцінювань кожного покоління"""
        best: Dict[int, float] = {}
        for record in self.records:
            best[record.generation] = min(best.get(record.generation, math.inf), record.score)
        return best
