"""
NSGA-II над нормалізованим простором параметрів
Бінарний турнір за (ранг, скупчення), рівномірне схрещування, гаусова мутація
з обмеженням до [0, 1] та (mu + lambda) відбір.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from core.errors import EvaluatorFailure
from core.metrics import Evaluation
from core.pareto import crowding_distance, fast_nondominated_sort
from core.run_archive import ArchiveRecord, RunArchive
from utils.performance import EvaluationPool
from utils.random_streams import STREAM_VARIATION, derive_stream
from utils.simple_logger import get_logger_instance

Evaluator = Callable[[np.ndarray, int], Evaluation]


@dataclass
class NSGA2Settings:
    pop_size: int = 50
    generations: int = 50
    mutation_sigma: float = 0.1
    mutation_prob: Optional[float] = None  # None -> 1/d
    crossover_prob: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if self.pop_size < 2:
            raise ValueError(f"Розмір популяції має бути >= 2, отримано {self.pop_size}")
        if self.generations < 0:
            raise ValueError(f"Кількість поколінь має бути >= 0, отримано {self.generations}")


@dataclass(eq=False)
class Individual:
    genome: np.ndarray
    evaluation: Evaluation
    eval_index: int
    rank: int = 0
    crowding: float = 0.0

    @property
    def objectives(self):
        return self.evaluation.objectives.as_tuple()

    @property
    def valid(self) -> bool:
        return self.evaluation.valid

    @property
    def score(self) -> float:
        return self.evaluation.score


@dataclass
class NSGA2Result:
    population: List[Individual]
    archive: RunArchive
    best_scores: List[float] = field(default_factory=list)

    def front(self) -> List[Individual]:
        return [ind for ind in self.population if ind.rank == 0]


def assign_rank_and_crowding(individuals: List[Individual]) -> List[List[Individual]]:
    fronts = fast_nondominated_sort([ind.objectives for ind in individuals])
    result = []
    for rank, front in enumerate(fronts):
        members = [individuals[i] for i in front]
        distances = crowding_distance([ind.objectives for ind in members])
        for ind, distance in zip(members, distances):
            ind.rank = rank
            ind.crowding = float(distance)
        result.append(members)
    return result


def _crowded_key(ind: Individual):
    return ind.rank, -ind.crowding


def environmental_selection(pool: List[Individual], mu: int) -> List[Individual]:
    """
    (mu + lambda) відбір за фронтами й скупченням

    Особина з найменшим Config_Score пулу завжди виживає: якщо обрізання
    фронту її відкинуло, вона заміщує найщільнішу особину останнього фронту.
    """
    fronts = assign_rank_and_crowding(pool)
    survivors: List[Individual] = []
    last_front: List[Individual] = []
    for front in fronts:
        if len(survivors) + len(front) <= mu:
            survivors.extend(front)
            last_front = front
            if len(survivors) == mu:
                break
            continue
        needed = mu - len(survivors)
        chosen = sorted(front, key=lambda ind: -ind.crowding)[:needed]
        survivors.extend(chosen)
        last_front = chosen
        break

    best = min(pool, key=lambda ind: (ind.score, ind.eval_index))
    if all(ind is not best for ind in survivors):
        victim = min(last_front, key=lambda ind: (ind.crowding, -ind.eval_index))
        position = next(i for i, ind in enumerate(survivors) if ind is victim)
        survivors[position] = best
    return survivors


def tournament(population: List[Individual], rng: np.random.Generator) -> Individual:
    i, j = rng.integers(len(population), size=2)
    a, b = population[i], population[j]
    return a if _crowded_key(a) <= _crowded_key(b) else b


def uniform_crossover(a: np.ndarray, b: np.ndarray, prob: float, rng: np.random.Generator):
    if rng.random() >= prob:
        return a.copy(), b.copy()
    mask = rng.random(a.shape) < 0.5
    return np.where(mask, a, b), np.where(mask, b, a)


def gaussian_mutation(genome: np.ndarray, sigma: float, prob: float,
                      rng: np.random.Generator) -> np.ndarray:
    mask = rng.random(genome.shape) < prob
    noise = rng.normal(0.0, sigma, genome.shape)
    return np.clip(genome + mask * noise, 0.0, 1.0)


class _Evaluations:
    """Оцінювання пакета геномів з послідовними індексами та записом в архів"""

    def __init__(self, evaluate: Evaluator, archive: RunArchive, pool: EvaluationPool,
                 seed: int, tag: str):
        self.evaluate = evaluate
        self.archive = archive
        self.pool = pool
        self.seed = seed
        self.tag = tag
        self.counter = 0

    def run(self, genomes: List[np.ndarray], generation: int) -> List[Individual]:
        indices = list(range(self.counter, self.counter + len(genomes)))
        try:
            evaluations = self.pool.starmap(self.evaluate, list(zip(genomes, indices)))
        except EvaluatorFailure:
            self.archive.flush()
            raise
        except Exception as e:
            self.archive.flush()
            raise EvaluatorFailure(f"Оцінювач завершився помилкою у поколінні {generation}: {e}") from e
        self.counter += len(genomes)

        individuals = []
        for genome, index, evaluation in zip(genomes, indices, evaluations):
            self.archive.append(ArchiveRecord.from_evaluation(index, genome, evaluation, self.tag,
                                                              generation, self.seed))
            individuals.append(Individual(genome=np.asarray(genome, dtype=float), evaluation=evaluation,
                                          eval_index=index))
        return individuals


def nsga2_run(settings: NSGA2Settings, d: int, evaluate: Evaluator,
              archive: Optional[RunArchive] = None, pool: Optional[EvaluationPool] = None,
              tag: str = "nsga2",
              on_generation: Optional[Callable[[int, List[Individual]], None]] = None) -> NSGA2Result:
    """
    Повний цикл NSGA-II

    Архів містить pop_size * (generations + 1) записів; після кожного покоління
    він дописується у файл, тож переривання втрачає щонайбільше одне покоління.
    """
    logger = get_logger_instance().get_logger()
    archive = archive if archive is not None else RunArchive()
    pool = pool or EvaluationPool(1)
    rng = derive_stream(settings.seed, STREAM_VARIATION)
    mutation_prob = settings.mutation_prob if settings.mutation_prob is not None else 1.0 / d
    evaluations = _Evaluations(evaluate, archive, pool, settings.seed, tag)

    genomes = [rng.random(d) for _ in range(settings.pop_size)]
    population = evaluations.run(genomes, generation=0)
    population = environmental_selection(population, settings.pop_size)
    archive.flush()

    best_scores = [min(ind.score for ind in population)]
    logger.info(f"[{tag}] покоління 0: найкращий Config_Score {best_scores[-1]:.6g}, "
                f"валідних {sum(ind.valid for ind in population)}/{len(population)}")
    if on_generation:
        on_generation(0, population)

    for generation in range(1, settings.generations + 1):
        children: List[np.ndarray] = []
        while len(children) < settings.pop_size:
            parent_a = tournament(population, rng)
            parent_b = tournament(population, rng)
            child_a, child_b = uniform_crossover(parent_a.genome, parent_b.genome,
                                                 settings.crossover_prob, rng)
            children.append(gaussian_mutation(child_a, settings.mutation_sigma, mutation_prob, rng))
            children.append(gaussian_mutation(child_b, settings.mutation_sigma, mutation_prob, rng))
        children = children[:settings.pop_size]

        offspring = evaluations.run(children, generation)
        population = environmental_selection(population + offspring, settings.pop_size)
        archive.flush()

        best_scores.append(min(ind.score for ind in population))
        logger.info(f"[{tag}] покоління {generation}/{settings.generations}: "
                    f"найкращий Config_Score {best_scores[-1]:.6g}, "
                    f"фронт {sum(ind.rank == 0 for ind in population)}")
        if on_generation:
            on_generation(generation, population)

    return NSGA2Result(population=population, archive=archive, best_scores=best_scores)


def random_search(n: int, d: int, evaluate: Evaluator, seed: int) -> List[Individual]:
    """Базова лінія: n рівномірно випадкових геномів"""
    rng = derive_stream(seed, STREAM_VARIATION)
    return [Individual(genome=g, evaluation=evaluate(g, i), eval_index=i)
            for i, g in enumerate(rng.random((n, d)))]


def best_valid_score(individuals: List[Individual]) -> float:
    scores = [ind.score for ind in individuals if ind.valid]
    return min(scores) if scores else math.inf
