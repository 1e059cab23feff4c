"""
Середовище codesign з інтерфейсом reset/step та агент методу крос-ентропії
Дія - нормалізований геном; спостереження - геном, поточний та найкращий Config_Score.
Винагорода: -1 за невалідну конфігурацію, +1 за строге покращення найкращого, інакше 0.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from core.metrics import Evaluation
from core.run_archive import ArchiveRecord, RunArchive
from utils.performance import EvaluationPool
from utils.random_streams import STREAM_CEM, derive_stream
from utils.simple_logger import get_logger_instance

Evaluator = Callable[[np.ndarray, int], Evaluation]


@dataclass
class EnvState:
    genome: np.ndarray
    score: float = math.inf
    best: float = math.inf
    step: int = 0


@dataclass
class StepInfo:
    evaluation: Evaluation
    eval_index: int
    improved: bool
    done: bool


class CodesignEnv:
    """Середовище над простором параметрів розмірності d"""

    def __init__(self, d: int, evaluate: Evaluator, archive: Optional[RunArchive] = None,
                 max_steps: int = 0, seed: int = 0, tag: str = "env"):
        self.d = d
        self.evaluate = evaluate
        self.archive = archive if archive is not None else RunArchive()
        self.max_steps = max_steps
        self.seed = seed
        self.tag = tag
        self.eval_counter = 0
        self.episode = 0
        self.state = EnvState(genome=np.full(d, 0.5))

    def reset(self) -> np.ndarray:
        """Початковий стан: геном 0.5, поточний і найкращий score = +inf"""
        if self.eval_counter:
            self.episode += 1
        self.state = EnvState(genome=np.full(self.d, 0.5))
        return self.observation()

    def observation(self) -> np.ndarray:
        return np.concatenate((self.state.genome, [self.state.score, self.state.best]))

    def step(self, action: np.ndarray) -> Tuple[np.ndarray, float, bool, StepInfo]:
        action = np.clip(np.asarray(action, dtype=float), 0.0, 1.0)
        index = self.eval_counter
        self.eval_counter += 1
        return self.record(action, self.evaluate(action, index), index)

    def record(self, action: np.ndarray, evaluation: Evaluation,
               eval_index: int) -> Tuple[np.ndarray, float, bool, StepInfo]:
        """Застосування вже обчисленої оцінки дії (для пакетного оцінювання)"""
        state = self.state
        improved = False
        if not evaluation.valid:
            reward = -1.0
        elif evaluation.score < state.best:
            reward = 1.0
            state.best = evaluation.score
            improved = True
        else:
            reward = 0.0
        state.genome = np.asarray(action, dtype=float)
        state.score = evaluation.score
        state.step += 1
        done = self.max_steps > 0 and state.step >= self.max_steps

        self.archive.append(ArchiveRecord.from_evaluation(eval_index, action, evaluation, self.tag,
                                                          self.episode, self.seed))
        return self.observation(), reward, done, StepInfo(evaluation, eval_index, improved, done)

    def step_batch(self, actions: List[np.ndarray],
                   pool: Optional[EvaluationPool] = None) -> List[Tuple[np.ndarray, float, bool, StepInfo]]:
        """Паралельне оцінювання дій і послідовне застосування в порядку пакета"""
        pool = pool or EvaluationPool(1)
        actions = [np.clip(np.asarray(a, dtype=float), 0.0, 1.0) for a in actions]
        indices = list(range(self.eval_counter, self.eval_counter + len(actions)))
        self.eval_counter += len(actions)
        evaluations = pool.starmap(self.evaluate, list(zip(actions, indices)))

        results = []
        for action, index, evaluation in zip(actions, indices, evaluations):
            if self.max_steps > 0 and self.state.step >= self.max_steps:
                self.reset()
            results.append(self.record(action, evaluation, index))
        return results


@dataclass
class CEMSettings:
    batch: int = 50
    elites: int = 10
    init_sigma: float = 0.3
    min_sigma: float = 0.01
    budget: int = 6000
    iterations: Optional[int] = None  # якщо задано, бюджет = iterations * batch
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.elites <= self.batch:
            raise ValueError(f"Потрібно 1 <= elites <= batch, отримано {self.elites}, {self.batch}")

    @property
    def total_evaluations(self) -> int:
        return self.iterations * self.batch if self.iterations is not None else self.budget


@dataclass
class CEMResult:
    best_genome: Optional[np.ndarray]
    best_score: float
    best_evaluation: Optional[Evaluation]
    archive: RunArchive
    mean_history: List[np.ndarray] = field(default_factory=list)
    sigma_history: List[np.ndarray] = field(default_factory=list)
    rewards: List[float] = field(default_factory=list)

    def reward_counts(self) -> Dict[float, int]:
        counts: Dict[float, int] = {}
        for reward in self.rewards:
            counts[reward] = counts.get(reward, 0) + 1
        return counts


def cem_agent(env: CodesignEnv, settings: CEMSettings, pool: Optional[EvaluationPool] = None,
              on_iteration: Optional[Callable[[int, CEMResult], None]] = None) -> CEMResult:
    """
    Агент методу крос-ентропії

    Вибірки з діагонального гауса, обмежені [0, 1]; середнє та sigma
    перераховуються за elites найкращими за Config_Score (sigma не менша за min_sigma).
    """
    logger = get_logger_instance().get_logger()
    rng = derive_stream(settings.seed, STREAM_CEM)
    mean = np.full(env.d, 0.5)
    sigma = np.full(env.d, settings.init_sigma)
    result = CEMResult(best_genome=None, best_score=math.inf, best_evaluation=None, archive=env.archive,
                       mean_history=[mean.copy()], sigma_history=[sigma.copy()])

    env.reset()
    remaining = settings.total_evaluations
    iteration = 0
    while remaining > 0:
        n = min(settings.batch, remaining)
        samples = np.clip(mean + sigma * rng.standard_normal((n, env.d)), 0.0, 1.0)
        steps = env.step_batch(list(samples), pool)
        scores = np.array([info.evaluation.score for _, _, _, info in steps])
        result.rewards.extend(reward for _, reward, _, _ in steps)

        for sample, (_, _, _, info) in zip(samples, steps):
            if info.evaluation.valid and info.evaluation.score < result.best_score:
                result.best_score = info.evaluation.score
                result.best_genome = sample.copy()
                result.best_evaluation = info.evaluation

        elite = samples[np.argsort(scores, kind="stable")[:min(settings.elites, n)]]
        mean = elite.mean(axis=0)
        sigma = np.maximum(elite.std(axis=0), settings.min_sigma)
        result.mean_history.append(mean.copy())
        result.sigma_history.append(sigma.copy())

        remaining -= n
        iteration += 1
        env.archive.flush()
        logger.info(f"[cem] ітерація {iteration}: найкращий Config_Score {result.best_score:.6g}, "
                    f"залишилось оцінювань {remaining}")
        if on_iteration:
            on_iteration(iteration, result)

    return result
