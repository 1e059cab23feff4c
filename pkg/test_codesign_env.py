"""
Тести середовища codesign та агента методу крос-ентропії
"""

import math

import numpy as np
import pytest

from core.codesign_env import CEMSettings, CodesignEnv, cem_agent
from core.metrics import Evaluation, EvaluationSettings, GenomeEvaluator, ObjectivePair, ScoreWeights, \
    SurrogateDeviceModel
from core.param_space import param_space
from core.target_dist import GammaSpec, TruncatedDistribution
from utils.performance import EvaluationPool
from utils.random_streams import STREAM_CEM, derive_stream

TARGET = TruncatedDistribution(GammaSpec(50.0, 311.44), 0.10, 0.24)
OPTIMUM = 0.3


def quadratic(genome, eval_index):
    score = float(np.sum((np.asarray(genome) - OPTIMUM) ** 2))
    return Evaluation(objectives=ObjectivePair(score, score), valid=True, score=score)


class ScriptedEvaluator:
    """Повертає заздалегідь задані (валідність, score) за порядком виклику"""

    def __init__(self, script):
        self.script = list(script)

    def __call__(self, genome, eval_index):
        valid, score = self.script[eval_index]
        if not valid:
            return Evaluation.invalid("span")
        return Evaluation(objectives=ObjectivePair(score, score), valid=True, score=score)


def test_reset_observation():
    env = CodesignEnv(3, quadratic)
    obs = env.reset()
    np.testing.assert_array_equal(obs[:3], [0.5, 0.5, 0.5])
    assert math.isinf(obs[3]) and math.isinf(obs[4])


def test_reward_rules():
    env = CodesignEnv(2, ScriptedEvaluator([(True, 5.0), (False, 0.0), (True, 5.0), (True, 4.0), (True, 6.0)]))
    env.reset()
    rewards = [env.step(np.full(2, 0.5))[1] for _ in range(5)]
    # перша валідна, невалідна, нічия, покращення, погіршення
    assert rewards == [1.0, -1.0, 0.0, 1.0, 0.0]
    obs = env.observation()
    assert obs[-1] == 4.0
    assert obs[-2] == 6.0


def test_actions_are_clipped():
    env = CodesignEnv(2, quadratic)
    env.reset()
    obs, _, _, info = env.step(np.array([-1.0, 2.0]))
    np.testing.assert_array_equal(obs[:2], [0.0, 1.0])
    assert info.eval_index == 0


def test_reward_audit_with_surrogate():
    """500 кроків: кожна винагорода відповідає правилу щодо поточного найкращого"""
    space = param_space("sot")
    evaluator = GenomeEvaluator(space, SurrogateDeviceModel(noise_scale=0.1, energy_scale=1e-13), TARGET,
                                EvaluationSettings(n_samples=200, k=3), ScoreWeights(), seed=11)
    env = CodesignEnv(space.d, evaluator)
    env.reset()
    rng = np.random.default_rng(0)
    best = math.inf
    seen_invalid = seen_improved = False
    for _ in range(500):
        _, reward, _, info = env.step(rng.random(space.d))
        evaluation = info.evaluation
        if not evaluation.valid:
            assert reward == -1.0
            seen_invalid = True
        elif evaluation.score < best:
            assert reward == 1.0 and info.improved
            best = evaluation.score
            seen_improved = True
        else:
            assert reward == 0.0
    assert seen_invalid and seen_improved
    assert len(env.archive) == 500


def test_episode_boundaries():
    env = CodesignEnv(2, quadratic, max_steps=3)
    env.reset()
    results = env.step_batch([np.full(2, 0.1)] * 7)
    assert [done for _, _, done, _ in results] == [False, False, True, False, False, True, False]
    assert [record.generation for record in env.archive] == [0, 0, 0, 1, 1, 1, 2]
    assert [record.eval_index for record in env.archive] == list(range(7))


def test_cem_converges_on_quadratic():
    env = CodesignEnv(3, quadratic)
    result = cem_agent(env, CEMSettings(batch=50, elites=10, iterations=30, seed=4))
    np.testing.assert_allclose(result.best_genome, OPTIMUM, atol=0.05)
    np.testing.assert_allclose(result.mean_history[-1], OPTIMUM, atol=0.05)
    assert result.best_score < 0.0075


def test_cem_all_elites_gives_batch_mean():
    settings = CEMSettings(batch=8, elites=8, init_sigma=0.2, iterations=1, seed=9)
    result = cem_agent(CodesignEnv(4, quadratic), settings)
    rng = derive_stream(9, STREAM_CEM)
    samples = np.clip(0.5 + 0.2 * rng.standard_normal((8, 4)), 0.0, 1.0)
    np.testing.assert_allclose(result.mean_history[1], samples.mean(axis=0))
    np.testing.assert_allclose(result.sigma_history[1], np.maximum(samples.std(axis=0), settings.min_sigma))


def test_cem_spends_exact_budget():
    env = CodesignEnv(2, quadratic)
    result = cem_agent(env, CEMSettings(batch=10, elites=3, budget=25, seed=0))
    assert len(result.archive) == 25
    assert len(result.mean_history) == 4
    assert sum(result.reward_counts().values()) == 25


def test_cem_is_deterministic_across_threads():
    settings = CEMSettings(batch=6, elites=2, iterations=3, seed=2)
    serial = cem_agent(CodesignEnv(3, quadratic), settings)
    threaded = cem_agent(CodesignEnv(3, quadratic), settings, pool=EvaluationPool(3))
    assert [r.to_json() for r in serial.archive] == [r.to_json() for r in threaded.archive]


def test_cem_settings_validation():
    with pytest.raises(ValueError):
        CEMSettings(batch=5, elites=6)
    assert CEMSettings(batch=5, elites=2, iterations=4).total_evaluations == 20
