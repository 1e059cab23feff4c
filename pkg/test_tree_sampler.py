"""
Тести генератора вибірок за деревом CDF
"""

import numpy as np
import pytest
from scipy import stats

from core.errors import ZeroMassInterval
from core.metrics import SurrogateCoinSource, kl_divergence
from core.target_dist import GammaSpec, TruncatedDistribution, UniformSpec
from core.tree_sampler import (
    IdealCoinSource, TreeState, bin_midpoints, coin_weight, path_probabilities, sample, sample_many,
    weight_span,
)

TARGET = TruncatedDistribution(GammaSpec(50.0, 311.44), 0.10, 0.24)


class ConstantCoinSource(IdealCoinSource):
    """Монетка, що завжди випадає заданим бітом"""

    def __init__(self, bit: int):
        super().__init__(np.random.default_rng(0))
        self.bit = bit

    def flip_many(self, p_targets):
        p_targets = np.asarray(p_targets, dtype=float)
        self.flip_count += p_targets.size
        return np.full(p_targets.shape, self.bit, dtype=np.int8)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_path_probabilities_equal_bin_masses(k):
    """Добуток ваг уздовж шляху дорівнює масі кошика"""
    probs = path_probabilities(TARGET.cdf, TARGET.a, TARGET.b, k)
    np.testing.assert_allclose(probs, TARGET.bin_probs(k), atol=1e-12)


def test_ideal_coins_reproduce_target():
    coins = IdealCoinSource(np.random.default_rng(42))
    result = sample_many(TARGET.cdf, TARGET.a, TARGET.b, 8, coins, 100000)
    assert result.n == 100000
    assert result.flips == 800000
    assert kl_divergence(result.counts, TARGET.bin_probs(8)) < 0.01
    assert result.average_energy == 0.0


def test_always_one_lands_in_top_bin():
    result = sample_many(TARGET.cdf, TARGET.a, TARGET.b, 4, ConstantCoinSource(1), 10)
    assert result.counts[-1] == 10
    assert np.all(result.bin_indices == 15)


def test_single_sample_returns_bin_midpoint():
    index, x = sample(TARGET.cdf, TARGET.a, TARGET.b, 3, ConstantCoinSource(0))
    assert index == 0
    assert x == pytest.approx(bin_midpoints(TARGET.a, TARGET.b, 3)[0])
    index, x = sample(TARGET.cdf, TARGET.a, TARGET.b, 3, ConstantCoinSource(1))
    assert index == 7
    assert x == pytest.approx(bin_midpoints(TARGET.a, TARGET.b, 3)[-1])


def test_coin_weight():
    uniform_cdf = lambda x: x  # noqa: E731
    assert coin_weight(uniform_cdf, 0.0, 0.5, 1.0) == pytest.approx(0.5)
    assert coin_weight(lambda x: x ** 2, 0.0, 0.5, 1.0) == pytest.approx(0.75)
    with pytest.raises(ValueError):
        coin_weight(uniform_cdf, 0.0, 1.0, 0.5)


def test_zero_mass_interval_detected():
    with pytest.raises(ZeroMassInterval):
        sample_many(lambda x: 0.5, 0.0, 1.0, 3, IdealCoinSource(np.random.default_rng(0)), 5)


def test_bit_count_bounds():
    coins = IdealCoinSource(np.random.default_rng(0))
    with pytest.raises(ValueError):
        sample_many(TARGET.cdf, TARGET.a, TARGET.b, 0, coins, 5)
    with pytest.raises(ValueError):
        sample(TARGET.cdf, TARGET.a, TARGET.b, 17, coins)


def test_empty_request():
    result = sample_many(TARGET.cdf, TARGET.a, TARGET.b, 3, IdealCoinSource(np.random.default_rng(0)), 0)
    assert result.n == 0
    assert len(result.counts) == 8
    assert result.average_energy == 0.0


def test_tree_state_descends():
    state = TreeState(0.0, 0.5, 1.0)
    state.descend(1)
    assert (state.x0, state.x1, state.x2) == (0.5, 0.75, 1.0)
    state.descend(0)
    assert (state.x0, state.x1, state.x2) == (0.5, 0.625, 0.75)
    assert state.bits_emitted == 2


def test_energy_accounting_per_flip():
    """Енергія на підкидання - частка загальної енергії на n * k підкидань"""
    coins = SurrogateCoinSource(np.random.default_rng(0), energy_per_flip=2e-15)
    result = sample_many(TARGET.cdf, TARGET.a, TARGET.b, 5, coins, 100)
    assert result.flips == 500
    assert result.energy_total == pytest.approx(1e-12)
    assert result.average_energy == pytest.approx(2e-15)
    assert coins.average_energy == pytest.approx(2e-15)


def test_surrogate_noise_biases_weights():
    """При eps = 0.49 вибірки майже рівномірні, KL до цілі зростає"""
    noisy = sample_many(TARGET.cdf, TARGET.a, TARGET.b, 5, SurrogateCoinSource(np.random.default_rng(1), 0.49),
                        20000)
    clean = sample_many(TARGET.cdf, TARGET.a, TARGET.b, 5, SurrogateCoinSource(np.random.default_rng(1), 0.0),
                        20000)
    Q = TARGET.bin_probs(5)
    assert kl_divergence(noisy.counts, Q) > kl_divergence(clean.counts, Q)


def test_uniform_target_passes_chi_square():
    uniform = TruncatedDistribution(UniformSpec(0.0, 1.0), 0.0, 1.0)
    coins = IdealCoinSource(np.random.default_rng(8))
    result = sample_many(uniform.cdf, uniform.a, uniform.b, 3, coins, 80000)
    assert result.counts.sum() == 80000
    assert stats.chisquare(result.counts).pvalue > 1e-3


def test_weight_span_matches_enumerated_tree():
    """Перебір усіх вузлів через coin_weight дає ті самі крайні ваги"""
    k = 8
    weights = []
    for level in range(k):
        n_nodes = 2 ** level
        width = (TARGET.b - TARGET.a) / n_nodes
        for node in range(n_nodes):
            x0 = TARGET.a + node * width
            weights.append(coin_weight(TARGET.cdf, x0, x0 + width / 2.0, x0 + width))
    low, high = weight_span(TARGET.cdf, TARGET.a, TARGET.b, k)
    assert low == pytest.approx(min(weights), abs=1e-9)
    assert high == pytest.approx(max(weights), abs=1e-9)
    # права половина кореня потребує монетки, легшої за 0.10
    assert low < 0.10
    assert 0.5 < high < 1.0


def test_weight_span_of_uniform_target():
    uniform = TruncatedDistribution(UniformSpec(0.0, 1.0), 0.0, 1.0)
    low, high = weight_span(uniform.cdf, 0.0, 1.0, 5)
    assert low == pytest.approx(0.5)
    assert high == pytest.approx(0.5)
