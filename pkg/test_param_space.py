"""
Тести нормалізованого простору параметрів: відображення генів та розподіл значень
"""

import numpy as np
import pytest

from core.llg_core import DeviceParams
from core.mtj_device import ProtocolSOT, ProtocolSTT
from core.param_space import Gene, apply_overrides, param_space


def test_space_dimensions():
    sot, stt = param_space("sot"), param_space("STT")
    assert sot.d == 8
    assert sot.names == ["alpha", "K_i", "M_s", "R_p", "eta", "J_sot", "t_pulse", "t_relax"]
    assert stt.d == 6
    assert "eta" not in stt.names
    with pytest.raises(ValueError):
        param_space("mram")


def test_decode_bounds():
    space = param_space("sot")
    low = space.decode(np.zeros(space.d))
    high = space.decode(np.ones(space.d))
    assert low["alpha"] == pytest.approx(0.01)
    assert high["alpha"] == pytest.approx(0.1)
    assert low["t_pulse"] == pytest.approx(0.5e-9)
    assert high["t_relax"] == pytest.approx(75e-9)


def test_decode_midpoint():
    values = param_space("stt").decode(np.full(6, 0.5))
    assert values["R_p"] == pytest.approx(25250.0)
    assert values["M_s"] == pytest.approx(1.15e6)


def test_decode_clips_genes():
    space = param_space("sot")
    genome = np.full(space.d, 0.5)
    genome[0], genome[3] = -0.3, 1.7
    values = space.decode(genome)
    assert values["alpha"] == pytest.approx(0.01)
    assert values["R_p"] == pytest.approx(50000.0)


def test_encode_decode_round_trip():
    space = param_space("sot")
    rng = np.random.default_rng(0)
    for _ in range(20):
        values = space.decode(rng.random(space.d))
        again = space.decode(space.encode(values))
        for name in space.names:
            assert again[name] == pytest.approx(values[name], rel=1e-12)


def test_decode_rejects_wrong_length():
    with pytest.raises(ValueError):
        param_space("stt").decode(np.zeros(8))


def test_gene_requires_ordered_range():
    with pytest.raises(ValueError):
        Gene("x", 1.0, 1.0)


def test_range_errors():
    space = param_space("sot")
    errors = space.range_errors({"alpha": 0.5, "K_i": 0.5e-3, "unknown": 1.0})
    assert len(errors) == 1
    assert errors[0].startswith("alpha=0.5")


def test_apply_overrides_splits_device_and_protocol():
    params, proto = apply_overrides({"M_s": 0.8e6, "J_sot": 2e12, "t_pulse": 1e-9}, DeviceParams(), ProtocolSOT())
    assert params.M_s == 0.8e6
    assert proto.J_sot == -2e12
    assert proto.t_pulse == 1e-9

    params, proto = apply_overrides({"alpha": 0.05, "t_relax": 2e-9}, DeviceParams(), ProtocolSTT())
    assert params.alpha == 0.05
    assert proto.t_relax == 2e-9
    assert proto.J_reset is None
