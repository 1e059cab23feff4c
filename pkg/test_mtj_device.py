"""
Тести моделі пристрою MTJ: протоколи, енергія, S-криві та їх обернення
"""

import math

import numpy as np
import pytest

import core.mtj_device as mtj_device
from core.device_validator import ValidityReason, count_monotonicity_violations, validate_device
from core.errors import OutOfRange, ResetFailed
from core.llg_core import (
    K_B, MU0, DeviceParams, DriveSegment, SimConfig, Trajectory, run_segment, spin_torque_field, step_count,
)
from core.mtj_device import (
    RESET_PINNING_BARRIER, EnergyRecord, ProtocolSOT, ProtocolSTT, SCurve, SCurvePoint, ScurveInverter,
    build_scurve, calibrated_reset_current, critical_current_density, default_sweep, energy_of_trace,
    flip_sot, flip_sot_batch, flip_stt_batch, heavy_metal_current, heavy_metal_resistance, invert_scurve,
    keff, measure_p_one, parameter_sensitivity, perturb_params, reset_pinning_current, resistance,
    resolve_reset_current, scurve_variation, sensitivity_map, temperature_sensitivity, temperature_sweep,
    thermal_stability,
)

SHORT_SOT = ProtocolSOT(t_pulse=0.2e-9, t_relax=0.2e-9)
SHORT_STT = ProtocolSTT(t_reset=1e-9, t_pulse=0.5e-9, t_relax=0.5e-9)


def _synthetic_scurve(J, p, n=200, kind="sot"):
    points = [SCurvePoint(J=float(j), p_one=float(q), n_samples=n) for j, q in zip(J, p)]
    return SCurve(points=points, params=DeviceParams(), kind=kind)


def test_strong_pma_thermal_stability(strong_pma):
    assert keff(strong_pma) == pytest.approx(strong_pma.K_i / strong_pma.t_f - 0.5 * MU0 * 0.8e6 ** 2)
    assert thermal_stability(strong_pma) == pytest.approx(264.4, rel=0.01)


def test_critical_current_floor_without_pma():
    p = DeviceParams(M_s=2e6)
    assert keff(p) < 0.0
    assert critical_current_density(p) == 1e9


def test_default_sweeps(strong_pma):
    j_min, j_max = default_sweep(strong_pma, ProtocolSOT(J_sot=-4e11))
    assert j_max == pytest.approx(0.5 * 4e11)
    assert j_min == -j_max
    j_min, j_max = default_sweep(strong_pma, ProtocolSTT())
    assert j_min == 0.0
    assert j_max == pytest.approx(4.0 * critical_current_density(strong_pma))


def test_reset_current_resolution(strong_pma):
    assert resolve_reset_current(strong_pma, ProtocolSTT()) == pytest.approx(-6.0 * critical_current_density(strong_pma))
    assert resolve_reset_current(strong_pma, ProtocolSTT(J_reset=-2e12)) == -2e12
    with pytest.raises(ValueError):
        ProtocolSTT(J_reset=1e12)


def test_resistance_limits(default_params):
    assert resistance(default_params, 1.0) == pytest.approx(default_params.R_p)
    assert resistance(default_params, -1.0) == pytest.approx(default_params.R_p * (1.0 + default_params.tmr))
    assert heavy_metal_resistance(default_params) == pytest.approx(2e-7 * 100e-9 / (100e-9 * 3e-9))


def test_energy_record_sum():
    total = EnergyRecord(1.0, 2.0) + EnergyRecord(0.5, 0.25)
    assert total.e_total == pytest.approx(3.75)
    batch = EnergyRecord(np.array([1.0, 2.0]), np.array([0.5, 0.5]))
    assert batch.total() == pytest.approx(4.0)
    assert batch.member(1).e_total == pytest.approx(2.5)


def test_sot_batch_energy_without_bias(strong_pma, sim):
    """Без зміщення енергія - лише тепло у важкому металі"""
    result = flip_sot_batch(strong_pma, SHORT_SOT, sim, np.random.default_rng(0), n=4)
    assert result.bits.shape == (4,)
    assert set(np.unique(result.bits)) <= {0, 1}
    np.testing.assert_allclose(result.energy.e_mtj, 0.0)
    expected = heavy_metal_current(strong_pma, SHORT_SOT.J_sot) ** 2 * heavy_metal_resistance(strong_pma) \
        * SHORT_SOT.t_pulse
    np.testing.assert_allclose(result.energy.e_hm, expected)
    assert np.all((result.pulse_mean_abs_mz >= 0.0) & (result.pulse_mean_abs_mz <= 1.0))
    assert result.duration == pytest.approx(0.4e-9)


def test_sot_bias_energy_bounded_by_resistance(strong_pma, sim):
    bias = 1e11
    result = flip_sot_batch(strong_pma, SHORT_SOT, sim, np.random.default_rng(1), n=4, bias=bias)
    current = bias * strong_pma.area
    low = current ** 2 * strong_pma.R_p * SHORT_SOT.t_pulse
    high = low * (1.0 + strong_pma.tmr)
    assert np.all(result.energy.e_mtj >= low * (1 - 1e-9))
    assert np.all(result.energy.e_mtj <= high * (1 + 1e-9))


def test_single_flip_returns_bit_and_energy(strong_pma, sim):
    bit, energy = flip_sot(strong_pma, SHORT_SOT, sim, np.random.default_rng(2))
    assert bit in (0, 1)
    assert energy.e_total > 0.0


def test_stt_reset_energy(strong_pma, sim):
    result = flip_stt_batch(strong_pma, SHORT_STT, sim, np.random.default_rng(3), n=8)
    assert np.all(result.energy.e_mtj > 0.0)
    np.testing.assert_allclose(result.energy.e_hm, 0.0)
    assert result.duration == pytest.approx(2e-9)


def test_stt_weak_reset_fails(strong_pma, sim):
    """Слабкий струм скидання не перемикає шар з +z"""
    proto = SHORT_STT.with_reset(-1e3)
    m0 = np.tile([0.0, 0.0, 1.0], (4, 1))
    with pytest.raises(ResetFailed) as info:
        flip_stt_batch(strong_pma, proto, sim, np.random.default_rng(4), m0=m0)
    assert info.value.worst_mz > -0.9


def test_recorded_flip_trajectory(strong_pma, sim):
    result = flip_sot_batch(strong_pma, SHORT_SOT, sim, np.random.default_rng(5), record=True, t_offset=1e-9)
    assert result.trajectory.t[0] == pytest.approx(1e-9)
    assert result.trajectory.t[-1] == pytest.approx(1.4e-9)
    assert np.all(result.trajectory.J_sot[result.trajectory.t < 1.15e-9] == SHORT_SOT.J_sot)


def test_build_scurve_shape(strong_pma, sim):
    j_max = 4.0 * critical_current_density(strong_pma)
    sc = build_scurve(strong_pma, SHORT_STT, 0.0, j_max, 3, 100, sim, np.random.default_rng(6))
    assert len(sc) == 3
    np.testing.assert_allclose(sc.J, [0.0, j_max / 2, j_max])
    assert np.all(sc.n == 100)
    assert np.all((sc.p >= 0.0) & (sc.p <= 1.0))
    assert sc.kind == "stt"


def test_build_scurve_preconditions(strong_pma, sim):
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        build_scurve(strong_pma, SHORT_SOT, -1e11, 1e11, 3, 50, sim, rng)
    with pytest.raises(ValueError):
        build_scurve(strong_pma, SHORT_SOT, 1e11, -1e11, 3, 100, sim, rng)
    with pytest.raises(ValueError):
        build_scurve(strong_pma, SHORT_SOT, -1e11, 1e11, 0, 100, sim, rng)


def test_inverter_interpolates():
    sc = _synthetic_scurve([0.0, 1.0, 2.0, 3.0, 4.0], [0.0, 0.2, 0.5, 0.8, 1.0])
    assert invert_scurve(sc, 0.5) == pytest.approx(2.0)
    assert invert_scurve(sc, 0.35) == pytest.approx(1.5)
    np.testing.assert_allclose(ScurveInverter(sc).invert_many(np.array([0.0, 1.0])), [0.0, 4.0])


def test_inverter_collapses_plateau():
    sc = _synthetic_scurve([0.0, 1.0, 2.0, 3.0], [0.0, 0.5, 0.5, 1.0])
    assert invert_scurve(sc, 0.5) == pytest.approx(1.5)


def test_inverter_smooths_non_monotone_noise():
    """Ізотонічна регресія усуває локальний спад"""
    sc = _synthetic_scurve([0.0, 1.0, 2.0, 3.0], [0.1, 0.6, 0.4, 0.9])
    inverter = ScurveInverter(sc)
    assert np.all(np.diff(inverter.p_levels) > 0.0)
    assert inverter.invert(0.5) == pytest.approx(1.5)


def test_inverter_out_of_range():
    sc = _synthetic_scurve([0.0, 1.0, 2.0], [0.1, 0.5, 0.9])
    with pytest.raises(OutOfRange) as info:
        invert_scurve(sc, 0.05)
    assert info.value.p_low == pytest.approx(0.1)
    assert info.value.p_high == pytest.approx(0.9)
    with pytest.raises(OutOfRange):
        invert_scurve(sc, math.nan)


def test_inverter_needs_two_points():
    with pytest.raises(ValueError):
        ScurveInverter(_synthetic_scurve([0.0], [0.5]))


def test_calibrated_reset_current():
    sc = _synthetic_scurve([0.0, 1e11, 2e11], [0.0, 0.5, 1.0], kind="stt")
    assert calibrated_reset_current(sc) == pytest.approx(-3e11)
    tiny = _synthetic_scurve([0.0, 1e8, 2e8], [0.0, 0.5, 1.0], kind="stt")
    assert calibrated_reset_current(tiny) == pytest.approx(-reset_pinning_current(DeviceParams()))
    cold = SCurve(points=tiny.points, params=DeviceParams(T=0.0), kind="stt")
    assert calibrated_reset_current(cold) == pytest.approx(-3e9)


def test_scurve_rejects_unsorted_currents():
    with pytest.raises(ValueError):
        _synthetic_scurve([1.0, 0.0], [0.2, 0.8])


def test_perturb_params_bounds(default_params):
    rng = np.random.default_rng(7)
    assert perturb_params(default_params, 0.0, rng) == default_params
    varied = perturb_params(default_params, 0.1, rng)
    for name in ("alpha", "K_i", "M_s", "R_p", "eta"):
        ratio = getattr(varied, name) / getattr(default_params, name)
        assert 0.9 <= ratio <= 1.1
    with pytest.raises(ValueError):
        perturb_params(default_params, -0.1, rng)


@pytest.mark.slow
def test_default_sot_device_is_valid():
    """Типовий пристрій SOT проходить валідацію 11 x 200 при dt = 1 пс"""
    report = validate_device(DeviceParams(), ProtocolSOT(), SimConfig(dt=1e-12), np.random.default_rng(11))
    assert report.valid, report.errors
    assert report.p_low <= 0.1
    assert report.p_high >= 0.9


@pytest.mark.slow
def test_default_sot_zero_bias_is_fair():
    p_one = measure_p_one(DeviceParams(), ProtocolSOT(), 0.0, 10000, SimConfig(dt=1e-12),
                          np.random.default_rng(12))
    assert 0.45 <= p_one <= 0.55


def _stub_physics(monkeypatch, response):
    """S-крива з J50 = 1e11 та p_one, що залежить лише від параметрів пристрою"""
    def stub_scurve(p, proto, j_min, j_max, n_points, n_per_point, cfg, rng):
        return _synthetic_scurve([0.0, 1e11, 2e11], [0.0, 0.5, 1.0], kind=proto.kind)

    def stub_measure(p, proto, J, n, cfg, rng):
        assert J == pytest.approx(1e11)
        return response(p)

    monkeypatch.setattr(mtj_device, "build_scurve", stub_scurve)
    monkeypatch.setattr(mtj_device, "measure_p_one", stub_measure)


def test_parameter_sensitivity_plumbing(monkeypatch, default_params, sim):
    _stub_physics(monkeypatch, lambda p: 0.5 + (p.M_s / default_params.M_s - 1.0))
    dP = parameter_sensitivity(default_params, ProtocolSOT(), {"M_s": 0.05}, sim, np.random.default_rng(0))
    assert dP == pytest.approx(0.05)


def test_sensitivity_map_grid(monkeypatch, default_params, sim):
    _stub_physics(monkeypatch, lambda p: 0.5 + (p.K_i / default_params.K_i - 1.0))
    grid = sensitivity_map(default_params, ProtocolSOT(), [-0.1, 0.0, 0.1], [-0.02, 0.02], sim,
                           np.random.default_rng(0))
    assert grid.shape == (3, 2)
    np.testing.assert_allclose(grid, [[-0.02, 0.02]] * 3, atol=1e-12)


def test_temperature_sweep_per_pulse(monkeypatch, default_params, sim):
    _stub_physics(monkeypatch, lambda p: 0.5 + (p.T - default_params.T) * 1e-3)
    sweep = temperature_sweep(default_params, ProtocolSOT(), 10.0, [1e-9, 5e-9], sim, np.random.default_rng(0))
    assert [t for t, _ in sweep] == [1e-9, 5e-9]
    np.testing.assert_allclose([dP for _, dP in sweep], [0.01, 0.01])


def _constant_trace(m_z, J_stt, duration, n=11):
    t = np.linspace(0.0, duration, n)
    m = np.tile([math.sqrt(1.0 - m_z ** 2), 0.0, m_z], (n, 1))
    return Trajectory(t=t, m=m, J_sot=np.zeros(n), J_stt=np.full(n, float(J_stt)))


def _part(trace, start, stop):
    return Trajectory(trace.t[start:stop], trace.m[start:stop], trace.J_sot[start:stop], trace.J_stt[start:stop])


def test_energy_of_trace_without_current(strong_pma, sim):
    seg = DriveSegment(0.1e-9)
    result = run_segment(np.array([0.0, 0.0, 1.0]), strong_pma, seg, sim, np.random.default_rng(20), record=True)
    energy = energy_of_trace(result.trajectory, strong_pma, seg)
    assert energy.e_total == 0.0


def test_energy_of_trace_parallel_state_closed_form(strong_pma):
    J, duration = 1e11, 2e-9
    energy = energy_of_trace(_constant_trace(1.0, J, duration), strong_pma, DriveSegment(duration, J_stt=J))
    assert energy.e_mtj == pytest.approx((J * strong_pma.area) ** 2 * strong_pma.R_p * duration, rel=1e-12)
    assert energy.e_hm == 0.0


def test_energy_of_trace_heavy_metal_term(strong_pma):
    seg = DriveSegment(1e-9, J_sot=-4e11)
    energy = energy_of_trace(_constant_trace(1.0, 0.0, 1e-9), strong_pma, seg)
    expected = heavy_metal_current(strong_pma, -4e11) ** 2 * heavy_metal_resistance(strong_pma) * 1e-9
    assert energy.e_hm == pytest.approx(expected)
    assert energy.e_mtj == 0.0


def test_energy_of_trace_matches_fine_riemann_sum(strong_pma):
    """Перемикання при T = 0: груба траєкторія проти суми на сітці вдесятеро дрібнішій"""
    p = strong_pma.replace(T=0.0)
    J = -3.0 * critical_current_density(p)
    seg = DriveSegment(1e-9, J_stt=J)
    m0 = np.array([math.sin(0.2), 0.0, math.cos(0.2)])
    coarse = run_segment(m0, p, seg, SimConfig(dt=1e-12, record_every=10), np.random.default_rng(0), record=True)
    fine = run_segment(m0, p, seg, SimConfig(dt=1e-12, record_every=1), np.random.default_rng(0), record=True)
    assert fine.trajectory.m_z[-1] < -0.5

    power = (J * p.area) ** 2 * resistance(p, fine.trajectory.m_z)
    oracle = float(np.sum(0.5 * (power[1:] + power[:-1]) * np.diff(fine.trajectory.t)))
    assert energy_of_trace(coarse.trajectory, p, seg).e_mtj == pytest.approx(oracle, rel=1e-3)


def test_sot_flip_energy_equals_trace_energy(strong_pma):
    cfg = SimConfig(dt=1e-12, record_every=1)
    proto = ProtocolSOT(J_sot=-4e11, t_pulse=0.2e-9, t_relax=0.2e-9, J_stt_bias=1e11)
    result = flip_sot_batch(strong_pma, proto, cfg, np.random.default_rng(21), m0=np.array([0.0, 0.0, 1.0]),
                            record=True)
    pulse = DriveSegment(proto.t_pulse, J_sot=proto.J_sot, J_stt=proto.J_stt_bias)
    relax = DriveSegment(proto.t_relax)
    n_pulse = step_count(proto.t_pulse, cfg.dt) + 1

    whole = energy_of_trace(result.trajectory, strong_pma, pulse)
    assert whole.e_mtj == pytest.approx(result.energy.e_mtj, rel=1e-9)
    assert whole.e_hm == pytest.approx(result.energy.e_hm, rel=1e-12)

    # сума за відрізками дорівнює енергії з'єднаної траєкторії
    parts = (energy_of_trace(_part(result.trajectory, 0, n_pulse), strong_pma, pulse)
             + energy_of_trace(_part(result.trajectory, n_pulse, None), strong_pma, relax))
    assert parts.e_total == pytest.approx(whole.e_total, rel=1e-12)


def test_stt_flip_energy_equals_trace_energy(strong_pma):
    cfg = SimConfig(dt=1e-12, record_every=1)
    proto = ProtocolSTT(J_stt=1e11, t_reset=0.2e-9, t_pulse=0.2e-9, t_relax=0.2e-9, J_reset=-1e12)
    result = flip_stt_batch(strong_pma, proto, cfg, np.random.default_rng(22), m0=np.array([0.0, 0.0, -1.0]),
                            record=True)
    n_reset = step_count(proto.t_reset, cfg.dt) + 1
    n_pulse = step_count(proto.t_pulse, cfg.dt) + 1
    trace = result.trajectory

    reset = energy_of_trace(_part(trace, 0, n_reset), strong_pma, DriveSegment(proto.t_reset, J_stt=proto.J_reset))
    pulse = energy_of_trace(_part(trace, n_reset, n_reset + n_pulse), strong_pma,
                            DriveSegment(proto.t_pulse, J_stt=proto.J_stt))
    relax = energy_of_trace(_part(trace, n_reset + n_pulse, None), strong_pma, DriveSegment(proto.t_relax))
    assert relax.e_total == 0.0
    assert (reset + pulse + relax).e_total == pytest.approx(result.energy.e_total, rel=1e-9)
    assert trace.m_z[n_reset - 1] <= -0.9


def test_reset_pinning_current_barrier(default_params):
    """Струм утримання створює бар'єр RESET_PINNING_BARRIER kT для поля H_stt / alpha"""
    p = default_params
    J_pin = reset_pinning_current(p)
    field = spin_torque_field(p, p.P_spin, J_pin) / p.alpha
    assert MU0 * p.M_s * p.volume * field / (K_B * p.T) == pytest.approx(RESET_PINNING_BARRIER)
    assert reset_pinning_current(p.replace(T=0.0)) == 0.0


def test_default_stt_reset_uses_pinning_floor(default_params, strong_pma):
    """Пристрій з малою стабільністю: 6 J_c0 слабший за струм утримання"""
    assert thermal_stability(default_params) < 5.0
    assert 6.0 * critical_current_density(default_params) < reset_pinning_current(default_params)
    assert resolve_reset_current(default_params, ProtocolSTT()) == pytest.approx(-reset_pinning_current(default_params))
    assert 6.0 * critical_current_density(strong_pma) > reset_pinning_current(strong_pma)


def test_default_stt_reset_succeeds(default_params, sim):
    proto = ProtocolSTT(t_pulse=0.5e-9, t_relax=0.5e-9)
    m0 = np.tile([0.0, 0.0, 1.0], (50, 1))
    result = flip_stt_batch(default_params, proto, sim, np.random.default_rng(23), m0=m0)
    assert result.bits.shape == (50,)


def test_scurve_variation_single_device(strong_pma, sim):
    proto = SHORT_STT.with_reset(-7.0 * critical_current_density(strong_pma))
    curves = scurve_variation(strong_pma, 0.05, 1, proto, sim, np.random.default_rng(24), n_points=2, n_per_point=100)
    assert len(curves) == 1
    assert curves[0].params != strong_pma
    with pytest.raises(ValueError):
        scurve_variation(strong_pma, 0.05, 0, proto, sim, np.random.default_rng(24))


# Протокол STT для тривалих перевірок: скидання й релаксація по 2 нс
SLOW_STT = ProtocolSTT(t_reset=2e-9, t_pulse=1e-9, t_relax=2e-9)


def _binomial_tolerance(p, n, z=3.0):
    return z * math.sqrt(max(p * (1.0 - p), 0.25 / n) / n)


@pytest.mark.slow
def test_stt_zero_current_keeps_reset_state(strong_pma, sim):
    result = flip_stt_batch(strong_pma, ProtocolSTT(J_stt=0.0), sim, np.random.default_rng(30), n=1000)
    assert result.bits.sum() <= 1


@pytest.mark.slow
def test_stt_large_current_always_switches(strong_pma, sim):
    J = 10.0 * critical_current_density(strong_pma)
    result = flip_stt_batch(strong_pma, ProtocolSTT(J_stt=J), sim, np.random.default_rng(31), n=1000)
    assert result.bits.sum() >= 999


@pytest.mark.slow
def test_stt_temperature_sensitivity_sign(strong_pma, sim):
    """Спільний потік для всіх dT: відрізняється лише температура під час вимірювання"""
    def dP(dT):
        return temperature_sensitivity(strong_pma, SLOW_STT, dT, sim, np.random.default_rng(32), n_points=21,
                                       n_per_point=500, n_measure=20000)

    at_zero, warmer, colder = dP(0.0), dP(10.0), dP(-10.0)
    assert abs(at_zero) < 0.1
    assert warmer > at_zero > colder
    assert math.copysign(1.0, warmer - at_zero) == -math.copysign(1.0, colder - at_zero)


@pytest.mark.slow
def test_stt_switching_current_grows_with_damping(strong_pma, sim):
    j50 = []
    for alpha in (0.01, 0.05, 0.1):
        p = strong_pma.replace(alpha=alpha)
        j_min, j_max = default_sweep(p, SLOW_STT)
        sc = build_scurve(p, SLOW_STT, j_min, j_max, 21, 200, sim, np.random.default_rng(33))
        j50.append(invert_scurve(sc, 0.5))
    assert j50[0] < j50[1] < j50[2]


@pytest.mark.slow
def test_default_stt_device_is_not_a_reset_failure():
    """Типовий STT-пристрій з малою стабільністю: скидання вдається, вердикт визначає S-крива"""
    report = validate_device(DeviceParams(), ProtocolSTT(), SimConfig(dt=1e-12), np.random.default_rng(34))
    assert report.reason is not ValidityReason.RESET_FAILED
    assert report.scurve is not None


@pytest.mark.slow
def test_sot_scurve_symmetry_and_monotonicity():
    p, proto = DeviceParams(), ProtocolSOT()
    j_min, j_max = default_sweep(p, proto)
    sc = build_scurve(p, proto, j_min, j_max, 21, 500, SimConfig(dt=1e-12), np.random.default_rng(35))
    for i in range(10):
        total = sc.p[i] + sc.p[20 - i]
        assert abs(total - 1.0) <= 2.0 * _binomial_tolerance(sc.p[i], 500) + 1.0 / 500
    assert count_monotonicity_violations(sc) <= 1


@pytest.mark.slow
def test_scurve_variation_without_spread_matches_base(strong_pma, sim):
    proto = SLOW_STT.with_reset(-7.0 * critical_current_density(strong_pma))
    j_min, j_max = default_sweep(strong_pma, proto)
    base = build_scurve(strong_pma, proto, j_min, j_max, 7, 200, sim, np.random.default_rng(36))
    curves = scurve_variation(strong_pma, 0.0, 2, proto, sim, np.random.default_rng(37), n_points=7,
                              n_per_point=200)
    assert len(curves) == 2
    for sc in curves:
        assert sc.params == strong_pma
        np.testing.assert_allclose(sc.J, base.J)
        for q, q_base in zip(sc.p, base.p):
            pooled = (q + q_base) / 2.0
            assert abs(q - q_base) <= math.sqrt(2.0) * _binomial_tolerance(pooled, 200) + 1.0 / 200


@pytest.mark.slow
def test_scurve_variation_moves_switching_current(strong_pma, sim):
    proto = SLOW_STT.with_reset(-7.0 * critical_current_density(strong_pma))
    j_min, j_max = default_sweep(strong_pma, proto)
    base = build_scurve(strong_pma, proto, j_min, j_max, 41, 100, sim, np.random.default_rng(38))
    curves = scurve_variation(strong_pma, 0.05, 10, proto, sim, np.random.default_rng(39), n_points=41,
                              n_per_point=100)
    assert len(curves) == 10
    j50 = invert_scurve(base, 0.5)
    shifts = [abs(invert_scurve(sc, 0.5) - j50) for sc in curves]
    assert max(shifts) > base.grid_spacing
