"""
Команди командного рядка
Кожна команда створює теку запуску, зберігає resolved_config.json до обчислень
і пише дані у CSV/JSON. Результати залежать лише від конфігурації та seed.
"""

import argparse
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np

from cli import exports
from cli.parser import parse_args, resolve_config
from core.codesign_env import CodesignEnv, cem_agent
from core.device_validator import judge_scurve
from core.errors import CodesignError, ConfigError, OutOfRange, RunDirectoryExists
from core.llg_core import Trajectory
from core.metrics import (
    MTJDeviceModel, SurrogateDeviceModel, GenomeEvaluator, kl_divergence,
)
from core.mtj_device import (
    ProtocolSTT, build_scurve, calibrate_reset_current, default_sweep, flip_batch, invert_scurve,
    keff, scurve_variation, sensitivity_map, temperature_sensitivity, temperature_sweep,
)
from core.nsga2 import nsga2_run
from core.param_space import apply_overrides
from core.pareto import hypervolume_2d
from core.run_archive import RunArchive
from core.run_config import RunConfig, resolve_output_root
from core.run_manager import RESOLVED_CONFIG_NAME, RunManager
from core.target_dist import posterior_gamma, simulate_particle
from core.tree_sampler import CoinSource, IdealCoinSource, sample_many, weight_span
from utils.csv_export import write_csv
from utils.performance import EvaluationPool, get_profiler
from utils.random_streams import STREAM_COMMAND, STREAM_RUN, derive_seed, derive_stream
from utils.simple_logger import get_logger_instance

ARCHIVE_NAME = "archive.jsonl"

# Ключі потоків команди
_KEY_MAIN = 0
_KEY_BASELINE = 1
_KEY_VARIATION = 2
_KEY_TEMPERATURE = 3
_KEY_SWEEP = 4
_KEY_SENSITIVITY = 5

# Потоки повторного оцінювання найкращих конфігурацій не перетинаються з індексами оцінювань
FINAL_STREAM_OFFSET = 10 ** 9

# Коди виходу
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_OUT_OF_RANGE = 3
EXIT_INTERRUPTED = 130

HYPERVOLUME_MARGIN = 1.1


def _logger():
    return get_logger_instance().get_logger()


def _command_stream(config: RunConfig, key: int = _KEY_MAIN) -> np.random.Generator:
    return derive_stream(config.seed, STREAM_COMMAND, key)


def _ready_stt(config: RunConfig, params, proto, sim, rng):
    """Протокол STT без J_reset отримує калібрований струм скидання"""
    if isinstance(proto, ProtocolSTT) and proto.J_reset is None:
        J_reset, _ = calibrate_reset_current(params, proto, sim, rng, config.validation.n_points,
                                             config.validation.n_per_point)
        _logger().info(f"Калібрований струм скидання: {J_reset:.4e} А/м²")
        return proto.with_reset(J_reset)
    return proto


def cmd_simulate(config: RunConfig, run: RunManager, args: argparse.Namespace) -> Dict:
    """Ланцюжок підкидань: кожне починається з кінцевого стану попереднього"""
    params, proto, sim = config.device_params(), config.protocol(), config.sim_config()
    rng = _command_stream(config)
    proto = _ready_stt(config, params, proto, sim, rng)
    n = config.simulation.n_flips

    bits: List[int] = []
    flips: List[Trajectory] = []
    energy = 0.0
    m: Optional[np.ndarray] = None
    t = 0.0
    for i in range(n):
        result = flip_batch(params, proto, sim, rng, m0=m, record=True, t_offset=t)
        bits.append(int(result.bits))
        flips.append(result.trajectory)
        energy += result.energy.total()
        m = result.m
        t += result.duration
        _logger().debug(f"Підкидання {i + 1}/{n}: біт {bits[-1]}")

    exports.export_trajectory(run.path("trajectory.csv"), flips)
    ones = sum(bits)
    summary = {
        "kind": proto.kind,
        "n_flips": n,
        "ones": ones,
        "p_empirical": ones / n if n else None,
        "bitstream": "".join(str(bit) for bit in bits),
        "energy_total(J)": energy,
        "energy_per_flip(J)": energy / n if n else None,
    }
    run.write_json("bits.json", summary)
    _logger().info(f"Підкидань: {n}, одиниць: {ones}")
    return summary


def cmd_scurve(config: RunConfig, run: RunManager, args: argparse.Namespace) -> Dict:
    """S-крива; за потреби сімейство пристроїв з розкидом і чутливість до температури"""
    params, proto, sim = config.device_params(), config.protocol(), config.sim_config()
    rng = _command_stream(config)
    proto = _ready_stt(config, params, proto, sim, rng)
    s = config.scurve
    j_min, j_max = default_sweep(params, proto)
    j_min = j_min if s.j_min is None else s.j_min
    j_max = j_max if s.j_max is None else s.j_max

    sc = build_scurve(params, proto, j_min, j_max, s.n_points, s.n_per_point, sim, rng)
    exports.export_scurves(run.path("scurve.csv"), [sc])

    report = judge_scurve(sc, config.validation)
    summary: Dict = {
        "kind": proto.kind,
        "j_min(A/m^2)": j_min,
        "j_max(A/m^2)": j_max,
        "p_low": sc.p_low,
        "p_high": sc.p_high,
        "valid": report.valid,
        "reason": report.reason.value,
        "monotonicity_violations": report.monotonicity_violations,
        "stochastic_regime": report.stochastic_regime,
        "J50(A/m^2)": None,
    }
    if isinstance(proto, ProtocolSTT):
        summary["J_reset(A/m^2)"] = proto.J_reset

    if s.n_points < 2:
        _logger().warning("S-крива з однієї точки: обернення неможливе")
    else:
        try:
            summary["J50(A/m^2)"] = invert_scurve(sc, 0.5)
        except OutOfRange as e:
            _logger().warning(f"50% недосяжні на розгортці: {e}")

    if s.devices > 0:
        curves = scurve_variation(params, s.spread, s.devices, proto, sim, _command_stream(config, _KEY_VARIATION),
                                  s.n_points, s.n_per_point, sweep=(j_min, j_max))
        exports.export_scurves(run.path("scurve_variation.csv"), curves)
        summary["variation"] = {"spread": s.spread, "devices": s.devices}

    if s.dT is not None:
        dP = temperature_sensitivity(params, proto, s.dT, sim, _command_stream(config, _KEY_TEMPERATURE),
                                     config.validation.n_points, config.validation.n_per_point, s.n_measure)
        summary["temperature"] = {"dT(K)": s.dT, "dP": dP}
        _logger().info(f"dP при dT={s.dT} К: {dP:+.4f}")
        if s.pulse_widths:
            sweep = temperature_sweep(params, proto, s.dT, s.pulse_widths, sim, _command_stream(config, _KEY_SWEEP),
                                      config.validation.n_points, config.validation.n_per_point, s.n_measure)
            exports.export_temperature_sweep(run.path("temperature_sweep.csv"), s.dT, sweep)

    if s.ms_fractions and s.ki_fractions:
        grid = sensitivity_map(params, proto, s.ms_fractions, s.ki_fractions, sim,
                               _command_stream(config, _KEY_SENSITIVITY), config.validation.n_points,
                               config.validation.n_per_point, s.n_measure)
        exports.export_sensitivity_map(run.path("sensitivity_map.csv"), s.ms_fractions, s.ki_fractions, grid)
        summary["sensitivity"] = {"max_abs_dP": float(abs(grid).max())}

    run.write_json("scurve_summary.json", summary)
    _logger().info(f"S-крива: p в [{sc.p_low:.3f}, {sc.p_high:.3f}], валідна: {report.valid}")
    return summary


def _coin_source(config: RunConfig, rng: np.random.Generator) -> CoinSource:
    kind = config.sampler.coin
    if kind == "ideal":
        return IdealCoinSource(rng)
    if kind == "surrogate":
        model = SurrogateDeviceModel(config.device_params(), config.protocol(),
                                     noise_scale=config.evaluation.surrogate_noise,
                                     energy_scale=config.evaluation.surrogate_energy)
    else:
        target = config.target()
        required_span = weight_span(target.cdf, target.a, target.b, config.sampler.k)
        model = MTJDeviceModel(config.device_params(), config.protocol(), config.sim_config(),
                               config.validation, config.evaluation.scurve_points,
                               config.evaluation.scurve_flips, required_span)
    calibration = model.calibrate({}, rng)
    if not calibration.valid:
        raise ConfigError(f"Пристрій непридатний як джерело монеток ({calibration.reason}): "
                          + "; ".join(calibration.messages))
    return calibration.coins


def cmd_sample(config: RunConfig, run: RunManager, args: argparse.Namespace) -> Dict:
    """Гістограма вибірок, KL до цільових кошиків та енергія на підкидання"""
    target = config.target()
    k, n = config.sampler.k, config.sampler.n_samples
    coins = _coin_source(config, _command_stream(config))
    result = sample_many(target.cdf, target.a, target.b, k, coins, n)

    exports.export_histogram(run.path("histogram.csv"), target, k, result.counts)
    exports.export_target_pdf(run.path("target_pdf.csv"), target)
    kl = kl_divergence(result.counts, target.bin_probs(k)) if n > 0 else None
    summary = {
        "coin": config.sampler.coin,
        "k": k,
        "n_samples": n,
        "flips": result.flips,
        "kl": kl,
        "energy_per_flip(J)": result.average_energy,
        "energy_total(J)": result.energy_total,
        "target": target.to_dict(),
    }
    run.write_json("sample_summary.json", summary)
    _logger().info(f"Вибірок: {n}, KL: {kl}, енергія на підкидання: {result.average_energy:.4e} Дж")
    return summary


def _run_seed(config: RunConfig, index: int) -> int:
    return config.seed if config.optimizer.runs == 1 else derive_seed(config.seed, STREAM_RUN, index)


def _front_summary(archive: RunArchive) -> Dict:
    front = archive.pareto_front()
    valid = archive.valid_records()
    summary: Dict = {"evaluations": len(archive), "valid": len(valid), "front_size": len(front),
                     "hypervolume": None, "reference": None}
    if front:
        reference = [HYPERVOLUME_MARGIN * max(r.objectives[i] for r in valid) for i in (0, 1)]
        summary["reference"] = reference
        summary["hypervolume"] = hypervolume_2d([r.objectives for r in front], reference)
    best = archive.best()
    summary["best"] = None if best is None else {
        "eval_index": best.eval_index, "tag": best.tag, "score": best.score,
        "energy(J)": best.objectives[0], "kl": best.objectives[1], "params": best.params,
    }
    return summary


def _export_archive_views(config: RunConfig, archive: RunArchive, run: RunManager,
                          extra: Optional[Dict[int, Dict[str, float]]] = None):
    space = config.param_space()
    exports.export_records(run.path("pareto.csv"), archive.pareto_front(), space)
    exports.export_records(run.path("top5.csv"), archive.top_k(config.evaluation.top_k), space, extra)
    exports.export_exploration(run.path("exploration.csv"), archive.exploration_hist(config.optimizer.hist_bins),
                               space.names)


def cmd_optimize(config: RunConfig, run: RunManager, args: argparse.Namespace) -> Dict:
    """Пошук конфігурації (NSGA-II або CEM), потім повторне оцінювання найкращих"""
    space, target = config.param_space(), config.target()
    model = config.device_model()
    settings, weights = config.evaluation_settings(), config.score_weights()
    pool = EvaluationPool(config.threads)
    archive = RunArchive(run.path(ARCHIVE_NAME))
    kind = config.optimizer.kind
    runs: List[Dict] = []

    try:
        for index in range(config.optimizer.runs):
            seed = _run_seed(config, index)
            evaluator = GenomeEvaluator(space, model, target, settings, weights, seed)
            tag = f"{kind}-{index}"
            _logger().info(f"Запуск {index + 1}/{config.optimizer.runs} ({kind}, seed {seed})")
            if kind == "nsga2":
                result = nsga2_run(config.nsga2_settings(seed), space.d, evaluator, archive, pool, tag=tag)
                runs.append({"tag": tag, "seed": seed, "best_scores": result.best_scores})
            else:
                env = CodesignEnv(space.d, evaluator, archive, config.optimizer.max_steps, seed, tag)
                result = cem_agent(env, config.cem_settings(seed), pool)
                runs.append({"tag": tag, "seed": seed, "best_score": result.best_score,
                             "rewards": {str(key): value for key, value in
                                         sorted(result.reward_counts().items())}})
    except KeyboardInterrupt:
        archive.flush()
        _logger().warning(f"Перервано: в архіві збережено {len(archive)} оцінювань")
        raise
    archive.flush()

    # Повторне оцінювання найкращих з більшою кількістю вибірок
    n_final = config.evaluation.final_samples
    top = archive.top_k(config.evaluation.top_k)
    extra: Dict[int, Dict[str, float]] = {}
    histograms, labels = [], []
    for rank, record in enumerate(top):
        evaluator = GenomeEvaluator(space, model, target, settings, weights, record.seed)
        final = evaluator.reevaluate(record.params, n_final, FINAL_STREAM_OFFSET + rank)
        extra[rank] = {"final_energy(J)": final.objectives.energy, "final_kl": final.objectives.kl,
                       "final_valid": float(final.valid)}
        if final.counts is not None:
            histograms.append(final.counts)
            labels.append(f"top{rank + 1}")
        _logger().info(f"Найкраща #{rank + 1}: KL={final.objectives.kl:.4g}, "
                       f"енергія={final.objectives.energy:.4e} Дж ({n_final} вибірок)")

    _export_archive_views(config, archive, run, extra)
    exports.export_top_pdfs(run.path("top5_pdf.csv"), target, settings.k, histograms, labels)

    baseline = sample_many(target.cdf, target.a, target.b, settings.k,
                           IdealCoinSource(_command_stream(config, _KEY_BASELINE)), n_final)
    summary = _front_summary(archive)
    summary.update({
        "optimizer": kind,
        "runs": runs,
        "final_samples": n_final,
        "prng_baseline_kl": kl_divergence(baseline.counts, target.bin_probs(settings.k)) if n_final > 0 else None,
        "top": [dict(extra[rank], eval_index=record.eval_index, tag=record.tag) for rank, record in enumerate(top)],
    })
    run.write_json("summary.json", summary)
    for name, stats in get_profiler().get_stats().items():
        _logger().debug(f"Профіль {name}: {stats['calls']} викликів, у середньому {stats['avg_time']:.3f} с")
    return summary


def _analysis_config(config: RunConfig, run_dir: Path) -> RunConfig:
    resolved = run_dir / RESOLVED_CONFIG_NAME
    if resolved.exists():
        return RunManager.load_resolved_config(run_dir)
    _logger().warning(f"У {run_dir} немає {RESOLVED_CONFIG_NAME}, використовується поточна конфігурація")
    return config


def cmd_analyze(config: RunConfig, run: RunManager, args: argparse.Namespace) -> Dict:
    """Фронт Парето, top-k, дослідження простору та карта K_eff з наявного архіву"""
    run_dir = Path(args.run)
    archive_path = run_dir / ARCHIVE_NAME
    if not archive_path.exists():
        raise ConfigError(f"Архів не знайдено: {archive_path}")
    archive = RunArchive.load(archive_path)
    source = _analysis_config(config, run_dir)

    _export_archive_views(source, archive, run)
    base_params, base_proto = source.device_params(), source.protocol()
    rows = []
    for record in archive:
        try:
            params, _ = apply_overrides(record.params, base_params, base_proto)
        except ValueError:
            continue
        rows.append((record.eval_index, params.M_s, params.K_u, keff(params), int(record.valid)))
    exports.export_keff_map(run.path("keff_map.csv"), rows)

    summary = _front_summary(archive)
    summary["source"] = str(run_dir)
    summary["best_score_by_generation"] = {str(g): s for g, s in sorted(archive.best_score_by_generation().items())}
    run.write_json("analysis.json", summary)
    return summary


def cmd_particle_gamma(config: RunConfig, run: RunManager, args: argparse.Namespace) -> Dict:
    """Апостеріорний гамма-розподіл коефіцієнта тертя з модельованих траєкторій"""
    p = config.particle
    rates = []
    first = None
    for index in range(p.traces):
        trace = simulate_particle(p.x0, p.alpha, p.kBT, p.dt, p.n, seed=_command_stream(config, index))
        spec = posterior_gamma(trace)
        rates.append(spec.rate)
        if first is None:
            first = spec
            rows = ((i, i * trace.dt, float(x)) for i, x in enumerate(trace.positions))
            write_csv(run.path("particle_trace.csv"), ("step", "t(s)", "x(um)"), rows)

    summary = {
        "shape": first.shape,
        "rate": first.rate,
        "mean": first.mean,
        "mode": first.mode,
        "traces": p.traces,
        "mean_rate": float(np.mean(rates)),
        "rates": rates,
        "particle": {"x0": p.x0, "alpha": p.alpha, "kBT": p.kBT, "dt": p.dt, "n": p.n},
    }
    run.write_json("gamma.json", summary)
    _logger().info(f"Гамма: форма {first.shape:.2f}, інтенсивність {first.rate:.2f}")
    return summary


COMMAND_HANDLERS: Dict[str, Callable[[RunConfig, RunManager, argparse.Namespace], Dict]] = {
    "simulate": cmd_simulate,
    "scurve": cmd_scurve,
    "sample": cmd_sample,
    "optimize": cmd_optimize,
    "analyze": cmd_analyze,
    "particle-gamma": cmd_particle_gamma,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    logger_instance = get_logger_instance()
    logger_instance.set_verbosity(args.verbose)
    logger = logger_instance.get_logger()

    run: Optional[RunManager] = None
    try:
        config = resolve_config(args)
        if args.command == "particle-gamma" and config.particle.traces < 1:
            raise ConfigError("particle.traces має бути >= 1")
        run = RunManager(resolve_output_root(args.output, config))
        run_name = str(config.run_name) if config.run_name is not None else None
        run.create_run(args.command, run_name)
        run.write_resolved_config(config)
        COMMAND_HANDLERS[args.command](config, run, args)
        logger.info(f"Готово: {run.run_path}")
        return EXIT_OK
    except OutOfRange as e:
        logger.error(f"Конфігурація не може реалізувати потрібні ваги монеток: {e}")
        return EXIT_OUT_OF_RANGE
    except (ConfigError, RunDirectoryExists, FileExistsError) as e:
        logger.error(str(e))
        return EXIT_CONFIG
    except CodesignError as e:
        logger.error(f"Помилка виконання: {e}")
        return EXIT_FAILURE
    except ValueError as e:
        logger.error(f"Некоректне значення: {e}")
        return EXIT_CONFIG
    except KeyboardInterrupt:
        logger.warning("Виконання перервано користувачем")
        return EXIT_INTERRUPTED
    finally:
        if run is not None:
            run.close()


if __name__ == "__main__":
    sys.exit(main())
