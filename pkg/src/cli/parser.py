"""
Розбір командного рядка та збирання конфігурації запуску
"""

import argparse
from typing import List, Optional

from core.run_config import COIN_KINDS, OPTIMIZER_KINDS, RunConfig

COMMANDS = ("simulate", "scurve", "sample", "optimize", "analyze", "particle-gamma")


def _common_options(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="JSON-файл конфігурації запуску")
    parser.add_argument("--set", dest="assignments", action="append", default=[], metavar="KEY=VALUE",
                        help="Перевизначення значення конфігурації, наприклад device.params.alpha=0.05")
    parser.add_argument("--seed", type=int, help="Головний seed")
    parser.add_argument("--threads", type=int, help="Кількість паралельних оцінювань")
    parser.add_argument("--output", help="Коренева тека запусків")
    parser.add_argument("--name", help="Назва теки запуску (за замовчуванням команда і час)")
    parser.add_argument("--kind", choices=("sot", "stt"), help="Тип пристрою")
    parser.add_argument("-v", "--verbose", action="store_true", help="Детальний вивід у консоль")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mtj-codesign",
        description="Спільне проєктування пристроїв MTJ та генератора вибірок за деревом CDF",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    simulate = subparsers.add_parser("simulate", help="Серія підкидань з траєкторією")
    _common_options(simulate)
    simulate.add_argument("--flips", type=int, help="Кількість підкидань")

    scurve = subparsers.add_parser("scurve", help="S-крива пристрою")
    _common_options(scurve)
    scurve.add_argument("--points", type=int, help="Кількість точок розгортки")
    scurve.add_argument("--flips-per-point", type=int, help="Підкидань на точку")
    scurve.add_argument("--spread", type=float, help="Відносний розкид параметрів пристроїв")
    scurve.add_argument("--devices", type=int, help="Кількість пристроїв з розкидом")
    scurve.add_argument("--dT", type=float, help="Зміна температури для оцінки чутливості [К]")

    sample = subparsers.add_parser("sample", help="Вибірки цільового розподілу")
    _common_options(sample)
    sample.add_argument("--coin", choices=COIN_KINDS, help="Джерело монеток")
    sample.add_argument("--k", type=int, help="Кількість бітів на вибірку")
    sample.add_argument("--samples", type=int, help="Кількість вибірок")

    optimize = subparsers.add_parser("optimize", help="Оптимізація конфігурації пристрою")
    _common_options(optimize)
    optimize.add_argument("--optimizer", choices=OPTIMIZER_KINDS, help="Алгоритм пошуку")
    optimize.add_argument("--runs", type=int, help="Кількість незалежних запусків")

    analyze = subparsers.add_parser("analyze", help="Повторний аналіз архіву запуску")
    _common_options(analyze)
    analyze.add_argument("run", help="Тека запуску optimize з archive.jsonl")

    particle = subparsers.add_parser("particle-gamma", help="Гамма-розподіл з траєкторії частинки")
    _common_options(particle)
    particle.add_argument("--traces", type=int, help="Кількість змодельованих траєкторій")

    return parser


# Прапорці CLI -> ключі конфігурації
_FLAG_KEYS = {
    "seed": "seed",
    "threads": "threads",
    "kind": "device.kind",
    "flips": "simulation.n_flips",
    "points": "scurve.n_points",
    "flips_per_point": "scurve.n_per_point",
    "spread": "scurve.spread",
    "devices": "scurve.devices",
    "dT": "scurve.dT",
    "coin": "sampler.coin",
    "k": "sampler.k",
    "samples": "sampler.n_samples",
    "optimizer": "optimizer.kind",
    "runs": "optimizer.runs",
    "traces": "particle.traces",
}


def flag_assignments(args: argparse.Namespace) -> List[str]:
    """Окремі прапорці як присвоєння 'ключ=значення'"""
    assignments = []
    for attr, key in _FLAG_KEYS.items():
        value = getattr(args, attr, None)
        if value is None:
            continue
        text = value if isinstance(value, str) and attr in ("kind", "coin", "optimizer") else repr(value)
        assignments.append(f"{key}={text}")
    if getattr(args, "name", None):
        assignments.append(f"run_name={args.name}")
    return assignments


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Значення за замовчуванням < файл < --set < окремі прапорці"""
    config = RunConfig.load(args.config) if args.config else RunConfig()
    overrides = list(args.assignments) + flag_assignments(args)
    if overrides:
        config = config.with_overrides(overrides)
    return config.validate()


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)
