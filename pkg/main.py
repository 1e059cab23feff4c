#!/usr/bin/env python3
"""
MTJ Codesign - командний рядок
Моделювання пристроїв MTJ, генерація вибірок за деревом CDF та оптимізація конфігурацій
"""

import os
import sys

# Додаємо src до шляху для імпорту модулів
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from cli.commands import main as cli_main  # noqa: E402


def main():
    """Головна функція запуску програми"""
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
