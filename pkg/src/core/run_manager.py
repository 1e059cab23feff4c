"""
Менеджер тек запусків
Кожна команда пише у власну теку: resolved_config.json, дані CSV/JSON та журнал run.log
"""

import json
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

from core.errors import RunDirectoryExists
from core.run_config import RunConfig
from utils.simple_logger import get_logger_instance

RESOLVED_CONFIG_NAME = "resolved_config.json"
LOG_NAME = "run.log"


class RunManager:
    """Створення та наповнення теки запуску"""

    def __init__(self, output_root: Path):
        self.output_root = Path(output_root)
        self.run_path: Optional[Path] = None
        self.logger = get_logger_instance().get_logger()

    def create_run(self, command: str, run_name: Optional[str] = None) -> Path:
        """
        Створення теки запуску

        Args:
            command: Назва команди (префікс автоматичної назви)
            run_name: Назва теки, заданa користувачем

        Returns:
            Шлях до нової теки; наявна тека не перезаписується
        """
        name = run_name or f"{command}-{datetime.now().strftime('%Y%m%d-%H%M%S')}"
        run_path = self.output_root / name
        if run_path.exists():
            raise RunDirectoryExists(f"Тека запуску вже існує: {run_path}")

        run_path.mkdir(parents=True)
        self.run_path = run_path
        get_logger_instance().attach_file(run_path / LOG_NAME)
        self.logger.info(f"Тека запуску: {run_path}")
        return run_path

    def close(self):
        get_logger_instance().detach_file()

    def path(self, filename: str) -> Path:
        if self.run_path is None:
            raise RuntimeError("Тека запуску ще не створена")
        return self.run_path / filename

    def write_resolved_config(self, config: RunConfig) -> Path:
        """Збереження повної конфігурації з seed для відтворення"""
        path = self.path(RESOLVED_CONFIG_NAME)
        config.save(path)
        return path

    def write_json(self, filename: str, data: Dict[str, Any]) -> Path:
        path = self.path(filename)
        if path.exists():
            raise RunDirectoryExists(f"Файл вже існує: {path}")
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2, ensure_ascii=False, sort_keys=True)
            f.write("\n")
        return path

    @staticmethod
    def load_resolved_config(run_path: Path) -> RunConfig:
        return RunConfig.load(Path(run_path) / RESOLVED_CONFIG_NAME)
