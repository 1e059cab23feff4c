"""
Спрощена система логування для MTJ Codesign
Консоль (stderr, кольори через colorama) та необов'язковий файл у теці запуску
"""

import logging
import sys
import threading
from pathlib import Path
from typing import Optional

try:
    import colorama
    from colorama import Fore, Style
    COLORAMA_AVAILABLE = True
except ImportError:
    colorama = None
    COLORAMA_AVAILABLE = False


LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


class ColorFormatter(logging.Formatter):
    """Форматер, що підсвічує рівень повідомлення"""

    def __init__(self, use_color: bool):
        super().__init__(LOG_FORMAT, datefmt=DATE_FORMAT)
        self.use_color = use_color and COLORAMA_AVAILABLE
        if self.use_color:
            self.level_colors = {
                logging.DEBUG: Style.DIM,
                logging.INFO: Fore.CYAN,
                logging.WARNING: Fore.YELLOW,
                logging.ERROR: Fore.RED,
                logging.CRITICAL: Fore.RED + Style.BRIGHT,
            }
        else:
            self.level_colors = {}

    def format(self, record: logging.LogRecord) -> str:
        message = super().format(record)
        color = self.level_colors.get(record.levelno)
        if color:
            return f"{color}{message}{Style.RESET_ALL}"
        return message


class SimpleLogger:
    """Logger проєкту: прогрес у stderr, детальний журнал у файлі запуску"""

    def __init__(self, name: str = "MTJCodesign"):
        self.name = name
        self.logger = logging.getLogger(name)
        self.logger.setLevel(logging.DEBUG)
        self.logger.propagate = False
        self.file_handler: Optional[logging.FileHandler] = None

        # Видаляємо існуючі handlers
        for handler in self.logger.handlers[:]:
            self.logger.removeHandler(handler)

        self._setup_handlers()

    def _setup_handlers(self):
        """Налаштування обробників логування"""
        if COLORAMA_AVAILABLE:
            colorama.just_fix_windows_console()

        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(logging.INFO)
        console_handler.setFormatter(ColorFormatter(use_color=sys.stderr.isatty()))
        self.logger.addHandler(console_handler)
        self.console_handler = console_handler

    def attach_file(self, log_path: Path):
        """Додати файловий журнал (рівень DEBUG) у теку запуску"""
        self.detach_file()
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_path, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
        self.logger.addHandler(file_handler)
        self.file_handler = file_handler

    def detach_file(self):
        """Закрити файловий журнал, якщо він відкритий"""
        if self.file_handler is not None:
            self.logger.removeHandler(self.file_handler)
            self.file_handler.close()
            self.file_handler = None

    def set_verbosity(self, verbose: bool):
        """Перемкнути консоль між INFO та DEBUG"""
        self.console_handler.setLevel(logging.DEBUG if verbose else logging.INFO)

    def get_logger(self) -> logging.Logger:
        """Отримати logger"""
        return self.logger


# Глобальний екземпляр logger
_logger_instance: Optional[SimpleLogger] = None
_logger_lock = threading.Lock()


def get_logger_instance() -> SimpleLogger:
    """Отримати глобальний екземпляр logger"""
    global _logger_instance

    if _logger_instance is None:
        with _logger_lock:
            if _logger_instance is None:
                _logger_instance = SimpleLogger()

    return _logger_instance
