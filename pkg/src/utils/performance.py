"""
Профілювання та паралельне виконання оцінювань
"""

import functools
import threading
import time
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, Iterable, List, Sequence, TypeVar

from utils.simple_logger import get_logger_instance

T = TypeVar('T')
R = TypeVar('R')


class PerformanceProfiler:
    """Профайлер продуктивності для відстеження тривалих викликів"""

    def __init__(self, slow_threshold: float = 60.0):
        self.call_times: Dict[str, List[float]] = defaultdict(list)
        self.slow_threshold = slow_threshold
        self.enabled = True
        self._lock = threading.Lock()
        self.logger = get_logger_instance().get_logger()

    def profile_method(self, func: Callable) -> Callable:
        """Декоратор для профілювання функцій"""
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            if not self.enabled:
                return func(*args, **kwargs)

            start_time = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                execution_time = time.perf_counter() - start_time
                method_name = f"{func.__module__}.{func.__qualname__}"
                with self._lock:
                    self.call_times[method_name].append(execution_time)

                # Логуємо повільні виклики
                if execution_time > self.slow_threshold:
                    self.logger.debug(f"Повільний виклик: {method_name} - {execution_time:.1f}s")

        return wrapper

    def get_stats(self) -> Dict[str, Dict[str, Any]]:
        """Отримання статистики профілювання"""
        stats = {}
        with self._lock:
            for method_name, times in self.call_times.items():
                if times:
                    stats[method_name] = {
                        'calls': len(times),
                        'total_time': sum(times),
                        'avg_time': sum(times) / len(times),
                        'max_time': max(times),
                    }
        return stats

    def reset_stats(self):
        """Скидання статистики"""
        with self._lock:
            self.call_times.clear()


class EvaluationPool:
    """Пул потоків для незалежних оцінювань; порядок результатів зберігається"""

    def __init__(self, max_workers: int = 1):
        if max_workers < 1:
            raise ValueError(f"Кількість потоків має бути >= 1, отримано {max_workers}")
        self.max_workers = max_workers
        self.logger = get_logger_instance().get_logger()

    def map(self, func: Callable[[T], R], items: Iterable[T]) -> List[R]:
        """Застосувати func до кожного елемента; результат у порядку вхідних даних"""
        items = list(items)
        if self.max_workers == 1 or len(items) <= 1:
            return [func(item) for item in items]

        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            return list(executor.map(func, items))

    def starmap(self, func: Callable[..., R], argument_tuples: Sequence[tuple]) -> List[R]:
        """Варіант map для кортежів аргументів"""
        return self.map(lambda args: func(*args), argument_tuples)


# Глобальний профайлер
_profiler = PerformanceProfiler()


def get_profiler() -> PerformanceProfiler:
    """Отримання глобального профайлера"""
    return _profiler


def profile(func: Callable) -> Callable:
    """Декоратор для профілювання функції"""
    return _profiler.profile_method(func)
