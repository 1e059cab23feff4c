"""
Винятки MTJ Codesign
"""


class CodesignError(Exception):
    """Базовий виняток проєкту"""


class NonFiniteState(CodesignError, ArithmeticError):
    """Намагніченість стала NaN/Inf (занадто великий dt або патологічні параметри)"""


class ResetFailed(CodesignError):
    """Скидання STT не довело вільний шар до -z"""

    def __init__(self, message: str, worst_mz: float):
        super().__init__(message)
        self.worst_mz = worst_mz


class OutOfRange(CodesignError, ValueError):
    """Цільова ймовірність поза досяжним діапазоном S-кривої"""

    def __init__(self, message: str, p_target: float, p_low: float, p_high: float):
        super().__init__(message)
        self.p_target = p_target
        self.p_low = p_low
        self.p_high = p_high


class NonConvergence(CodesignError, ArithmeticError):
    """Ітераційний алгоритм не збігся за ліміт ітерацій"""


class OutOfSupport(CodesignError, ValueError):
    """Аргумент поза носієм усіченого розподілу"""


class DegenerateTrace(CodesignError, ValueError):
    """Траєкторія частинки не має ненульових приростів"""


class ZeroMassInterval(CodesignError, ValueError):
    """Інтервал дерева не містить маси розподілу"""


class EmptyHistogram(CodesignError, ValueError):
    """Гістограма без жодного відліку"""


class EvaluatorFailure(CodesignError, RuntimeError):
    """Оцінювач конфігурацій завершився непередбаченою помилкою"""


class EmptyArchive(CodesignError, ValueError):
    """Архів запуску порожній"""


class ConfigError(CodesignError, ValueError):
    """Некоректна конфігурація запуску"""


class RunDirectoryExists(CodesignError, FileExistsError):
    """Тека запуску вже існує (перезапис заборонено)"""
