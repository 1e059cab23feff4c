"""
Парето-домінування для двох цілей, що мінімізуються
"""

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

Objectives = Tuple[float, float]


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """a не гірша за b в усіх цілях і краща хоча б в одній"""
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


def fast_nondominated_sort(objectives: Sequence[Sequence[float]]) -> List[List[int]]:
    """Розбиття індексів на фронти; фронт 0 - недомінована множина"""
    n = len(objectives)
    dominated_by: List[List[int]] = [[] for _ in range(n)]
    domination_count = [0] * n
    fronts: List[List[int]] = [[]]

    for i in range(n):
        for j in range(i + 1, n):
            if dominates(objectives[i], objectives[j]):
                dominated_by[i].append(j)
                domination_count[j] += 1
            elif dominates(objectives[j], objectives[i]):
                dominated_by[j].append(i)
                domination_count[i] += 1

    fronts[0] = [i for i in range(n) if domination_count[i] == 0]

    current = 0
    while current < len(fronts) and fronts[current]:
        next_front = []
        for i in fronts[current]:
            for j in dominated_by[i]:
                domination_count[j] -= 1
                if domination_count[j] == 0:
                    next_front.append(j)
        current += 1
        if next_front:
            fronts.append(sorted(next_front))
        else:
            break
    return [front for front in fronts if front]


def crowding_distance(objectives: Sequence[Sequence[float]]) -> np.ndarray:
    """Відстань скупчення у межах одного фронту; крайні точки отримують inf"""
    values = np.asarray(objectives, dtype=float).reshape(len(objectives), -1)
    n, m = values.shape
    distance = np.zeros(n)
    if n <= 2:
        distance[:] = math.inf
        return distance

    for j in range(m):
        order = np.argsort(values[:, j], kind="stable")
        distance[order[0]] = math.inf
        distance[order[-1]] = math.inf
        span = values[order[-1], j] - values[order[0], j]
        if span <= 0.0:
            continue
        distance[order[1:-1]] += (values[order[2:], j] - values[order[:-2], j]) / span
    return distance


def hypervolume_2d(points: Sequence[Sequence[float]], reference: Sequence[float]) -> float:
    """Площа, домінована точками і обмежена опорною точкою"""
    ref_x, ref_y = float(reference[0]), float(reference[1])
    inside = sorted((float(x), float(y)) for x, y in points if x < ref_x and y < ref_y)
    volume = 0.0
    best_y = ref_y
    for x, y in inside:
        if y < best_y:
            volume += (ref_x - x) * (best_y - y)
            best_y = y
    return volume


def nondominated_indices(objectives: Sequence[Sequence[float]]) -> List[int]:
    fronts = fast_nondominated_sort(objectives)
    return fronts[0] if fronts else []


def brute_force_front(objectives: Sequence[Sequence[float]], mask: Optional[Sequence[bool]] = None) -> List[int]:
    """O(n^2) перевірка: індекси, яких не домінує жодна інша точка"""
    n = len(objectives)
    allowed = [True] * n if mask is None else list(mask)
    return [i for i in range(n) if allowed[i]
            and not any(allowed[j] and dominates(objectives[j], objectives[i]) for j in range(n))]


def pareto_indices_2d(objectives: Sequence[Sequence[float]]) -> List[int]:
    """Недомінована множина двох цілей за O(n log n): сортування за першою ціллю"""
    values = np.asarray(objectives, dtype=float).reshape(len(objectives), 2)
    if len(values) == 0:
        return []
    order = np.lexsort((values[:, 1], values[:, 0]))
    result: List[int] = []
    previous_min_y = math.inf
    start = 0
    while start < len(order):
        x = values[order[start], 0]
        stop = start
        while stop < len(order) and values[order[stop], 0] == x:
            stop += 1
        group = order[start:stop]
        group_min = values[group[0], 1]
        # у групі з однаковим x недоміновані лише точки з мінімальним y
        if group_min < previous_min_y:
            result.extend(int(i) for i in group if values[i, 1] == group_min)
        previous_min_y = min(previous_min_y, group_min)
        start = stop
    return sorted(result)
