"""Benchmark objectives f1, f2, f3 and an evaluation-counting wrapper."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

LAMBDA = 15.0
MU = 0.05


class ObjectiveConfigError(ValueError):
    pass


def eval_f1(x: float) -> float:
    """Single-basin-trap function; global minimum 0 at x = 0, local one near 1198.58."""
    u = x / 60
    return (1 + 19 - 19 * math.exp(-((-20 + u) * (-20 + u)) / 9)) * (u * u)


def eval_f2(x: float, y: float) -> float:
    return -LAMBDA * math.exp(-MU * math.hypot(x, y)) + LAMBDA - math.cos(x) - math.cos(y) + 2


def eval_f3(x) -> float:
    """Radial exponential well in any dimension, flat far from the origin."""
    v = np.asarray(x, dtype=float)
    if v.size == 0:
        raise ObjectiveConfigError("f3 needs at least one coordinate")
    return float(-LAMBDA * np.exp(-MU * np.sqrt(np.dot(v, v))) + LAMBDA)


def _f1_vec(v) -> float:
    return eval_f1(float(v[0]))


def _f2_vec(v) -> float:
    return eval_f2(float(v[0]), float(v[1]))


# name -> (evaluator on a vector, fixed dimension or None if variadic)
_REGISTRY: dict[str, tuple[Callable, int | None]] = {
    "f1": (_f1_vec, 1),
    "f2": (_f2_vec, 2),
    "f3": (eval_f3, None),
}

OBJECTIVE_NAMES = tuple(_REGISTRY)


@dataclass(frozen=True)
class ObjectiveSpec:
    name: str
    dimension: int
    evaluator: Callable[[np.ndarray], float]

    def __call__(self, x) -> float:
        return self.evaluator(x)


def make_objective(name: str, dimension: int | None = None) -> ObjectiveSpec:
    """Look up a benchmark by name.

    ``dimension`` defaults to the function's fixed dimension (f1: 1, f2: 2)
    and to 12 for f3.
    """
    try:
        fn, fixed = _REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown objective {name!r}; choose from {', '.join(OBJECTIVE_NAMES)}") from None
    if dimension is None:
        dimension = fixed if fixed is not None else 12
    if isinstance(dimension, bool) or int(dimension) != dimension or dimension < 1:
        raise ObjectiveConfigError(f"dimension must be a positive integer, got {dimension!r}")
    if fixed is not None and dimension != fixed:
        raise ObjectiveConfigError(f"{name} is {fixed}-dimensional, got dimension={dimension}")
    return ObjectiveSpec(name, int(dimension), fn)


class EvalCounter:
    """Callable wrapper that tallies evaluator invocations."""

    def __init__(self, fn: Callable[[np.ndarray], float]):
        self.fn = fn
        self.count = 0

    def __call__(self, x) -> float:
        self.count += 1
        return self.fn(x)
