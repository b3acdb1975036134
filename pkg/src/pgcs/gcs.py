"""Gaussian Crunching Search.

Greedy stochastic search: perturb the current point with zero-mean Gaussian
noise, keep the candidate only if it is strictly better.  The noise scale is
read from a precomputed Bounded Wave cache indexed by ``crunch_step``, a
counter of rejections that wraps at the wave period.

Phase bookkeeping matters for behaviour:

* a rejection advances ``crunch_step`` by one;
* an acceptance holds ``crunch_step`` (and therefore ``sd``) where it is,
  so a productive scale keeps being used;
* the run starts with ``sd = a``, which for ``a = 0`` makes the very first
  proposal a guaranteed no-op rejection.

An optional refiner (a local optimizer) is run from every improving
candidate; its result replaces the candidate only when strictly better.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .objectives import EvalCounter, ObjectiveSpec
from .wave import WaveCache, WaveParams, build_cache, sd_at

# (objective, start) -> (position, value)
Refiner = Callable[[Callable, np.ndarray], "tuple[np.ndarray, float]"]


class GcsConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GcsConfig:
    target: float = 0.05
    max_outer_iters: int = 500_000
    wave: WaveParams = field(default_factory=WaveParams)
    seed: int = 1

    def __post_init__(self):
        if isinstance(self.max_outer_iters, bool) or int(self.max_outer_iters) != self.max_outer_iters \
                or self.max_outer_iters < 1:
            raise GcsConfigError(f"max_outer_iters must be a positive integer, got {self.max_outer_iters!r}")
        if math.isnan(self.target) or self.target == -math.inf:
            raise GcsConfigError(f"target must be a number, got {self.target!r}")


class GaussianSampler:
    """Seeded normal variates from numpy's PCG64 generator.

    The stream is ``numpy.random.Generator(PCG64(seed)).normal(0, sd, d)``;
    a draw is consumed even when ``sd == 0`` so that the variate stream
    does not depend on the schedule.
    """

    algorithm = "numpy.random.PCG64 + Generator.normal (ziggurat)"

    def __init__(self, seed: int):
        self.seed = seed
        self.rng = np.random.Generator(np.random.PCG64(seed))

    def sample(self, d: int, sd: float) -> np.ndarray:
        return self.rng.normal(0.0, sd, d)


@dataclass(frozen=True)
class GcsState:
    current_pos: np.ndarray
    current_val: float
    crunch_step: int = 0
    iter: int = 0
    sd: float = 0.0


class StepReport(NamedTuple):
    accepted: bool
    refined: bool
    refiner_called: bool
    candidate_val: float


@dataclass
class RunResult:
    final_pos: np.ndarray
    final_val: float
    outer_iters: int
    accepted: int
    refinements: int
    evals: int
    wall_time: float
    reason: str
    seed: int


def propose(state: GcsState, sampler: GaussianSampler, d: int) -> np.ndarray:
    return state.current_pos + sampler.sample(d, state.sd)


def gcs_step(
    state: GcsState,
    cache: WaveCache,
    objective: Callable,
    sampler: GaussianSampler,
    refiner: Optional[Refiner] = None,
) -> tuple[GcsState, StepReport]:
    """One proposal / accept-reject / phase-update cycle."""
    cand = propose(state, sampler, state.current_pos.size)
    cand_val = float(objective(cand))
    accepted = refined = called = False
    step = state.crunch_step
    if math.isfinite(cand_val) and cand_val < state.current_val:
        accepted = True
        unrefined_val = cand_val
        if refiner is not None:
            called = True
            r_pos, r_val = refiner(objective, cand)
            if r_val < cand_val:
                cand, cand_val = np.asarray(r_pos, dtype=float), float(r_val)
                refined = True
        pos, val = cand, cand_val
    else:
        unrefined_val = cand_val
        pos, val = state.current_pos, state.current_val
        step += 1
    if step % len(cache) == 0:
        step = 0
    new = GcsState(pos, val, step, state.iter + 1, sd_at(cache, step))
    return new, StepReport(accepted, refined, called, unrefined_val)


def run_gcs(
    objective: ObjectiveSpec,
    x0,
    config: GcsConfig | None = None,
    refiner: Optional[Refiner] = None,
    on_step: Optional[Callable[[GcsState, StepReport], None]] = None,
) -> RunResult:
    """Run the search until ``current_val < target`` or the budget is spent.

    ``evals`` counts every objective call, including the initial one and
    those made inside the refiner.  ``on_step`` is called after each step
    with the new state and its report.
    """
    config = config or GcsConfig()
    x = np.array(x0, dtype=float).ravel()
    if x.size != objective.dimension:
        raise GcsConfigError(f"start has {x.size} coordinates, {objective.name} expects {objective.dimension}")
    t0 = time.monotonic()
    counter = EvalCounter(objective)
    cache = build_cache(config.wave)
    sampler = GaussianSampler(config.seed)
    state = GcsState(x, float(counter(x)), 0, 0, float(config.wave.a))
    accepted = refinements = 0
    reason = "iter-budget"
    while state.iter < config.max_outer_iters:
        state, rep = gcs_step(state, cache, counter, sampler, refiner)
        accepted += rep.accepted
        refinements += rep.refiner_called
        if on_step is not None:
            on_step(state, rep)
        if state.current_val < config.target:
            reason = "success"
            break
    return RunResult(
        final_pos=state.current_pos,
        final_val=state.current_val,
        outer_iters=state.iter,
        accepted=accepted,
        refinements=refinements,
        evals=counter.count,
        wall_time=time.monotonic() - t0,
        reason=reason,
        seed=config.seed,
    )
