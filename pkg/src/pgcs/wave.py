"""Bounded Wave standard-deviation schedule.

The wave ``w(x, a, b) = t(s(x, a, b))`` oscillates between ``a`` (at integer
``x``) and ``b`` (at half-integer ``x``) with period 1.  It is built from the
pair

    t(x) = tan(pi*x - pi/2)**2           on (0, 1)
    T(x) = arccot(sqrt(x)) / pi          on [0, inf]

where ``t(T(y)) == y``, and a cosine interpolation ``s`` between ``T(a)`` and
``T(b)`` in phase space.  ``b`` may be ``inf``; the pole this produces is
replaced by a finite ``sd_cap``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_SD_CAP = 1e30


class WaveDomainError(ValueError):
    """Argument outside the domain of a wave sub-formula."""


class WaveConfigError(ValueError):
    """Invalid :class:`WaveParams`."""


def tan_sq_map(x: float, cap: float = math.inf) -> float:
    """Return ``tan(pi*x - pi/2)**2``, clipped to ``cap``.

    Raises :class:`WaveDomainError` unless ``0 < x < 1``.
    """
    if not 0.0 < x < 1.0:
        raise WaveDomainError(f"tan_sq_map needs 0 < x < 1, got {x!r}")
    val = math.tan(math.pi * x - math.pi / 2) ** 2
    if not math.isfinite(val) or val > cap:
        return cap
    return val


def cot_transform(x: float) -> float:
    """Return ``arccot(sqrt(x)) / pi``; ``cot_transform(inf) == 0`` exactly."""
    if math.isnan(x) or x < 0:
        raise WaveDomainError(f"cot_transform needs x >= 0, got {x!r}")
    if math.isinf(x):
        return 0.0
    return (math.pi / 2 - math.atan(math.sqrt(x))) / math.pi


def phase_interp(x: float, a: float, b: float) -> float:
    ta = cot_transform(a)
    tb = cot_transform(b)
    return ((math.cos(2 * math.pi * x - math.pi) + 1) / 2) * (tb - ta) + ta


def wave(x: float, a: float, b: float, sd_cap: float = DEFAULT_SD_CAP) -> float:
    """Evaluate the Bounded Wave at cycle position ``x``.

    The result is clipped at ``sd_cap`` (or at ``b`` if that is finite and
    larger), so a phase that lands on the pole of ``t`` yields the cap
    rather than an infinity.
    """
    cap = sd_cap if math.isinf(b) else max(sd_cap, b)
    s = phase_interp(x, a, b)
    if s <= 0.0:
        # only reachable when T(b) == 0, i.e. b = inf at the wave crest
        return cap
    return tan_sq_map(s, cap)


@dataclass(frozen=True)
class WaveParams:
    a: float = 0.0
    b: float = math.inf
    period: int = 5000
    sd_cap: float = DEFAULT_SD_CAP

    def __post_init__(self):
        if math.isnan(self.a) or math.isnan(self.b):
            raise WaveConfigError("wave bounds must not be NaN")
        if math.isinf(self.a):
            raise WaveConfigError("lower bound a must be finite")
        if not 0 <= self.a <= self.b:
            raise WaveConfigError(f"need 0 <= a <= b, got a={self.a}, b={self.b}")
        if isinstance(self.period, bool) or int(self.period) != self.period or self.period < 2:
            raise WaveConfigError(f"period must be an integer >= 2, got {self.period!r}")
        if not (math.isfinite(self.sd_cap) and self.sd_cap > 0):
            raise WaveConfigError(f"sd_cap must be finite and positive, got {self.sd_cap!r}")


@dataclass(frozen=True)
class WaveCache:
    """One period of the wave sampled at ``i / period``."""

    params: WaveParams
    values: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.values)


def build_cache(params: WaveParams) -> WaveCache:
    if not isinstance(params, WaveParams):
        raise WaveConfigError(f"expected WaveParams, got {type(params).__name__}")
    n = int(params.period)
    values = np.array(
        [wave(i / n, params.a, params.b, params.sd_cap) for i in range(n)],
        dtype=float,
    )
    values.setflags(write=False)
    return WaveCache(params, values)


def sd_at(cache: WaveCache, step: int) -> float:
    return float(cache.values[step % len(cache.values)])
