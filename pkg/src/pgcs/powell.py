"""Powell's conjugate-direction method.

Derivative-free: each outer iteration line-minimizes along every direction
of the current set, then (subject to the usual replacement test) swaps the
direction of largest decrease for the net displacement of the sweep.  Line
searches bracket the minimum by golden-ratio expansion with parabolic
extrapolation and then shrink the bracket with Brent's method.

Budget semantics: ``max_evals`` is a hard cap.  An evaluation that would
exceed it is never made; the run stops with the best point of the last
completed line search, so ``evals <= max_evals`` always holds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

GOLDEN_GROW = 1.618034
GOLDEN_SECTION = 0.3819660
BRENT_ABS_FLOOR = 1.0e-11
_TINY_DENOM = 1e-21


class BracketError(RuntimeError):
    """No bracket found; ``best`` holds the lowest probe ``(t, phi(t))``."""

    def __init__(self, msg, best, nfev):
        super().__init__(msg)
        self.best = best
        self.nfev = nfev


class Bracket(NamedTuple):
    ta: float
    tb: float
    tc: float
    fa: float
    fb: float
    fc: float
    nfev: int


class LineMin(NamedTuple):
    t: float
    f: float
    nfev: int
    converged: bool


def bracket_minimum(
    phi: Callable[[float], float],
    t0: float = 0.0,
    t1: float = 1.0,
    f0: float | None = None,
    grow_limit: float = 110.0,
    max_expansions: int = 50,
) -> Bracket:
    """Find ``ta, tb, tc`` with ``phi(tb)`` below both ends.

    Steps downhill from ``t0``/``t1``, growing by the golden ratio and
    trying parabolic extrapolation capped at ``grow_limit`` times the
    previous step.  ``f0`` may supply an already known ``phi(t0)``.
    """
    if t0 == t1:
        raise ValueError("bracket_minimum needs t0 != t1")
    nfev = 0
    if f0 is None:
        f0 = phi(t0)
        nfev += 1
    xa, xb = t0, t1
    fa, fb = f0, phi(t1)
    nfev += 1
    if fa < fb:
        xa, xb, fa, fb = xb, xa, fb, fa
    xc = xb + GOLDEN_GROW * (xb - xa)
    fc = phi(xc)
    nfev += 1
    it = 0
    while fc < fb:
        if it >= max_expansions:
            break
        it += 1
        tmp1 = (xb - xa) * (fb - fc)
        tmp2 = (xb - xc) * (fb - fa)
        val = tmp2 - tmp1
        denom = 2.0 * _TINY_DENOM if abs(val) < _TINY_DENOM else 2.0 * val
        w = xb - ((xb - xc) * tmp2 - (xb - xa) * tmp1) / denom
        wlim = xb + grow_limit * (xc - xb)
        if (w - xc) * (xb - w) > 0.0:
            # parabolic point between b and c
            fw = phi(w)
            nfev += 1
            if fw < fc:
                xa, xb, fa, fb = xb, w, fb, fw
                break
            if fw > fb:
                xc, fc = w, fw
                break
            w = xc + GOLDEN_GROW * (xc - xb)
            fw = phi(w)
            nfev += 1
        elif (w - wlim) * (wlim - xc) >= 0.0:
            w = wlim
            fw = phi(w)
            nfev += 1
        elif (w - wlim) * (xc - w) > 0.0:
            fw = phi(w)
            nfev += 1
            if fw < fc:
                xb, xc, fb, fc = xc, w, fc, fw
                w = xc + GOLDEN_GROW * (xc - xb)
                fw = phi(w)
                nfev += 1
        else:
            w = xc + GOLDEN_GROW * (xc - xb)
            fw = phi(w)
            nfev += 1
        xa, xb, xc = xb, xc, w
        fa, fb, fc = fb, fc, fw

    valid_shape = (fb < fc and fb <= fa) or (fb < fa and fb <= fc)
    ordered = xa < xb < xc or xc < xb < xa
    finite = all(math.isfinite(v) for v in (xa, xb, xc))
    if not (valid_shape and ordered and finite):
        probes = [(xa, fa), (xb, fb), (xc, fc)]
        if any(math.isnan(v) for p in probes for v in p):
            best = (math.nan, math.nan)
        else:
            best = min(probes, key=lambda p: p[1])
        raise BracketError("no bracket found", best, nfev)
    return Bracket(xa, xb, xc, fa, fb, fc, nfev)


def brent_line_min(
    phi: Callable[[float], float],
    bracket: Bracket,
    tol: float = 1.48e-8,
    maxiter: int = 100,
) -> LineMin:
    """Minimize ``phi`` inside a bracket by parabolic interpolation with golden-section fallback."""
    a, b = sorted((bracket.ta, bracket.tc))
    x = w = v = bracket.tb
    fx = fw = fv = bracket.fb
    deltax = 0.0
    rat = 0.0
    nfev = 0
    converged = False
    for _ in range(maxiter):
        tol1 = tol * abs(x) + BRENT_ABS_FLOOR
        tol2 = 2.0 * tol1
        xmid = 0.5 * (a + b)
        if abs(x - xmid) < (tol2 - 0.5 * (b - a)):
            converged = True
            break
        if abs(deltax) <= tol1:
            deltax = a - x if x >= xmid else b - x
            rat = GOLDEN_SECTION * deltax
        else:
            tmp1 = (x - w) * (fx - fv)
            tmp2 = (x - v) * (fx - fw)
            p = (x - v) * tmp2 - (x - w) * tmp1
            tmp2 = 2.0 * (tmp2 - tmp1)
            if tmp2 > 0.0:
                p = -p
            tmp2 = abs(tmp2)
            dx_prev = deltax
            deltax = rat
            if p > tmp2 * (a - x) and p < tmp2 * (b - x) and abs(p) < abs(0.5 * tmp2 * dx_prev):
                rat = p / tmp2
                u = x + rat
                if (u - a) < tol2 or (b - u) < tol2:
                    rat = tol1 if xmid - x >= 0 else -tol1
            else:
                deltax = a - x if x >= xmid else b - x
                rat = GOLDEN_SECTION * deltax

        if abs(rat) < tol1:
            u = x + tol1 if rat >= 0 else x - tol1
        else:
            u = x + rat
        fu = phi(u)
        nfev += 1

        if fu > fx:
            if u < x:
                a = u
            else:
                b = u
            if fu <= fw or w == x:
                v, w, fv, fw = w, u, fw, fu
            elif fu <= fv or v == x or v == w:
                v, fv = u, fu
        else:
            if u >= x:
                a = x
            else:
                b = x
            v, w, x = w, x, u
            fv, fw, fx = fw, fx, fu
    return LineMin(x, fx, nfev, converged)


REPLACEMENT_RULES = ("conjugate", "largest-decrease")


@dataclass(frozen=True)
class PowellConfig:
    """Tolerances and budgets; ``None`` budgets resolve to ``1000 * dimension``.

    ``xtol`` is the relative tolerance handed to Brent in every line
    search.  ``replacement`` picks the direction-set update:

    ``"conjugate"``
        always adopt the sweep displacement, dropping the non-conjugate
        direction that contributed most to it.  Terminates on a
        d-dimensional quadratic in about d+1 sweeps.
    ``"largest-decrease"``
        adopt it in place of the direction of largest decrease, and only
        when the classical extrapolation test passes.
    """

    xtol: float = 1e-4
    ftol: float = 1e-4
    max_iters: int | None = None
    max_evals: int | None = None
    replacement: str = "conjugate"

    def __post_init__(self):
        if not (self.xtol > 0 and self.ftol > 0):
            raise ValueError("xtol and ftol must be positive")
        for name in ("max_iters", "max_evals"):
            val = getattr(self, name)
            if val is not None and val < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.replacement not in REPLACEMENT_RULES:
            raise ValueError(f"replacement must be one of {REPLACEMENT_RULES}, got {self.replacement!r}")

    def resolved(self, dimension: int) -> "PowellConfig":
        return PowellConfig(
            self.xtol,
            self.ftol,
            self.max_iters if self.max_iters is not None else 1000 * dimension,
            self.max_evals if self.max_evals is not None else 1000 * dimension,
            self.replacement,
        )


@dataclass
class PowellOutcome:
    x: np.ndarray
    f: float
    iters: int
    evals: int
    converged: bool
    reason: str
    directions: np.ndarray = field(repr=False)


class _BudgetExhausted(Exception):
    pass


class _NonFinite(Exception):
    pass


class _Guarded:
    def __init__(self, fn, max_evals):
        self.fn = fn
        self.max_evals = max_evals
        self.count = 0

    def __call__(self, x):
        if self.count >= self.max_evals:
            raise _BudgetExhausted
        self.count += 1
        val = float(self.fn(x))
        if not math.isfinite(val):
            raise _NonFinite
        return val


def line_minimize(f, p: np.ndarray, u: np.ndarray, config: PowellConfig | None = None, fp: float | None = None):
    """Minimize ``f`` along the ray ``p + t*u``.

    Returns ``(p_new, f_new, decrease, step)`` where ``step = t*u``.  When
    no bracket exists the lowest probe is taken if it strictly improves on
    ``f(p)``; otherwise ``p`` is returned unchanged with zero decrease.
    """
    config = config or PowellConfig()
    p = np.asarray(p, dtype=float)
    u = np.asarray(u, dtype=float)
    if fp is None:
        fp = float(f(p))
    if not np.any(u):
        return p, fp, 0.0, u

    def phi(t):
        return f(p + t * u)

    try:
        br = bracket_minimum(phi, 0.0, 1.0, f0=fp)
    except BracketError as err:
        t, ft = err.best
        if not ft < fp:
            return p, fp, 0.0, np.zeros_like(u)
    else:
        t, ft, _, _ = brent_line_min(phi, br, tol=config.xtol)
    step = t * u
    return p + step, ft, fp - ft, step


def powell_minimize(f, x0, config: PowellConfig | None = None) -> PowellOutcome:
    x = np.array(x0, dtype=float).ravel()
    n = x.size
    if n < 1:
        raise ValueError("x0 must have at least one coordinate")
    cfg = (config or PowellConfig()).resolved(n)
    fn = _Guarded(f, cfg.max_evals)
    direc = np.eye(n)
    iters = 0

    try:
        fval = fn(x)
    except _NonFinite:
        return PowellOutcome(x, math.nan, 0, fn.count, False, "non-finite", direc)

    x_sweep_start = x.copy()
    n_conj = 0
    reason = "ftol-converged"
    try:
        while True:
            f_start = fval
            bigind = 0
            delta = 0.0
            moved = np.zeros(n)
            for i in range(n):
                f_before = fval
                x, fval, _, step = line_minimize(fn, x, direc[i], cfg, fp=fval)
                moved[i] = np.linalg.norm(step)
                if f_before - fval > delta:
                    delta = f_before - fval
                    bigind = i
            iters += 1
            if 2.0 * (f_start - fval) <= cfg.ftol * (abs(f_start) + abs(fval)) + 1e-20:
                break
            if fn.count >= cfg.max_evals:
                reason = "eval-budget"
                break
            if iters >= cfg.max_iters:
                reason = "iter-budget"
                break

            disp = x - x_sweep_start
            if cfg.replacement == "conjugate":
                x, fval, _, step = line_minimize(fn, x, disp, cfg, fp=fval)
                # the trailing n_conj directions are mutually conjugate on a
                # quadratic; the dropped one must come from the leading block
                free = n - n_conj
                drop = int(np.argmax(moved[:free]))
                if np.any(step) and moved[drop] > 0:
                    direc[drop:-1] = direc[drop + 1:].copy()
                    direc[-1] = step
                    n_conj = n_conj + 1 if n_conj < n - 1 else 0
                # the next sweep must start at the minimum along `disp`
                x_sweep_start = x.copy()
                continue

            x_sweep_start = x.copy()
            f_extrap = fn(x + disp)
            if f_start > f_extrap:
                t = 2.0 * (f_start + f_extrap - 2.0 * fval)
                t *= (f_start - fval - delta) ** 2
                t -= delta * (f_start - f_extrap) ** 2
                if t < 0.0:
                    x, fval, _, step = line_minimize(fn, x, disp, cfg, fp=fval)
                    if np.any(step):
                        direc[bigind] = direc[-1]
                        direc[-1] = step
    except _BudgetExhausted:
        reason = "eval-budget"
    except _NonFinite:
        reason = "non-finite"

    return PowellOutcome(x, float(fval), iters, fn.count, reason == "ftol-converged", reason, direc)
