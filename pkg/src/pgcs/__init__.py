"""Derivative-free minimization: Powell's method, Gaussian Crunching Search and the P-GCS hybrid."""
from .gcs import GcsConfig, GcsState, GaussianSampler, RunResult, gcs_step, run_gcs
from .hybrid import HybridConfig, run_pgcs
from .objectives import EvalCounter, ObjectiveSpec, eval_f1, eval_f2, eval_f3, make_objective
from .powell import PowellConfig, PowellOutcome, powell_minimize
from .wave import WaveCache, WaveParams, build_cache, wave

__version__ = "0.1.0"
