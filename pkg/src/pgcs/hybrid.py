"""P-GCS: Gaussian Crunching Search with Powell refinement of improving candidates."""
from __future__ import annotations

from dataclasses import dataclass, field

from .gcs import GcsConfig, RunResult, run_gcs
from .objectives import ObjectiveSpec
from .powell import PowellConfig, powell_minimize

__all__ = ["HybridConfig", "RunResult", "powell_refiner", "run_pgcs"]


@dataclass(frozen=True)
class HybridConfig:
    gcs: GcsConfig = field(default_factory=GcsConfig)
    powell: PowellConfig = field(default_factory=PowellConfig)


def powell_refiner(config: PowellConfig | None = None):
    """Wrap :func:`powell_minimize` as a GCS refiner.

    Powell is deterministic, so refinement never touches the GCS random
    stream.
    """
    config = config or PowellConfig()

    def refine(f, x):
        out = powell_minimize(f, x, config)
        return out.x, out.f

    return refine


def run_pgcs(objective: ObjectiveSpec, x0, config: HybridConfig | None = None, on_step=None) -> RunResult:
    config = config or HybridConfig()
    return run_gcs(objective, x0, config.gcs, refiner=powell_refiner(config.powell), on_step=on_step)
