"""Disorder-averaged statistics over many seeded realizations.

Realization ``i`` uses seed ``seed + i``.  Each realization builds one phase
map for the longest requested walk and propagates the two input columns once,
reading the observables off after every requested step count.  Because phase
draws are keyed on offsets from the input ports, the leading ``n`` steps of
that map are exactly the map a stand-alone ``n``-step walk would get, so this
is equivalent to running every ``n`` separately.

Workers only change where realizations run: results come back in seed order
and are reduced in that order, so summaries do not depend on the worker count.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from .disorder import DisorderSpec, generate_phase_map
from .errors import ConfigError
from .lattice import WalkConfig, iter_amplitudes
from .metrics import mean_position_variance, position_variance, variance_R
from .two_particle import ExchangeSymmetry, joint_from_columns

__all__ = ["EnsembleSummary", "realization_statistics", "run_ensemble", "write_ensemble_csv"]

ENSEMBLE_COLUMNS = ("n", "mean_var_xm", "se_var_xm", "mean_var_r", "se_var_r")


@dataclass(frozen=True, eq=False)
class EnsembleSummary:
    steps: tuple[int, ...]
    kind: str
    amplitude: float
    symmetry: ExchangeSymmetry
    mode_count: int
    input_a: int
    seeds: tuple[int, ...]
    var_xm: NDArray[np.float64]      # (realizations, steps)
    var_r: NDArray[np.float64]
    single_var: NDArray[np.float64]
    mean_marginal: NDArray[np.float64]  # (steps, mode_count)

    @property
    def ensemble_size(self) -> int:
        return len(self.seeds)

    @staticmethod
    def _se(samples: NDArray[np.float64]) -> NDArray[np.float64]:
        n = samples.shape[0]
        if n < 2:
            return np.full(samples.shape[1], np.nan)
        return samples.std(axis=0, ddof=1) / np.sqrt(n)

    @property
    def mean_var_xm(self) -> NDArray[np.float64]:
        return self.var_xm.mean(axis=0)

    @property
    def se_var_xm(self) -> NDArray[np.float64]:
        return self._se(self.var_xm)

    @property
    def mean_var_r(self) -> NDArray[np.float64]:
        return self.var_r.mean(axis=0)

    @property
    def se_var_r(self) -> NDArray[np.float64]:
        return self._se(self.var_r)

    @property
    def mean_single_var(self) -> NDArray[np.float64]:
        return self.single_var.mean(axis=0)

    def table(self) -> NDArray[np.float64]:
        return np.column_stack([
            np.asarray(self.steps, dtype=np.float64),
            self.mean_var_xm, self.se_var_xm, self.mean_var_r, self.se_var_r,
        ])

    def row(self, n: int) -> int:
        return self.steps.index(n)


def realization_statistics(seed: int, *, steps: Sequence[int], kind: str, amplitude: float,
                           mode_count: int, splitting_ratio: float,
                           symmetry: ExchangeSymmetry) -> dict[str, NDArray[np.float64]]:
    """Observables of one disorder realization at each requested step count."""
    n_max = max(steps)
    config = WalkConfig(n_max, mode_count=mode_count, splitting_ratio=splitting_ratio)
    phase_map = generate_phase_map(DisorderSpec.for_walk(config, kind, seed, amplitude))
    wanted = set(steps)
    rows: dict[int, tuple[float, float, float, NDArray[np.float64]]] = {}
    a, b = config.input_a, config.input_b
    for step, amps in iter_amplitudes(config, phase_map, [a, b]):
        if step not in wanted:
            continue
        joint = joint_from_columns(amps[:, 0], amps[:, 1], a, b, symmetry)
        single = joint.matrix.sum(axis=1)
        rows[step] = (mean_position_variance(joint), variance_R(joint), position_variance(single), single)
    return {
        "var_xm": np.array([rows[n][0] for n in steps]),
        "var_r": np.array([rows[n][1] for n in steps]),
        "single_var": np.array([rows[n][2] for n in steps]),
        "marginal": np.vstack([rows[n][3] for n in steps]),
    }


def run_ensemble(kind: str, steps: Sequence[int], ensemble_size: int, *, seed: int = 0,
                 amplitude: float = np.pi, symmetry: ExchangeSymmetry | None = None,
                 mode_count: int | None = None, splitting_ratio: float = 0.5,
                 workers: int = 1) -> EnsembleSummary:
    """Average walk observables over ``ensemble_size`` seeded phase maps.

    ``workers=0`` uses every available CPU; ``1`` runs in-process.
    """
    steps = tuple(sorted({int(n) for n in steps}))
    if not steps or steps[0] < 1:
        raise ConfigError(f"ensemble steps must be positive integers, got {steps}")
    if ensemble_size < 1:
        raise ConfigError(f"ensemble size must be at least 1, got {ensemble_size}")
    if seed < 0 or seed + ensemble_size > 2**64:
        raise ConfigError("ensemble seeds must stay within the unsigned 64-bit range")
    symmetry = symmetry or ExchangeSymmetry.boson()
    n_max = steps[-1]
    if mode_count is None:
        mode_count = 2 * n_max + 2
    # validates the strip once, before any worker starts
    config = WalkConfig(n_max, mode_count=mode_count, splitting_ratio=splitting_ratio)
    DisorderSpec.for_walk(config, kind, seed, amplitude)

    seeds = tuple(seed + i for i in range(ensemble_size))
    job = partial(realization_statistics, steps=steps, kind=kind, amplitude=amplitude,
                  mode_count=mode_count, splitting_ratio=splitting_ratio, symmetry=symmetry)
    if workers == 0:
        workers = os.cpu_count() or 1
    if workers <= 1 or ensemble_size == 1:
        results = [job(s) for s in seeds]
    else:
        chunk = max(1, ensemble_size // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, seeds, chunksize=chunk))

    marginal = np.zeros((len(steps), mode_count))
    for res in results:
        marginal += res["marginal"]
    marginal /= ensemble_size
    return EnsembleSummary(
        steps=steps, kind=kind, amplitude=float(amplitude), symmetry=symmetry,
        mode_count=mode_count, input_a=config.input_a, seeds=seeds,
        var_xm=np.vstack([r["var_xm"] for r in results]),
        var_r=np.vstack([r["var_r"] for r in results]),
        single_var=np.vstack([r["single_var"] for r in results]),
        mean_marginal=marginal,
    )


def write_ensemble_csv(path: str | os.PathLike, summary: EnsembleSummary) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(ENSEMBLE_COLUMNS) + "\n")
        for row in summary.table():
            fh.write(f"{int(row[0])}," + ",".join("%.17g" % v for v in row[1:]) + "\n")
