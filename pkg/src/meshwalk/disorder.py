"""Seeded phase maps for ordered, static, dynamic and fluctuating disorder.

Every random phase is keyed by its position relative to the input ports,
never by the order in which it was drawn:

* static: one substream per site offset ``m - input_a``;
* dynamic: one substream per step index;
* fluctuating: one substream per site offset, consumed along the step axis.

A substream is ``numpy.random.SeedSequence(seed, spawn_key=(code, key))``.
Because keys are offsets from the inputs, a map generated for a small walk is
reproduced exactly inside the map for any larger walk with the same seed,
which is what pattern nesting needs.

Dynamic disorder gives every coupler of a step the same relative phase: the
step phase sits on the lower arm of each coupler and the upper arm gets zero.
A phase shared by *all* modes of a step would only be a global phase.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from numpy.typing import NDArray

from .errors import DomainError
from .lattice import PhaseMap, WalkConfig

__all__ = ["DISORDER_KINDS", "DisorderSpec", "generate_phase_map", "extend_phase_map"]

DISORDER_KINDS = ("ordered", "static", "dynamic", "fluctuating")
_STREAM_CODE = {"static": 1, "dynamic": 2, "fluctuating": 3}


@dataclass(frozen=True)
class DisorderSpec:
    kind: str
    seed: int
    n_steps: int
    mode_count: int | None = None
    amplitude: float = np.pi

    def __post_init__(self) -> None:
        if self.kind not in DISORDER_KINDS:
            raise DomainError(f"disorder kind must be one of {DISORDER_KINDS}, got {self.kind!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        object.__setattr__(self, "seed", int(self.seed))
        if int(self.n_steps) < 1:
            raise DomainError(f"n_steps must be positive, got {self.n_steps}")
        if self.kind != "ordered" and not 0.0 < float(self.amplitude) <= np.pi:
            raise DomainError(f"disorder amplitude must lie in (0, pi], got {self.amplitude}")
        if self.mode_count is None:
            object.__setattr__(self, "mode_count", 2 * int(self.n_steps) + 2)
        if int(self.mode_count) < 2 or int(self.mode_count) % 2:
            raise DomainError(f"mode_count must be a positive even integer, got {self.mode_count}")

    @property
    def input_a(self) -> int:
        return int(self.mode_count) // 2 - 1

    @classmethod
    def for_walk(cls, config: WalkConfig, kind: str, seed: int, amplitude: float = np.pi) -> "DisorderSpec":
        spec = cls(kind, seed, config.n_steps, config.mode_count, amplitude)
        if spec.input_a != config.input_a:
            raise DomainError("phase maps are aligned on the centered input ports only")
        return spec


def _zigzag(offset: int) -> int:
    return 2 * offset if offset >= 0 else -2 * offset - 1


def _uniform(seed: int, key: tuple[int, ...], count: int) -> NDArray[np.float64]:
    words = np.random.SeedSequence(seed, spawn_key=key).generate_state(count, np.uint64)
    return (words >> np.uint64(11)).astype(np.float64) * 2.0**-53


def _phases(spec: DisorderSpec, u: NDArray[np.float64]) -> NDArray[np.float64]:
    return float(spec.amplitude) * (2.0 * u - 1.0)


def site_phases(spec: DisorderSpec) -> NDArray[np.float64]:
    code = _STREAM_CODE["static"]
    a = spec.input_a
    u = [_uniform(spec.seed, (code, _zigzag(m - a)), 1)[0] for m in range(spec.mode_count)]
    return _phases(spec, np.array(u))


def step_phases(spec: DisorderSpec) -> NDArray[np.float64]:
    code = _STREAM_CODE["dynamic"]
    u = [_uniform(spec.seed, (code, t), 1)[0] for t in range(1, spec.n_steps + 1)]
    return _phases(spec, np.array(u))


def _dynamic_map(step_values: NDArray[np.float64], mode_count: int, input_a: int) -> NDArray[np.float64]:
    out = np.zeros((mode_count, len(step_values)))
    for t, value in enumerate(step_values, start=1):
        out[(input_a + t - 1) % 2 :: 2, t - 1] = value
    return out


def generate_phase_map(spec: DisorderSpec) -> PhaseMap:
    m, n = spec.mode_count, spec.n_steps
    if spec.kind == "ordered":
        return PhaseMap(np.zeros((m, n)), kind="ordered")
    if spec.kind == "static":
        return PhaseMap(np.repeat(site_phases(spec)[:, None], n, axis=1), kind="static")
    if spec.kind == "dynamic":
        return PhaseMap(_dynamic_map(step_phases(spec), m, spec.input_a), kind="dynamic")
    code = _STREAM_CODE["fluctuating"]
    a = spec.input_a
    rows = [_uniform(spec.seed, (code, _zigzag(site - a)), n) for site in range(m)]
    return PhaseMap(_phases(spec, np.vstack(rows)), kind="fluctuating")


def extend_phase_map(base: PhaseMap, target_steps: int, target_modes: int,
                     spec: DisorderSpec) -> PhaseMap:
    """Embed ``base`` centrally in a larger map of the same kind.

    The base block is copied verbatim, aligned on the input ports; the cells
    it does not cover come from ``spec``'s keyed streams, so they agree with
    what ``generate_phase_map`` would produce for the larger walk.
    """
    m0, n0 = base.phases.shape
    if target_steps < n0 or target_modes < m0:
        raise DomainError(
            f"cannot shrink a ({m0}, {n0}) phase map to ({target_modes}, {target_steps})"
        )
    if (target_modes - m0) % 2:
        raise DomainError("mode counts must differ by an even number to keep the inputs centered")
    if base.kind != spec.kind:
        raise DomainError(f"base kind {base.kind!r} differs from spec kind {spec.kind!r}")
    off = (target_modes - m0) // 2
    spec = replace(spec, n_steps=target_steps, mode_count=target_modes)

    if spec.kind == "ordered":
        return PhaseMap(np.zeros((target_modes, target_steps)), kind="ordered")
    if spec.kind == "static":
        sites = site_phases(spec)
        sites[off : off + m0] = base.phases[:, 0]
        return PhaseMap(np.repeat(sites[:, None], target_steps, axis=1), kind="static")
    if spec.kind == "dynamic":
        out = generate_phase_map(spec).phases.copy()
        # Old steps keep the base's sublattice values on every mode, new or not.
        for t in range(n0):
            column = base.phases[:, t]
            out[off % 2 :: 2, t] = column[0]
            if m0 > 1:
                out[(off + 1) % 2 :: 2, t] = column[1]
        return PhaseMap(out, kind="dynamic")
    out = generate_phase_map(spec).phases.copy()
    out[off : off + m0, :n0] = base.phases
    return PhaseMap(out, kind="fluctuating")
