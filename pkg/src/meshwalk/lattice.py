"""Directional-coupler mesh: layer construction and single-particle evolution.

A walk of ``n_steps`` steps is a stack of coupler layers.  Layer ``t`` mixes
neighbouring mode pairs ``(m, m + 1)`` whose lower index has the parity of
``input_a + t - 1`` (so the first layer couples the two input ports), and
then multiplies every output mode ``m`` by ``exp(1j * phases[m, t - 1])``.

Modes are indexed ``0 .. M - 1``; the mesh is a straight strip wide enough
that the light cone of the inputs never touches its edges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
from numpy.typing import NDArray

from .errors import ConfigError, DomainError, NumericalError

__all__ = [
    "PHASE_KINDS",
    "WalkConfig",
    "PhaseMap",
    "WalkUnitary",
    "coupler_matrix",
    "coupled_pairs",
    "build_step_layer",
    "build_walk_unitary",
    "iter_amplitudes",
    "evolve_amplitudes",
    "evolve_single",
    "check_phase_kind",
]

PHASE_KINDS = ("ordered", "static", "dynamic", "fluctuating", "custom")
BOUNDARY_POLICIES = ("light-cone-safe", "open")

UNITARITY_TOL = 1e-12
NORMALIZATION_TOL = 1e-10


@dataclass(frozen=True)
class WalkConfig:
    """Geometry of one walk.

    ``mode_count`` defaults to the narrowest safe strip ``2 * n_steps + 2`` and
    ``input_a`` to ``mode_count // 2 - 1``; ``input_b`` is always
    ``input_a + 1``.  ``splitting_ratio`` is the coupler reflectivity (the
    cross-coupled power fraction).
    """

    n_steps: int
    mode_count: int | None = None
    input_a: int | None = None
    splitting_ratio: float = 0.5
    boundary_policy: str = "light-cone-safe"

    def __post_init__(self) -> None:
        n = self.n_steps
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
            raise ConfigError(f"n_steps must be a positive integer, got {n!r}")
        object.__setattr__(self, "n_steps", int(n))
        if self.mode_count is None:
            object.__setattr__(self, "mode_count", 2 * int(n) + 2)
        m = self.mode_count
        if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or m < 2 or m % 2:
            raise ConfigError(f"mode_count must be a positive even integer, got {m!r}")
        object.__setattr__(self, "mode_count", int(m))
        if self.input_a is None:
            object.__setattr__(self, "input_a", int(m) // 2 - 1)
        a = int(self.input_a)
        object.__setattr__(self, "input_a", a)
        if not 0 <= a <= m - 2:
            raise ConfigError(f"input_a={a} leaves no room for input_b in {m} modes")
        if not 0.0 < float(self.splitting_ratio) < 1.0:
            raise ConfigError(
                f"splitting_ratio must lie strictly between 0 and 1, got {self.splitting_ratio}"
            )
        object.__setattr__(self, "splitting_ratio", float(self.splitting_ratio))
        if self.boundary_policy not in BOUNDARY_POLICIES:
            raise ConfigError(
                f"boundary_policy must be one of {BOUNDARY_POLICIES}, got {self.boundary_policy!r}"
            )
        if self.boundary_policy == "light-cone-safe":
            if m < 2 * n + 2:
                raise ConfigError(
                    f"mode_count={m} < 2*n_steps+2={2 * n + 2} under the light-cone-safe policy"
                )
            if a - (n - 1) < 1 or a + n > m - 2:
                raise ConfigError(
                    f"inputs ({a}, {a + 1}) reach the strip edge within {n} steps"
                )

    @property
    def input_b(self) -> int:
        return self.input_a + 1

    @property
    def center(self) -> float:
        """Midpoint between the two input ports."""
        return self.input_a + 0.5


def check_phase_kind(phases: NDArray[np.float64], kind: str) -> None:
    """Raise ``DomainError`` if ``phases`` violates the constancy rules of ``kind``.

    ``static`` maps are constant along the step axis.  ``dynamic`` maps give
    every coupler of a step the same relative phase: within each step column
    the entries are constant on the even modes and constant on the odd modes.
    """
    if kind not in PHASE_KINDS:
        raise DomainError(f"unknown phase-map kind {kind!r}")
    if kind == "ordered":
        if np.any(phases != 0.0):
            raise DomainError("ordered phase map must be identically zero")
    elif kind == "static":
        if np.any(phases != phases[:, :1]):
            raise DomainError("static phase map must be constant across steps for every mode")
    elif kind == "dynamic":
        for sub in (phases[0::2], phases[1::2]):
            if sub.size and np.any(sub != sub[:1, :]):
                raise DomainError(
                    "dynamic phase map must be constant on each mode sublattice within a step"
                )


@dataclass(frozen=True, eq=False)
class PhaseMap:
    """Per-mode, per-step phases in radians, shape ``(mode_count, n_steps)``."""

    phases: NDArray[np.float64]
    kind: str = "custom"

    def __post_init__(self) -> None:
        arr = np.array(self.phases, dtype=np.float64, copy=True)
        if arr.ndim != 2 or 0 in arr.shape:
            raise DomainError(f"phase map must be a non-empty 2-D array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("phase map contains non-finite entries")
        if np.any(np.abs(arr) > np.pi):
            raise DomainError("phase map entries must lie in [-pi, pi]")
        check_phase_kind(arr, self.kind)
        arr.setflags(write=False)
        object.__setattr__(self, "phases", arr)

    @classmethod
    def zeros(cls, mode_count: int, n_steps: int) -> "PhaseMap":
        return cls(np.zeros((mode_count, n_steps)), kind="ordered")

    @property
    def mode_count(self) -> int:
        return self.phases.shape[0]

    @property
    def n_steps(self) -> int:
        return self.phases.shape[1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PhaseMap):
            return NotImplemented
        return self.kind == other.kind and np.array_equal(self.phases, other.phases)

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class WalkUnitary:
    """Transfer matrix ``U`` with ``U[j, k]`` the amplitude from input ``k`` to output ``j``."""

    matrix: NDArray[np.complex128]
    n_steps: int
    meta: dict = field(default_factory=dict, repr=False)

    @property
    def mode_count(self) -> int:
        return self.matrix.shape[0]

    def unitarity_error(self) -> float:
        u = self.matrix
        return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))

    def probabilities(self, input_mode: int) -> NDArray[np.float64]:
        return np.abs(self.matrix[:, input_mode]) ** 2


def coupler_matrix(splitting_ratio: float) -> NDArray[np.complex128]:
    """Return the symmetric coupler ``[[sqrt(t), i sqrt(r)], [i sqrt(r), sqrt(t)]]``.

    ``r`` is the reflectivity (cross-coupled power) and ``t = 1 - r``.
    """
    r = float(splitting_ratio)
    if not 0.0 < r < 1.0:
        raise DomainError(f"splitting ratio must lie strictly between 0 and 1, got {r}")
    bar = np.sqrt(1.0 - r)
    cross = 1j * np.sqrt(r)
    return np.array([[bar, cross], [cross, bar]], dtype=np.complex128)


def coupled_pairs(config: WalkConfig, step: int) -> NDArray[np.intp]:
    """Lower mode index of every coupler in layer ``step`` (1-based)."""
    start = (config.input_a + step - 1) % 2
    return np.arange(start, config.mode_count - 1, 2)


def _check_step(config: WalkConfig, step: int) -> None:
    if not 1 <= step <= config.n_steps:
        raise IndexError(f"step {step} outside 1..{config.n_steps}")


def _check_dims(config: WalkConfig, phase_map: PhaseMap) -> None:
    expected = (config.mode_count, config.n_steps)
    if phase_map.phases.shape != expected:
        raise ConfigError(
            f"phase map shape {phase_map.phases.shape} does not match (modes, steps) = {expected}"
        )


def build_step_layer(step: int, config: WalkConfig, phase_map: PhaseMap) -> NDArray[np.complex128]:
    """Dense ``M x M`` matrix of layer ``step``: couplers first, then the phase column."""
    _check_dims(config, phase_map)
    _check_step(config, step)
    m = config.mode_count
    bs = coupler_matrix(config.splitting_ratio)
    layer = np.eye(m, dtype=np.complex128)
    for lo in coupled_pairs(config, step):
        layer[lo : lo + 2, lo : lo + 2] = bs
    phase = np.exp(1j * phase_map.phases[:, step - 1])
    return phase[:, None] * layer


def build_walk_unitary(config: WalkConfig, phase_map: PhaseMap) -> WalkUnitary:
    """Compose all layers, ``U = L(n) ... L(2) L(1)``."""
    _check_dims(config, phase_map)
    u = np.eye(config.mode_count, dtype=np.complex128)
    for step in range(1, config.n_steps + 1):
        u = build_step_layer(step, config, phase_map) @ u
    walk = WalkUnitary(u, config.n_steps)
    err = walk.unitarity_error()
    if err > UNITARITY_TOL:
        raise NumericalError(f"walk unitary deviates from unitarity by {err:.3e}")
    return walk


def _apply_layer(state: NDArray[np.complex128], config: WalkConfig, phases: NDArray[np.float64],
                 step: int, bs: NDArray[np.complex128]) -> None:
    lo = coupled_pairs(config, step)
    hi = lo + 1
    upper = state[lo]
    lower = state[hi]
    state[lo] = bs[0, 0] * upper + bs[0, 1] * lower
    state[hi] = bs[1, 0] * upper + bs[1, 1] * lower
    state *= np.exp(1j * phases[:, step - 1])[:, None]


def iter_amplitudes(config: WalkConfig, phase_map: PhaseMap,
                    input_modes: Sequence[int]) -> Iterator[tuple[int, NDArray[np.complex128]]]:
    """Yield ``(step, amplitudes)`` after every layer for the given input columns.

    ``amplitudes[:, i]`` is column ``input_modes[i]`` of the partial walk
    unitary.  Each yielded array is a fresh copy.  This costs ``O(M)`` per
    layer and column, against ``O(M^3)`` for the dense product.
    """
    _check_dims(config, phase_map)
    m = config.mode_count
    state = np.zeros((m, len(input_modes)), dtype=np.complex128)
    for i, mode in enumerate(input_modes):
        if not 0 <= mode < m:
            raise IndexError(f"input mode {mode} outside 0..{m - 1}")
        state[mode, i] = 1.0
    bs = coupler_matrix(config.splitting_ratio)
    for step in range(1, config.n_steps + 1):
        _apply_layer(state, config, phase_map.phases, step, bs)
        yield step, state.copy()


def evolve_amplitudes(config: WalkConfig, phase_map: PhaseMap,
                      input_modes: Sequence[int]) -> NDArray[np.complex128]:
    """Output amplitudes (``M x len(input_modes)``) after the full walk."""
    out = np.zeros((config.mode_count, len(input_modes)), dtype=np.complex128)
    for _, amps in iter_amplitudes(config, phase_map, input_modes):
        out = amps
    return out


def evolve_single(config: WalkConfig, phase_map: PhaseMap, input_mode: int) -> NDArray[np.float64]:
    """Output probability vector for one particle injected at ``input_mode``."""
    if not 0 <= input_mode < config.mode_count:
        raise IndexError(f"input mode {input_mode} outside 0..{config.mode_count - 1}")
    p = np.abs(evolve_amplitudes(config, phase_map, [input_mode])[:, 0]) ** 2
    if abs(p.sum() - 1.0) > NORMALIZATION_TOL:
        raise NumericalError(f"single-particle distribution sums to {p.sum():.15f}")
    return p
