"""Joint output statistics of two non-interacting walkers.

A polarization-entangled pair ``(|H>_A |V>_B + e^{i phi} |V>_A |H>_B) / sqrt(2)``
sent through a polarization-blind mesh produces the same spatial coincidence
pattern as a pair with spatial wavefunction
``(|A>|B> + e^{i phi} |B>|A>) / sqrt(2)``.  With ``U`` the walk unitary the
ordered-pair probability is therefore

    P[j, k] = |U[j, A] U[k, B] + e^{i phi} U[j, B] U[k, A]|^2 / 2

``phi = 0`` mimics bosons, ``phi = pi`` fermions.  For other phases this is
the coincidence pattern of the entangled state, not of any kind of identical
particle.  Distinguishable particles drop the cross term.

``P`` is kept as a full symmetric matrix over ordered pairs summing to one;
the probability of the unordered pair ``{j, k}`` with ``j != k`` is
``P[j, k] + P[k, j]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from numpy.typing import NDArray

from .errors import DomainError, NumericalError, ResourceError
from .lattice import PhaseMap, WalkConfig, WalkUnitary, build_step_layer, _check_dims

__all__ = [
    "ExchangeSymmetry",
    "JointDistribution",
    "joint_distribution",
    "joint_from_columns",
    "oracle_joint_distribution",
    "sweep_exchange_phase",
    "ORACLE_MAX_MODES",
]

ORACLE_MAX_MODES = 64
SYMMETRY_TAGS = ("boson", "fermion", "general", "distinguishable")


@dataclass(frozen=True)
class ExchangeSymmetry:
    tag: str
    phase: float = 0.0

    def __post_init__(self) -> None:
        if self.tag not in SYMMETRY_TAGS:
            raise DomainError(f"symmetry tag must be one of {SYMMETRY_TAGS}, got {self.tag!r}")
        phi = float(self.phase)
        if not -np.pi <= phi <= np.pi:
            raise DomainError(f"exchange phase must lie in [-pi, pi], got {phi}")
        if self.tag == "boson" and phi != 0.0:
            raise DomainError("boson symmetry carries exchange phase 0")
        if self.tag == "fermion" and abs(phi) != np.pi:
            raise DomainError("fermion symmetry carries exchange phase pi")
        object.__setattr__(self, "phase", phi)

    @classmethod
    def boson(cls) -> "ExchangeSymmetry":
        return cls("boson", 0.0)

    @classmethod
    def fermion(cls) -> "ExchangeSymmetry":
        return cls("fermion", np.pi)

    @classmethod
    def distinguishable(cls) -> "ExchangeSymmetry":
        return cls("distinguishable", 0.0)

    @classmethod
    def general(cls, phase: float) -> "ExchangeSymmetry":
        return cls("general", phase)

    @classmethod
    def parse(cls, text: str | float) -> "ExchangeSymmetry":
        """Accept ``boson``, ``fermion``, ``distinguishable`` or a phase in radians."""
        if isinstance(text, str):
            key = text.strip().lower()
            if key in ("boson", "bosonic"):
                return cls.boson()
            if key in ("fermion", "fermionic"):
                return cls.fermion()
            if key == "distinguishable":
                return cls.distinguishable()
            try:
                value = float(key)
            except ValueError:
                raise DomainError(f"cannot interpret {text!r} as an exchange symmetry") from None
        else:
            value = float(text)
        return cls.general(value)

    @property
    def interferes(self) -> bool:
        return self.tag != "distinguishable"

    @property
    def label(self) -> str:
        return self.tag if self.tag != "general" else f"phi={self.phase:.6g}"


@dataclass(frozen=True, eq=False)
class JointDistribution:
    matrix: NDArray[np.float64]
    input_a: int
    input_b: int
    symmetry: ExchangeSymmetry

    def __post_init__(self) -> None:
        p = np.asarray(self.matrix, dtype=np.float64)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise DomainError(f"joint distribution must be square, got shape {p.shape}")
        p.setflags(write=False)
        object.__setattr__(self, "matrix", p)

    @property
    def mode_count(self) -> int:
        return self.matrix.shape[0]

    def check(self, norm_tol: float = 1e-10, sym_tol: float = 1e-12) -> None:
        """Raise ``NumericalError`` if the distribution breaks its invariants."""
        p = self.matrix
        if np.any(p < 0):
            raise NumericalError("joint distribution has negative entries")
        if abs(p.sum() - 1.0) > norm_tol:
            raise NumericalError(f"joint distribution sums to {p.sum():.15f}")
        if np.max(np.abs(p - p.T)) > sym_tol:
            raise NumericalError("joint distribution is not symmetric")
        if self.symmetry.tag == "fermion" and np.max(np.diag(p)) > sym_tol:
            raise NumericalError("fermionic distribution has double occupancy")


def _pair_probabilities(ua: NDArray[np.complex128], ub: NDArray[np.complex128],
                        sym: ExchangeSymmetry) -> NDArray[np.float64]:
    direct = np.outer(ua, ub)
    exchanged = direct.T
    if not sym.interferes:
        return 0.5 * (np.abs(direct) ** 2 + np.abs(exchanged) ** 2)
    if sym.tag == "boson":
        amp = direct + exchanged
    elif sym.tag == "fermion":
        amp = direct - exchanged
    else:
        amp = direct + np.exp(1j * sym.phase) * exchanged
    p = 0.5 * np.abs(amp) ** 2
    # Polarization is not resolved at the detectors: for a general phase the
    # (j, k) and (k, j) events differ only by which photon is H, so average them.
    return 0.5 * (p + p.T)


def joint_from_columns(ua: NDArray[np.complex128], ub: NDArray[np.complex128], input_a: int,
                       input_b: int, sym: ExchangeSymmetry) -> JointDistribution:
    """Joint distribution from the two relevant columns of the walk unitary."""
    return JointDistribution(_pair_probabilities(ua, ub, sym), input_a, input_b, sym)


def joint_distribution(unitary: WalkUnitary | NDArray[np.complex128], input_a: int, input_b: int,
                       sym: ExchangeSymmetry) -> JointDistribution:
    u = unitary.matrix if isinstance(unitary, WalkUnitary) else np.asarray(unitary)
    if input_a == input_b:
        raise DomainError("both particles must enter through distinct ports")
    m = u.shape[1]
    for port in (input_a, input_b):
        if not 0 <= port < m:
            raise IndexError(f"input port {port} outside 0..{m - 1}")
    return joint_from_columns(u[:, input_a], u[:, input_b], input_a, input_b, sym)


def oracle_joint_distribution(config: WalkConfig, phase_map: PhaseMap, input_a: int, input_b: int,
                              sym: ExchangeSymmetry) -> JointDistribution:
    """Brute-force check of :func:`joint_distribution` on the two-particle space.

    The (anti)symmetrized pair state lives in an ``M x M`` array ``psi`` with
    ``psi[j, k]`` the amplitude of particle one at ``j`` and particle two at
    ``k``.  Each layer acts as ``L (x) L``, i.e. ``psi <- L psi L^T``.
    Distinguishable pairs evolve the two product states separately and mix
    the resulting probabilities.  The first index carries the H photon and the
    second the V photon, so tracing out polarization symmetrizes the binned
    probabilities over ``(j, k)`` and ``(k, j)``.
    """
    m = config.mode_count
    if m > ORACLE_MAX_MODES:
        raise ResourceError(f"oracle limited to {ORACLE_MAX_MODES} modes, got {m}")
    if input_a == input_b:
        raise DomainError("both particles must enter through distinct ports")
    _check_dims(config, phase_map)

    ab = np.zeros((m, m), dtype=np.complex128)
    ab[input_a, input_b] = 1.0
    ba = ab.T.copy()
    if sym.interferes:
        states = [(ab + np.exp(1j * sym.phase) * ba) / np.sqrt(2.0)]
        weights = [1.0]
    else:
        states = [ab, ba]
        weights = [0.5, 0.5]

    layers = [build_step_layer(t, config, phase_map) for t in range(1, config.n_steps + 1)]
    p = np.zeros((m, m))
    for psi, w in zip(states, weights):
        for layer in layers:
            psi = layer @ psi @ layer.T
        p += w * np.abs(psi) ** 2
    return JointDistribution(0.5 * (p + p.T), input_a, input_b, sym)


def sweep_exchange_phase(unitary: WalkUnitary | NDArray[np.complex128], input_a: int, input_b: int,
                         phases: Iterable[float]) -> list[JointDistribution]:
    """Joint distributions along a sweep of the exchange phase.

    The endpoints ``0`` and ``pi`` are returned with boson and fermion tags.
    """
    out = []
    for phi in phases:
        phi = float(phi)
        if phi == 0.0:
            sym = ExchangeSymmetry.boson()
        elif abs(phi) == np.pi:
            sym = ExchangeSymmetry.fermion()
        else:
            sym = ExchangeSymmetry.general(phi)
        out.append(joint_distribution(unitary, input_a, input_b, sym))
    return out
