"""Experiment configuration files.

A configuration is an INI file with the sections below; every key is
optional and unknown keys are rejected.  ``pi`` may be used in phase values
(``pi``, ``pi/2``, ``0.5*pi``).

.. code-block:: ini

    [walk]
    n_steps = 8              ; required for simulate / phasemap
    mode_count = 18          ; default 2*n_steps + 2
    input_a = 8              ; default mode_count/2 - 1
    splitting_ratio = 0.5

    [disorder]
    kind = static            ; ordered | static | dynamic | fluctuating
    seed = 0
    amplitude = pi           ; phases uniform on [-amplitude, amplitude]
    phase_map =              ; CSV file overriding the generated map

    [particles]
    symmetry = boson         ; boson | fermion | distinguishable | <phase>

    [ensemble]
    size = 200
    steps = 4:100:4          ; comma list and/or start:stop[:stride], inclusive

    [output]
    joint = yes
    marginal = yes
    metrics = yes
    heatmap = yes
    heatmap_scale = 8
    figures = yes
    reference =              ; distribution CSV to compare against

    [calibration]
    length = 1000            ; um
    height = 40              ; um
    wavelength = 0.806       ; um
    d_max = 0.25
    n_eff = 1.0
    points = 51
"""
from __future__ import annotations

import configparser
import os
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

import numpy as np

from .calibration import SBendGeometry
from .disorder import DISORDER_KINDS, DisorderSpec, generate_phase_map
from .errors import ConfigError, DomainError
from .io import read_phase_map
from .lattice import PhaseMap, WalkConfig
from .two_particle import ExchangeSymmetry

__all__ = ["ExperimentConfig", "OutputOptions", "load_config", "parse_config", "parse_steps",
           "parse_phase"]

_KEYS: dict[str, tuple[str, ...]] = {
    "walk": ("n_steps", "mode_count", "input_a", "splitting_ratio"),
    "disorder": ("kind", "seed", "amplitude", "phase_map"),
    "particles": ("symmetry",),
    "ensemble": ("size", "steps"),
    "output": ("joint", "marginal", "metrics", "heatmap", "heatmap_scale", "figures", "reference"),
    "calibration": ("length", "height", "wavelength", "d_max", "n_eff", "points"),
}

_PI_RE = re.compile(r"(?:(\d*\.?\d+(?:e[-+]?\d+)?)\*?)?pi(?:/(\d*\.?\d+(?:e[-+]?\d+)?))?")


def parse_phase(text: str) -> float:
    """Float or a multiple/fraction of ``pi`` such as ``-pi/2`` or ``0.5*pi``."""
    t = text.strip().lower().replace(" ", "")
    sign = 1.0
    if t[:1] in ("+", "-"):
        sign = -1.0 if t[0] == "-" else 1.0
        t = t[1:]
    if "pi" not in t:
        return sign * float(t)
    m = _PI_RE.fullmatch(t)
    if not m:
        raise ValueError(f"cannot read {text!r} as a phase")
    coef = float(m.group(1)) if m.group(1) else 1.0
    div = float(m.group(2)) if m.group(2) else 1.0
    return sign * coef * np.pi / div


def parse_steps(text: str) -> tuple[int, ...]:
    """``"4, 6, 8"`` or ``"4:20"`` or ``"4:100:4"`` (inclusive), combinable with commas."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            bits = [int(b) for b in part.split(":")]
            if len(bits) not in (2, 3) or (len(bits) == 3 and bits[2] < 1):
                raise ValueError(f"bad range {part!r}")
            start, stop = bits[0], bits[1]
            stride = bits[2] if len(bits) == 3 else 1
            out.extend(range(start, stop + 1, stride))
        else:
            out.append(int(part))
    if not out or min(out) < 1:
        raise ValueError("step counts must be positive integers")
    return tuple(sorted(set(out)))


@dataclass(frozen=True)
class OutputOptions:
    joint: bool = True
    marginal: bool = True
    metrics: bool = True
    heatmap: bool = True
    heatmap_scale: int = 8
    figures: bool = True
    reference: Path | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    walk: WalkConfig | None = None
    disorder_kind: str = "ordered"
    seed: int = 0
    amplitude: float = np.pi
    phase_map_file: Path | None = None
    symmetry: ExchangeSymmetry = field(default_factory=ExchangeSymmetry.boson)
    ensemble_size: int = 1
    ensemble_steps: tuple[int, ...] | None = None
    outputs: OutputOptions = field(default_factory=OutputOptions)
    geometry: SBendGeometry = field(default_factory=SBendGeometry)
    n_eff: float = 1.0
    calibration_points: int = 51
    source: str = "<config>"

    def require_walk(self) -> WalkConfig:
        if self.walk is None:
            raise ConfigError(f"{self.source}: [walk] n_steps is required")
        return self.walk

    def disorder_spec(self, walk: WalkConfig | None = None) -> DisorderSpec:
        walk = walk or self.require_walk()
        try:
            return DisorderSpec.for_walk(walk, self.disorder_kind, self.seed, self.amplitude)
        except DomainError as exc:
            raise ConfigError(f"{self.source}: [disorder] {exc}") from None

    def phase_map(self) -> PhaseMap:
        walk = self.require_walk()
        if self.phase_map_file is not None:
            pm = read_phase_map(self.phase_map_file)
            if pm.phases.shape != (walk.mode_count, walk.n_steps):
                raise ConfigError(
                    f"{self.phase_map_file}: shape {pm.phases.shape} does not match "
                    f"(mode_count, n_steps) = {(walk.mode_count, walk.n_steps)}"
                )
            return pm
        return generate_phase_map(self.disorder_spec(walk))

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return replace(self, seed=int(seed))


def _line_of(text: str, section: str, key: str | None = None) -> int | None:
    current = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("[") and stripped.endswith("]"):
            current = stripped[1:-1].strip()
            if key is None and current == section:
                return lineno
            continue
        if current == section and key is not None:
            name = re.split(r"[=:]", stripped, maxsplit=1)[0].strip().lower()
            if name == key:
                return lineno
    return None


def parse_config(text: str, source: str = "<config>", base_dir: Path | None = None) -> ExperimentConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None

    def where(section: str, key: str | None = None) -> str:
        line = _line_of(text, section, key)
        loc = f"[{section}]" + (f" {key}" if key else "")
        return f"{source}:{line}: {loc}" if line else f"{source}: {loc}"

    for section in parser.sections():
        if section not in _KEYS:
            raise ConfigError(f"{where(section)}: unknown section")
        for key in parser[section]:
            if key not in _KEYS[section]:
                raise ConfigError(f"{where(section, key)}: unknown key")

    def get(section: str, key: str, conv: Callable[[str], object], default: object = None) -> object:
        if not parser.has_option(section, key):
            return default
        raw = parser.get(section, key).strip()
        if raw == "":
            return default
        try:
            return conv(raw)
        except (ValueError, DomainError) as exc:
            raise ConfigError(f"{where(section, key)}: cannot parse {raw!r} ({exc})") from None

    def boolean(raw: str) -> bool:
        states = configparser.ConfigParser.BOOLEAN_STATES
        if raw.lower() not in states:
            raise ValueError("expected yes/no")
        return states[raw.lower()]

    base_dir = base_dir or Path.cwd()

    def path(raw: str) -> Path:
        p = Path(raw).expanduser()
        return p if p.is_absolute() else base_dir / p

    walk = None
    n_steps = get("walk", "n_steps", int)
    if n_steps is not None:
        try:
            walk = WalkConfig(
                n_steps=n_steps,
                mode_count=get("walk", "mode_count", int),
                input_a=get("walk", "input_a", int),
                splitting_ratio=get("walk", "splitting_ratio", float, 0.5),
            )
        except ConfigError as exc:
            raise ConfigError(f"{where('walk')}: {exc}") from None
    elif parser.has_section("walk") and len(parser["walk"]):
        raise ConfigError(f"{where('walk')}: n_steps is required when [walk] is given")

    kind = get("disorder", "kind", str, "ordered")
    if kind not in DISORDER_KINDS:
        raise ConfigError(f"{where('disorder', 'kind')}: must be one of {', '.join(DISORDER_KINDS)}")
    seed = get("disorder", "seed", int, 0)
    if not 0 <= seed < 2**64:
        raise ConfigError(f"{where('disorder', 'seed')}: must be an unsigned 64-bit integer")
    amplitude = get("disorder", "amplitude", parse_phase, np.pi)
    if kind != "ordered" and not 0.0 < amplitude <= np.pi:
        raise ConfigError(f"{where('disorder', 'amplitude')}: must lie in (0, pi]")

    symmetry = get("particles", "symmetry", ExchangeSymmetry.parse, ExchangeSymmetry.boson())

    size = get("ensemble", "size", int, 1)
    if size < 1:
        raise ConfigError(f"{where('ensemble', 'size')}: must be at least 1")

    outputs = OutputOptions(
        joint=get("output", "joint", boolean, True),
        marginal=get("output", "marginal", boolean, True),
        metrics=get("output", "metrics", boolean, True),
        heatmap=get("output", "heatmap", boolean, True),
        heatmap_scale=get("output", "heatmap_scale", int, 8),
        figures=get("output", "figures", boolean, True),
        reference=get("output", "reference", path),
    )
    if outputs.heatmap_scale < 1:
        raise ConfigError(f"{where('output', 'heatmap_scale')}: must be a positive integer")

    try:
        geometry = SBendGeometry(
            length=get("calibration", "length", float, 1000.0),
            height=get("calibration", "height", float, 40.0),
            wavelength=get("calibration", "wavelength", float, 0.806),
            d_max=get("calibration", "d_max", float, 0.25),
        )
    except DomainError as exc:
        raise ConfigError(f"{where('calibration')}: {exc}") from None
    points = get("calibration", "points", int, 51)
    if points < 2:
        raise ConfigError(f"{where('calibration', 'points')}: need at least 2 points")

    return ExperimentConfig(
        walk=walk,
        disorder_kind=kind,
        seed=seed,
        amplitude=amplitude,
        phase_map_file=get("disorder", "phase_map", path),
        symmetry=symmetry,
        ensemble_size=size,
        ensemble_steps=get("ensemble", "steps", parse_steps),
        outputs=outputs,
        geometry=geometry,
        n_eff=get("calibration", "n_eff", float, 1.0),
        calibration_points=points,
        source=source,
    )


def load_config(path: str | os.PathLike | None) -> ExperimentConfig:
    """Read a config file; ``None`` gives all defaults."""
    if path is None:
        return ExperimentConfig()
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    return parse_config(text, source=str(path), base_dir=path.parent)
