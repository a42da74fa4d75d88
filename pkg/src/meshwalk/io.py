"""Plain-text and image output formats.

Matrices are written as comma-separated text with ``%.17g`` so every
double survives a write/read round trip exactly.  Comment lines start with
``#``.  Heatmaps are binary PPM (P6) images.
"""
from __future__ import annotations

import os
from pathlib import Path
from typing import Mapping

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ConfigError, DomainError
from .lattice import PHASE_KINDS, PhaseMap

__all__ = [
    "write_matrix_csv",
    "read_matrix_csv",
    "write_marginal_csv",
    "read_marginal_csv",
    "write_phase_map",
    "read_phase_map",
    "write_metrics",
    "read_metrics",
    "heat_colormap",
    "write_ppm",
    "read_ppm",
]

FLOAT_FMT = "%.17g"
PathLike = str | os.PathLike


def write_matrix_csv(path: PathLike, matrix: ArrayLike, header: str | None = None) -> None:
    mat = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    with open(path, "w", newline="\n") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        np.savetxt(fh, mat, fmt=FLOAT_FMT, delimiter=",")


def read_matrix_csv(path: PathLike) -> NDArray[np.float64]:
    try:
        mat = np.loadtxt(path, delimiter=",", comments="#", dtype=np.float64, ndmin=2)
    except ValueError as exc:
        raise ConfigError(f"{path}: not a numeric CSV matrix ({exc})") from None
    return mat


def write_marginal_csv(path: PathLike, prob: ArrayLike) -> None:
    prob = np.asarray(prob, dtype=np.float64)
    with open(path, "w", newline="\n") as fh:
        fh.write("mode,probability\n")
        for mode, value in enumerate(prob):
            fh.write(f"{mode},{FLOAT_FMT % value}\n")


def read_marginal_csv(path: PathLike) -> NDArray[np.float64]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, dtype=np.float64, ndmin=2)
    return data[:, 1]


def write_phase_map(path: PathLike, phase_map: PhaseMap) -> None:
    """Rows are sites (modes), columns are steps; the kind goes in a comment."""
    write_matrix_csv(path, phase_map.phases, header=f"kind={phase_map.kind}")


def read_phase_map(path: PathLike, kind: str | None = None) -> PhaseMap:
    """Read a phase map; ``kind`` overrides the ``# kind=`` comment if given."""
    if kind is None:
        kind = "custom"
        with open(path) as fh:
            for line in fh:
                if not line.startswith("#"):
                    break
                text = line[1:].strip()
                if text.startswith("kind="):
                    kind = text[len("kind="):].strip()
        if kind not in PHASE_KINDS:
            raise ConfigError(f"{path}: unknown phase-map kind {kind!r}")
    try:
        return PhaseMap(read_matrix_csv(path), kind=kind)
    except DomainError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _format_value(value: object) -> str:
    if isinstance(value, (float, np.floating)):
        return FLOAT_FMT % value
    if isinstance(value, (list, tuple, np.ndarray)):
        return " ".join(_format_value(v) for v in value)
    return str(value)


def write_metrics(path: PathLike, metrics: Mapping[str, object]) -> None:
    """One ``key = value`` line per entry, in insertion order."""
    with open(path, "w", newline="\n") as fh:
        for key, value in metrics.items():
            fh.write(f"{key} = {_format_value(value)}\n")


def read_metrics(path: PathLike) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def heat_colormap(values: ArrayLike) -> NDArray[np.uint8]:
    """Map ``[0, 1]`` to black -> red -> yellow -> white.

    Each channel ramps in turn over a third of the range, so ``r + g + b`` is
    ``3 v``: brightness is strictly monotone in the value.
    """
    v = np.clip(np.asarray(values, dtype=np.float64), 0.0, 1.0)
    rgb = np.stack([np.clip(3.0 * v - k, 0.0, 1.0) for k in range(3)], axis=-1)
    return np.rint(255.0 * rgb).astype(np.uint8)


def write_ppm(path: PathLike, matrix: ArrayLike, scale: int = 8) -> None:
    """Write a max-normalized heatmap; matrix row ``i`` is image row ``i`` from the top."""
    mat = np.asarray(matrix, dtype=np.float64)
    if mat.ndim != 2 or 0 in mat.shape:
        raise DomainError(f"heatmap needs a non-empty 2-D matrix, got shape {mat.shape}")
    if np.any(mat < 0) or not np.all(np.isfinite(mat)):
        raise DomainError("heatmap matrix must be finite and nonnegative")
    if int(scale) < 1:
        raise DomainError(f"scale must be a positive integer, got {scale}")
    peak = mat.max()
    norm = mat / peak if peak > 0 else np.zeros_like(mat)
    pixels = heat_colormap(norm)
    pixels = np.repeat(np.repeat(pixels, scale, axis=0), scale, axis=1)
    h, w = pixels.shape[:2]
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(pixels).tobytes())


def read_ppm(path: PathLike) -> NDArray[np.uint8]:
    """Read a binary P6 file written by :func:`write_ppm` into an ``(h, w, 3)`` array."""
    data = Path(path).read_bytes()
    fields: list[bytes] = []
    pos = 0
    while len(fields) < 4:
        while data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            pos = data.index(b"\n", pos) + 1
            continue
        end = pos
        while not data[end : end + 1].isspace():
            end += 1
        fields.append(data[pos:end])
        pos = end
    if fields[0] != b"P6" or fields[3] != b"255":
        raise DomainError(f"{path}: not an 8-bit binary PPM")
    w, h = int(fields[1]), int(fields[2])
    pixels = np.frombuffer(data[pos + 1 : pos + 1 + 3 * w * h], dtype=np.uint8)
    return pixels.reshape(h, w, 3)
