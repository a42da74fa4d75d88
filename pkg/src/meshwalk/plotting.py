"""Matplotlib figures written next to the CSV outputs.

Figures are built with the object-oriented API on an Agg canvas, so nothing
here touches pyplot's global state or needs a display.
"""
from __future__ import annotations

import os

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure
from numpy.typing import ArrayLike

from .ensemble import EnsembleSummary

__all__ = ["plot_joint", "plot_marginal", "plot_ensemble", "plot_calibration"]

_PNG_META = {"Software": None}


def _save(fig: Figure, path: str | os.PathLike) -> None:
    FigureCanvasAgg(fig)
    fig.savefig(path, dpi=120, metadata=_PNG_META)


def plot_joint(matrix: ArrayLike, path: str | os.PathLike, title: str = "") -> None:
    mat = np.asarray(matrix, dtype=np.float64)
    fig = Figure(figsize=(4.8, 4.2), layout="constrained")
    ax = fig.add_subplot()
    im = ax.imshow(mat, origin="upper", cmap="inferno", interpolation="nearest")
    ax.set_xlabel("output port k")
    ax.set_ylabel("output port j")
    if title:
        ax.set_title(title)
    fig.colorbar(im, ax=ax, label=r"$P_{j,k}$")
    _save(fig, path)


def plot_marginal(prob: ArrayLike, path: str | os.PathLike, title: str = "") -> None:
    prob = np.asarray(prob, dtype=np.float64)
    fig = Figure(figsize=(4.8, 3.0), layout="constrained")
    ax = fig.add_subplot()
    ax.bar(np.arange(prob.size), prob, width=0.8, color="0.3")
    ax.set_xlabel("output port")
    ax.set_ylabel("probability")
    if title:
        ax.set_title(title)
    _save(fig, path)


def plot_ensemble(summary: EnsembleSummary, path: str | os.PathLike) -> None:
    n = np.asarray(summary.steps, dtype=np.float64)
    fig = Figure(figsize=(8.0, 3.4), layout="constrained")
    ax1, ax2 = fig.subplots(1, 2)
    for ax, mean, se, label in (
        (ax1, summary.mean_var_xm, summary.se_var_xm, r"Var$(x_M)$"),
        (ax2, summary.mean_var_r, summary.se_var_r, r"Var$(R)$"),
    ):
        err = None if np.all(np.isnan(se)) else se
        ax.errorbar(n, mean, yerr=err, marker="o", ms=3, lw=1, capsize=2)
        ax.set_xlabel("steps n")
        ax.set_ylabel(label)
        if n.size > 1 and n[0] > 0:
            ax.set_xscale("log")
            ax.set_yscale("log")
    fig.suptitle(f"{summary.kind} disorder, {summary.symmetry.label}, "
                 f"{summary.ensemble_size} realizations")
    _save(fig, path)


def plot_calibration(table: ArrayLike, path: str | os.PathLike) -> None:
    table = np.asarray(table, dtype=np.float64)
    fig = Figure(figsize=(4.8, 3.2), layout="constrained")
    ax = fig.add_subplot()
    ax.plot(table[:, 0], table[:, 2], color="k")
    ax.set_xlabel("deformation coefficient d")
    ax.set_ylabel("phase shift (rad)")
    _save(fig, path)
