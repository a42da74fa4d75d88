"""S-bend phase shifter model and Mach-Zehnder phase read-out.

The deformation family is a stand-in: a raised-cosine S-bend

    y0(x) = (h / 2) (1 - cos(pi x / L))

plus a tangent-preserving bump ``d h sin^2(pi x / L)``.  Endpoints and end
slopes are unchanged for every ``d``, so a deformed bend drops into the mesh
in place of an undeformed one.  The slope is
``(pi h / L) sin(u) (1/2 + 2 d cos(u))`` with ``u = pi x / L``, so for
``|d| <= 1/4`` the bend never turns back on itself; that is the default
``d_max``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate

from .errors import DomainError, NumericalError

__all__ = [
    "SBendGeometry",
    "SBendCurve",
    "sbend_curve",
    "path_lengthening",
    "phase_from_deformation",
    "mz_output",
    "phase_from_mz_measurement",
    "calibration_table",
    "wrap_phase",
]

QUAD_RTOL = 1e-9


@dataclass(frozen=True)
class SBendGeometry:
    """Lengths in micrometres.

    ``length`` and ``height`` default to placeholder values (no published
    geometry); ``wavelength`` defaults to 806 nm.
    """

    length: float = 1000.0
    height: float = 40.0
    wavelength: float = 0.806
    d_max: float = 0.25

    def __post_init__(self) -> None:
        for name in ("length", "height", "wavelength", "d_max"):
            if not float(getattr(self, name)) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")

    def check(self, d: float) -> None:
        if not abs(d) <= self.d_max:
            raise DomainError(f"|d| = {abs(d)} exceeds d_max = {self.d_max}")


@dataclass(frozen=True)
class SBendCurve:
    """Transverse offset ``y(x)`` and slope ``y'(x)`` on ``0 <= x <= length``."""

    geometry: SBendGeometry
    d: float

    def y(self, x: ArrayLike) -> NDArray[np.float64]:
        g = self.geometry
        u = np.pi * np.asarray(x, dtype=np.float64) / g.length
        return 0.5 * g.height * (1.0 - np.cos(u)) + self.d * g.height * np.sin(u) ** 2

    def slope(self, x: ArrayLike) -> NDArray[np.float64]:
        g = self.geometry
        u = np.pi * np.asarray(x, dtype=np.float64) / g.length
        k = np.pi * g.height / g.length
        return k * np.sin(u) * (0.5 + 2.0 * self.d * np.cos(u))

    def __call__(self, x: ArrayLike) -> NDArray[np.float64]:
        return self.y(x)


def sbend_curve(geom: SBendGeometry, d: float) -> SBendCurve:
    geom.check(d)
    return SBendCurve(geom, float(d))


def _excess_integrand(geom: SBendGeometry, d: float) -> Callable[[float], float]:
    base = sbend_curve(geom, 0.0)
    bent = sbend_curve(geom, d)

    def f(x: float) -> float:
        s0 = float(base.slope(x))
        s1 = float(bent.slope(x))
        # sqrt(1+s1^2) - sqrt(1+s0^2) without cancellation
        return (s1 - s0) * (s1 + s0) / (np.sqrt(1.0 + s1 * s1) + np.sqrt(1.0 + s0 * s0))

    return f


def path_lengthening(geom: SBendGeometry, d: float) -> float:
    """Extra arc length (um) of the deformed bend over the undeformed one.

    The difference of the two arc-length integrands is integrated directly by
    adaptive Gauss-Kronrod quadrature, which keeps the relative tolerance
    meaningful even when the lengthening is a tiny fraction of ``length``.
    """
    geom.check(d)
    if d == 0:
        return 0.0
    result = integrate.quad(
        _excess_integrand(geom, d), 0.0, geom.length,
        epsabs=0.0, epsrel=QUAD_RTOL, limit=200, full_output=1,
    )
    value, err = result[0], result[1]
    # quad appends a message only when it gives up
    if len(result) > 3 or err > max(QUAD_RTOL * abs(value), 1e-15):
        raise NumericalError(f"arc-length quadrature did not converge (estimate {value}, error {err})")
    return float(value)


def wrap_phase(phi: ArrayLike) -> NDArray[np.float64] | float:
    """Reduce phases to ``(-pi, pi]``."""
    out = np.pi - np.mod(np.pi - np.asarray(phi, dtype=np.float64), 2.0 * np.pi)
    return float(out) if out.ndim == 0 else out


def phase_from_deformation(geom: SBendGeometry, d: float, n_eff: float = 1.0,
                           wrap: bool = False) -> float:
    """``phi = 2 pi n_eff dl / lambda``; ``n_eff = 1`` keeps the bare geometric form."""
    phi = 2.0 * np.pi / geom.wavelength * n_eff * path_lengthening(geom, d)
    return wrap_phase(phi) if wrap else phi


def mz_output(phi: float) -> tuple[float, float]:
    """``(P_bar, P_cross)`` of a balanced Mach-Zehnder with phase ``phi`` on one arm.

    With the symmetric coupler convention two balanced couplers in a row swap
    the ports, so ``P_cross = cos^2(phi / 2)`` and ``P_bar = sin^2(phi / 2)``.
    """
    half = 0.5 * float(phi)
    return float(np.sin(half) ** 2), float(np.cos(half) ** 2)


def phase_from_mz_measurement(p_bar: float, p_cross: float | None = None) -> float:
    """Phase magnitude in ``[0, pi]`` from the measured port fractions.

    With only ``p_bar`` this is ``2 arcsin(sqrt(p_bar))``, which loses
    accuracy as the phase approaches pi; passing ``p_cross`` as well switches
    to ``2 atan2(sqrt(p_bar), sqrt(p_cross))``, well conditioned everywhere
    and insensitive to the overall intensity.  The sign of the phase cannot
    be recovered from intensities.
    """
    if not 0.0 <= p_bar <= 1.0:
        raise DomainError(f"bar-port fraction must lie in [0, 1], got {p_bar}")
    if p_cross is None:
        return float(2.0 * np.arcsin(np.sqrt(p_bar)))
    if not 0.0 <= p_cross <= 1.0 or p_bar + p_cross == 0.0:
        raise DomainError(f"cross-port fraction must lie in [0, 1], got {p_cross}")
    return float(2.0 * np.arctan2(np.sqrt(p_bar), np.sqrt(p_cross)))


def calibration_table(geom: SBendGeometry, d_values: Sequence[float],
                      n_eff: float = 1.0) -> NDArray[np.float64]:
    """Rows ``(d, dl, phi)`` for each deformation coefficient."""
    rows = []
    for d in d_values:
        dl = path_lengthening(geom, d)
        rows.append((float(d), dl, 2.0 * np.pi / geom.wavelength * n_eff * dl))
    return np.array(rows, dtype=np.float64).reshape(-1, 3)
