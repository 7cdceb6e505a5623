"""Holomorphic power series on the unit disk and their boundary norms.

A series ``f(z) = sum a_n z**n`` has the exact area norm

    ||f||_{L2(D)}**2 = 2*pi * sum |a_n|**2 / (2n + 2),

and its dilations ``f_r(z) = f(r z)`` have boundary traces whose
area-matched H^{-1/2} norm uses the weight ``1/(1 + n)``:

    ||f_r||_{H^{-1/2}}**2 = sum |a_n|**2 r**(2n) / (1 + n).

With these conventions the two closed forms coincide up to the exact factor
pi: ``bergman(f_r)**2 == pi * hminus_half(f, r)**2``, which sharpens the
usual norm equivalence into an identity and anchors the ratio experiments.
The disk-side mixed boundary norm therefore uses the two-sided weight
``(1 + |n|)**(-1/2)`` rather than the general ``(1 + n**2)**(-1/4)`` torus
convention; the measured conversion ratio between the two is reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError
from .norms import SumSpaceSplit, l1_norm, sobolev_norm, sum_space_norm
from .spectral import SpectralField, default_points, inverse_transform, mode_matrix

#: Radius ladder approximating the r -> 1 boundary limit.
RADIUS_LADDER = (0.9, 0.99, 0.999, 0.9999)


class PowerSeries:
    """Finitely supported Taylor coefficients ``a_0, ..., a_M``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[complex]):
        arr = np.asarray(coeffs, dtype=complex).reshape(-1)
        if arr.size == 0:
            arr = np.zeros(1, dtype=complex)
        self.coeffs = arr

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        return np.polyval(self.coeffs[::-1], z)

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def __repr__(self) -> str:
        return f"PowerSeries(order={self.order})"


def bergman_norm(f: PowerSeries) -> float:
    """Exact disk L2 norm: ``sqrt(2*pi * sum |a_n|**2 / (2n + 2))``."""
    n = np.arange(len(f.coeffs))
    return math.sqrt(2.0 * math.pi * float(((np.abs(f.coeffs) ** 2) / (2 * n + 2)).sum()))


def _check_radius(r: float) -> float:
    r = float(r)
    if not 0.0 < r <= 1.0:
        raise InputError(f"radius must lie in (0, 1], got {r}")
    return r


def dilate(f: PowerSeries, r: float) -> PowerSeries:
    """``f_r(z) = f(r*z)``: coefficients scaled by ``r**n``."""
    r = _check_radius(r)
    n = np.arange(len(f.coeffs))
    return PowerSeries(f.coeffs * r**n)


def boundary_trace(f: PowerSeries, r: float) -> SpectralField:
    """One-sided circle spectrum of ``f(r e^{i theta})``: ``a_n r**n`` at n >= 0."""
    r = _check_radius(r)
    band = max(f.order, 1)
    coeffs = {}
    for n, a in enumerate(f.coeffs):
        value = a * r**n
        if value != 0:
            coeffs[(n,)] = value
    return SpectralField(1, band, coeffs)


def hminus_half_boundary_norm(f: PowerSeries, r: float) -> float:
    """Area-matched boundary norm ``sqrt(sum |a_n|**2 r**(2n) / (1 + n))``."""
    r = _check_radius(r)
    n = np.arange(len(f.coeffs))
    return math.sqrt(float(((np.abs(f.coeffs) ** 2) * r ** (2 * n) / (1 + n)).sum()))


def disk_boundary_weights(band: int) -> np.ndarray:
    """Two-sided area-matched H^{-1/2} weights ``(1 + |n|)**(-1/2)`` per mode."""
    mm = mode_matrix(1, band)
    return (1.0 + np.abs(mm[:, 0]).astype(float)) ** -0.5


def mixed_boundary_norm(
    f: PowerSeries, r: float, tol: float = 1e-6, **solver_kwargs
) -> SumSpaceSplit:
    """Sum-space norm ``L1 + H^{-1/2}`` of the boundary trace at radius ``r``."""
    trace = boundary_trace(f, r)
    return sum_space_norm(
        trace,
        s=-0.5,
        homogeneous=False,
        tol=tol,
        weights=disk_boundary_weights(trace.band),
        **solver_kwargs,
    )


@dataclass(frozen=True)
class RatioRow:
    r: float
    bergman: float
    l1: float
    hminushalf: float
    mixed: float
    ratio: float


@dataclass(frozen=True)
class RatioReport:
    rows: tuple[RatioRow, ...]
    max_ratio: float
    #: Measured area-matched vs inhomogeneous-convention boundary-norm ratio.
    weight_convention_ratio: float


def bbb_ratio(
    f: PowerSeries,
    radii: Sequence[float] = RADIUS_LADDER,
    tol: float = 1e-6,
    **solver_kwargs,
) -> RatioReport:
    """Per-radius ratio ``bergman(f_r) / mixed_boundary_norm(f, r)``.

    The running max over a corpus estimates the constant of the disk
    inequality; no reference value exists, so it is reported, not asserted.
    """
    rows = []
    convention_ratios = []
    for r in radii:
        r = _check_radius(r)
        fr = dilate(f, r)
        berg = bergman_norm(fr)
        trace = boundary_trace(f, r)
        grid = inverse_transform(trace, default_points(trace.band))
        l1 = l1_norm(grid)
        hm = hminus_half_boundary_norm(f, r)
        split = mixed_boundary_norm(f, r, tol=tol, **solver_kwargs)
        ratio = berg / split.value if split.value > 0 else math.inf
        if not f.is_zero():
            section_norm = sobolev_norm(trace, -0.5, homogeneous=False)
            if section_norm > 0:
                convention_ratios.append(hm / section_norm)
        rows.append(
            RatioRow(r=r, bergman=berg, l1=l1, hminushalf=hm, mixed=split.value, ratio=ratio)
        )
    finite = [row.ratio for row in rows if math.isfinite(row.ratio)]
    return RatioReport(
        rows=tuple(rows),
        max_ratio=max(finite) if finite else 0.0,
        weight_convention_ratio=float(np.mean(convention_ratios)) if convention_ratios else 1.0,
    )


def analytic_projection(u: SpectralField) -> tuple[PowerSeries, PowerSeries]:
    """Split a zero-mean circle field into weighted analytic pieces.

    The plus series carries ``n**(1/2) u_n`` at degree ``n >= 1``; the minus
    series carries ``|n|**(1/2) u_{-n}`` as a series in the conjugate
    variable.  For real-valued ``u`` the minus coefficients are conjugates of
    the plus coefficients.
    """
    if u.dim != 1:
        raise InputError("analytic projection is defined on circle fields")
    if not u.mean_coefficient().is_zero():
        raise InputError("analytic projection requires a zero-mean field")
    scalars = u.scalar_coeffs()
    plus = np.zeros(u.band + 1, dtype=complex)
    minus = np.zeros(u.band + 1, dtype=complex)
    for (n,), value in scalars.items():
        if n > 0:
            plus[n] = math.sqrt(n) * value
        elif n < 0:
            minus[-n] = math.sqrt(-n) * value
    return PowerSeries(plus), PowerSeries(minus)


def random_series(order: int, decay: float, rng: np.random.Generator) -> PowerSeries:
    """Random series with ``|a_n| ~ n**(-decay)`` and uniform phases."""
    n = np.arange(order + 1)
    magnitude = np.maximum(n, 1) ** (-float(decay))
    phase = np.exp(2j * math.pi * rng.uniform(size=order + 1))
    return PowerSeries(magnitude * phase)
