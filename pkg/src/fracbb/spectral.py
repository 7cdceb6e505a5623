"""Band-limited spectral fields on the n-torus and uniform-grid counterparts.

Fourier coefficients follow the ``(2*pi)**-n`` forward normalization

    u_hat(m) = (2*pi)**-n * integral_{T^n} u(x) exp(-i<m, x>) dx,

so synthesis is the plain sum ``u(x) = sum_m u_hat(m) exp(i<m, x>)`` and the
uniform-grid quadrature of the forward integral reduces to an FFT divided by
the point count.  The quadrature is exact (to roundoff) for fields whose band
fits the grid, which requires ``P >= 2*N + 1`` points per axis.

Coefficients are stored sparsely as a map from frequency tuples to Clifford
values; frequencies absent from the map are exactly zero.  Truncation is a
hard cube ``|m_j| <= N`` and no operation extends the band silently.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping

import numpy as np

from .clifford import CliffordElement
from .errors import AliasingError, InputError

Index = tuple[int, ...]

#: Default grid oversampling factor (points per axis = OVERSAMPLE * band).
OVERSAMPLE = 4

TWO_PI = 2.0 * math.pi


def freq_norm(m: Index) -> float:
    """Euclidean norm of a frequency tuple."""
    return math.sqrt(sum(mj * mj for mj in m))


def normalize_index(m, dim: int) -> Index:
    if isinstance(m, (int, np.integer)):
        m = (int(m),)
    else:
        m = tuple(int(mj) for mj in m)
    if len(m) != dim:
        raise InputError(f"frequency index {m} has wrong dimension (expected {dim})")
    return m


def band_indices(dim: int, band: int) -> Iterator[Index]:
    """All lattice points of the symmetric cube ``|m_j| <= band``."""
    return itertools.product(range(-band, band + 1), repeat=dim)


@lru_cache(maxsize=128)
def mode_list(dim: int, band: int) -> tuple[Index, ...]:
    """Canonically ordered modes of the band cube (lexicographic)."""
    return tuple(band_indices(dim, band))


@lru_cache(maxsize=128)
def _mode_matrix(dim: int, band: int) -> np.ndarray:
    return np.array(mode_list(dim, band), dtype=np.int64).reshape(-1, dim)


@lru_cache(maxsize=128)
def _mode_positions(dim: int, band: int) -> dict[Index, int]:
    return {m: i for i, m in enumerate(mode_list(dim, band))}


def mode_matrix(dim: int, band: int) -> np.ndarray:
    """Integer (modes, dim) array of the band cube in canonical order.

    Shared cached storage; treat as read-only.
    """
    return _mode_matrix(dim, band)


@lru_cache(maxsize=128)
def _wrapped_index_arrays(dim: int, band: int, points: int) -> tuple[np.ndarray, ...]:
    """Per-axis FFT-cube positions of each band mode, for gather/scatter."""
    mm = _mode_matrix(dim, band)
    return tuple(np.mod(mm[:, ax], points).astype(np.intp) for ax in range(dim))


def grid_coordinates(dim: int, points: int) -> tuple[np.ndarray, ...]:
    """Meshgrid coordinate arrays ``x_k = 2*pi*k/P`` with 'ij' indexing."""
    axis = np.arange(points) * (TWO_PI / points)
    if dim == 1:
        return (axis,)
    return tuple(np.meshgrid(*([axis] * dim), indexing="ij"))


class SpectralField:
    """Band-limited Clifford-valued field stored as frequency -> coefficient.

    ``zero_mean`` marks fields whose coefficient at ``m = 0`` is known to be
    zero; constructors enforce the invariant when the flag is set.
    """

    __slots__ = ("dim", "band", "coeffs", "zero_mean")

    def __init__(
        self,
        dim: int,
        band: int,
        coeffs: Mapping | None = None,
        zero_mean: bool = False,
    ):
        if not isinstance(dim, int) or dim < 1:
            raise InputError(f"dimension must be a positive integer, got {dim!r}")
        if not isinstance(band, int) or band < 1:
            raise InputError(f"band must be a positive integer, got {band!r}")
        self.dim = dim
        self.band = band
        cleaned: dict[Index, CliffordElement] = {}
        if coeffs:
            for m, value in coeffs.items():
                m = normalize_index(m, dim)
                if any(abs(mj) > band for mj in m):
                    raise InputError(f"frequency {m} outside band {band}")
                if not isinstance(value, CliffordElement):
                    value = CliffordElement.scalar(dim, value)
                elif value.n != dim:
                    raise InputError(
                        f"coefficient at {m} lives in C_{value.n}, field needs C_{dim}"
                    )
                if not value.is_zero():
                    cleaned[m] = value
        if zero_mean and (0,) * dim in cleaned:
            raise InputError("field flagged zero_mean has a nonzero coefficient at 0")
        self.coeffs = cleaned
        self.zero_mean = zero_mean

    # -- access ------------------------------------------------------------

    def get(self, m) -> CliffordElement:
        m = normalize_index(m, self.dim)
        return self.coeffs.get(m, CliffordElement.zero(self.dim))

    def sorted_items(self) -> list[tuple[Index, CliffordElement]]:
        return sorted(self.coeffs.items())

    def mean_coefficient(self) -> CliffordElement:
        return self.get((0,) * self.dim)

    def is_scalar(self) -> bool:
        """True when every coefficient has only a scalar (unit) component."""
        return all(set(v.comps) <= {0} for v in self.coeffs.values())

    def scalar_coeffs(self) -> dict[Index, complex]:
        if not self.is_scalar():
            raise InputError("field has non-scalar Clifford components")
        return {m: v.p0() for m, v in self.coeffs.items()}

    def blade_masks(self) -> tuple[int, ...]:
        masks: set[int] = set()
        for value in self.coeffs.values():
            masks.update(value.comps)
        return tuple(sorted(masks)) or (0,)

    # -- linear structure ----------------------------------------------------

    def scale(self, factor: complex) -> "SpectralField":
        return SpectralField(
            self.dim,
            self.band,
            {m: v.scale(factor) for m, v in self.coeffs.items()},
            zero_mean=self.zero_mean,
        )

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self._require_compatible(other)
        coeffs = dict(self.coeffs)
        for m, v in other.coeffs.items():
            coeffs[m] = coeffs[m] + v if m in coeffs else v
        return SpectralField(self.dim, self.band, coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        return self + other.scale(-1.0)

    def map_coefficients(
        self, fn: Callable[[Index, CliffordElement], CliffordElement]
    ) -> "SpectralField":
        """New field with ``fn`` applied per stored frequency (zeros dropped)."""
        return SpectralField(
            self.dim,
            self.band,
            {m: fn(m, v) for m, v in self.coeffs.items()},
            zero_mean=self.zero_mean,
        )

    def _require_compatible(self, other: "SpectralField") -> None:
        if self.dim != other.dim:
            raise InputError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if self.band != other.band:
            raise InputError(f"band mismatch: {self.band} vs {other.band}")

    # -- norms and packing ---------------------------------------------------

    def l2_coefficient_norm(self) -> float:
        """Plain coefficient norm ``sqrt(sum ||u_hat(m)||**2)``."""
        return math.sqrt(sum(v.norm() ** 2 for v in self.coeffs.values()))

    def blade_vectors(self, masks: Iterable[int] | None = None) -> tuple[tuple[int, ...], np.ndarray]:
        """Dense per-blade coefficient vectors aligned with ``mode_list``.

        Returns (masks, array of shape (len(masks), modes)).
        """
        masks = tuple(masks) if masks is not None else self.blade_masks()
        positions = _mode_positions(self.dim, self.band)
        out = np.zeros((len(masks), len(positions)), dtype=complex)
        mask_row = {mask: row for row, mask in enumerate(masks)}
        for m, value in self.coeffs.items():
            col = positions[m]
            for mask, comp in value.comps.items():
                row = mask_row.get(mask)
                if row is None:
                    raise InputError(f"blade mask {mask} missing from packing set")
                out[row, col] = comp
        return masks, out

    @classmethod
    def from_blade_vectors(
        cls,
        dim: int,
        band: int,
        masks: Iterable[int],
        vectors: np.ndarray,
        zero_mean: bool = False,
        prune_tol: float = 0.0,
    ) -> "SpectralField":
        masks = tuple(masks)
        modes = mode_list(dim, band)
        vectors = np.asarray(vectors)
        coeffs: dict[Index, CliffordElement] = {}
        keep = np.abs(vectors).max(axis=0) > prune_tol
        for col in np.nonzero(keep)[0]:
            comps = {
                mask: vectors[row, col]
                for row, mask in enumerate(masks)
                if vectors[row, col] != 0
            }
            if comps:
                coeffs[modes[col]] = CliffordElement(dim, comps)
        return cls(dim, band, coeffs, zero_mean=zero_mean)

    def __repr__(self) -> str:
        return (
            f"SpectralField(dim={self.dim}, band={self.band}, "
            f"modes={len(self.coeffs)}, zero_mean={self.zero_mean})"
        )


class GridField:
    """Samples of a Clifford-valued function on the uniform torus grid.

    Component planes are held per blade mask as complex arrays of shape
    ``(P,)*dim``; the logical content is the row-major array of Clifford
    values at the grid points ``x_k = 2*pi*k/P``.
    """

    __slots__ = ("dim", "points_per_axis", "comps")

    def __init__(self, dim: int, points_per_axis: int, comps: Mapping[int, np.ndarray]):
        if points_per_axis < 2:
            raise InputError("need at least 2 points per axis")
        self.dim = dim
        self.points_per_axis = int(points_per_axis)
        shape = (self.points_per_axis,) * dim
        cleaned: dict[int, np.ndarray] = {}
        for mask, plane in comps.items():
            plane = np.asarray(plane, dtype=complex)
            if plane.shape != shape:
                raise InputError(f"plane for blade {mask} has shape {plane.shape}, expected {shape}")
            cleaned[int(mask)] = plane
        if not cleaned:
            cleaned[0] = np.zeros(shape, dtype=complex)
        self.comps = cleaned

    @classmethod
    def zeros(cls, dim: int, points_per_axis: int) -> "GridField":
        return cls(dim, points_per_axis, {0: np.zeros((points_per_axis,) * dim, complex)})

    @classmethod
    def from_scalar(cls, values: np.ndarray, dim: int | None = None) -> "GridField":
        values = np.asarray(values, dtype=complex)
        dim = values.ndim if dim is None else dim
        if values.ndim != dim:
            raise InputError(f"scalar samples have {values.ndim} axes, expected {dim}")
        return cls(dim, values.shape[0], {0: values})

    @classmethod
    def sample_scalar(cls, fn: Callable, dim: int, points_per_axis: int) -> "GridField":
        """Sample a scalar function of grid coordinates (vectorized callable)."""
        coords = grid_coordinates(dim, points_per_axis)
        return cls.from_scalar(np.asarray(fn(*coords), dtype=complex), dim)

    def magnitude(self) -> np.ndarray:
        """Pointwise Clifford coefficient norm, as a real array."""
        total = np.zeros((self.points_per_axis,) * self.dim, dtype=float)
        for plane in self.comps.values():
            total += np.abs(plane) ** 2
        return np.sqrt(total)

    def scalar_values(self) -> np.ndarray:
        extra = [mask for mask in self.comps if mask != 0]
        if any(np.any(self.comps[mask]) for mask in extra):
            raise InputError("grid field has non-scalar Clifford components")
        return self.comps.get(0, np.zeros((self.points_per_axis,) * self.dim, complex))

    def value_at(self, idx) -> CliffordElement:
        if isinstance(idx, (int, np.integer)):
            idx = (int(idx),)
        idx = tuple(idx)
        return CliffordElement(
            max(self.dim, 1), {mask: plane[idx] for mask, plane in self.comps.items()}
        )

    def quadrature_weight(self) -> float:
        return (TWO_PI / self.points_per_axis) ** self.dim

    def __repr__(self) -> str:
        return (
            f"GridField(dim={self.dim}, points_per_axis={self.points_per_axis}, "
            f"blades={sorted(self.comps)})"
        )


def _check_grid_band(points: int, band: int) -> None:
    if points < 2 * band + 1:
        raise AliasingError(
            f"grid with {points} points per axis cannot represent band {band}; "
            f"need at least {2 * band + 1}"
        )


def default_points(band: int) -> int:
    """Default oversampled grid size for a given band."""
    return max(OVERSAMPLE * band, 2 * band + 1)


def forward_transform(grid: GridField, band: int, prune_tol: float = 0.0) -> SpectralField:
    """Fourier coefficients of grid samples by uniform-grid quadrature.

    Exact to roundoff for band-limited inputs; raises ``AliasingError`` when
    the grid is too coarse for the requested band.
    """
    P = grid.points_per_axis
    dim = grid.dim
    _check_grid_band(P, band)
    if band < 1:
        raise InputError("band must be >= 1")
    gather = _wrapped_index_arrays(dim, band, P)
    masks = tuple(sorted(grid.comps))
    vectors = np.empty((len(masks), len(mode_list(dim, band))), dtype=complex)
    scale = 1.0 / P**dim
    for row, mask in enumerate(masks):
        hat = np.fft.fftn(grid.comps[mask]) * scale
        vectors[row] = hat[gather]
    return SpectralField.from_blade_vectors(dim, band, masks, vectors, prune_tol=prune_tol)


def inverse_transform(field: SpectralField, points_per_axis: int | None = None) -> GridField:
    """Synthesis ``u(x_k) = sum_m u_hat(m) exp(i<m, x_k>)`` on the uniform grid."""
    P = int(points_per_axis) if points_per_axis else default_points(field.band)
    _check_grid_band(P, field.band)
    dim = field.dim
    scatter = _wrapped_index_arrays(dim, field.band, P)
    masks, vectors = field.blade_vectors()
    comps: dict[int, np.ndarray] = {}
    for row, mask in enumerate(masks):
        cube = np.zeros((P,) * dim, dtype=complex)
        cube[scatter] = vectors[row]
        comps[mask] = np.fft.ifftn(cube) * P**dim
    return GridField(dim, P, comps)


def convolve(f: SpectralField, g: SpectralField) -> SpectralField:
    """Coefficientwise convolution ``(2*pi)**n * f_hat(m) * g_hat(m)``.

    Clifford coefficients multiply in the order f then g; the order matters.
    """
    f._require_compatible(g)
    factor = TWO_PI**f.dim
    coeffs = {}
    for m, fv in f.coeffs.items():
        gv = g.coeffs.get(m)
        if gv is not None:
            coeffs[m] = (fv * gv).scale(factor)
    return SpectralField(f.dim, f.band, coeffs)


def project_zero_mean(f: SpectralField) -> SpectralField:
    """Drop the ``m = 0`` coefficient and flag the result as zero-mean."""
    zero = (0,) * f.dim
    coeffs = {m: v for m, v in f.coeffs.items() if m != zero}
    return SpectralField(f.dim, f.band, coeffs, zero_mean=True)
