"""Fourier multiplier operators on band-limited torus fields.

Covers the fractional Laplacian ``|m|**(2s)``, the Riesz transforms
``+/- i*m_j/|m|``, and the Dirac-type operators

    D    : symbol |m|**(n/2) * (1 + sum_j e_j * i*m_j/|m|)
    Dbar : symbol |m|**(n/2) * (1 - sum_j e_j * i*m_j/|m|)

together with closed-form inverses of ``D`` and ``D**2``.  In one dimension
the Dirac symbols reduce to the scalar form ``|m|**(1/2) * (1 +/- i*sign(m))``
and no Clifford generators appear.

Every multiplier sends the ``m = 0`` mode to zero (the calculus works modulo
means throughout); symbols left-multiply the coefficients, which matters for
Clifford-valued fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache
from typing import Callable

from .clifford import CliffordElement
from .errors import InputError
from .spectral import Index, SpectralField, freq_norm


def _is_zero_index(m: Index) -> bool:
    return all(mj == 0 for mj in m)


@dataclass(frozen=True)
class MultiplierOp:
    """A Fourier multiplier with an explicit rule for the ``m = 0`` mode.

    ``symbol(m)`` must be defined for every nonzero band frequency and
    left-multiplies the coefficient there.  ``zero_rule`` maps the mean
    coefficient; the default annihilates it.
    """

    dim: int
    symbol: Callable[[Index], CliffordElement]
    zero_rule: Callable[[CliffordElement], CliffordElement] = dataclass_field(
        default=lambda value: CliffordElement.zero(value.n)
    )

    def apply(self, u: SpectralField) -> SpectralField:
        if u.dim != self.dim:
            raise InputError(f"operator dim {self.dim} vs field dim {u.dim}")

        def act(m: Index, value: CliffordElement) -> CliffordElement:
            if _is_zero_index(m):
                return self.zero_rule(value)
            return self.symbol(m) * value

        return u.map_coefficients(act)

    def then(self, outer: "MultiplierOp") -> "MultiplierOp":
        """Composite applying ``self`` first, then ``outer`` (symbols multiply
        pointwise in that order: ``outer.symbol(m) * self.symbol(m)``)."""
        if outer.dim != self.dim:
            raise InputError("cannot compose operators of different dimensions")
        return MultiplierOp(
            self.dim,
            symbol=lambda m: outer.symbol(m) * self.symbol(m),
            zero_rule=lambda value: outer.zero_rule(self.zero_rule(value)),
        )


# -- symbols -------------------------------------------------------------------


@lru_cache(maxsize=None)
def _riesz_factor(m: Index, axis: int, conjugated: bool) -> complex:
    scale = m[axis - 1] / freq_norm(m)
    return -1j * scale if conjugated else 1j * scale


@lru_cache(maxsize=None)
def _dirac_symbol(dim: int, m: Index, conjugated: bool) -> CliffordElement:
    norm = freq_norm(m)
    amplitude = norm ** (dim / 2.0)
    sign = -1.0 if conjugated else 1.0
    if dim == 1:
        return CliffordElement.scalar(
            1, amplitude * (1.0 + sign * 1j * math.copysign(1.0, m[0]))
        )
    comps = {0: complex(amplitude)}
    for j, mj in enumerate(m):
        if mj:
            comps[1 << j] = sign * 1j * amplitude * mj / norm
    return CliffordElement(dim, comps)


@lru_cache(maxsize=None)
def _dirac_inverse_symbol(dim: int, m: Index) -> CliffordElement:
    """Left inverse of the D symbol: (1 - v) / (2*|m|**(n/2)) with v**2 = -1."""
    norm = freq_norm(m)
    scale = 1.0 / (2.0 * norm ** (dim / 2.0))
    if dim == 1:
        return CliffordElement.scalar(
            1, scale * (1.0 - 1j * math.copysign(1.0, m[0]))
        )
    comps = {0: complex(scale)}
    for j, mj in enumerate(m):
        if mj:
            comps[1 << j] = -1j * scale * mj / norm
    return CliffordElement(dim, comps)


@lru_cache(maxsize=None)
def _dirac_square_inverse_symbol(dim: int, m: Index) -> CliffordElement:
    """Inverse of the D**2 symbol ``2i*|m|**(n-1)*m``: ``m/(2i*|m|**(n+1))``."""
    norm = freq_norm(m)
    scale = -0.5j / norm ** (dim + 1)
    if dim == 1:
        # The 1-D operator is scalar: w_hat(n) = -i/(2n) * g_hat(n).
        return CliffordElement.scalar(1, scale * m[0])
    return CliffordElement(
        dim, {1 << j: scale * mj for j, mj in enumerate(m) if mj}
    )


# -- operator constructors ------------------------------------------------------


def fractional_laplacian_op(dim: int, s: float) -> MultiplierOp:
    return MultiplierOp(
        dim, symbol=lambda m: CliffordElement.scalar(dim, freq_norm(m) ** (2.0 * s))
    )

def riesz_op(dim: int, axis: int, conjugated: bool = False) -> MultiplierOp:
    if not 1 <= axis <= dim:
        raise InputError(f"axis {axis} out of range 1..{dim}")
    return MultiplierOp(
        dim,
        symbol=lambda m: CliffordElement.scalar(dim, _riesz_factor(m, axis, conjugated)),
    )


def dirac_op(dim: int, conjugated: bool = False) -> MultiplierOp:
    return MultiplierOp(dim, symbol=lambda m: _dirac_symbol(dim, m, conjugated))


# -- direct operations -----------------------------------------------------------


def fractional_laplacian(u: SpectralField, s: float) -> SpectralField:
    """Coefficientwise multiplication by ``|m|**(2s)``; the mean is annihilated."""
    if s <= 0:
        raise InputError(f"fractional exponent must be positive, got {s}")

    def act(m: Index, value: CliffordElement) -> CliffordElement:
        if _is_zero_index(m):
            return CliffordElement.zero(value.n)
        return value.scale(freq_norm(m) ** (2.0 * s))

    return u.map_coefficients(act)


def riesz(u: SpectralField, axis: int = 1, conjugated: bool = False) -> SpectralField:
    """Riesz transform along ``axis``: multiplier ``+/- i*m_j/|m|``."""
    if not 1 <= axis <= u.dim:
        raise InputError(f"axis {axis} out of range 1..{u.dim}")

    def act(m: Index, value: CliffordElement) -> CliffordElement:
        if _is_zero_index(m):
            return CliffordElement.zero(value.n)
        return value.scale(_riesz_factor(m, axis, conjugated))

    return u.map_coefficients(act)


def dirac_D(u: SpectralField) -> SpectralField:
    """Dirac operator: coefficients left-multiplied by the D symbol."""
    dim = u.dim

    def act(m: Index, value: CliffordElement) -> CliffordElement:
        if _is_zero_index(m):
            return CliffordElement.zero(value.n)
        return _dirac_symbol(dim, m, False) * value

    return u.map_coefficients(act)


def dirac_Dbar(u: SpectralField) -> SpectralField:
    """Conjugate Dirac operator (Riesz part entering with a minus sign)."""
    dim = u.dim

    def act(m: Index, value: CliffordElement) -> CliffordElement:
        if _is_zero_index(m):
            return CliffordElement.zero(value.n)
        return _dirac_symbol(dim, m, True) * value

    return u.map_coefficients(act)


def _require_zero_mean(f: SpectralField, what: str) -> None:
    if not f.mean_coefficient().is_zero():
        raise InputError(f"{what} requires a zero-mean field (nonzero coefficient at m = 0)")


def invert_D(f: SpectralField) -> SpectralField:
    """Solve ``D F = f`` exactly on the band for zero-mean ``f``.

    Uses ``(1 + v)*(1 - v) = 1 - v**2 = 2`` for the unit ``v`` in the symbol,
    so the inverse symbol is ``(1 - v) / (2*|m|**(n/2))``.  The solution
    satisfies ``||F||_{L2} <= ||f||_{H^{-n/2}-dot}`` coefficientwise.
    """
    _require_zero_mean(f, "invert_D")
    dim = f.dim

    def act(m: Index, value: CliffordElement) -> CliffordElement:
        return _dirac_inverse_symbol(dim, m) * value

    return f.map_coefficients(act)


def invert_D2(g: SpectralField) -> SpectralField:
    """Solve ``D(D(w)) = g`` on the band for zero-mean ``g``.

    The squared-Dirac symbol collapses to the grade-1 form ``2i*|m|**(n-1)*m``,
    whose inverse is the bounded-kernel multiplier ``m / (2i*|m|**(n+1))``
    (``-i/(2m)`` in one dimension).
    """
    _require_zero_mean(g, "invert_D2")
    dim = g.dim

    def act(m: Index, value: CliffordElement) -> CliffordElement:
        return _dirac_square_inverse_symbol(dim, m) * value

    return g.map_coefficients(act)


def dirac_square_symbol(dim: int, m: Index) -> CliffordElement:
    """Symbol of ``D(D(.))`` at a nonzero frequency: ``2i*|m|**(n-1)*m``."""
    if _is_zero_index(m):
        return CliffordElement.zero(dim)
    norm = freq_norm(m)
    scale = 2j * norm ** (dim - 1)
    if dim == 1:
        return CliffordElement.scalar(1, scale * m[0])
    return CliffordElement(dim, {1 << j: scale * mj for j, mj in enumerate(m) if mj})
