"""Arithmetic in the universal complex Clifford algebra with ``e_j**2 = +1``.

The algebra on ``n`` generators is spanned by products ``e_a = e_{j_1}...e_{j_k}``
over increasing subsets ``a`` of ``{1, ..., n}``.  A subset is encoded as a
bitmask whose bit ``j-1`` marks the generator ``e_j``; the empty subset (mask 0)
is the scalar unit.  The generators obey

    e_j e_k + e_k e_j = 2*delta_jk,

so equal generators contract to ``+1`` and distinct generators anticommute.
Under this convention every nonzero real vector ``v`` squares to ``|v|**2`` and
is invertible, which is what makes the Dirac-type operator symbols invertible
frequency by frequency.

Conjugation reverses basis products and conjugates complex coefficients; it is
an anti-homomorphism (``conj(x*y) == conj(y)*conj(x)``) and pairs with the
scalar projection ``p0`` to produce the coefficient norm:
``p0(conj(x)*x) == sum(|x_a|**2)``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import InputError

#: Runtime cap on the generator count (2**8 components).
MAX_GENERATORS = 8

# Products of elements denser than this (pair count) go through the table path.
_DENSE_PAIR_THRESHOLD = 128


def _check_generator_count(n: int) -> None:
    if not isinstance(n, int) or n < 1 or n > MAX_GENERATORS:
        raise InputError(
            f"generator count must be an integer in [1, {MAX_GENERATORS}], got {n!r}"
        )


def _reordering_sign(a: int, b: int) -> int:
    """Sign of ``e_a * e_b`` from counting generator transpositions.

    Equal generators contract with a ``+1`` factor, so the sign is entirely
    determined by the number of swaps needed to interleave the two sorted
    blades.
    """
    a >>= 1
    swaps = 0
    while a:
        swaps += (a & b).bit_count()
        a >>= 1
    return -1 if swaps & 1 else 1


@lru_cache(maxsize=None)
def _blade_product(a: int, b: int) -> tuple[int, int]:
    """(sign, blade) of the product of two basis blades given as bitmasks."""
    return _reordering_sign(a, b), a ^ b


@lru_cache(maxsize=MAX_GENERATORS)
def _blade_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Dense (sign, target-blade) tables for all basis-blade pairs."""
    dim = 1 << n
    sign = np.empty((dim, dim), dtype=np.int8)
    for a in range(dim):
        row = sign[a]
        for b in range(dim):
            row[b] = _reordering_sign(a, b)
    masks = np.arange(dim, dtype=np.intp)
    target = (masks[:, None] ^ masks[None, :]).ravel()
    return sign, target


def mask_to_subset(mask: int) -> tuple[int, ...]:
    """Decode a blade bitmask into the increasing generator subset."""
    out = []
    j = 1
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return tuple(out)


def subset_to_mask(subset: Iterable[int], n: int) -> int:
    """Encode an increasing generator subset as a bitmask, validating order."""
    mask = 0
    previous = 0
    for j in subset:
        if not isinstance(j, (int, np.integer)) or j < 1 or j > n:
            raise InputError(f"generator index {j!r} outside 1..{n}")
        if j <= previous:
            raise InputError(f"subset {tuple(subset)} is not strictly increasing")
        mask |= 1 << (j - 1)
        previous = j
    return mask


class CliffordElement:
    """Element of the complex Clifford algebra on ``n`` generators.

    Components are held sparsely: blades absent from ``comps`` are exactly
    zero.  Instances are treated as immutable values; no method mutates its
    operands.
    """

    __slots__ = ("n", "comps")

    def __init__(self, n: int, comps: Mapping[int, complex] | None = None):
        _check_generator_count(n)
        cleaned: dict[int, complex] = {}
        if comps:
            top = 1 << n
            for mask, value in comps.items():
                mask = int(mask)
                if not 0 <= mask < top:
                    raise InputError(f"blade mask {mask} out of range for n={n}")
                z = complex(value)
                if z != 0:
                    cleaned[mask] = z
        self.n = n
        self.comps = cleaned

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "CliffordElement":
        return cls(n, None)

    @classmethod
    def scalar(cls, n: int, value: complex) -> "CliffordElement":
        return cls(n, {0: value})

    @classmethod
    def basis_vector(cls, n: int, j: int) -> "CliffordElement":
        """The generator ``e_j`` (1-based axis index)."""
        if not 1 <= j <= n:
            raise InputError(f"axis {j} out of range 1..{n}")
        return cls(n, {1 << (j - 1): 1.0})

    @classmethod
    def from_vector(cls, coords: Sequence[complex]) -> "CliffordElement":
        """Grade-1 element ``sum_j coords[j-1] * e_j``."""
        n = len(coords)
        return cls(n, {1 << j: coords[j] for j in range(n)})

    # -- component access --------------------------------------------------

    def component(self, subset: Iterable[int]) -> complex:
        """Coefficient of the blade given by an increasing generator subset."""
        return self.comps.get(subset_to_mask(tuple(subset), self.n), 0j)

    def items_by_subset(self) -> Iterator[tuple[tuple[int, ...], complex]]:
        """Components as (subset, value) pairs in canonical mask order."""
        for mask in sorted(self.comps):
            yield mask_to_subset(mask), self.comps[mask]

    def p0(self) -> complex:
        """Projection onto the scalar (unit) component."""
        return self.comps.get(0, 0j)

    def norm(self) -> float:
        """Coefficient norm ``sqrt(sum(|x_a|**2))``."""
        return float(np.sqrt(sum(abs(v) ** 2 for v in self.comps.values())))

    def is_zero(self, tol: float = 0.0) -> bool:
        if not self.comps:
            return True
        return self.norm() <= tol

    def max_grade(self) -> int:
        if not self.comps:
            return 0
        return max(mask.bit_count() for mask in self.comps)

    # -- algebra -----------------------------------------------------------

    def _require_same_n(self, other: "CliffordElement") -> None:
        if self.n != other.n:
            raise InputError(
                f"generator-count mismatch: {self.n} vs {other.n}"
            )

    def __add__(self, other: "CliffordElement") -> "CliffordElement":
        self._require_same_n(other)
        comps = dict(self.comps)
        for mask, value in other.comps.items():
            comps[mask] = comps.get(mask, 0j) + value
        return CliffordElement(self.n, comps)

    def __sub__(self, other: "CliffordElement") -> "CliffordElement":
        self._require_same_n(other)
        comps = dict(self.comps)
        for mask, value in other.comps.items():
            comps[mask] = comps.get(mask, 0j) - value
        return CliffordElement(self.n, comps)

    def __neg__(self) -> "CliffordElement":
        return CliffordElement(self.n, {m: -v for m, v in self.comps.items()})

    def scale(self, factor: complex) -> "CliffordElement":
        factor = complex(factor)
        if factor == 0:
            return CliffordElement.zero(self.n)
        return CliffordElement(self.n, {m: factor * v for m, v in self.comps.items()})

    def __mul__(self, other):
        if isinstance(other, CliffordElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        # Scalars commute with everything; Clifford*Clifford never lands here.
        return self.scale(other)

    def conjugate(self) -> "CliffordElement":
        """Blade reversal combined with complex conjugation of coefficients.

        On a grade-k blade the reversal contributes ``(-1)**(k*(k-1)//2)``.
        """
        comps: dict[int, complex] = {}
        for mask, value in self.comps.items():
            k = mask.bit_count()
            sign = -1 if (k * (k - 1) // 2) & 1 else 1
            comps[mask] = sign * value.conjugate()
        return CliffordElement(self.n, comps)

    # -- comparison --------------------------------------------------------

    def isclose(self, other: "CliffordElement", tol: float = 1e-12) -> bool:
        self._require_same_n(other)
        return (self - other).norm() <= tol

    def __eq__(self, other) -> bool:
        if not isinstance(other, CliffordElement):
            return NotImplemented
        return self.n == other.n and self.comps == other.comps

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.comps.items()))))

    def __repr__(self) -> str:
        if not self.comps:
            return f"CliffordElement({self.n}, 0)"
        parts = []
        for subset, value in self.items_by_subset():
            label = "1" if not subset else "e" + "".join(str(j) for j in subset)
            parts.append(f"{value:g}*{label}")
        return f"CliffordElement({self.n}, {' + '.join(parts)})"


def multiply(x: CliffordElement, y: CliffordElement) -> CliffordElement:
    """Clifford product ``x*y`` (bilinear, associative, order-sensitive)."""
    x._require_same_n(y)
    if not x.comps or not y.comps:
        return CliffordElement.zero(x.n)
    if len(x.comps) * len(y.comps) >= _DENSE_PAIR_THRESHOLD:
        return _dense_multiply(x, y)
    comps: dict[int, complex] = {}
    for a, va in x.comps.items():
        for b, vb in y.comps.items():
            sign, blade = _blade_product(a, b)
            comps[blade] = comps.get(blade, 0j) + sign * va * vb
    return CliffordElement(x.n, comps)


def _dense_multiply(x: CliffordElement, y: CliffordElement) -> CliffordElement:
    dim = 1 << x.n
    sign, target = _blade_tables(x.n)
    a = np.zeros(dim, dtype=complex)
    b = np.zeros(dim, dtype=complex)
    for mask, value in x.comps.items():
        a[mask] = value
    for mask, value in y.comps.items():
        b[mask] = value
    prod = (a[:, None] * b[None, :]) * sign
    flat_re = np.bincount(target, weights=prod.real.ravel(), minlength=dim)
    flat_im = np.bincount(target, weights=prod.imag.ravel(), minlength=dim)
    comps = {}
    for mask in np.nonzero(flat_re + 1j * flat_im)[0]:
        comps[int(mask)] = complex(flat_re[mask], flat_im[mask])
    return CliffordElement(x.n, comps)


def conjugate(x: CliffordElement) -> CliffordElement:
    return x.conjugate()


def p0(x: CliffordElement) -> complex:
    return x.p0()


def invert_vector(coords: Sequence[float]) -> CliffordElement:
    """Inverse ``v / |v|**2`` of a nonzero real vector, as a grade-1 element.

    Only real vectors are safely invertible here: complex vectors may square
    to zero (``(e1 + i*e2)**2 == 0``).
    """
    try:
        vec = np.asarray(coords, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"expected a real vector: {exc}") from exc
    if vec.ndim != 1 or vec.size < 1:
        raise InputError("expected a 1-D real vector")
    norm_sq = float(np.dot(vec, vec))
    if norm_sq == 0.0:
        raise InputError("zero vector is not invertible")
    return CliffordElement.from_vector(vec / norm_sq)
