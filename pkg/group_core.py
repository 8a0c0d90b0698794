#!/usr/bin/env python3
"""
Finite abelian groups presented as products of cyclic groups

Elements and characters share the same coordinate scheme: the character
with index (c_1, ..., c_r) maps a = (a_1, ..., a_r) to
prod_i exp(2*pi*i * c_i * a_i / n_i). Enumeration is mixed radix with the
last coordinate running fastest, so index 0 is always 0_A (resp. chi_0).
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np

import config
from errors import ParameterError, ResourceLimitError, StructuralError

logger = logging.getLogger("group_core")


@dataclass(frozen=True)
class AbelianGroup:
    """Z_{n_1} x ... x Z_{n_k}"""

    moduli: Tuple[int, ...]

    def __post_init__(self):
        try:
            moduli = tuple(int(n) for n in self.moduli)
        except (TypeError, ValueError) as e:
            raise StructuralError(f"moduli must be integers, got {self.moduli!r}") from e
        if not moduli:
            raise ParameterError("a group needs at least one cyclic factor")
        if any(n < 2 for n in moduli):
            raise ParameterError(f"every modulus must be >= 2, got {moduli}")
        object.__setattr__(self, "moduli", moduli)

    @classmethod
    def cyclic(cls, n: int) -> "AbelianGroup":
        return cls((n,))

    @classmethod
    def elementary(cls, p: int, rank: int) -> "AbelianGroup":
        """Z_p^rank"""
        return cls((p,) * rank)

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    @property
    def trivial_character(self) -> "Character":
        return Character(self, (0,) * self.rank)

    def require_enumerable(self):
        """Raises ResourceLimitError when the order exceeds the configured cap"""
        if self.order > config.GROUP_ORDER_CAP:
            raise ResourceLimitError(
                f"group of order {self.order} exceeds the cap {config.GROUP_ORDER_CAP}"
            )

    def element(self, *coords: Union[int, Sequence[int]]) -> "GroupElement":
        """element(3) or element(1, 0, 1) or element([1, 0, 1])"""
        if len(coords) == 1 and not isinstance(coords[0], (int, np.integer)):
            coords = tuple(coords[0])
        return GroupElement(self, tuple(int(c) for c in coords))

    def character(self, *index: Union[int, Sequence[int]]) -> "Character":
        if len(index) == 1 and not isinstance(index[0], (int, np.integer)):
            index = tuple(index[0])
        return Character(self, tuple(int(c) for c in index))

    def index_of(self, element: "GroupElement") -> int:
        _check_member(self, element)
        return int(np.ravel_multi_index(element.coords, self.moduli))

    def element_at(self, index: int) -> "GroupElement":
        if not 0 <= index < self.order:
            raise StructuralError(f"index {index} out of range for order {self.order}")
        coords = np.unravel_index(int(index), self.moduli)
        return GroupElement(self, tuple(int(c) for c in coords))

    def character_at(self, index: int) -> "Character":
        return Character(self, self.element_at(index).coords)

    def elements(self) -> List["GroupElement"]:
        self.require_enumerable()
        return [
            GroupElement(self, tuple(int(c) for c in row)) for row in self.coords_array
        ]

    def characters(self) -> List["Character"]:
        self.require_enumerable()
        return [Character(self, tuple(int(c) for c in row)) for row in self.coords_array]

    @cached_property
    def coords_array(self) -> np.ndarray:
        """(order x rank) array of coordinates in enumeration order"""
        self.require_enumerable()
        idx = np.unravel_index(np.arange(self.order), self.moduli)
        coords = np.stack(idx, axis=1).astype(np.int64)
        coords.setflags(write=False)
        return coords

    # Vectorized arithmetic on enumeration indices

    def index_add(self, a, b) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        ca = np.stack(np.unravel_index(np.asarray(a), self.moduli))
        cb = np.stack(np.unravel_index(np.asarray(b), self.moduli))
        mod = np.array(self.moduli).reshape((-1,) + (1,) * (ca.ndim - 1))
        return np.ravel_multi_index(tuple((ca + cb) % mod), self.moduli)

    def index_negate(self, a) -> np.ndarray:
        ca = np.stack(np.unravel_index(np.asarray(a), self.moduli))
        mod = np.array(self.moduli).reshape((-1,) + (1,) * (ca.ndim - 1))
        return np.ravel_multi_index(tuple((-ca) % mod), self.moduli)

    def character_transform(self, values, inverse: bool = False) -> np.ndarray:
        """
        out[chi] = sum_a chi(a) * values[a] for every character chi
        (conj(chi(a)) when inverse is set), unnormalized.

        Applied factor by factor: each cyclic axis gets a dense DFT matrix,
        or numpy.fft when the factor exceeds config.DENSE_DFT_MAX.
        """
        self.require_enumerable()
        arr = np.asarray(values, dtype=complex)
        if arr.shape != (self.order,):
            raise StructuralError(
                f"expected a vector of length {self.order}, got shape {arr.shape}"
            )
        sign = -1 if inverse else 1
        arr = arr.reshape(self.moduli)
        for axis, n in enumerate(self.moduli):
            if n <= config.DENSE_DFT_MAX:
                matrix = _dft_matrix(n, sign)
                arr = np.moveaxis(np.tensordot(matrix, arr, axes=([1], [axis])), 0, axis)
            elif sign > 0:
                arr = np.fft.ifft(arr, axis=axis) * n
            else:
                arr = np.fft.fft(arr, axis=axis)
        return arr.reshape(-1)

    def to_dict(self) -> Dict:
        return {"moduli": list(self.moduli)}

    @classmethod
    def from_dict(cls, data: Dict) -> "AbelianGroup":
        try:
            return cls(tuple(data["moduli"]))
        except (KeyError, TypeError) as e:
            raise StructuralError(f"malformed group description: {data!r}") from e

    def __str__(self):
        return " x ".join(f"Z_{n}" for n in self.moduli)


@dataclass(frozen=True)
class GroupElement:
    """Element of an AbelianGroup; coordinates are reduced on construction"""

    group: AbelianGroup = field(repr=False)
    coords: Tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.group.rank:
            raise StructuralError(
                f"{len(self.coords)} coordinates for a group of rank {self.group.rank}"
            )
        reduced = tuple(int(c) % n for c, n in zip(self.coords, self.group.moduli))
        object.__setattr__(self, "coords", reduced)

    @property
    def index(self) -> int:
        return self.group.index_of(self)

    def __add__(self, other: "GroupElement") -> "GroupElement":
        return group_add(self, other)

    def __neg__(self) -> "GroupElement":
        return group_negate(self)

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return group_add(self, group_negate(other))

    def to_list(self) -> List[int]:
        return list(self.coords)

    def __str__(self):
        if self.group.rank == 1:
            return str(self.coords[0])
        return "(" + ",".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class Character:
    """Irreducible character chi_index of an AbelianGroup"""

    group: AbelianGroup = field(repr=False)
    index: Tuple[int, ...]

    def __post_init__(self):
        if len(self.index) != self.group.rank:
            raise StructuralError(
                f"{len(self.index)} indices for a group of rank {self.group.rank}"
            )
        reduced = tuple(int(c) % n for c, n in zip(self.index, self.group.moduli))
        object.__setattr__(self, "index", reduced)

    @property
    def is_trivial(self) -> bool:
        return not any(self.index)

    def __call__(self, a: GroupElement) -> complex:
        return character_eval(self, a)


def _check_member(group: AbelianGroup, element: GroupElement):
    if element.group.moduli != group.moduli:
        raise StructuralError(f"element {element} does not belong to {group}")


def _check_same_group(a, b):
    if a.group.moduli != b.group.moduli:
        raise StructuralError(f"mismatched groups: {a.group} vs {b.group}")


@lru_cache(maxsize=None)
def _dft_matrix(n: int, sign: int) -> np.ndarray:
    # exponent reduced mod n in integers first, keeps the phases exact
    k = np.arange(n)
    exponents = np.outer(k, k) % n
    matrix = np.exp(sign * 2j * np.pi * exponents / n)
    matrix.setflags(write=False)
    return matrix


def group_add(a: GroupElement, b: GroupElement) -> GroupElement:
    _check_same_group(a, b)
    return GroupElement(a.group, tuple(x + y for x, y in zip(a.coords, b.coords)))


def group_negate(a: GroupElement) -> GroupElement:
    return GroupElement(a.group, tuple(-x for x in a.coords))


def group_sub(a: GroupElement, b: GroupElement) -> GroupElement:
    return group_add(a, group_negate(b))


def character_phase(chi: Character, a: GroupElement) -> Fraction:
    """Exact phase t in [0, 1) with chi(a) = exp(2*pi*i*t)"""
    _check_same_group(chi, a)
    total = sum(
        (Fraction(c * x % n, n) for c, x, n in zip(chi.index, a.coords, a.group.moduli)),
        Fraction(0),
    )
    return total - math.floor(total)


def character_eval(chi: Character, a: GroupElement) -> complex:
    phase = character_phase(chi, a)
    if phase == 0:
        return 1 + 0j
    return cmath.exp(2j * math.pi * float(phase))


def enumerate_group(group: AbelianGroup) -> List[GroupElement]:
    return group.elements()


def enumerate_characters(group: AbelianGroup) -> List[Character]:
    return group.characters()


def parse_elements(group: AbelianGroup, raw: Iterable) -> List[GroupElement]:
    """Accepts integers (rank-1 groups) or coordinate lists"""
    out = []
    for item in raw:
        if isinstance(item, (int, np.integer)):
            out.append(group.element(int(item)))
        else:
            out.append(group.element(list(item)))
    return out
