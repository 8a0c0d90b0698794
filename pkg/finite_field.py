#!/usr/bin/env python3
"""
Arithmetic in GF(p^n) in polynomial basis

Elements are coefficient vectors (constant term first) reduced modulo a monic
irreducible polynomial. Polynomial arithmetic over GF(p) is delegated to
sympy.polys.galoistools, which works on high-degree-first coefficient lists.
"""

import dataclasses
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (gf_add, gf_gcdex, gf_irred_p_ben_or,
                                     gf_mul, gf_neg, gf_pow_mod, gf_rem,
                                     gf_strip, gf_sub)

import config
from errors import (DomainError, InternalConsistencyError, ParameterError,
                    ResourceLimitError, StructuralError,
                    UnsupportedParameterError)

logger = logging.getLogger("finite_field")


def _to_gf(coeffs: Sequence[int]) -> List[int]:
    """constant-first vector -> sympy's stripped high-first list"""
    return gf_strip([int(c) for c in reversed(coeffs)])


def _from_gf(poly: Sequence[int], n: int) -> Tuple[int, ...]:
    low_first = [int(c) for c in reversed(poly)]
    return tuple(low_first + [0] * (n - len(low_first)))


def is_irreducible(p: int, modulus: Sequence[int]) -> bool:
    """Ben-Or test: gcd(f, x^(p^i) - x mod f) == 1 for i <= deg/2"""
    poly = _to_gf([c % p for c in modulus])
    if len(poly) < 2:
        return False
    return bool(gf_irred_p_ben_or(poly, p, ZZ))


def find_irreducible(p: int, n: int, rng_seed: int = 0) -> Tuple[int, ...]:
    """Seeded random search for a monic irreducible polynomial of degree n"""
    if n == 1:
        return (0, 1)
    rng = np.random.default_rng(rng_seed)
    while True:
        low = [int(c) for c in rng.integers(0, p, size=n)]
        if low[0] == 0:
            continue
        candidate = tuple(low) + (1,)
        if is_irreducible(p, candidate):
            logger.debug("Irreducible modulus for GF(%d^%d): %s", p, n, candidate)
            return candidate


@dataclass(frozen=True)
class FiniteField:
    """GF(p^n) = GF(p)[x] / (modulus)"""

    p: int
    n: int
    modulus: Tuple[int, ...]

    def __post_init__(self):
        p, n = int(self.p), int(self.n)
        modulus = tuple(int(c) % p for c in self.modulus)
        if not isprime(p):
            raise ParameterError(f"characteristic {p} is not prime")
        if n < 1:
            raise ParameterError(f"extension degree must be >= 1, got {n}")
        if p**n > config.FIELD_SIZE_CAP:
            raise ResourceLimitError(
                f"field of size {p}^{n} exceeds the cap {config.FIELD_SIZE_CAP}"
            )
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise ParameterError(f"modulus must be monic of degree {n}: {modulus}")
        if not is_irreducible(p, modulus):
            raise ParameterError(f"modulus {modulus} is reducible over GF({p})")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "modulus", modulus)

    @classmethod
    def build(
        cls, p: int, n: int = 1, modulus: Optional[Sequence[int]] = None, rng_seed: int = 0
    ) -> "FiniteField":
        if not isprime(int(p)):
            raise ParameterError(f"characteristic {p} is not prime")
        if modulus is None:
            modulus = find_irreducible(int(p), int(n), rng_seed)
        return cls(int(p), int(n), tuple(modulus))

    @property
    def order(self) -> int:
        return self.p**self.n

    @cached_property
    def _gf_modulus(self) -> List[int]:
        return _to_gf(self.modulus)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.n)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.n - 1))

    @property
    def generator(self) -> "FieldElement":
        """x mod modulus (the 'alpha' of the polynomial basis)"""
        return self.element(_from_gf(gf_rem([1, 0], self._gf_modulus, self.p, ZZ), self.n))

    def element(self, value: Union[int, Sequence[int]]) -> "FieldElement":
        """From an integer encoding (base p, constant term least significant) or coefficients"""
        if isinstance(value, (int, np.integer)):
            value = int(value)
            if not 0 <= value < self.order:
                raise StructuralError(f"encoding {value} out of range for GF({self.order})")
            coeffs = []
            for _ in range(self.n):
                value, c = divmod(value, self.p)
                coeffs.append(c)
            return FieldElement(self, tuple(coeffs))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.n:
            return self._reduce(_to_gf(coeffs))
        return FieldElement(self, tuple(coeffs + [0] * (self.n - len(coeffs))))

    def elements(self) -> List["FieldElement"]:
        return [self.element(i) for i in range(self.order)]

    def _reduce(self, poly: List[int]) -> "FieldElement":
        return FieldElement(self, _from_gf(gf_rem(poly, self._gf_modulus, self.p, ZZ), self.n))

    def to_dict(self) -> Dict:
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, data: Dict) -> "FiniteField":
        try:
            return cls(int(data["p"]), int(data["n"]), tuple(data["modulus"]))
        except (KeyError, TypeError) as e:
            raise StructuralError(f"malformed field description: {data!r}") from e

    def __str__(self):
        return f"GF({self.p}^{self.n})"


@dataclass(frozen=True)
class FieldElement:
    field: FiniteField = dataclasses.field(repr=False)
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.field.n:
            raise StructuralError(
                f"{len(self.coeffs)} coefficients for an extension of degree {self.field.n}"
            )
        reduced = tuple(int(c) % self.field.p for c in self.coeffs)
        object.__setattr__(self, "coeffs", reduced)

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def _gf(self) -> List[int]:
        return _to_gf(self.coeffs)

    def to_int(self) -> int:
        value = 0
        for c in reversed(self.coeffs):
            value = value * self.field.p + c
        return value

    def __add__(self, other):
        return field_add(self, other)

    def __sub__(self, other):
        return field_sub(self, other)

    def __neg__(self):
        return field_neg(self)

    def __mul__(self, other):
        return field_mul(self, other)

    def __truediv__(self, other):
        return field_mul(self, field_inv(other))

    def __pow__(self, exponent: int):
        return field_pow(self, exponent)

    def __str__(self):
        terms = []
        for i in reversed(range(self.field.n)):
            c = self.coeffs[i]
            if c == 0:
                continue
            coef = "" if c == 1 and i > 0 else str(c)
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{coef}α")
            else:
                terms.append(f"{coef}α^{i}")
        return "+".join(terms) or "0"


def _check_same_field(x: FieldElement, y: FieldElement):
    if x.field != y.field:
        raise StructuralError(f"elements from different fields: {x.field} vs {y.field}")


def field_add(x: FieldElement, y: FieldElement) -> FieldElement:
    _check_same_field(x, y)
    return FieldElement(x.field, _from_gf(gf_add(x._gf, y._gf, x.field.p, ZZ), x.field.n))


def field_sub(x: FieldElement, y: FieldElement) -> FieldElement:
    _check_same_field(x, y)
    return FieldElement(x.field, _from_gf(gf_sub(x._gf, y._gf, x.field.p, ZZ), x.field.n))


def field_neg(x: FieldElement) -> FieldElement:
    return FieldElement(x.field, _from_gf(gf_neg(x._gf, x.field.p, ZZ), x.field.n))


def field_mul(x: FieldElement, y: FieldElement) -> FieldElement:
    _check_same_field(x, y)
    return x.field._reduce(gf_mul(x._gf, y._gf, x.field.p, ZZ))


def field_inv(x: FieldElement) -> FieldElement:
    if x.is_zero:
        raise DomainError("zero has no multiplicative inverse")
    s, _, h = gf_gcdex(x._gf, x.field._gf_modulus, x.field.p, ZZ)
    if h != [1]:
        raise InternalConsistencyError(f"gcd with the modulus is {h}, modulus not irreducible")
    return x.field._reduce(s)


def field_pow(x: FieldElement, exponent: int) -> FieldElement:
    exponent = int(exponent)
    if exponent < 0:
        return field_pow(field_inv(x), -exponent)
    if exponent == 0:
        return x.field.one
    poly = gf_pow_mod(x._gf, exponent, x.field._gf_modulus, x.field.p, ZZ)
    return FieldElement(x.field, _from_gf(poly, x.field.n))


def frobenius(x: FieldElement) -> FieldElement:
    """x -> x^p"""
    return field_pow(x, x.field.p)


def trace(x: FieldElement, subfield_exponent: int = 1) -> int:
    """
    Absolute trace x + x^p + ... + x^(p^(n-1)) into the prime field GF(p),
    returned as an integer in [0, p)
    """
    if subfield_exponent != 1:
        raise UnsupportedParameterError(
            f"only the prime subfield is supported (e = 1), got e = {subfield_exponent}"
        )
    total, term = x, x
    for _ in range(x.field.n - 1):
        term = frobenius(term)
        total = field_add(total, term)
    if any(total.coeffs[1:]):
        raise InternalConsistencyError(f"trace {total} does not lie in GF({x.field.p})")
    return total.coeffs[0]


@dataclass(frozen=True)
class PrimitiveElement:
    """Generator of GF(q)^x with cached power and log tables"""

    element: FieldElement
    order: int

    def __post_init__(self):
        if self.order != self.element.field.order - 1:
            raise ParameterError(
                f"primitive element order must be {self.element.field.order - 1}, got {self.order}"
            )

    @property
    def field(self) -> FiniteField:
        return self.element.field

    @cached_property
    def powers(self) -> Tuple[FieldElement, ...]:
        """alpha^0, alpha^1, ..., alpha^(q-2), by repeated multiplication"""
        table = [self.field.one]
        for _ in range(self.order - 1):
            table.append(field_mul(table[-1], self.element))
        if field_mul(table[-1], self.element) != self.field.one:
            raise InternalConsistencyError(f"{self.element} does not have order {self.order}")
        return tuple(table)

    @cached_property
    def _log_table(self) -> Dict[Tuple[int, ...], int]:
        return {x.coeffs: i for i, x in enumerate(self.powers)}

    @cached_property
    def trace_table(self) -> Tuple[int, ...]:
        """tr(alpha^i) for i in [0, q-1)"""
        return tuple(trace(x) for x in self.powers)

    def power(self, exponent: int) -> FieldElement:
        return self.powers[int(exponent) % self.order]

    def log(self, target: FieldElement) -> int:
        return discrete_log(self, target)

    def to_dict(self) -> Dict:
        return {"coeffs": list(self.element.coeffs), "order": self.order}


def _multiplicative_order_is_full(x: FieldElement, group_order: int, primes) -> bool:
    if x.is_zero:
        return False
    return all(field_pow(x, group_order // r) != x.field.one for r in primes)


def find_primitive(gf: FiniteField) -> PrimitiveElement:
    """
    Smallest element (by integer encoding, starting at 2) whose order is q - 1,
    certified by x^((q-1)/r) != 1 for every prime r dividing q - 1
    """
    group_order = gf.order - 1
    if group_order == 1:
        return PrimitiveElement(gf.one, 1)
    primes = sorted(factorint(group_order))
    for value in range(2, gf.order):
        candidate = gf.element(value)
        if _multiplicative_order_is_full(candidate, group_order, primes):
            logger.debug("Primitive element of %s: %s", gf, candidate)
            return PrimitiveElement(candidate, group_order)
    raise InternalConsistencyError(f"no primitive element found in {gf}")


def primitive_from(x: FieldElement) -> PrimitiveElement:
    """Certifies a user-chosen alpha"""
    group_order = x.field.order - 1
    primes = sorted(factorint(group_order)) if group_order > 1 else []
    if not _multiplicative_order_is_full(x, group_order, primes):
        raise ParameterError(f"{x} is not a primitive element of {x.field}")
    return PrimitiveElement(x, group_order)


def discrete_log(base: PrimitiveElement, target: FieldElement) -> int:
    """Smallest i >= 0 with base^i == target, by exhaustive stepping through the powers"""
    if target.field != base.field:
        raise StructuralError(f"target from {target.field}, base from {base.field}")
    if target.is_zero:
        raise DomainError("discrete log of zero is undefined")
    return base._log_table[target.coeffs]
