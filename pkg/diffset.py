#!/usr/bin/env python3
"""
Difference sets in finite abelian groups

Verification counts the full multiset of differences with exact integer
bincounts. Constructors cover the Paley (nonzero squares of GF(q), q = 3 mod 4),
Hadamard (support of a bent function on Z_2^{2n}) and Singer (trace-zero
hyperplane in GF(q^{d+1})^x / GF(q)^x = Z_N) families.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint, isprime

import config
from errors import (DegenerateParameterError, InternalConsistencyError,
                    NotADifferenceSetError, ParameterError, StructuralError,
                    UnsupportedParameterError)
from finite_field import (FiniteField, FieldElement, PrimitiveElement,
                          field_mul, find_primitive, primitive_from)
from group_core import AbelianGroup, GroupElement, parse_elements

logger = logging.getLogger("diffset")

Params = Tuple[int, int, int]

# Worked examples: {0,1,3,9} in Z_13, the support of x1x2 + x3x4 + x1 in Z_2^4,
# and the nonzero squares of GF(27) = GF(3)[x]/(x^3+x^2+x+2) in alpha-coordinates
SINGER_13_4_1 = (0, 1, 3, 9)
HADAMARD_16_6_2 = (
    (1, 1, 0, 0),
    (1, 1, 1, 0),
    (1, 1, 0, 1),
    (0, 0, 1, 1),
    (1, 0, 1, 1),
    (0, 1, 1, 1),
)
PALEY_27_MODULUS = (2, 1, 1, 1)
PALEY_27_13_6 = (
    (1, 0, 0),  # 1
    (0, 1, 0),  # a
    (1, 2, 2),  # 2a^2+2a+1
    (2, 2, 0),  # 2a+2
    (2, 1, 0),  # a+2
    (0, 2, 1),  # a^2+2a
    (1, 0, 1),  # a^2+1
    (1, 0, 2),  # 2a^2+1
    (1, 1, 1),  # a^2+a+1
    (0, 0, 1),  # a^2
    (0, 2, 2),  # 2a^2+2a
    (1, 2, 1),  # a^2+2a+1
    (2, 2, 1),  # a^2+2a+2
)


@dataclass(frozen=True)
class Verification:
    """Outcome of verify_difference_set; witness is set on rejection"""

    accepted: bool
    params: Optional[Params] = None
    witness: Optional[Tuple[GroupElement, GroupElement]] = None
    witness_counts: Optional[Tuple[int, int]] = None
    reason: str = ""

    def to_dict(self) -> Dict:
        data = {"accepted": self.accepted, "reason": self.reason}
        if self.params is not None:
            v, k, lam = self.params
            data["params"] = {"v": v, "k": k, "lambda": lam}
        if self.witness is not None:
            data["witness"] = {
                "elements": [w.to_list() for w in self.witness],
                "coverage": list(self.witness_counts),
            }
        return data


def _difference_counts(group: AbelianGroup, indices: np.ndarray) -> np.ndarray:
    """Multiplicity of every group element in {x - y : x, y in D}"""
    counts = np.zeros(group.order, dtype=np.int64)
    negated = group.index_negate(indices)
    for start in range(0, len(indices), config.DIFFERENCE_CHUNK):
        rows = indices[start : start + config.DIFFERENCE_CHUNK]
        diffs = group.index_add(rows[:, None], negated[None, :])
        counts += np.bincount(diffs.ravel(), minlength=group.order)
    return counts


def _element_indices(group: AbelianGroup, elements: Iterable[GroupElement]) -> np.ndarray:
    indices = [group.index_of(e) for e in elements]
    if len(set(indices)) != len(indices):
        raise ParameterError("difference set candidates must not repeat elements")
    return np.array(sorted(indices), dtype=np.int64)


def verify_difference_set(group: AbelianGroup, elements: Iterable[GroupElement]) -> Verification:
    """
    Accepts iff every nonzero element is covered the same number lambda >= 1
    of times by the k^2 ordered differences (0_A is covered k times).
    """
    group.require_enumerable()
    indices = _element_indices(group, elements)
    k = len(indices)
    if k < 2:
        raise ParameterError(f"a difference set needs k >= 2 elements, got {k}")
    counts = _difference_counts(group, indices)
    nonzero = counts[1:]
    lo, hi = int(nonzero.min()), int(nonzero.max())
    if lo != hi:
        low_at = int(np.argmin(nonzero)) + 1
        high_at = int(np.argmax(nonzero)) + 1
        logger.debug("Rejected: %s covered %d times, %s covered %d times", low_at, lo, high_at, hi)
        return Verification(
            accepted=False,
            witness=(group.element_at(low_at), group.element_at(high_at)),
            witness_counts=(lo, hi),
            reason="non-constant coverage of nonzero differences",
        )
    if lo < 1:
        return Verification(accepted=False, reason="lambda must be at least 1")
    v, lam = group.order, lo
    if lam * (v - 1) != k * (k - 1):
        raise InternalConsistencyError(f"lambda(v-1) != k(k-1) for ({v},{k},{lam})")
    return Verification(accepted=True, params=(v, k, lam), reason="constant coverage")


@dataclass(frozen=True)
class DifferenceSet:
    """A certified (v, k, lambda)-difference set; build with DifferenceSet.certify"""

    group: AbelianGroup
    elements: Tuple[GroupElement, ...]
    params: Params
    family: str = "custom"
    provenance: Dict = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def certify(
        cls,
        group: AbelianGroup,
        elements: Iterable[GroupElement],
        family: str = "custom",
        provenance: Optional[Dict] = None,
    ) -> "DifferenceSet":
        elements = list(elements)
        verdict = verify_difference_set(group, elements)
        if not verdict.accepted:
            raise NotADifferenceSetError(
                f"not a difference set in {group}: {verdict.reason}", verdict
            )
        ordered = tuple(sorted(elements, key=group.index_of))
        logger.debug("Certified %s difference set %s in %s", family, verdict.params, group)
        return cls(group, ordered, verdict.params, family, dict(provenance or {}))

    @property
    def v(self) -> int:
        return self.params[0]

    @property
    def k(self) -> int:
        return self.params[1]

    @property
    def lam(self) -> int:
        return self.params[2]

    @cached_property
    def indices(self) -> np.ndarray:
        out = np.array([self.group.index_of(e) for e in self.elements], dtype=np.int64)
        out.setflags(write=False)
        return out

    @cached_property
    def indicator(self) -> np.ndarray:
        """Boolean table over the group enumeration"""
        table = np.zeros(self.group.order, dtype=bool)
        table[self.indices] = True
        table.setflags(write=False)
        return table

    def __contains__(self, x: GroupElement) -> bool:
        return bool(self.indicator[self.group.index_of(x)])

    def __len__(self) -> int:
        return len(self.elements)

    def as_set(self) -> frozenset:
        return frozenset(self.elements)

    def to_dict(self) -> Dict:
        v, k, lam = self.params
        return {
            "group": self.group.to_dict(),
            "elements": [e.to_list() for e in self.elements],
            "params": {"v": v, "k": k, "lambda": lam},
            "family": self.family,
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "DifferenceSet":
        """Re-certifies; declared params, if present, must match"""
        try:
            group = AbelianGroup.from_dict(data["group"])
            elements = parse_elements(group, data["elements"])
        except (KeyError, TypeError) as e:
            raise StructuralError(f"malformed difference set description: {e}") from e
        ds = cls.certify(group, elements, data.get("family", "custom"), data.get("provenance"))
        declared = data.get("params")
        if declared and (declared.get("v"), declared.get("k"), declared.get("lambda")) != ds.params:
            raise NotADifferenceSetError(
                f"declared params {declared} differ from certified {ds.params}"
            )
        return ds


def normalization_identity(params: Params) -> Fraction:
    """((v-1)(k-lambda) + k^2) / (vk), which equals 1 for every difference set"""
    v, k, lam = params
    return Fraction((v - 1) * (k - lam) + k * k, v * k)


# -------------------- Paley --------------------


def construct_paley(gf: FiniteField) -> DifferenceSet:
    """Nonzero squares of GF(q), q = 3 mod 4, in the additive group Z_p^n"""
    q = gf.order
    if q % 4 != 3:
        raise ParameterError(f"Paley difference sets need q = 3 mod 4, got q = {q}")
    if q == 3:
        raise DegenerateParameterError("q = 3 gives the trivial (3,1,0) set, Paley needs q >= 7")
    group = AbelianGroup.elementary(gf.p, gf.n)
    squares = {field_mul(x, x).coeffs for x in gf.elements() if not x.is_zero}
    ds = DifferenceSet.certify(
        group,
        [group.element(c) for c in squares],
        family="paley",
        provenance={"field": gf.to_dict()},
    )
    expected = (q, (q - 1) // 2, (q - 3) // 4)
    if ds.params != expected:
        raise InternalConsistencyError(f"Paley set has params {ds.params}, expected {expected}")
    logger.info("Paley difference set %s over %s", ds.params, gf)
    return ds


# -------------------- Hadamard --------------------


@dataclass(frozen=True)
class BentFunctionSpec:
    """Truth table of f: Z_2^arity -> {0,1}, indexed by the group enumeration"""

    arity: int
    truth_table: Tuple[int, ...]

    def __post_init__(self):
        table = tuple(int(b) & 1 for b in self.truth_table)
        if len(table) != 2**self.arity:
            raise ParameterError(
                f"truth table of length {len(table)} for arity {self.arity}"
            )
        object.__setattr__(self, "truth_table", table)

    @property
    def group(self) -> AbelianGroup:
        return AbelianGroup.elementary(2, self.arity)

    @classmethod
    def from_callable(cls, arity: int, fn: Callable[[Tuple[int, ...]], int]) -> "BentFunctionSpec":
        group = AbelianGroup.elementary(2, arity)
        return cls(arity, tuple(fn(e.coords) for e in group.elements()))

    def to_dict(self) -> Dict:
        return {"arity": self.arity, "truth_table": list(self.truth_table)}


def maiorana_mcfarland(n: int) -> BentFunctionSpec:
    """f(x, y) = <x, y> on Z_2^n x Z_2^n"""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")

    def inner(bits: Tuple[int, ...]) -> int:
        return sum(bits[i] & bits[n + i] for i in range(n)) & 1

    return BentFunctionSpec.from_callable(2 * n, inner)


def walsh_spectrum(spec: BentFunctionSpec) -> np.ndarray:
    """W(w) = sum_x (-1)^(f(x) + <w,x>) as exact integers"""
    signs = 1 - 2 * np.array(spec.truth_table, dtype=float)
    spectrum = spec.group.character_transform(signs)
    return np.rint(spectrum.real).astype(np.int64)


def is_bent(spec: BentFunctionSpec) -> bool:
    if spec.arity % 2:
        raise ParameterError(f"bent functions need an even number of variables, got {spec.arity}")
    n = spec.arity // 2
    return bool(np.all(np.abs(walsh_spectrum(spec)) == 2**n))


def construct_hadamard(spec: BentFunctionSpec) -> DifferenceSet:
    """
    Support of a bent function, complemented when the support is the majority
    value so that k = 2^(2n-1) - 2^(n-1)
    """
    if not is_bent(spec):
        raise ParameterError("construct_hadamard needs a bent function")
    n = spec.arity // 2
    expected = (2 ** (2 * n), 2 ** (2 * n - 1) - 2 ** (n - 1), 2 ** (2 * n - 2) - 2 ** (n - 1))
    weight = sum(spec.truth_table)
    complemented = weight != expected[1]
    if complemented and weight != 2 ** (2 * n - 1) + 2 ** (n - 1):
        raise InternalConsistencyError(f"bent function of weight {weight}")
    target = 0 if complemented else 1
    group = spec.group
    members = [e for e, b in zip(group.elements(), spec.truth_table) if b == target]
    ds = DifferenceSet.certify(
        group,
        members,
        family="hadamard",
        provenance={"bent": spec.to_dict(), "complemented": complemented},
    )
    if ds.params != expected:
        raise InternalConsistencyError(f"Hadamard set has params {ds.params}, expected {expected}")
    return ds


# -------------------- Singer --------------------


def singer_params(q: int, d: int) -> Params:
    return (
        (q ** (d + 1) - 1) // (q - 1),
        (q**d - 1) // (q - 1),
        (q ** (d - 1) - 1) // (q - 1),
    )


def construct_singer(
    q: int,
    d: int,
    modulus: Optional[Sequence[int]] = None,
    alpha: Optional[FieldElement] = None,
    rng_seed: int = 0,
) -> DifferenceSet:
    """
    D = {i mod N : tr(alpha^i) = 0, 0 <= i < N} in Z_N, N = (q^(d+1)-1)/(q-1),
    for a primitive alpha of GF(q^(d+1)).
    """
    if not isprime(int(q)):
        raise UnsupportedParameterError(f"Singer sets are only built for prime q, got {q}")
    if d < 1:
        raise ParameterError(f"d must be >= 1, got {d}")
    if d == 1:
        raise DegenerateParameterError(f"d = 1 gives the trivial ({q + 1},1,0) set")
    if alpha is not None:
        gf = alpha.field
        if (gf.p, gf.n) != (q, d + 1):
            raise StructuralError(f"alpha lives in {gf}, expected GF({q}^{d + 1})")
        primitive = primitive_from(alpha)
    else:
        gf = FiniteField.build(q, d + 1, modulus, rng_seed)
        primitive = find_primitive(gf)
    expected = singer_params(q, d)
    n_points = expected[0]
    group = AbelianGroup.cyclic(n_points)
    traces = primitive.trace_table
    members = [group.element(i) for i in range(n_points) if traces[i] == 0]
    ds = DifferenceSet.certify(
        group,
        members,
        family="singer",
        provenance={
            "q": q,
            "d": d,
            "field": gf.to_dict(),
            "alpha": primitive.to_dict(),
        },
    )
    if ds.params != expected:
        raise InternalConsistencyError(f"Singer set has params {ds.params}, expected {expected}")
    logger.info("Singer difference set %s from %s", ds.params, gf)
    return ds


def singer_primitive(ds: DifferenceSet) -> PrimitiveElement:
    """Rebuilds the primitive element recorded in a Singer set's provenance"""
    gf = FiniteField.from_dict(ds.provenance["field"])
    return primitive_from(gf.element(ds.provenance["alpha"]["coeffs"]))


# -------------------- Translates, oracle, development --------------------


def shift_set(ds: DifferenceSet, s: GroupElement) -> DifferenceSet:
    """s + D, which has the same parameters as D"""
    if s.group.moduli != ds.group.moduli:
        raise StructuralError(f"shift {s} is not in {ds.group}")
    shifted = tuple(sorted((s + d for d in ds.elements), key=ds.group.index_of))
    provenance = dict(ds.provenance)
    provenance["shift"] = s.to_list()
    return DifferenceSet(ds.group, shifted, ds.params, ds.family, provenance)


def membership_oracle(ds: DifferenceSet, s: GroupElement) -> Callable[[GroupElement], int]:
    """g(x) = [x in s + D]"""
    if s.group.moduli != ds.group.moduli:
        raise StructuralError(f"shift {s} is not in {ds.group}")
    table = ds.indicator
    group = ds.group

    def g(x: GroupElement) -> int:
        return int(table[group.index_of(x - s)])

    return g


def complement_set(ds: DifferenceSet) -> DifferenceSet:
    """A \\ D, a (v, v-k, v-2k+lambda)-difference set"""
    members = [e for e, inside in zip(ds.group.elements(), ds.indicator) if not inside]
    provenance = dict(ds.provenance)
    provenance["complement_of"] = ds.family
    return DifferenceSet.certify(ds.group, members, ds.family, provenance)


@dataclass(frozen=True)
class Development:
    """Incidence matrix of Dev(D): row b, column a is 1 iff a in b + D"""

    matrix: np.ndarray = field(compare=False)
    params: Params

    @property
    def row_sums(self) -> np.ndarray:
        return self.matrix.sum(axis=1)

    @property
    def column_sums(self) -> np.ndarray:
        return self.matrix.sum(axis=0)

    def block_intersections(self) -> np.ndarray:
        m = self.matrix.astype(np.int64)
        return m @ m.T

    def point_pair_counts(self) -> np.ndarray:
        m = self.matrix.astype(np.int64)
        return m.T @ m

    def is_symmetric_design(self) -> bool:
        v, k, lam = self.params
        off_diagonal = ~np.eye(v, dtype=bool)
        blocks = self.block_intersections()
        points = self.point_pair_counts()
        return bool(
            np.all(self.row_sums == k)
            and np.all(self.column_sums == k)
            and np.all(blocks[off_diagonal] == lam)
            and np.all(points[off_diagonal] == lam)
        )


def development(ds: DifferenceSet) -> Development:
    group = ds.group
    group.require_enumerable()
    everything = np.arange(group.order)
    # a - b for row b, column a
    offsets = group.index_add(everything[None, :], group.index_negate(everything)[:, None])
    matrix = ds.indicator[offsets].astype(np.uint8)
    return Development(matrix, ds.params)


def block_intersection(ds: DifferenceSet, shift: GroupElement) -> int:
    """|D n (shift + D)|"""
    return len(ds.as_set() & shift_set(ds, shift).as_set())


def paley_field(q: int, modulus: Optional[Sequence[int]] = None, rng_seed: int = 0) -> FiniteField:
    """GF(q) for a prime power q"""
    factors = factorint(int(q))
    if len(factors) != 1:
        raise ParameterError(f"q = {q} is not a prime power")
    (p, n), = factors.items()
    return FiniteField.build(p, n, modulus, rng_seed)
