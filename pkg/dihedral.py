#!/usr/bin/env python3
"""
Dihedral hidden subgroups from shifted difference sets

A hiding function on A x| Z_2 (inversion action) is assembled from an
injective shift pair g(x) = f(x - h) as F((a,0)) = f(a), F((a,1)) = g(a); it
is constant exactly on the right cosets of H = <(h,1)>. The solver projects
F back to a single indicator and runs the hidden shift algorithm.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

import config
from diffset import DifferenceSet, construct_singer, shift_set, singer_primitive
from errors import ParameterError, StructuralError
from finite_field import FieldElement, PrimitiveElement, field_mul, trace
from group_core import AbelianGroup, GroupElement
from hidden_shift import (CountingOracle, HiddenShiftInstance, InjectivizedFunction,
                          SolverResult, indicator_function, injectivize, is_injective,
                          recover_shift, required_copies, whitebox_singer_oracle)

logger = logging.getLogger("dihedral")

# g(x) = tr(alpha^x beta) = f(x + s) for beta = alpha^s, so the zero set of g
# is D - s and the hidden shift of the membership problem is -s
WHITEBOX_SHIFT_SIGN = -1


@dataclass(frozen=True)
class SemidirectGroup:
    """A x| Z_2 with Z_2 acting by inversion"""

    base: AbelianGroup

    @property
    def order(self) -> int:
        return 2 * self.base.order

    @property
    def identity(self) -> "SemidirectElement":
        return SemidirectElement(self, self.base.zero, 0)

    def element(self, a, t: int) -> "SemidirectElement":
        if not isinstance(a, GroupElement):
            a = self.base.element(a)
        return SemidirectElement(self, a, t)

    def elements(self) -> List["SemidirectElement"]:
        """(a, 0) for all a, then (a, 1) for all a"""
        base = self.base.elements()
        return [SemidirectElement(self, a, t) for t in (0, 1) for a in base]

    def index_of(self, x: "SemidirectElement") -> int:
        return x.t * self.base.order + self.base.index_of(x.a)

    def __str__(self):
        return f"({self.base}) x| Z_2"


@dataclass(frozen=True)
class SemidirectElement:
    group: SemidirectGroup = field(repr=False)
    a: GroupElement
    t: int

    def __post_init__(self):
        if self.a.group.moduli != self.group.base.moduli:
            raise StructuralError(f"{self.a} is not in {self.group.base}")
        object.__setattr__(self, "t", int(self.t) % 2)

    def __mul__(self, other: "SemidirectElement") -> "SemidirectElement":
        return sd_mul(self, other)

    def to_list(self) -> List:
        return [self.a.to_list(), self.t]

    def __str__(self):
        return f"({self.a},{self.t})"


def sd_mul(x: SemidirectElement, y: SemidirectElement) -> SemidirectElement:
    """(a,t)(b,u) = (a + (-1)^t b, t xor u)"""
    if x.group != y.group:
        raise StructuralError(f"elements of {x.group} and {y.group}")
    b = -y.a if x.t else y.a
    return SemidirectElement(x.group, x.a + b, x.t ^ y.t)


def sd_inv(x: SemidirectElement) -> SemidirectElement:
    if x.t:
        return x
    return SemidirectElement(x.group, -x.a, 0)


def right_coset(x: SemidirectElement, generator: SemidirectElement) -> Tuple[SemidirectElement, ...]:
    """x H for H = <generator> of order 2"""
    return (x, sd_mul(x, generator))


def trace_pair(alpha: PrimitiveElement, beta: FieldElement) -> Tuple[Callable, Callable]:
    """f(x) = tr(alpha^x) and g(x) = tr(alpha^x beta) on Z_N"""

    def f(x: GroupElement) -> int:
        return trace(alpha.power(x.coords[0]))

    def g(x: GroupElement) -> int:
        return trace(field_mul(alpha.power(x.coords[0]), beta))

    return f, g


# -------------------- HSP instances --------------------


@dataclass(frozen=True)
class DihedralHSPInstance:
    group: SemidirectGroup
    hiding: Callable[[SemidirectElement], object] = field(compare=False, repr=False)
    hidden_generator: Optional[SemidirectElement] = None
    diffset: Optional[DifferenceSet] = None
    offsets: Tuple[GroupElement, ...] = ()
    member_value: int = 1
    provenance: Dict = field(default_factory=dict, compare=False, hash=False)

    def to_dict(self) -> Dict:
        data = {
            "semidirect": True,
            "base_group": self.group.base.to_dict(),
            "offsets": [v.to_list() for v in self.offsets],
            "member_value": self.member_value,
            "provenance": self.provenance,
        }
        if self.diffset is not None:
            data["diffset"] = self.diffset.to_dict()
        if self.hidden_generator is not None:
            data["hidden_generator"] = [self.hidden_generator.a.to_list(), 1]
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "DihedralHSPInstance":
        """Rebuilds F from the difference set, the offsets and the oracle provenance"""
        from diffset import membership_oracle
        from finite_field import FiniteField, primitive_from

        try:
            ds = DifferenceSet.from_dict(data["diffset"])
            group = ds.group
            offsets = tuple(group.element(v) for v in data["offsets"])
            provenance = dict(data.get("provenance", {}))
            member_value = int(data.get("member_value", 1))
            if provenance.get("oracle") == "whitebox-singer":
                wb = provenance["whitebox"]
                gf = FiniteField.from_dict(wb["field"])
                alpha = primitive_from(gf.element(wb["alpha"]))
                f, g = trace_pair(alpha, gf.element(wb["beta"]))
            else:
                f = indicator_function(ds)
                g = membership_oracle(ds, group.element(provenance["secret"]))
        except (KeyError, TypeError) as e:
            raise StructuralError(f"malformed HSP instance description: {e}") from e
        return build_hsp_from_shift(
            InjectivizedFunction(f, group, offsets),
            InjectivizedFunction(g, group, offsets),
            group,
            diffset=ds,
            offsets=offsets,
            member_value=member_value,
            provenance=provenance,
        )


def extract_shift_pair(instance: DihedralHSPInstance) -> Tuple[Callable, Callable]:
    """f(x) = F(x,0), g(x) = F(x,1)"""
    group = instance.group

    def f(x: GroupElement):
        return instance.hiding(SemidirectElement(group, x, 0))

    def g(x: GroupElement):
        return instance.hiding(SemidirectElement(group, x, 1))

    return f, g


def _injectivity_witness(base: AbelianGroup, table) -> Optional[Tuple[GroupElement, GroupElement]]:
    seen: Dict = {}
    for i, value in enumerate(table):
        if value in seen:
            return base.element_at(seen[value]), base.element_at(i)
        seen[value] = i
    return None


def build_hsp_from_shift(
    f: Callable[[GroupElement], object],
    g: Callable[[GroupElement], object],
    base: AbelianGroup,
    **extra,
) -> DihedralHSPInstance:
    """
    Requires f injective and g(x) = f(x - h) for some h; h is the unique x with
    g(x) = f(0), confirmed at every point
    """
    elements = base.elements()
    f_table = [f(x) for x in elements]
    g_table = [g(x) for x in elements]
    witness = _injectivity_witness(base, f_table)
    if witness is not None:
        raise ParameterError(f"f is not injective: f({witness[0]}) = f({witness[1]})")
    hits = [x for x, value in zip(elements, g_table) if value == f_table[0]]
    if len(hits) != 1:
        raise ParameterError(f"g takes the value f(0) at {len(hits)} points, expected one")
    h = hits[0]
    shifted = base.index_add(np.arange(base.order), base.index_of(-h))
    for x, source in zip(elements, shifted):
        if g_table[x.index] != f_table[int(source)]:
            raise ParameterError(f"g(x) != f(x - {h}) at x = {x}")
    group = SemidirectGroup(base)
    lookup = (dict(enumerate(f_table)), dict(enumerate(g_table)))

    def hiding(x: SemidirectElement):
        return lookup[x.t][base.index_of(x.a)]

    logger.debug("HSP instance on %s hides <(%s,1)>", group, h)
    return DihedralHSPInstance(group, hiding, SemidirectElement(group, h, 1), **extra)


@dataclass(frozen=True)
class HSPVerdict:
    ok: bool
    witness: Optional[SemidirectElement] = None
    reason: str = ""

    def to_dict(self) -> Dict:
        data = {"ok": self.ok, "reason": self.reason}
        if self.witness is not None:
            data["witness"] = self.witness.to_list()
        return data


def verify_hsp_instance(
    instance: DihedralHSPInstance, generator: Optional[SemidirectElement] = None
) -> HSPVerdict:
    """F constant on every right coset of <generator> and distinct across cosets"""
    generator = generator or instance.hidden_generator
    if generator is None:
        raise ParameterError("no hidden generator to verify against")
    if generator.t != 1:
        raise ParameterError(f"{generator} is not a reflection")
    group = instance.group
    group.base.require_enumerable()
    owner: Dict = {}
    for x in group.elements():
        partner = sd_mul(x, generator)
        value = instance.hiding(x)
        if instance.hiding(partner) != value:
            return HSPVerdict(False, x, f"F(x) != F(x * {generator})")
        coset = min(group.index_of(x), group.index_of(partner))
        if owner.setdefault(value, coset) != coset:
            return HSPVerdict(False, x, "F repeats a value on a different coset")
    return HSPVerdict(True, reason=f"constant on the cosets of <{generator}>")


# -------------------- White-box Singer instances --------------------


@dataclass(frozen=True)
class WhiteBoxSingerInstance:
    """f(x) = tr(alpha^x), g(x) = tr(alpha^x beta) with beta = alpha^s published"""

    diffset: DifferenceSet
    alpha: PrimitiveElement = field(repr=False)
    exponent: int
    beta: FieldElement

    @property
    def d(self) -> int:
        return self.diffset.provenance["d"]

    @property
    def group(self) -> AbelianGroup:
        return self.diffset.group

    def f(self, x: GroupElement) -> int:
        return trace_pair(self.alpha, self.beta)[0](x)

    def g(self, x: GroupElement) -> int:
        return trace_pair(self.alpha, self.beta)[1](x)

    @property
    def problem_shift(self) -> GroupElement:
        """s' with [g(x) = 0] iff x in s' + D"""
        return self.group.element(WHITEBOX_SHIFT_SIGN * self.exponent)

    def to_hidden_shift_instance(self) -> HiddenShiftInstance:
        return HiddenShiftInstance(
            self.diffset,
            whitebox_singer_oracle(self.alpha, self.beta),
            self.problem_shift,
            "whitebox-singer",
            self.description(),
        )

    def description(self) -> Dict:
        return {
            "field": self.alpha.field.to_dict(),
            "alpha": list(self.alpha.element.coeffs),
            "beta": list(self.beta.coeffs),
        }


def make_whitebox_instance(
    d: int,
    rng_seed: int = config.DEFAULT_SEED,
    modulus=None,
    secret: Optional[int] = None,
) -> WhiteBoxSingerInstance:
    """Singer set over GF(2^(d+1)) with a uniformly sampled secret exponent"""
    if d < 2:
        raise ParameterError(f"white-box Singer instances need d >= 2, got {d}")
    ds = construct_singer(2, d, modulus)
    alpha = singer_primitive(ds)
    n_points = ds.v
    if secret is None:
        secret = int(np.random.default_rng(rng_seed).integers(0, n_points))
    secret %= n_points
    return WhiteBoxSingerInstance(ds, alpha, secret, alpha.power(secret))


def _build_injectivized(
    ds: DifferenceSet,
    f: Callable,
    g: Callable,
    member_value: int,
    m: Optional[int],
    rng_seed,
    provenance: Dict,
) -> DihedralHSPInstance:
    group = ds.group
    m = m or required_copies(group.order)
    seeds = np.random.SeedSequence(rng_seed).spawn(config.INJECTIVIZE_ATTEMPTS)
    for attempt, child in enumerate(seeds, start=1):
        fv = injectivize(f, group, m, child)
        if not is_injective(fv):
            logger.debug("Offsets %d/%d not injective, resampling", attempt, len(seeds))
            continue
        gv = InjectivizedFunction(g, group, fv.offsets)
        return build_hsp_from_shift(
            fv,
            gv,
            group,
            diffset=ds,
            offsets=fv.offsets,
            member_value=member_value,
            provenance=dict(provenance, m=m, attempts=attempt),
        )
    raise ParameterError(f"no injective offset set among {len(seeds)} draws of m={m}")


def make_hsp_instance(
    instance: HiddenShiftInstance, m: Optional[int] = None, rng_seed=config.DEFAULT_SEED
) -> DihedralHSPInstance:
    """Injectivizes (indicator of D, oracle) and assembles F"""
    provenance = {"oracle": "membership"}
    if instance.secret is not None:
        provenance["secret"] = instance.secret.to_list()
    return _build_injectivized(
        instance.diffset,
        indicator_function(instance.diffset),
        instance.oracle,
        1,
        m,
        rng_seed,
        provenance,
    )


def make_whitebox_hsp_instance(
    wb: WhiteBoxSingerInstance, m: Optional[int] = None, rng_seed=config.DEFAULT_SEED
) -> DihedralHSPInstance:
    """Injectivizes the trace pair (f, g); members of D are where the trace is 0"""
    return _build_injectivized(
        wb.diffset, wb.f, wb.g, 0, m, rng_seed,
        {"oracle": "whitebox-singer", "whitebox": wb.description()},
    )


# -------------------- Solver --------------------


@dataclass(frozen=True)
class DihedralSolveResult:
    generator: Optional[SemidirectElement]
    shift_result: SolverResult
    verdict: Optional[HSPVerdict]
    hiding_queries: int

    @property
    def success(self) -> bool:
        return self.generator is not None

    def to_dict(self) -> Dict:
        return {
            "success": self.success,
            "hidden_generator": [self.generator.a.to_list(), 1] if self.generator else None,
            "shift": self.shift_result.to_dict(),
            "verdict": self.verdict.to_dict() if self.verdict else None,
            "hiding_queries": self.hiding_queries,
        }


def solve_dihedral_hsp(
    instance: DihedralHSPInstance,
    max_trials: Optional[int] = None,
    rng_seed: int = config.DEFAULT_SEED,
) -> DihedralSolveResult:
    """
    The first coordinate of F(x,0) is [x + v_1 in D] (up to member_value), the
    indicator of D - v_1; the first coordinate of F(x,1) is its translate by h
    """
    if instance.diffset is None or not instance.offsets:
        raise ParameterError("solving needs the difference set and the offsets")
    group = instance.group
    projected_set = shift_set(instance.diffset, -instance.offsets[0])
    hiding = CountingOracle(instance.hiding)

    def projected(x: GroupElement) -> int:
        return int(hiding(SemidirectElement(group, x, 1))[0] == instance.member_value)

    shift_instance = HiddenShiftInstance(projected_set, projected)
    result = recover_shift(shift_instance, max_trials, rng_seed)
    if not result.success:
        return DihedralSolveResult(None, result, None, hiding.calls)
    candidate = SemidirectElement(group, result.recovered, 1)
    verdict = verify_hsp_instance(instance, candidate)
    generator = candidate if verdict.ok else None
    if generator is not None:
        logger.info("✅ Hidden subgroup <%s> on %s", generator, group)
    else:
        logger.warning("⚠️ Candidate %s failed coset verification: %s", candidate, verdict.reason)
    return DihedralSolveResult(generator, result, verdict, hiding.calls)


# -------------------- Instance count --------------------


@dataclass(frozen=True)
class InstanceCountReport:
    n: int
    base_order: int
    copies: int
    count: int
    log2_count: float
    asymptotic_log2: int

    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "base_order": self.base_order,
            "copies": self.copies,
            "count": str(self.count),
            "log2_count": self.log2_count,
            "asymptotic_log2": self.asymptotic_log2,
        }


def expected_instance_count(n: int) -> InstanceCountReport:
    """|A|^m for |A| = 2^n - 1 and m = required_copies(|A|), next to 2^(n^2)"""
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}")
    order = 2**n - 1
    m = required_copies(order)
    return InstanceCountReport(n, order, m, order**m, m * math.log2(order), n * n)
