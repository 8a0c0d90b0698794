#!/usr/bin/env python3
"""
Character sums, Turyn flatness and Gauss sums

All sums over a group go through AbelianGroup.character_transform, so the
summation order is fixed and repeated runs give identical floats.
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Optional

import numpy as np

import config
from diffset import DifferenceSet, construct_singer, singer_primitive
from errors import InternalConsistencyError, ParameterError, StructuralError
from finite_field import FieldElement, FiniteField, PrimitiveElement, field_mul, find_primitive, trace
from group_core import AbelianGroup, Character, GroupElement

logger = logging.getLogger("spectrum")


@dataclass(frozen=True)
class SpectrumReport:
    """chi(D) for every character, indexed like the group enumeration"""

    values: np.ndarray = field(repr=False, compare=False)
    trivial_value: int
    target_magnitude: float
    max_abs_deviation: float
    worst_character: Optional[Character]
    passed: bool
    tolerance: float = config.TURYN_TOL

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)

    def to_dict(self) -> Dict:
        data = {
            "trivial_value": self.trivial_value,
            "target_magnitude": self.target_magnitude,
            "max_abs_deviation": self.max_abs_deviation,
            "pass": self.passed,
        }
        if self.worst_character is not None:
            data["worst_character"] = list(self.worst_character.index)
        return data


def char_sum(ds: DifferenceSet, chi: Character) -> complex:
    """sum_{d in D} chi(d), accumulated in element order"""
    if chi.group.moduli != ds.group.moduli:
        raise StructuralError(f"character of {chi.group} applied to a set in {ds.group}")
    total = 0j
    for d in ds.elements:
        total += chi(d)
    return total


def _indicator_sums(group: AbelianGroup, indicator: np.ndarray) -> np.ndarray:
    values = group.character_transform(indicator.astype(float))
    values[0] = float(np.count_nonzero(indicator))
    return values


def character_sums(ds: DifferenceSet) -> np.ndarray:
    """chi(D) for all characters at once; entry 0 is exactly k"""
    return _indicator_sums(ds.group, ds.indicator)


def turyn_check_subset(
    group: AbelianGroup, elements: Iterable[GroupElement], tolerance: float = config.TURYN_TOL
) -> SpectrumReport:
    """
    Flatness test for an arbitrary subset, against the magnitude
    sqrt(k - k(k-1)/(v-1)) it would have if it were a difference set
    """
    group.require_enumerable()
    indicator = np.zeros(group.order, dtype=bool)
    for e in elements:
        indicator[group.index_of(e)] = True
    k, v = int(np.count_nonzero(indicator)), group.order
    lam = k * (k - 1) / (v - 1)
    return _flatness_report(group, _indicator_sums(group, indicator), k, k - lam, tolerance)


def turyn_check(ds: DifferenceSet, tolerance: float = config.TURYN_TOL) -> SpectrumReport:
    return _flatness_report(ds.group, character_sums(ds), ds.k, ds.k - ds.lam, tolerance)


def _flatness_report(
    group: AbelianGroup, values: np.ndarray, k: int, k_minus_lam: float, tolerance: float
) -> SpectrumReport:
    target = math.sqrt(max(k_minus_lam, 0.0))
    deviations = np.abs(np.abs(values[1:]) - target)
    worst = int(np.argmax(deviations)) + 1
    max_dev = float(deviations[worst - 1])
    passed = max_dev < tolerance and values[0] == k
    report = SpectrumReport(
        values=values,
        trivial_value=k,
        target_magnitude=target,
        max_abs_deviation=max_dev,
        worst_character=None if passed else group.character_at(worst),
        passed=bool(passed),
        tolerance=tolerance,
    )
    logger.debug("Turyn check on %s: max deviation %.3e", group, max_dev)
    return report


def parseval_deviation(ds: DifferenceSet) -> float:
    """|sum_chi |chi(D)|^2 / v - k|"""
    values = character_sums(ds)
    return abs(float(np.sum(np.abs(values) ** 2)) / ds.v - ds.k)


# -------------------- Finite field characters --------------------


def additive_character(gf: FiniteField, mu: FieldElement) -> Callable[[FieldElement], complex]:
    """psi_mu(x) = omega_p^tr(mu x)"""
    p = gf.p

    def psi(x: FieldElement) -> complex:
        return cmath.exp(2j * math.pi * trace(field_mul(mu, x)) / p)

    return psi


def multiplicative_character(alpha: PrimitiveElement, beta_index: int) -> Callable[[FieldElement], complex]:
    """chi_beta(alpha^i) = omega_{q-1}^(beta i); zero maps to 0"""
    order = alpha.order

    def chi(x: FieldElement) -> complex:
        if x.is_zero:
            return 0j
        return cmath.exp(2j * math.pi * (beta_index * alpha.log(x) % order) / order)

    return chi


def _check_gauss_arguments(gf: FiniteField, mu: FieldElement):
    if mu.field != gf:
        raise StructuralError(f"mu lives in {mu.field}, expected {gf}")
    if mu.is_zero:
        raise ParameterError("mu = 0 gives the trivial additive character")
    if gf.order < 3:
        raise ParameterError(f"{gf} has no nontrivial multiplicative character")


def _additive_phases(alpha: PrimitiveElement, mu: FieldElement) -> np.ndarray:
    """omega_p^tr(mu alpha^i) for i in [0, q-1)"""
    p = alpha.field.p
    # mu = alpha^j, so tr(mu alpha^i) = tr(alpha^(i+j))
    traces = np.roll(np.array(alpha.trace_table, dtype=np.int64), -alpha.log(mu))
    return np.exp(2j * np.pi * traces / p)


def gauss_sum(
    gf: FiniteField, mu: FieldElement, beta_index: int, alpha: Optional[PrimitiveElement] = None
) -> complex:
    """G(psi_mu, chi_beta) = sum_{x != 0} chi_beta(x) psi_mu(x), iterating x = alpha^i"""
    _check_gauss_arguments(gf, mu)
    alpha = alpha or find_primitive(gf)
    order = gf.order - 1
    if beta_index % order == 0:
        raise ParameterError("beta = 0 gives the trivial multiplicative character")
    phases = _additive_phases(alpha, mu)
    exponents = (beta_index * np.arange(order)) % order
    return complex(np.sum(np.exp(2j * np.pi * exponents / order) * phases))


def gauss_sum_spectrum(
    gf: FiniteField, mu: FieldElement, alpha: Optional[PrimitiveElement] = None
) -> np.ndarray:
    """G(psi_mu, chi_beta) for every beta in Z_{q-1}; entry 0 is the trivial-chi sum (-1)"""
    _check_gauss_arguments(gf, mu)
    alpha = alpha or find_primitive(gf)
    return AbelianGroup.cyclic(gf.order - 1).character_transform(_additive_phases(alpha, mu))


def gauss_magnitude_deviation(gf: FiniteField, alpha: Optional[PrimitiveElement] = None) -> float:
    """Largest | |G| - sqrt(q) | over all mu != 0 and beta != 0"""
    alpha = alpha or find_primitive(gf)
    root_q = math.sqrt(gf.order)
    worst = 0.0
    for mu in gf.elements()[1:]:
        spectrum = gauss_sum_spectrum(gf, mu, alpha)
        worst = max(worst, float(np.max(np.abs(np.abs(spectrum[1:]) - root_q))))
    return worst


@dataclass(frozen=True)
class GaussRelationReport:
    """Compares chi_beta(D) for the binary Singer set with G(psi, chi_beta)"""

    d: int
    field_size: int
    alpha: Dict
    ratio: complex
    ratio_spread: float
    diffset_magnitude: float
    gauss_magnitude: float
    consistent: bool

    def to_dict(self) -> Dict:
        return {
            "d": self.d,
            "field_size": self.field_size,
            "alpha": self.alpha,
            "ratio": [self.ratio.real, self.ratio.imag],
            "ratio_spread": self.ratio_spread,
            "diffset_magnitude": self.diffset_magnitude,
            "gauss_magnitude": self.gauss_magnitude,
            "consistent": self.consistent,
        }


def singer_gauss_relation(d: int, tolerance: float = config.GAUSS_TOL) -> GaussRelationReport:
    """
    For q = 2 the Singer group Z_N is all of GF(2^(d+1))^x, so chi_beta(D)
    is a character sum over the trace-zero exponents. The ratio
    G(psi, chi_beta) / chi_beta(D) is measured, not assumed.
    """
    ds = construct_singer(2, d)
    alpha = singer_primitive(ds)
    gf = alpha.field
    diffset_values = character_sums(ds)[1:]
    gauss_values = gauss_sum_spectrum(gf, gf.one, alpha)[1:]
    ratios = gauss_values / diffset_values
    ratio = complex(ratios[0])
    spread = float(np.max(np.abs(ratios - ratio)))
    report = GaussRelationReport(
        d=d,
        field_size=gf.order,
        alpha=ds.provenance["alpha"],
        ratio=ratio,
        ratio_spread=spread,
        diffset_magnitude=float(np.mean(np.abs(diffset_values))),
        gauss_magnitude=float(np.mean(np.abs(gauss_values))),
        consistent=spread < tolerance,
    )
    if not report.consistent:
        raise InternalConsistencyError(
            f"G/chi(D) is not constant over characters (spread {spread:.3e})"
        )
    logger.info("📐 Singer d=%d: G(psi,chi)/chi(D) = %.6f%+.6fi", d, ratio.real, ratio.imag)
    return report
