#!/usr/bin/env python3
"""
Exact statevector simulation over a finite abelian group

Amplitudes are indexed by the group enumeration, both in the element basis
and (after apply_qft) in the character basis. Every operation returns a new
StateVector; the arrays inside are read-only.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Union

import numpy as np

import config
from diffset import DifferenceSet
from errors import (DegenerateParameterError, InternalConsistencyError, ResourceLimitError,
                    StructuralError)
from group_core import AbelianGroup, GroupElement
from spectrum import character_sums

logger = logging.getLogger("statevector")

Predicate = Union[Callable[[GroupElement], object], np.ndarray]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class StateVector:
    group: AbelianGroup
    amps: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self):
        amps = _frozen(self.amps)
        if amps.shape != (self.group.order,):
            raise StructuralError(
                f"state of shape {amps.shape} for a group of order {self.group.order}"
            )
        object.__setattr__(self, "amps", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def inner(self, other: "StateVector") -> complex:
        """<self|other>"""
        _check_same_group(self.group, other.group)
        return complex(np.vdot(self.amps, other.amps))

    def allclose(self, other: "StateVector", atol: float = config.NORM_TOL) -> bool:
        _check_same_group(self.group, other.group)
        return bool(np.allclose(self.amps, other.amps, rtol=0.0, atol=atol))

    def to_dict(self) -> Dict:
        return {
            "group": self.group.to_dict(),
            "amplitudes": [[float(a.real), float(a.imag)] for a in self.amps],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "StateVector":
        try:
            group = AbelianGroup.from_dict(data["group"])
            amps = np.array([complex(re, im) for re, im in data["amplitudes"]])
        except (KeyError, TypeError, ValueError) as e:
            raise StructuralError(f"malformed state dump: {e}") from e
        return cls(group, amps)


def _check_same_group(a: AbelianGroup, b: AbelianGroup):
    if a.moduli != b.moduli:
        raise StructuralError(f"mismatched groups: {a} vs {b}")


def _checked(group: AbelianGroup, amps: np.ndarray) -> StateVector:
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > config.NORM_TOL:
        raise InternalConsistencyError(f"norm drifted to {norm!r}")
    return StateVector(group, amps)


def uniform_state(group: AbelianGroup) -> StateVector:
    group.require_enumerable()
    v = group.order
    return StateVector(group, np.full(v, 1.0 / math.sqrt(v), dtype=complex))


def basis_state(group: AbelianGroup, a: Union[GroupElement, int]) -> StateVector:
    """|a>; a may be an element or an enumeration index"""
    group.require_enumerable()
    index = group.index_of(a) if isinstance(a, GroupElement) else int(a)
    amps = np.zeros(group.order, dtype=complex)
    amps[index] = 1.0
    return StateVector(group, amps)


def from_function(group: AbelianGroup, values) -> StateVector:
    """|F> = sum_x F(x)|x> / ||F|| for a callable or a value table"""
    group.require_enumerable()
    if callable(values):
        amps = np.array([values(x) for x in group.elements()], dtype=complex)
    else:
        amps = np.array(values, dtype=complex)
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise StructuralError("cannot normalize the zero function")
    return _checked(group, amps / norm)


def fourier_coefficients(group: AbelianGroup, values) -> np.ndarray:
    """(1/sqrt v) sum_a chi(a) F(a) for every chi"""
    return group.character_transform(values) / math.sqrt(group.order)


def apply_qft(state: StateVector, inverse: bool = False) -> StateVector:
    """
    Forward: out[chi] = (1/sqrt v) sum_a chi(a) in[a].
    Inverse is the adjoint, out[a] = (1/sqrt v) sum_chi conj(chi(a)) in[chi].
    """
    group = state.group
    out = group.character_transform(state.amps, inverse=inverse) / math.sqrt(group.order)
    return _checked(group, out)


def _mask(group: AbelianGroup, predicate: Predicate) -> np.ndarray:
    if callable(predicate):
        return np.array([bool(predicate(x)) for x in group.elements()], dtype=bool)
    mask = np.asarray(predicate, dtype=bool)
    if mask.shape != (group.order,):
        raise StructuralError(f"predicate table of shape {mask.shape} for order {group.order}")
    return mask


def apply_phase_oracle(state: StateVector, predicate: Predicate) -> StateVector:
    """amps[g] -> (-1)^predicate(g) amps[g]"""
    mask = _mask(state.group, predicate)
    return _checked(state.group, np.where(mask, -state.amps, state.amps))


@dataclass(frozen=True)
class DiagonalOperator:
    """Unit-modulus phases indexed by characters"""

    group: AbelianGroup
    phases: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self):
        phases = _frozen(self.phases)
        if phases.shape != (self.group.order,):
            raise StructuralError(f"diagonal of shape {phases.shape} for order {self.group.order}")
        drift = float(np.max(np.abs(np.abs(phases) - 1.0)))
        if drift > config.DIAGONAL_TOL:
            raise InternalConsistencyError(f"diagonal entry off the unit circle by {drift:.3e}")
        object.__setattr__(self, "phases", phases)

    def conjugate(self) -> "DiagonalOperator":
        return DiagonalOperator(self.group, np.conj(self.phases))


def build_diagonal(ds: DifferenceSet) -> DiagonalOperator:
    """diag(1, conj(chi(D)) / sqrt(k - lambda) : chi != chi_0)"""
    if ds.k == ds.lam:
        raise DegenerateParameterError(f"k = lambda for {ds.params}")
    phases = np.conj(character_sums(ds)) / math.sqrt(ds.k - ds.lam)
    phases[0] = 1.0
    return DiagonalOperator(ds.group, phases)


def apply_diagonal(state: StateVector, op: DiagonalOperator) -> StateVector:
    _check_same_group(state.group, op.group)
    return _checked(state.group, state.amps * op.phases)


def measure_distribution(state: StateVector) -> np.ndarray:
    """p[g] = |amps[g]|^2"""
    probs = np.abs(state.amps) ** 2
    total = float(probs.sum())
    if abs(total - 1.0) > config.MEASURE_NORM_TOL:
        raise InternalConsistencyError(f"measuring a state of squared norm {total!r}")
    return probs


def sample(state: StateVector, rng_seed: int, trials: int) -> np.ndarray:
    """Outcome counts over the enumeration after `trials` seeded measurements"""
    probs = measure_distribution(state)
    rng = np.random.default_rng(rng_seed)
    return rng.multinomial(trials, probs / probs.sum())


def sample_outcomes(probs: np.ndarray, rng: np.random.Generator, size: Optional[int] = None):
    """Enumeration indices drawn from a measured distribution"""
    return rng.choice(len(probs), size=size, p=probs / probs.sum())


# -------------------- Dense oracles and Fourier identities --------------------


def character_values(group: AbelianGroup, a: GroupElement) -> np.ndarray:
    """chi(a) for every chi, from exact integer phases"""
    coords = group.coords_array
    moduli = np.array(group.moduli)
    numerators = (coords * np.array(a.coords)) % moduli
    # common denominator keeps the total phase an exact fraction
    common = math.lcm(*group.moduli)
    phase = (numerators * (common // moduli)).sum(axis=1) % common
    return np.exp(2j * np.pi * phase / common)


def qft_matrix(group: AbelianGroup) -> np.ndarray:
    """Dense QFT matrix, row chi and column a, built entry by entry from the coordinates"""
    if group.order > config.ORACLE_MATRIX_MAX:
        raise ResourceLimitError(
            f"dense QFT matrix needs order <= {config.ORACLE_MATRIX_MAX}, got {group.order}"
        )
    rows = [character_values(group, group.element_at(i)) for i in range(group.order)]
    # chi(a) is symmetric in (chi, a) under the shared coordinate scheme
    return np.array(rows) / math.sqrt(group.order)


def shift_state(state: StateVector, s: GroupElement) -> StateVector:
    """out[a] = in[a - s]"""
    group = state.group
    everything = np.arange(group.order)
    source = group.index_add(everything, group.index_of(-s))
    return StateVector(group, state.amps[source])


def convolve(group: AbelianGroup, f, g) -> np.ndarray:
    """(F * G)(x) = sum_y F(y) G(x - y), by direct summation"""
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    everything = np.arange(group.order)
    out = np.zeros(group.order, dtype=complex)
    for y in everything:
        if f[y] != 0:
            out += f[y] * g[group.index_add(everything, group.index_negate(y))]
    return out
