import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import config
from errors import ParameterError, ResourceLimitError, StructuralError
from group_core import (AbelianGroup, character_eval, character_phase, enumerate_characters,
                        enumerate_group, group_add, group_negate, group_sub, parse_elements)

moduli_strategy = st.lists(st.integers(min_value=2, max_value=7), min_size=1, max_size=3)


def test_cyclic_addition_wraps(z13):
    assert group_add(z13.element(9), z13.element(7)) == z13.element(3)


def test_product_group_addition():
    group = AbelianGroup((2, 2))
    assert group_add(group.element(1, 0), group.element(1, 1)) == group.element(0, 1)


def test_negation_is_inverse(z13):
    a = z13.element(5)
    assert a + group_negate(a) == z13.zero
    assert group_sub(a, a) == z13.zero


def test_coordinates_are_reduced():
    group = AbelianGroup((4, 3))
    assert group.element(9, -1).coords == (1, 2)


def test_wrong_coordinate_count_is_structural_error(z13):
    with pytest.raises(StructuralError):
        z13.element(1, 2)


def test_mixed_groups_are_rejected(z13):
    other = AbelianGroup.cyclic(7)
    with pytest.raises(StructuralError):
        z13.element(1) + other.element(1)


def test_small_modulus_rejected():
    with pytest.raises(ParameterError):
        AbelianGroup((1, 3))


def test_non_integer_modulus_is_structural_error():
    with pytest.raises(StructuralError):
        AbelianGroup(("x", 3))
    with pytest.raises(StructuralError):
        AbelianGroup.from_dict({"moduli": [None]})


def test_trivial_character_is_one(z13):
    chi0 = z13.trivial_character
    assert chi0.is_trivial
    assert all(character_eval(chi0, a) == 1 for a in z13.elements())


def test_hadamard_sign():
    z2 = AbelianGroup.cyclic(2)
    assert character_eval(z2.character(1), z2.element(1)) == pytest.approx(-1)


def test_character_value_z13(z13):
    value = character_eval(z13.character(1), z13.element(3))
    assert value == pytest.approx(cmath.exp(6j * math.pi / 13), abs=1e-12)


def test_character_phase_is_exact():
    group = AbelianGroup((4, 6))
    assert character_phase(group.character(1, 1), group.element(3, 5)) == Fraction(7, 12)


def test_enumeration_order():
    assert [e.coords[0] for e in enumerate_group(AbelianGroup.cyclic(4))] == [0, 1, 2, 3]
    assert [e.coords for e in enumerate_group(AbelianGroup((2, 2)))] == [
        (0, 0),
        (0, 1),
        (1, 0),
        (1, 1),
    ]


def test_enumeration_starts_at_zero(z13):
    elements = enumerate_group(z13)
    assert len(elements) == 13
    assert elements[0] == z13.zero
    assert enumerate_characters(z13)[0].is_trivial
    assert len(enumerate_characters(z13)) == 13


def test_index_round_trip():
    group = AbelianGroup((3, 4, 2))
    for i in range(group.order):
        assert group.index_of(group.element_at(i)) == i


def test_enumeration_cap(monkeypatch):
    monkeypatch.setattr(config, "GROUP_ORDER_CAP", 10)
    with pytest.raises(ResourceLimitError):
        AbelianGroup.cyclic(13).elements()


def test_index_arithmetic_matches_elements():
    group = AbelianGroup((3, 4))
    everything = np.arange(group.order)
    sums = group.index_add(everything[:, None], everything[None, :])
    for a in group.elements():
        for b in group.elements():
            assert sums[a.index, b.index] == (a + b).index
    negs = group.index_negate(everything)
    assert [int(n) for n in negs] == [(-a).index for a in group.elements()]


def _direct_transform(group, values, inverse=False):
    out = []
    for chi in group.characters():
        total = 0j
        for a in group.elements():
            value = character_eval(chi, a)
            total += (value.conjugate() if inverse else value) * values[a.index]
        out.append(total)
    return np.array(out)


@pytest.mark.parametrize("moduli", [(13,), (3, 4), (2, 2, 2, 2), (5, 6)])
def test_character_transform_matches_direct_sum(moduli):
    group = AbelianGroup(moduli)
    rng = np.random.default_rng(1)
    values = rng.normal(size=group.order) + 1j * rng.normal(size=group.order)
    assert np.allclose(group.character_transform(values), _direct_transform(group, values))
    assert np.allclose(
        group.character_transform(values, inverse=True), _direct_transform(group, values, True)
    )


def test_fft_path_agrees_with_dense_path(monkeypatch):
    group = AbelianGroup((7, 5))
    values = np.arange(group.order, dtype=float)
    dense = group.character_transform(values)
    dense_inverse = group.character_transform(values, inverse=True)
    monkeypatch.setattr(config, "DENSE_DFT_MAX", 2)
    assert np.allclose(group.character_transform(values), dense, atol=1e-9)
    assert np.allclose(group.character_transform(values, inverse=True), dense_inverse, atol=1e-9)


def test_transform_rejects_wrong_length(z13):
    with pytest.raises(StructuralError):
        z13.character_transform(np.ones(12))


def test_serialization(z13):
    group = AbelianGroup((2, 3, 4))
    assert AbelianGroup.from_dict(group.to_dict()) == group
    assert parse_elements(z13, [0, 5]) == [z13.zero, z13.element(5)]
    with pytest.raises(StructuralError):
        AbelianGroup.from_dict({"order": 4})


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_character_multiplicativity(data):
    group = AbelianGroup(tuple(data.draw(moduli_strategy)))
    coords = st.tuples(*[st.integers(0, n - 1) for n in group.moduli])
    chi = group.character(data.draw(coords))
    a = group.element(data.draw(coords))
    b = group.element(data.draw(coords))
    lhs = character_eval(chi, a + b)
    rhs = character_eval(chi, a) * character_eval(chi, b)
    assert abs(lhs - rhs) < config.MULTIPLICATIVITY_TOL
    assert abs(abs(character_eval(chi, a)) - 1) < config.UNIT_TOL


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_character_orthogonality(data):
    group = AbelianGroup(tuple(data.draw(moduli_strategy)))
    index = data.draw(st.integers(1, group.order - 1))
    chi = group.character_at(index)
    total = sum(character_eval(chi, a) for a in group.elements())
    assert abs(total) < config.ORTHOGONALITY_TOL


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_group_axioms(data):
    group = AbelianGroup(tuple(data.draw(moduli_strategy)))
    coords = st.tuples(*[st.integers(-20, 20) for _ in group.moduli])
    a, b, c = (group.element(data.draw(coords)) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a + group.zero == a
