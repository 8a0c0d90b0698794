import math

import numpy as np
import pytest

from diffset import construct_hadamard, construct_paley, construct_singer, maiorana_mcfarland, paley_field
from errors import ParameterError, StructuralError
from finite_field import FiniteField, find_primitive
from group_core import AbelianGroup
from spectrum import (additive_character, char_sum, character_sums, gauss_magnitude_deviation, gauss_sum,
                      gauss_sum_spectrum, multiplicative_character, parseval_deviation,
                      singer_gauss_relation, turyn_check, turyn_check_subset)


@pytest.fixture
def gf8():
    return FiniteField(2, 3, (1, 1, 0, 1))


def test_trivial_character_counts_elements(singer13):
    assert char_sum(singer13, singer13.group.trivial_character) == 4
    assert character_sums(singer13)[0] == 4


def test_singer13_magnitudes(singer13):
    magnitudes = np.abs(character_sums(singer13)[1:])
    assert np.allclose(magnitudes, math.sqrt(3), atol=1e-10)


def test_single_character_matches_vector(singer13):
    chi = singer13.group.character(5)
    assert char_sum(singer13, chi) == pytest.approx(character_sums(singer13)[5], abs=1e-10)


def test_char_sum_group_mismatch(singer13):
    with pytest.raises(StructuralError):
        char_sum(singer13, AbelianGroup.cyclic(7).character(1))


def test_hadamard_values_are_real_two(hadamard16):
    values = character_sums(hadamard16)[1:]
    assert np.allclose(values.imag, 0, atol=1e-10)
    assert np.allclose(np.abs(values.real), 2, atol=1e-10)


@pytest.mark.parametrize(
    "build",
    [
        lambda: construct_singer(3, 2),
        lambda: construct_singer(2, 6),
        lambda: construct_singer(5, 2),
        lambda: construct_paley(paley_field(27)),
        lambda: construct_paley(paley_field(43)),
        lambda: construct_hadamard(maiorana_mcfarland(3)),
    ],
)
def test_turyn_passes_for_families(build):
    ds = build()
    report = turyn_check(ds)
    assert report.passed
    assert report.trivial_value == ds.k
    assert report.target_magnitude == pytest.approx(math.sqrt(ds.k - ds.lam))
    assert "worst_character" not in report.to_dict()


def test_turyn_reports_failing_subset():
    z4 = AbelianGroup.cyclic(4)
    report = turyn_check_subset(z4, [z4.element(0), z4.element(1)])
    assert not report.passed
    assert report.max_abs_deviation > 0.2
    assert report.worst_character is not None
    data = report.to_dict()
    assert data["pass"] is False
    assert len(data["worst_character"]) == 1


def test_subset_check_accepts_real_difference_set(z13, singer13):
    assert turyn_check_subset(z13, singer13.elements).passed


def test_parseval(singer13, paley27, hadamard16):
    for ds in (singer13, paley27, hadamard16):
        assert parseval_deviation(ds) < 1e-9


# -------------------- Gauss sums --------------------


def test_gauss_sum_gf8_magnitude(gf8):
    alpha = find_primitive(gf8)
    for beta in range(1, 7):
        assert abs(gauss_sum(gf8, gf8.one, beta, alpha)) == pytest.approx(math.sqrt(8), abs=1e-10)


def test_gauss_sum_gf4_magnitude():
    gf4 = FiniteField.build(2, 2)
    for mu in gf4.elements()[1:]:
        assert abs(gauss_sum(gf4, mu, 1)) == pytest.approx(2.0, abs=1e-10)


def test_gauss_sum_argument_errors(gf8):
    with pytest.raises(ParameterError):
        gauss_sum(gf8, gf8.one, 0)
    with pytest.raises(ParameterError):
        gauss_sum(gf8, gf8.one, 7)
    with pytest.raises(ParameterError):
        gauss_sum(gf8, gf8.zero, 1)
    gf2 = FiniteField.build(2)
    with pytest.raises(ParameterError):
        gauss_sum(gf2, gf2.one, 1)


def test_gauss_sum_field_mismatch(gf8):
    gf9 = FiniteField.build(3, 2)
    with pytest.raises(StructuralError):
        gauss_sum(gf8, gf9.one, 1)


def test_spectrum_matches_single_sums():
    gf9 = FiniteField.build(3, 2)
    alpha = find_primitive(gf9)
    mu = gf9.element(4)
    spectrum = gauss_sum_spectrum(gf9, mu, alpha)
    assert spectrum[0] == pytest.approx(-1, abs=1e-10)
    for beta in range(1, 8):
        assert spectrum[beta] == pytest.approx(gauss_sum(gf9, mu, beta, alpha), abs=1e-10)


def test_gauss_sum_matches_character_definition():
    gf9 = FiniteField.build(3, 2)
    alpha = find_primitive(gf9)
    mu = gf9.element(5)
    psi = additive_character(gf9, mu)
    for beta in (1, 2, 5):
        chi = multiplicative_character(alpha, beta)
        direct = sum(chi(x) * psi(x) for x in gf9.elements()[1:])
        assert gauss_sum(gf9, mu, beta, alpha) == pytest.approx(direct, abs=1e-10)


def test_multiplicative_character_sends_zero_to_zero(gf8):
    chi = multiplicative_character(find_primitive(gf8), 3)
    assert chi(gf8.zero) == 0


@pytest.mark.parametrize("n", range(2, 11))
def test_gauss_magnitudes_binary_fields(n):
    assert gauss_magnitude_deviation(FiniteField.build(2, n)) < 1e-8


def test_gauss_magnitudes_odd_field():
    assert gauss_magnitude_deviation(FiniteField.build(5, 2)) < 1e-8


# -------------------- Singer relation --------------------


def test_singer_relation_ratio_is_two():
    report = singer_gauss_relation(2)
    assert report.consistent
    assert report.ratio == pytest.approx(2 + 0j, abs=1e-8)
    assert report.diffset_magnitude == pytest.approx(math.sqrt(2))
    assert report.gauss_magnitude == pytest.approx(math.sqrt(8))
    assert report.to_dict()["field_size"] == 8


@pytest.mark.parametrize("d", [3, 5, 6])
def test_singer_relation_larger(d):
    report = singer_gauss_relation(d)
    assert report.ratio == pytest.approx(2 + 0j, abs=1e-8)
    assert report.ratio_spread < 1e-8
