from fractions import Fraction

import numpy as np
import pytest

import config
from diffset import (construct_hadamard, construct_paley, construct_singer, maiorana_mcfarland,
                     paley_field)
from dihedral import WhiteBoxSingerInstance, make_whitebox_instance
from errors import ParameterError, ResourceLimitError, StructuralError, UnsupportedParameterError
from group_core import AbelianGroup
from hidden_shift import (CountingOracle, HiddenShiftInstance, InjectivizedFunction,
                          approx_success_probability, baseline_probability, collision_bound,
                          default_max_trials, dense_shift_algorithm, indicator_function, influence,
                          injectivity_monte_carlo, injectivize, is_injective, peak_probability,
                          recover_shift, required_copies, run_shift_algorithm)


# -------------------- closed forms --------------------


def test_approx_probabilities():
    assert approx_success_probability((16, 6, 2)) == Fraction(1)
    assert approx_success_probability((13, 4, 1)) == Fraction(12, 13)
    assert approx_success_probability((7, 3, 1)) == Fraction(8, 7)


def test_hadamard_peak_probability():
    assert peak_probability((16, 6, 2)) == pytest.approx(0.765625)
    assert default_max_trials((16, 6, 2)) == 11


def test_probabilities_sum_to_one():
    for params in [(13, 4, 1), (16, 6, 2), (27, 13, 6), (127, 63, 31)]:
        v = params[0]
        total = peak_probability(params) + (v - 1) * baseline_probability(params)
        assert total == pytest.approx(1.0)


# -------------------- Shift algorithm --------------------


def test_hadamard_run_matches_closed_form(hadamard16):
    s = hadamard16.group.element(1, 0, 1, 1)
    run = run_shift_algorithm(HiddenShiftInstance.blackbox(hadamard16, s))
    assert run.peak == s
    assert run.peak_probability == pytest.approx(0.765625, abs=1e-10)
    assert run.off_peak_spread < 1e-10
    assert run.baseline_probability == pytest.approx(baseline_probability((16, 6, 2)))


@pytest.mark.parametrize("shift", [0, 1, 5, 12])
def test_singer13_peak_lands_on_shift(z13, singer13, shift):
    s = z13.element(shift)
    run = run_shift_algorithm(HiddenShiftInstance.blackbox(singer13, s))
    assert run.peak in (s, -s)
    assert run.peak_probability == pytest.approx(peak_probability((13, 4, 1)), abs=1e-10)
    assert run.distribution.sum() == pytest.approx(1.0)


SMALL_INSTANCES = (
    [("singer", 2, d) for d in range(2, 7)]
    + [("singer", 3, 2), ("singer", 3, 3), ("singer", 5, 2), ("hadamard", 3, None)]
    + [("paley", q, None) for q in (7, 11, 19, 23, 27, 31, 43, 47)]
)


def _build(family, q, d):
    if family == "singer":
        return construct_singer(q, d)
    if family == "hadamard":
        return construct_hadamard(maiorana_mcfarland(q))
    return construct_paley(paley_field(q))


@pytest.mark.parametrize("family,q,d", SMALL_INSTANCES)
def test_dense_simulation_agrees(family, q, d):
    ds = _build(family, q, d)
    s = ds.group.element_at(ds.v - 2)
    instance = HiddenShiftInstance.blackbox(ds, s)
    run = run_shift_algorithm(instance)
    assert np.allclose(dense_shift_algorithm(instance), run.final_state.amps, atol=1e-9)
    assert run.peak in (s, -s)
    assert run.peak_probability == pytest.approx(peak_probability(ds.params), abs=1e-9)
    assert run.off_peak_spread < 1e-9


def test_dense_simulation_cap(monkeypatch, singer13):
    monkeypatch.setattr(config, "ORACLE_MATRIX_MAX", 8)
    with pytest.raises(ResourceLimitError):
        dense_shift_algorithm(HiddenShiftInstance.blackbox(singer13, singer13.group.zero))


def test_singer127_peak():
    ds = construct_singer(2, 6)
    run = run_shift_algorithm(HiddenShiftInstance.blackbox(ds, ds.group.element(77)))
    assert run.peak == ds.group.element(77)
    assert run.peak_probability > 0.95


def test_hidden_base_set_unsupported(singer13):
    instance = HiddenShiftInstance.blackbox(singer13, singer13.group.element(3), hides_base_set=True)
    with pytest.raises(UnsupportedParameterError):
        run_shift_algorithm(instance)
    with pytest.raises(UnsupportedParameterError):
        recover_shift(instance)


# -------------------- recovery --------------------


@pytest.mark.parametrize("fixture,shift", [("singer13", 5), ("hadamard16", 9), ("paley27", 20)])
def test_recover_examples(request, fixture, shift):
    ds = request.getfixturevalue(fixture)
    s = ds.group.element_at(shift)
    result = recover_shift(HiddenShiftInstance.blackbox(ds, s), rng_seed=3)
    assert result.success
    assert result.recovered == s
    assert 1 <= result.trials_used <= result.max_trials
    assert result.quantum_queries == result.trials_used
    assert result.to_dict()["approx_probability"] == str(approx_success_probability(ds.params))


def test_recovery_is_reproducible(singer13):
    instance = HiddenShiftInstance.blackbox(singer13, singer13.group.element(7))
    first = recover_shift(instance, rng_seed=11)
    second = recover_shift(instance, rng_seed=11)
    assert first.measurements == second.measurements
    assert first.recovered == second.recovered


def test_constant_oracle_never_verifies(singer13):
    instance = HiddenShiftInstance(singer13, lambda x: 0)
    result = recover_shift(instance, max_trials=5)
    assert not result.success
    assert result.trials_used == 5
    assert result.to_dict()["recovered"] is None


def test_distribution_kept_on_request(singer13):
    instance = HiddenShiftInstance.blackbox(singer13, singer13.group.element(2))
    data = recover_shift(instance, keep_distribution=True).to_dict()
    assert len(data["distribution"]) == 13
    assert sum(data["distribution"]) == pytest.approx(1.0)


def test_counting_oracle(singer13):
    oracle = CountingOracle(indicator_function(singer13))
    oracle(singer13.group.element(1))
    oracle(singer13.group.element(2))
    assert oracle.calls == 2


def test_oracle_check(singer13):
    s = singer13.group.element(4)
    assert HiddenShiftInstance.blackbox(singer13, s).check_oracle()
    with pytest.raises(ParameterError):
        HiddenShiftInstance(singer13, lambda x: 0).check_oracle()


# -------------------- influence and injectivization --------------------


def test_influence_values(singer13, hadamard16, paley27):
    assert influence(hadamard16, hadamard16.group.element(0, 1, 1, 0)) == Fraction(1, 2)
    assert influence(singer13, singer13.group.element(3)) == Fraction(6, 13)
    assert influence(paley27, paley27.group.element(1, 2, 0)) == Fraction(14, 27)
    assert influence(singer13, singer13.group.zero) == 0


@pytest.mark.parametrize("name", ["singer13", "hadamard16", "paley27", "singer7", "paley7"])
def test_influence_is_constant_off_zero(request, name):
    if name == "singer7":
        ds = construct_singer(2, 2)
    elif name == "paley7":
        ds = construct_paley(paley_field(7))
    else:
        ds = request.getfixturevalue(name)
    expected = Fraction(2 * (ds.k - ds.lam), ds.v)
    for index in range(1, ds.v):
        assert influence(ds, ds.group.element_at(index)) == expected


@pytest.mark.parametrize("order,copies", [(13, 14), (16, 14), (127, 20), (7, 12), (3, 10)])
def test_required_copies(order, copies):
    assert required_copies(order) == copies


def test_required_copies_rejects_trivial_group():
    with pytest.raises(ParameterError):
        required_copies(1)


def test_injectivize_needs_offsets(z13, singer13):
    with pytest.raises(ParameterError):
        injectivize(indicator_function(singer13), z13, 0)


def test_all_offsets_give_injective_function(z13, singer13):
    fv = InjectivizedFunction(indicator_function(singer13), z13, tuple(z13.elements()))
    assert fv.m == 13
    assert is_injective(fv)


def test_single_offset_is_not_injective(z13, singer13):
    assert not is_injective(injectivize(indicator_function(singer13), z13, 1))


def test_injectivize_is_seeded(z13, singer13):
    f = indicator_function(singer13)
    assert injectivize(f, z13, 14, 5).offsets == injectivize(f, z13, 14, 5).offsets
    assert len(injectivize(f, z13, 14, 5).to_dict()["offsets"]) == 14


def test_monte_carlo_failure_rate(z13, singer13):
    rate = injectivity_monte_carlo(indicator_function(singer13), z13, required_copies(13), draws=200)
    assert float(rate) <= 1 / 64 + config.MONTE_CARLO_SLACK


def test_monte_carlo_failure_rate_hadamard(hadamard16):
    group = hadamard16.group
    rate = injectivity_monte_carlo(indicator_function(hadamard16), group, required_copies(16), draws=200)
    assert float(rate) <= 1 / 64 + config.MONTE_CARLO_SLACK


def test_collision_bound_decreases():
    gamma = Fraction(6, 13)
    assert collision_bound(13, gamma, 20) < collision_bound(13, gamma, 14) < collision_bound(13, gamma, 1)


# -------------------- serialization and white-box oracles --------------------


def test_blackbox_round_trip(singer13):
    instance = HiddenShiftInstance.blackbox(singer13, singer13.group.element(6))
    restored = HiddenShiftInstance.from_dict(instance.to_dict())
    assert restored.secret == instance.secret
    assert np.array_equal(restored.oracle_table(), instance.oracle_table())


def test_blackbox_description_needs_secret(singer13):
    with pytest.raises(ParameterError):
        HiddenShiftInstance.from_dict({"diffset": singer13.to_dict(), "oracle": "blackbox"})


def test_unknown_oracle_kind(singer13):
    with pytest.raises(StructuralError):
        HiddenShiftInstance.from_dict({"diffset": singer13.to_dict(), "oracle": "mystery"})


def test_whitebox_instance_round_trip():
    wb = make_whitebox_instance(3, secret=4)
    instance = wb.to_hidden_shift_instance()
    assert instance.check_oracle()
    restored = HiddenShiftInstance.from_dict(instance.to_dict())
    assert restored.oracle_kind == "whitebox-singer"
    assert np.array_equal(restored.oracle_table(), instance.oracle_table())


def test_whitebox_recovery():
    wb = make_whitebox_instance(4, rng_seed=9)
    result = recover_shift(wb.to_hidden_shift_instance(), rng_seed=1)
    assert result.recovered == wb.problem_shift


def test_whitebox_singer127_success_rate():
    base = make_whitebox_instance(6, secret=0)
    rng = np.random.default_rng(2024)
    wins = 0
    for run in range(100):
        exponent = int(rng.integers(0, base.diffset.v))
        wb = WhiteBoxSingerInstance(base.diffset, base.alpha, exponent, base.alpha.power(exponent))
        instance = wb.to_hidden_shift_instance()
        result = recover_shift(instance, max_trials=1, rng_seed=run)
        if result.success:
            translate = HiddenShiftInstance.blackbox(instance.diffset, result.recovered)
            assert np.array_equal(translate.oracle_table(), instance.oracle_table())
        wins += result.recovered == wb.problem_shift
    assert wins >= 90


def test_maiorana_family_recovery():
    ds = construct_hadamard(maiorana_mcfarland(3))
    s = ds.group.element_at(37)
    assert recover_shift(HiddenShiftInstance.blackbox(ds, s)).recovered == s


def test_foreign_shift_rejected(singer13):
    with pytest.raises(StructuralError):
        HiddenShiftInstance.blackbox(singer13, AbelianGroup.cyclic(7).element(1))
