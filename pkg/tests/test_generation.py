import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import lkd_success

from noon_lab.elements import apply_circuit
from noon_lab.errors import DegenerateObjectiveError, DimensionError, ParameterError
from noon_lab.fock import PureState, fidelity
from noon_lab.generation import (
    HeraldPattern,
    LKD_HERALD,
    gc_circuit,
    generate_noon4_lkd,
    generate_noon_gc,
    herald_project,
    lkd_heralded_intermediate,
    lkd_tap_circuit,
    optimize_success,
)
from noon_lab.states import make_fock, make_noon

THETA_STAR = math.asin(1 / math.sqrt(3))
P_STAR = 48 / 729

# regression pair produced by optimize_success("probability")
LOCKED_THETA = 0.6154795846
LOCKED_P = 0.0658436213992


# heralding -----------------------------------------------------------------------------


def test_herald_examples():
    s = PureState([[1, 0], [0, 1]], [1 / math.sqrt(2)] * 2)
    r = herald_project(s, HeraldPattern({1: 0}))
    assert r.output.terms == pytest.approx({(1,): 1.0})
    assert r.success_probability == pytest.approx(0.5)
    assert r.fidelity_to_target is None


def test_impossible_herald_is_a_value():
    r = herald_project(make_fock((1, 1)), HeraldPattern({0: 5}), target=make_fock((1,)))
    assert r.success_probability == 0.0
    assert len(r.output) == 0 and r.output.mode_count == 1
    assert r.fidelity_to_target == 0.0


def test_herald_pattern_validation():
    with pytest.raises(ParameterError):
        HeraldPattern({0: -1})
    with pytest.raises(DimensionError):
        herald_project(make_fock((1, 1)), HeraldPattern({2: 0}))
    with pytest.raises(DimensionError):
        herald_project(make_fock((1, 1)), HeraldPattern({0: 1, 1: 1}))


@settings(deadline=None, max_examples=25)
@given(st.floats(0.05, 1.5))
def test_complete_herald_set_sums_to_one(theta):
    state = apply_circuit(make_fock((3, 3, 0, 0)), lkd_tap_circuit(theta))
    total = sum(
        herald_project(state, HeraldPattern({2: a, 3: b})).success_probability
        for a, b in itertools.product(range(7), repeat=2)
    )
    assert total == pytest.approx(1.0, abs=1e-10)


# cross-Kerr generator ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
@pytest.mark.parametrize("port", ["C", "D"])
def test_gc_generates_noon(n, port):
    r = generate_noon_gc(n, port=port)
    assert r.fidelity_to_target >= 1 - 1e-9
    assert r.success_probability == pytest.approx(0.5, abs=1e-12)
    assert {k for k, a in r.output.terms.items() if abs(a) > 1e-10} == {(n, 0), (0, n)}
    sign = 1 if port == "D" else -1
    assert fidelity(make_noon(n, -sign), r.output) < 1e-9


def test_gc_ports_are_exhaustive():
    state = apply_circuit(make_fock((1, 0, 2, 0)), gc_circuit())
    p = [herald_project(state, HeraldPattern(h)).success_probability for h in ({0: 0, 1: 1}, {0: 1, 1: 0})]
    assert sum(p) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gc_without_kerr_gives_half_fidelity(n):
    r = generate_noon_gc(n, chi=0.0)
    assert r.fidelity_to_target == pytest.approx(0.5, abs=1e-9)
    assert r.success_probability == pytest.approx(1.0, abs=1e-12)
    # without the phase kick the ancilla always leaves by port D
    assert generate_noon_gc(n, chi=0.0, port="C").success_probability < 1e-20


def test_gc_validation():
    with pytest.raises(ParameterError):
        generate_noon_gc(0)
    with pytest.raises(ParameterError):
        generate_noon_gc(2, port="E")


# linear-optics generator -------------------------------------------------------------------------


@pytest.mark.parametrize("theta", [0.2, THETA_STAR, 1.0, 1.4])
def test_lkd_intermediate_support(theta):
    mid = lkd_heralded_intermediate(theta)
    assert set(mid.output.terms) == {(3, 1), (1, 3)}
    assert mid.success_probability == pytest.approx(lkd_success(theta), abs=1e-14)


@pytest.mark.parametrize("theta", np.linspace(0.05, 1.5, 9))
def test_lkd_fidelity_and_swap_symmetry(theta):
    r = generate_noon4_lkd(theta)
    assert r.fidelity_to_target >= 1 - 1e-9
    swapped = generate_noon4_lkd(theta, swap_arms=True)
    assert swapped.fidelity_to_target == pytest.approx(r.fidelity_to_target, abs=1e-12)
    assert swapped.success_probability == pytest.approx(r.success_probability, abs=1e-14)


def test_lkd_theta_domain():
    for bad in (0.0, math.pi / 2, -0.3):
        with pytest.raises(ParameterError):
            generate_noon4_lkd(bad)


def test_lkd_optimum_matches_oracle_and_lock():
    theta, p = optimize_success("probability")
    assert theta == pytest.approx(THETA_STAR, abs=1e-6)
    assert p == pytest.approx(P_STAR, rel=1e-10)
    assert theta == pytest.approx(LOCKED_THETA, abs=1e-9)
    assert p == pytest.approx(LOCKED_P, rel=1e-10)
    assert 0.05 < p < 0.25


def test_lkd_combined_objective_agrees():
    theta, v = optimize_success("probability*fidelity")
    assert theta == pytest.approx(THETA_STAR, abs=1e-6)
    assert v == pytest.approx(P_STAR, rel=1e-9)


def test_fidelity_objective_is_flat():
    with pytest.raises(DegenerateObjectiveError):
        optimize_success(lambda th: generate_noon4_lkd(th).fidelity_to_target)


def test_optimizer_calibration_minimum():
    theta, v = optimize_success(lambda th: (th - 0.7) ** 2, maximize=False)
    assert theta == pytest.approx(0.7, abs=1e-6)
    assert v == pytest.approx(0.0, abs=1e-12)


def test_optimizer_bounds_and_names():
    with pytest.raises(ParameterError):
        optimize_success("probability", theta_bounds=(0.0, 1.0))
    with pytest.raises(ParameterError):
        optimize_success("speed")
    with pytest.raises(ParameterError):
        optimize_success("probability", grid_points=10)


def test_herald_constant():
    assert LKD_HERALD.modes == (2, 3)
