import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bs_expansion

from noon_lab.config import photon_cap_scope
from noon_lab.elements import (
    CircuitStep,
    StepKind,
    apply_beamsplitter,
    apply_circuit,
    apply_cross_kerr,
    apply_phase,
    inverse_circuit,
)
from noon_lab.errors import CircuitError, DimensionError, ParameterError
from noon_lab.fock import PureState, max_abs_difference, norm_squared
from noon_lab.states import make_coherent, make_fock

H = 1 / math.sqrt(2)


@st.composite
def three_photon_states(draw, modes=2):
    kets = [k for k in np.ndindex(*(4,) * modes) if sum(k) == 3]
    parts = st.floats(-1, 1, allow_nan=False)
    amps = np.array([complex(draw(parts), draw(parts)) for _ in kets])
    if np.linalg.norm(amps) < 1e-3:
        amps[0] = 1.0
    return PureState(np.array(kets), amps / np.linalg.norm(amps), modes)


# phase shifter --------------------------------------------------------------------


def test_phase_examples():
    assert apply_phase(make_fock((3,)), 0, math.pi).amplitude((3,)) == pytest.approx(-1)
    assert apply_phase(make_fock((2,)), 0, 0.0, math.log(2)).amplitude((2,)) == pytest.approx(0.25)
    with pytest.raises(ParameterError):
        apply_phase(make_fock((1,)), 0, 0.0, -0.1)
    with pytest.raises(DimensionError):
        apply_phase(make_fock((1,)), 1, 0.0)


@pytest.mark.parametrize("alpha,phi,gamma", [(1.0, 0.3, 0.2), (1.5 - 0.5j, -1.2, 0.7), (0.5j, 2.0, 0.0)])
def test_lossy_phase_on_coherent_state_rescales_alpha(alpha, phi, gamma):
    out = apply_phase(make_coherent(alpha), 0, phi, gamma)
    alpha2 = alpha * math.exp(-gamma) * complex(math.cos(phi), math.sin(phi))
    ref = make_coherent(alpha2)
    scale = math.exp((abs(alpha2) ** 2 - abs(alpha) ** 2) / 2)
    for (n,), a in ref.terms.items():
        assert out.amplitude((n,)) == pytest.approx(scale * a, abs=1e-12)


@given(three_photon_states(), st.floats(-7, 7), st.floats(-7, 7))
def test_phase_composition_and_modulus(state, p1, p2):
    once = apply_phase(state, 0, p1 + p2)
    twice = apply_phase(apply_phase(state, 0, p1), 0, p2)
    assert max_abs_difference(once, twice) < 1e-12
    # modulus kept to the last ulp; exp(iθ) is not exactly unimodular in floating point
    np.testing.assert_allclose(np.abs(apply_phase(state, 1, p1).amplitudes), np.abs(state.amplitudes), rtol=4e-16, atol=0)


# beam splitter ------------------------------------------------------------------------


def test_single_photon_split():
    out = apply_beamsplitter(make_fock((1, 0)), 0, 1, math.pi / 4)
    assert out.terms == pytest.approx({(1, 0): H, (0, 1): 1j * H})


def test_hong_ou_mandel():
    out = apply_beamsplitter(make_fock((1, 1)), 0, 1, math.pi / 4)
    assert out.amplitude((2, 0)) == pytest.approx(1j * H, abs=1e-15)
    assert out.amplitude((0, 2)) == pytest.approx(1j * H, abs=1e-15)
    assert out.probability((1, 1)) < 1e-30


def test_generalised_hom_distribution():
    out = apply_beamsplitter(make_fock((2, 2)), 0, 1, math.pi / 4)
    probs = [out.probability((k, 4 - k)) for k in range(4, -1, -1)]
    assert probs == pytest.approx([3 / 8, 0, 1 / 4, 0, 3 / 8], abs=1e-12)


def test_beamsplitter_needs_distinct_modes():
    with pytest.raises(ParameterError):
        apply_beamsplitter(make_fock((1, 1)), 0, 0, 0.3)


@pytest.mark.parametrize("counts", [(1, 0), (2, 1), (3, 3), (5, 2), (0, 7), (10, 10), (17, 9)])
@pytest.mark.parametrize("theta", [math.pi / 4, 0.3, -1.1, 2.5])
def test_beamsplitter_matches_monomial_expansion(counts, theta):
    out = apply_beamsplitter(make_fock(counts), 0, 1, theta)
    ref = bs_expansion({counts: 1.0}, 0, 1, theta)
    assert max(abs(out.amplitude(k) - v) for k, v in ref.items()) < 1e-12
    assert norm_squared(out) == pytest.approx(1, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(three_photon_states(modes=3), st.floats(-3, 3), st.sampled_from([(0, 1), (2, 0), (1, 2)]))
def test_beamsplitter_superpositions_match_expansion(state, theta, pair):
    out = apply_beamsplitter(state, *pair, theta)
    ref = PureState.from_terms(bs_expansion(state.terms, *pair, theta), 3)
    assert max_abs_difference(out, ref) < 1e-12


def test_large_sector_stays_unitary():
    # amplitudes here would lose every digit in a naive binomial expansion
    with photon_cap_scope(400):
        out = apply_beamsplitter(make_fock((150, 150)), 0, 1, math.pi / 4)
        assert norm_squared(out) == pytest.approx(1, abs=1e-11)
        back = apply_beamsplitter(out, 0, 1, -math.pi / 4)
        assert back.probability((150, 150)) == pytest.approx(1, abs=1e-10)
        # generalised HOM for a twin Fock state: odd counts cancel
        odd = out.occupations[:, 0] % 2 == 1
        assert np.abs(out.amplitudes[odd]).max(initial=0) < 1e-12


@pytest.mark.parametrize("m", range(1, 9))
def test_twin_fock_parity_rule(m):
    out = apply_beamsplitter(make_fock((m, m)), 0, 1, math.pi / 4)
    assert all(k % 2 == 0 for k, _ in out.terms)
    assert norm_squared(out) == pytest.approx(1, abs=1e-12)


@given(three_photon_states(), st.floats(-4, 4))
def test_beamsplitter_conserves_norm_and_photons_and_inverts(state, theta):
    out = apply_beamsplitter(state, 0, 1, theta)
    assert norm_squared(out) == pytest.approx(norm_squared(state), abs=1e-12)
    assert set(out.photon_totals()) == {3}
    assert max_abs_difference(apply_beamsplitter(out, 0, 1, -theta), state) < 1e-10


# cross-Kerr -----------------------------------------------------------------------------


def test_cross_kerr_examples():
    assert apply_cross_kerr(make_fock((1, 1)), 0, 1, math.pi).amplitude((1, 1)) == pytest.approx(-1)
    assert apply_cross_kerr(make_fock((0, 5)), 0, 1, 0.77).terms == {(0, 5): 1.0}
    phase = apply_cross_kerr(make_fock((1, 3)), 0, 1, math.pi / 2).amplitude((1, 3))
    assert phase == pytest.approx(complex(math.cos(3 * math.pi / 2), math.sin(3 * math.pi / 2)))
    with pytest.raises(ParameterError):
        apply_cross_kerr(make_fock((1, 1)), 1, 1, 1.0)


@given(three_photon_states(), st.floats(-5, 5))
def test_cross_kerr_is_diagonal_unitary(state, chi):
    out = apply_cross_kerr(state, 0, 1, chi)
    np.testing.assert_allclose(np.abs(out.amplitudes), np.abs(state.amplitudes), atol=1e-15)


# circuits ----------------------------------------------------------------------------------


def test_step_parameters_are_exact():
    with pytest.raises(ParameterError):
        CircuitStep(StepKind.PHASE, (0,), phi=0.1, theta=0.2)
    with pytest.raises(ParameterError):
        CircuitStep(StepKind.BEAM_SPLITTER, (0,), theta=0.2)
    with pytest.raises(ParameterError):
        CircuitStep(StepKind.CROSS_KERR, (1, 1), chi=0.2)
    with pytest.raises(ParameterError):
        CircuitStep.lossy_phase(0, 0.1, -1.0)
    assert CircuitStep.mirror(0).phi is None


def test_empty_circuit_is_identity():
    s = make_fock((2, 1))
    assert apply_circuit(s, []) is s


@pytest.mark.parametrize("phi", np.linspace(0, 2 * math.pi, 7))
def test_mzi_circuit_single_photon(phi):
    steps = [CircuitStep.beam_splitter(0, 1), CircuitStep.phase(0, phi), CircuitStep.beam_splitter(0, 1)]
    out = apply_circuit(make_fock((1, 0)), steps)
    assert out.probability((1, 0)) == pytest.approx(math.sin(phi / 2) ** 2, abs=1e-12)
    assert out.probability((0, 1)) == pytest.approx(math.cos(phi / 2) ** 2, abs=1e-12)


def test_mirror_is_quarter_wave():
    out = CircuitStep.mirror(0).apply(make_fock((1, 0)))
    assert out.amplitude((1, 0)) == pytest.approx(1j)


@settings(deadline=None)
@given(three_photon_states(modes=3), st.lists(st.floats(-3, 3), min_size=5, max_size=5))
def test_circuit_then_inverse_restores_state(state, p):
    steps = [
        CircuitStep.beam_splitter(0, 1, p[0]),
        CircuitStep.phase(2, p[1]),
        CircuitStep.cross_kerr(1, 2, p[2]),
        CircuitStep.lossy_phase(0, p[3], 0.0),
        CircuitStep.mirror(1),
        CircuitStep.beam_splitter(2, 0, p[4]),
    ]
    out = apply_circuit(apply_circuit(state, steps), inverse_circuit(steps))
    assert max_abs_difference(out, state) < 1e-10


def test_lossy_step_has_no_inverse():
    with pytest.raises(ParameterError):
        CircuitStep.lossy_phase(0, 0.1, 0.5).inverse()


def test_circuit_error_reports_step_index():
    steps = [CircuitStep.phase(0, 0.1), CircuitStep.beam_splitter(0, 5)]
    with pytest.raises(CircuitError) as info:
        apply_circuit(make_fock((1, 0)), steps)
    assert info.value.index == 1
    assert isinstance(info.value.cause, DimensionError)
