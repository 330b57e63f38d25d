import numpy as np
import pytest

from phasebound.errors import (
    NormalizationError,
    SingularPointError,
    UsageError,
)
from phasebound.potentials import PotentialModel
from phasebound.quantize import spectrum
from phasebound.states import (
    build_state,
    connection_check,
    delta_functional,
    epsilon_parameter,
    evaluate_state,
    numeric_normalization,
    paper_normalization,
    standing_wave,
)


@pytest.fixture(scope="module")
def harmonic_states(harmonic):
    result = spectrum(harmonic, 4)
    return {lv.n: build_state(harmonic, lv) for lv in result.levels}


def _flat_box(length):
    zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))
    return PotentialModel.from_callable(zero, domain=(0.0, length), df=zero)


def test_branch_continuity(harmonic_states):
    for state in harmonic_states.values():
        report = connection_check(state)
        assert max(report.value_gap) < 1e-9
        assert max(report.derivative_gap) < 1e-9
        assert report.max_residual < 1e-9


def test_region_classification(harmonic_states):
    st = harmonic_states[1]
    region = st.level.region
    assert st.classify(region.midpoint) == "allowed"
    assert st.classify(region.left - 1.0) == "left-forbidden"
    assert st.classify(region.right + 1.0) == "right-forbidden"


def test_ground_state_tracks_gaussian(harmonic_states):
    # the cos-branch with a half quantum is a crude but recognizable
    # stand-in for the exact Gaussian; worst deviation sits at the
    # turning points and stays below ~0.1 in amplitude
    st = harmonic_states[0]
    xs = np.linspace(-4.0, 4.0, 161)
    exact = np.pi ** -0.25 * np.exp(-xs ** 2 / 2.0)
    got = np.array([st.sample(x).psi for x in xs])
    assert np.max(np.abs(np.abs(got) - exact)) < 0.12
    assert st.sample(0.0).psi == pytest.approx(np.pi ** -0.25, abs=0.07)


def test_normalization_against_trapezoid(harmonic_states):
    st = harmonic_states[2]
    xs = np.linspace(-7.0, 7.0, 200_001)
    psi = np.array([st.sample(x).psi for x in xs[::20]])
    integral = np.trapezoid(psi * psi, xs[::20])
    assert integral == pytest.approx(1.0, abs=1e-5)


def test_normalization_self_consistent(harmonic):
    lv = spectrum(harmonic, 1).levels[1]
    n1 = numeric_normalization(harmonic, lv)
    st = build_state(harmonic, lv)
    assert n1 == pytest.approx(st.normalization_numeric, rel=1e-12)


def test_parity(harmonic_states):
    xs = np.linspace(0.1, 3.0, 23)
    for n, st in harmonic_states.items():
        sign = (-1.0) ** n
        for x in xs:
            assert st.sample(-x).psi == pytest.approx(
                sign * st.sample(x).psi, abs=1e-8)


def test_node_count_matches_quantum_number(harmonic_states):
    xs = np.linspace(-4.5, 4.5, 3001)
    for n, st in harmonic_states.items():
        psi = np.array([st.sample(x).psi for x in xs])
        signs = np.sign(psi[np.abs(psi) > 1e-8])
        assert int(np.sum(signs[1:] != signs[:-1])) == n


def test_widened_domain_does_not_move_the_state(harmonic, harmonic_states):
    wide = harmonic.with_domain(harmonic.domain[0] - 5.0,
                                harmonic.domain[1] + 5.0)
    lv = spectrum(wide, 0).levels[0]
    st_wide = build_state(wide, lv)
    st = harmonic_states[0]
    for x in np.linspace(-3.0, 3.0, 13):
        assert st_wide.sample(x).psi == pytest.approx(st.sample(x).psi,
                                                      abs=1e-8)


def test_evaluate_state_one_shot(harmonic):
    lv = spectrum(harmonic, 0).levels[0]
    sample = evaluate_state(harmonic, lv, 0.5)
    assert sample.region == "allowed"
    assert sample.psi != 0.0


def test_constant_momentum_detection_and_closed_normalization():
    # deep square well of width pi/2: ground state momentum is exactly 1,
    # and the closed-form constant sqrt(k / (pi(n+1/2) + 1)) applies
    pot = PotentialModel.square_well(depth=200.0, width=np.pi / 2.0)
    lv = spectrum(pot, 0).levels[0]
    st = build_state(pot, lv)
    assert st.wavenumber == pytest.approx(1.0, rel=1e-10)
    pn = paper_normalization(st)
    assert pn.constant == pytest.approx(
        np.sqrt(1.0 / (np.pi / 2.0 + 1.0)), rel=1e-9)
    assert st.normalization_paper == pn.constant
    assert pn.ratio_to_numeric == pytest.approx(1.0, abs=0.1)
    wave = standing_wave(st, 0.2)
    # cosine branch carries sqrt(2) on top of the overall constant
    assert wave == pytest.approx(np.sqrt(2.0) * pn.constant * np.cos(0.2),
                                 rel=1e-9)


def test_varying_momentum_has_no_wavenumber(harmonic_states):
    st = harmonic_states[0]
    assert st.wavenumber is None
    assert st.normalization_paper is None
    with pytest.raises(UsageError):
        paper_normalization(st)


def test_epsilon_closed_form(harmonic):
    # epsilon = -hbar m V' / p^3; for the harmonic well at E=2, x=1 this
    # is -1/3^(3/2)
    assert epsilon_parameter(harmonic, 2.0, 1.0) == pytest.approx(
        -(3.0 ** -1.5), rel=1e-12)
    assert epsilon_parameter(harmonic, 2.0, 0.0) == pytest.approx(0.0,
                                                                  abs=1e-15)


def test_delta_closed_form_at_symmetric_point(harmonic):
    # at the well bottom delta reduces to -V''/(8 E^2)
    for energy in (3.5, 10.5):
        assert delta_functional(harmonic, energy, 0.0) == pytest.approx(
            -1.0 / (8.0 * energy * energy), rel=1e-6)


def test_delta_numeric_derivative_agrees_with_analytic(harmonic):
    # same well, but with the derivative callback withheld so the slope
    # comes from finite differences
    blind = PotentialModel.from_callable(
        lambda x: 0.5 * np.asarray(x, dtype=float) ** 2,
        domain=harmonic.domain)
    x, energy = 0.7, 3.0
    assert delta_functional(blind, energy, x) == pytest.approx(
        delta_functional(harmonic, energy, x), rel=1e-5)
    assert epsilon_parameter(blind, energy, x) == pytest.approx(
        epsilon_parameter(harmonic, energy, x), rel=1e-6)


def test_diagnostics_vanish_for_free_motion():
    box = PotentialModel.from_callable(
        lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        domain=(-1.0, 1.0),
        df=lambda x: np.zeros_like(np.asarray(x, dtype=float)))
    assert abs(epsilon_parameter(box, 1.0, 0.3)) < 1e-12
    assert abs(delta_functional(box, 1.0, 0.3)) < 1e-12


def test_epsilon_grows_toward_turning_point(harmonic):
    values = [abs(epsilon_parameter(harmonic, 0.5, x))
              for x in (0.2, 0.6, 0.9, 0.99)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_diagnostics_refuse_singular_points(harmonic):
    with pytest.raises(SingularPointError):
        epsilon_parameter(harmonic, 0.5, 1.0)  # exactly at the turning point
    with pytest.raises(UsageError):
        epsilon_parameter(harmonic, 0.5, 2.5)  # outside the allowed region


def test_tabulate_columns(harmonic_states):
    st = harmonic_states[1]
    xs = np.linspace(-3.0, 3.0, 7)
    rows = st.tabulate(xs)
    assert [r.x for r in rows] == pytest.approx(list(xs))
    labels = {r.region for r in rows}
    assert labels == {"left-forbidden", "allowed", "right-forbidden"}


def test_unbound_tail_refused():
    # an energy above the well rim has no decaying tail to normalize
    pot = PotentialModel.square_well(depth=1.0, width=1.0)
    from phasebound.classical import ClassicalRegion
    from phasebound.quantize import EnergyLevel
    fake = EnergyLevel(n=0, energy=0.5,
                       region=ClassicalRegion(-0.5, 0.5, False, False),
                       action=1.0, residual=0.0, iterations=1)
    with pytest.raises((NormalizationError, UsageError)):
        build_state(pot, fake)
