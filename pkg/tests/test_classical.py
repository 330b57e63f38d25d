import numpy as np
import pytest

from phasebound.classical import (
    PhaseAccumulator,
    action_energy_derivative,
    action_integral,
    find_turning_points,
)
from phasebound.errors import MultiRegionError, NoClassicalMotion
from phasebound.potentials import MomentumField, PotentialModel


def test_harmonic_turning_points_refined(harmonic):
    report = find_turning_points(harmonic, 2.5)
    region = report.require_single()
    root = np.sqrt(5.0)
    assert region.left == pytest.approx(-root, abs=1e-10)
    assert region.right == pytest.approx(root, abs=1e-10)
    assert not region.left_is_edge and not region.right_is_edge
    assert not report.degenerate


def test_no_motion_below_floor(harmonic):
    with pytest.raises(NoClassicalMotion):
        find_turning_points(harmonic, -0.5)


def test_floor_energy_is_degenerate(harmonic):
    report = find_turning_points(harmonic, 0.0)
    assert report.degenerate
    region = report.regions[0]
    assert region.width == pytest.approx(0.0, abs=1e-6)


def test_free_particle_box_keeps_edge_flags():
    box = PotentialModel.from_callable(
        lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        domain=(-1.0, 1.0),
        df=lambda x: np.zeros_like(np.asarray(x, dtype=float)))
    report = find_turning_points(box, 1.0)
    region = report.require_single()
    assert region.left == -1.0 and region.right == 1.0
    assert region.left_is_edge and region.right_is_edge


def test_double_well_two_regions():
    quartic = PotentialModel.from_callable(
        lambda x: (x * x - 1.0) ** 2, domain=(-3.0, 3.0),
        df=lambda x: 4.0 * x * (x * x - 1.0))
    report = find_turning_points(quartic, 0.5)
    assert len(report.regions) == 2
    outer = np.sqrt(1.0 + np.sqrt(0.5))
    inner = np.sqrt(1.0 - np.sqrt(0.5))
    assert report.regions[0].left == pytest.approx(-outer, abs=1e-9)
    assert report.regions[0].right == pytest.approx(-inner, abs=1e-9)
    assert report.regions[1].right == pytest.approx(outer, abs=1e-9)
    with pytest.raises(MultiRegionError):
        report.require_single()


def test_action_closed_forms(harmonic, morse10):
    # harmonic: W(E) = pi E / omega
    assert action_integral(harmonic, 2.5) == pytest.approx(np.pi * 2.5,
                                                           rel=1e-11)
    # linear |x|: W(E) = (4 sqrt(2) / 3) E^(3/2)
    lin = PotentialModel.linear(1.0)
    want = 4.0 * np.sqrt(2.0) / 3.0 * 2.0 ** 1.5
    assert action_integral(lin, 2.0) == pytest.approx(want, rel=1e-10)
    # morse: W(E) = (pi/a) sqrt(2m) (sqrt(D) - sqrt(-E))
    want = np.pi * np.sqrt(2.0) * (np.sqrt(10.0) - np.sqrt(5.0))
    assert action_integral(morse10, -5.0) == pytest.approx(want, rel=1e-10)


def test_action_against_blunt_midpoint_sum():
    # same integral by a method sharing no code with the quadrature stack
    quartic = PotentialModel.from_callable(
        lambda x: 0.25 * x ** 4, domain=(-6.0, 6.0),
        df=lambda x: x ** 3)
    energy = 3.0
    region = find_turning_points(quartic, energy).require_single()
    xs = np.linspace(region.left, region.right, 2_000_001)
    mids = 0.5 * (xs[1:] + xs[:-1])
    p = np.sqrt(np.maximum(2.0 * (energy - quartic.evaluate(mids)), 0.0))
    blunt = float(np.sum(p) * (xs[1] - xs[0]))
    assert action_integral(quartic, energy) == pytest.approx(blunt, rel=2e-6)


def test_action_derivative_closed_form(harmonic):
    # dW/dE is the half-period: pi/omega for any harmonic energy
    for energy in (0.3, 1.0, 7.7):
        assert action_energy_derivative(harmonic, energy) == pytest.approx(
            np.pi, rel=1e-10)


def test_action_derivative_matches_finite_difference(morse10):
    energy = -4.0
    h = 1e-6
    fd = (action_integral(morse10, energy + h)
          - action_integral(morse10, energy - h)) / (2.0 * h)
    assert action_energy_derivative(morse10, energy) == pytest.approx(
        fd, rel=1e-7)


def test_phase_accumulator_linear_in_free_region():
    box = PotentialModel.from_callable(
        lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        domain=(0.0, np.pi),
        df=lambda x: np.zeros_like(np.asarray(x, dtype=float)))
    region = find_turning_points(box, 2.0).require_single()
    acc = PhaseAccumulator(box, 2.0, region)
    k = 2.0  # p = sqrt(2 * 2) = 2
    a, b = 0.3, 1.1
    assert acc.interior(b) - acc.interior(a) == pytest.approx(k * (b - a),
                                                              rel=1e-12)


def test_phase_accumulator_monotone_and_consistent(harmonic):
    energy = 5.5
    region = find_turning_points(harmonic, energy).require_single()
    acc = PhaseAccumulator(harmonic, energy, region)
    xs = np.linspace(region.left, region.right, 57)
    values = [acc.interior(x) for x in xs]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[0] == pytest.approx(0.0, abs=1e-12)
    assert values[-1] == pytest.approx(action_integral(harmonic, energy),
                                       rel=1e-10)
    # revisiting out of order must reproduce the cached answers
    assert acc.interior(xs[11]) == pytest.approx(values[11], rel=1e-12)


def test_phase_accumulator_tails_grow_outward(harmonic):
    energy = 0.5
    region = find_turning_points(harmonic, energy).require_single()
    acc = PhaseAccumulator(harmonic, energy, region)
    l1 = acc.left_tail(region.left - 0.5)
    l2 = acc.left_tail(region.left - 1.5)
    r1 = acc.right_tail(region.right + 0.5)
    r2 = acc.right_tail(region.right + 1.5)
    assert 0.0 < l1 < l2
    assert 0.0 < r1 < r2
    # symmetric well, symmetric exponents
    assert l2 == pytest.approx(r2, rel=1e-10)


def test_momentum_field_boundary_classification(harmonic):
    field = MomentumField(harmonic, 2.0)
    assert field.classify(0.0) == "allowed"
    assert field.classify(5.0) == "forbidden"
    assert field.classify(2.0) == "boundary"
