"""Classical structure at fixed energy: turning points, actions, phases.

Everything here works on a single (potential, energy) pair.  Turning points
are located by a sign scan over the squared momentum plus root refinement,
then action-type integrals are taken over the classically allowed region
with a sine substitution that absorbs the square-root behaviour at the
interval ends.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import MultiRegionError, NoClassicalMotion, UsageError
from .potentials import MomentumField, PotentialModel
from .quadrature import QuadratureConfig, integrate_adaptive
from .rootfind import bisect_then_brent

_HALF_PI = 0.5 * np.pi


@dataclass(frozen=True)
class ClassicalRegion:
    """One classically allowed interval.

    An edge flag marks a side that stops at the working domain boundary
    (a wall) rather than at a genuine turning point.
    """

    left: float
    right: float
    left_is_edge: bool = False
    right_is_edge: bool = False

    @property
    def width(self) -> float:
        return self.right - self.left

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.left + self.right)


@dataclass(frozen=True)
class TurningPointReport:
    """Scan outcome at one energy."""

    energy: float
    regions: tuple[ClassicalRegion, ...]
    degenerate: bool
    resolution: int

    def require_single(self) -> ClassicalRegion:
        """The lone allowed region, or a refusal when there are several."""
        if len(self.regions) == 1:
            return self.regions[0]
        if not self.regions:
            raise NoClassicalMotion(
                f"no classically allowed region at E = {self.energy}",
                report=self)
        raise MultiRegionError(
            f"{len(self.regions)} allowed regions at E = {self.energy}; "
            "tunnelling-coupled wells are not supported", report=self)


def find_turning_points(potential: PotentialModel, energy: float,
                        resolution: int = 512) -> TurningPointReport:
    """Locate the classically allowed regions at the given energy.

    A uniform scan of 2m(E - V) finds sign changes, each refined to root
    precision.  Raises NoClassicalMotion when the scan finds no allowed
    point and the energy is below the potential floor; an energy within
    1e-8 (relative) of the floor yields a degenerate zero-width region.
    """
    if resolution < 8:
        raise UsageError("turning point scan needs at least 8 points")
    energy = float(energy)
    field = MomentumField(potential, energy)
    xs = potential.grid(resolution)
    q = field.q(xs)
    mask = q > 0.0

    if not mask.any():
        return _floor_report(potential, energy, resolution)

    def gap(x):
        return energy - potential.evaluate(x)

    crossings = []
    sgn = np.where(q > 0.0, 1.0, -1.0)
    for i in np.nonzero(sgn[:-1] * sgn[1:] < 0.0)[0]:
        crossings.append(bisect_then_brent(
            gap, xs[i], xs[i + 1], fa=q[i], fb=q[i + 1],
            xtol=1e-15 * max(1.0, abs(xs[i]), abs(xs[i + 1]))))

    regions = []
    cursor = xs[0] if mask[0] else None
    cursor_is_edge = bool(mask[0])
    for c in crossings:
        if cursor is None:
            cursor, cursor_is_edge = c, False
        else:
            regions.append(ClassicalRegion(cursor, c, cursor_is_edge, False))
            cursor = None
    if cursor is not None:
        regions.append(ClassicalRegion(cursor, xs[-1], cursor_is_edge, True))

    report = TurningPointReport(energy, tuple(regions), False, resolution)
    if len(regions) == 1 and regions[0].width < 1e-6 * (xs[-1] - xs[0]):
        floor = _floor_report(potential, energy, resolution, raising=False)
        if floor is not None and floor.degenerate:
            return floor
    return report


def _floor_report(potential, energy, resolution, raising=True):
    """Classify an energy with no (or a vanishing) allowed scan region."""
    try:
        x_min, v_min = potential.minimum()
    except Exception:
        x_min = v_min = None
    if v_min is not None:
        tol = 1e-8 * max(1.0, abs(energy), abs(v_min))
        if abs(energy - v_min) <= tol or 0.0 < energy - v_min <= tol:
            region = ClassicalRegion(x_min, x_min)
            return TurningPointReport(energy, (region,), True, resolution)
    if not raising:
        return None
    raise NoClassicalMotion(
        f"no classically allowed region at E = {energy}",
        report=TurningPointReport(energy, (), False, resolution))


def _over_region(field: MomentumField, region: ClassicalRegion, integrand,
                 config: QuadratureConfig) -> float:
    """Integrate f(x) over the region via x = mid + half * sin(t)."""
    if region.width == 0.0:
        return 0.0
    mid, half = region.midpoint, 0.5 * region.width

    def g(t):
        return half * np.cos(t) * integrand(mid + half * np.sin(t))

    return integrate_adaptive(g, -_HALF_PI, _HALF_PI, config).value


def action_integral(potential: PotentialModel, energy: float,
                    region: ClassicalRegion | None = None,
                    config: QuadratureConfig | None = None) -> float:
    """W(E) = integral of sqrt(2m(E - V)) over the allowed region."""
    if region is None:
        region = find_turning_points(potential, energy).require_single()
    field = MomentumField(potential, energy)
    return _over_region(field, region, field.allowed_magnitude,
                        config or QuadratureConfig())


def action_energy_derivative(potential: PotentialModel, energy: float,
                             region: ClassicalRegion | None = None,
                             config: QuadratureConfig | None = None) -> float:
    """dW/dE = integral of m / p over the allowed region.

    The 1/sqrt endpoint behaviour is tamed by the sine substitution; the
    few points that land outside the refined region (where the clamped
    momentum is zero) lie outside the true interval too, so their
    contribution is dropped rather than divided by zero.
    """
    if region is None:
        region = find_turning_points(potential, energy).require_single()
    field = MomentumField(potential, energy)
    m = potential.constants.mass

    def integrand(x):
        p = field.allowed_magnitude(x)
        return np.where(p > 0.0, m / np.where(p > 0.0, p, 1.0), 0.0)

    return _over_region(field, region, integrand,
                        config or QuadratureConfig())


class PhaseAccumulator:
    """Cached incremental phase integrals at one energy.

    ``interior`` accumulates (1/hbar) * integral of p from the region's
    left end; the tail methods accumulate the decay exponent
    (1/hbar) * integral of |p| into the forbidden sides.  Results for
    visited points are kept as anchors, so sweeping a sorted grid costs
    one short integral per step.
    """

    def __init__(self, potential: PotentialModel, energy: float,
                 region: ClassicalRegion,
                 config: QuadratureConfig | None = None):
        self.potential = potential
        self.energy = float(energy)
        self.region = region
        self.config = config or QuadratureConfig()
        self._field = MomentumField(potential, energy)
        self._hbar = potential.constants.hbar
        self._interior: list[tuple[float, float]] = [(region.left, 0.0)]
        self._left: list[tuple[float, float]] = [(region.left, 0.0)]
        self._right: list[tuple[float, float]] = [(region.right, 0.0)]

    def _advance(self, anchors, integrand, x: float) -> float:
        best = min(anchors, key=lambda a: abs(a[0] - x))
        x0, phi0 = best
        if x == x0:
            return phi0
        lo, hi = (x0, x) if x0 < x else (x, x0)
        step = integrate_adaptive(integrand, lo, hi, self.config).value
        phi = phi0 + (step if x > x0 else -step)
        anchors.append((x, phi))
        if len(anchors) > 64:
            anchors.sort(key=lambda a: a[0])
            del anchors[1:-1:2]
        return phi

    def interior(self, x: float) -> float:
        if not (self.region.left <= x <= self.region.right):
            raise UsageError("point lies outside the allowed region")
        return self._advance(
            self._interior,
            lambda s: self._field.allowed_magnitude(s) / self._hbar, x)

    def left_tail(self, x: float) -> float:
        if x > self.region.left:
            raise UsageError("point lies right of the left turning point")
        return self._advance(
            self._left,
            lambda s: -self._field.forbidden_magnitude(s) / self._hbar, x)

    def right_tail(self, x: float) -> float:
        if x < self.region.right:
            raise UsageError("point lies left of the right turning point")
        return self._advance(
            self._right,
            lambda s: self._field.forbidden_magnitude(s) / self._hbar, x)

    def total(self) -> float:
        """Full phase across the region, W / hbar."""
        return action_integral(self.potential, self.energy, self.region,
                               self.config) / self._hbar
