"""Piecewise bound-state wavefunctions built on the accumulated phase.

A solved level defines two phase anchors phi1 = -pi(n+1/2)/2 and
phi2 = +pi(n+1/2)/2 sitting at the turning points.  The state is

    psi(x) = N * exp(phi - phi1)                left of the region,
    psi(x) = N * sqrt(2) * cos(phi - phi1 - pi/4)   inside,
    psi(x) = N * (-1)^n * exp(-(phi - phi2))    right of the region,

with phi(x) accumulated from the turning points (decay exponents in the
forbidden sides).  N comes from numeric normalization; the closed-form
normalization constant applies only when the region supports a single
constant wavenumber and is exposed separately, together with its ratio to
the numeric value.

Also here: the local quasi-classicality diagnostics epsilon and delta,
which measure how fast the momentum varies on the scale of a wavelength,
and the connection checks that verify branch continuity at the anchors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .classical import (ClassicalRegion, PhaseAccumulator,
                        find_turning_points)
from .errors import (DomainError, NormalizationError, SingularPointError,
                     UsageError)
from .potentials import MomentumField, PotentialModel
from .quadrature import QuadratureConfig
from .quantize import EnergyLevel

_TAIL_EXPONENT = 16.2   # |psi|^2 down to ~1e-14 of its turning-point value
_INTERIOR_POINTS = 2001
_TAIL_POINTS = 384


@dataclass(frozen=True)
class WavefunctionSample:
    x: float
    phi: float
    psi: float
    region: str  # left-forbidden | allowed | right-forbidden


@dataclass(frozen=True)
class PaperNormalization:
    constant: float
    ratio_to_numeric: float


class StateFunction:
    """Normalized piecewise state for one solved level.

    Build through :func:`build_state`; evaluation is cheapest on sorted
    grids (the phase accumulators cache anchors along the sweep).
    """

    def __init__(self, potential: PotentialModel, level: EnergyLevel,
                 accumulator: PhaseAccumulator, normalization: float,
                 wavenumber: float | None):
        n = level.n
        self.potential = potential
        self.level = level
        self.anchors = (-0.5 * math.pi * (n + 0.5),
                        0.5 * math.pi * (n + 0.5))
        self.normalization_numeric = normalization
        self.wavenumber = wavenumber
        self.parity = "even" if n % 2 == 0 else "odd"
        self._acc = accumulator
        self._sign = -1.0 if n % 2 else 1.0

    @property
    def normalization_paper(self) -> float | None:
        """Closed-form constant for flat-momentum regions, else None."""
        if self.wavenumber is None:
            return None
        n = self.level.n
        return math.sqrt(self.wavenumber / (math.pi * (n + 0.5) + 1.0))

    def classify(self, x: float) -> str:
        region = self.level.region
        if x < region.left:
            return "left-forbidden"
        if x > region.right:
            return "right-forbidden"
        return "allowed"

    def phase(self, x: float) -> float:
        """phi(x): anchored at phi1 and phi2, monotone in x."""
        phi1, phi2 = self.anchors
        tag = self.classify(x)
        if tag == "allowed":
            return phi1 + self._acc.interior(x)
        if tag == "left-forbidden":
            return phi1 - self._acc.left_tail(x)
        return phi2 + self._acc.right_tail(x)

    def sample(self, x: float) -> WavefunctionSample:
        phi1, phi2 = self.anchors
        tag = self.classify(x)
        n_const = self.normalization_numeric
        if tag == "allowed":
            phi = phi1 + self._acc.interior(x)
            psi = n_const * math.sqrt(2.0) * math.cos(phi - phi1
                                                      - 0.25 * math.pi)
        elif tag == "left-forbidden":
            t = self._acc.left_tail(x)
            phi = phi1 - t
            psi = n_const * math.exp(-t)
        else:
            t = self._acc.right_tail(x)
            phi = phi2 + t
            psi = self._sign * n_const * math.exp(-t)
        return WavefunctionSample(float(x), phi, psi, tag)

    def branch_derivative(self, phi: float, tag: str) -> float:
        """d(psi)/d(phi) of the branch formula at a given phase."""
        phi1, phi2 = self.anchors
        n_const = self.normalization_numeric
        if tag == "allowed":
            return -n_const * math.sqrt(2.0) * math.sin(phi - phi1
                                                        - 0.25 * math.pi)
        if tag == "left-forbidden":
            return n_const * math.exp(phi - phi1)
        return -self._sign * n_const * math.exp(-(phi - phi2))

    def tabulate(self, xs) -> list[WavefunctionSample]:
        """Samples at sorted positions (sorts a copy if needed)."""
        pts = np.asarray(xs, dtype=float)
        if np.any(np.diff(pts) < 0.0):
            pts = np.sort(pts)
        return [self.sample(float(x)) for x in pts]


def _tail_reach(potential: PotentialModel, energy: float, start: float,
                direction: int) -> tuple[PotentialModel, float]:
    """Coarse march into a forbidden side until the decay budget is spent.

    Returns the (possibly soft-extended) potential and the stop position.
    """
    field = MomentumField(potential, energy)
    pot = potential
    span = pot.domain[1] - pot.domain[0]
    step = direction * span / 512.0
    x, total = start, 0.0
    k_prev = 0.0
    hbar = pot.constants.hbar
    for _ in range(200000):
        x_next = x + step
        lo, hi = pot.domain
        if not lo <= x_next <= hi:
            soft = pot.soft_edges[0] if direction < 0 else pot.soft_edges[1]
            if not soft:
                nudge = 1e-12 * span
                if direction < 0:
                    return pot, lo + nudge if pot.lo_open else lo
                return pot, hi - nudge if pot.hi_open else hi
            pot = pot.with_domain(lo - span if direction < 0 else lo,
                                  hi + span if direction > 0 else hi)
            field = MomentumField(pot, energy)
            continue
        k = float(field.forbidden_magnitude(x_next)) / hbar
        if k == 0.0 and total == 0.0:
            # barely out of the region yet; keep going
            x = x_next
            continue
        if k == 0.0:
            raise NormalizationError(
                "forbidden tail stopped decaying; state not normalizable")
        total += 0.5 * (k + k_prev) * abs(step)
        k_prev = k
        x = x_next
        if total >= 1.1 * _TAIL_EXPONENT:
            return pot, x
    raise NormalizationError("forbidden tail decays too slowly to normalize")


def _tail_integral(acc: PhaseAccumulator, start: float, stop: float,
                   side: str) -> float:
    """Integral of exp(-2 t(x)) over one forbidden tail."""
    if start == stop:
        return 0.0
    xs = np.linspace(start, stop, _TAIL_POINTS)
    tail = acc.left_tail if side == "left" else acc.right_tail
    ts = np.array([tail(float(x)) for x in xs])
    return abs(simpson(np.exp(-2.0 * ts), x=xs))


def _detect_wavenumber(potential: PotentialModel, level: EnergyLevel
                       ) -> float | None:
    """Constant wavenumber p/hbar when the momentum is flat in the region."""
    region = level.region
    field = MomentumField(potential, level.energy)
    xs = region.left + region.width * np.array([0.1, 0.3, 0.5, 0.7, 0.9])
    ps = field.allowed_magnitude(xs)
    if np.max(ps) <= 0.0:
        return None
    if (np.max(ps) - np.min(ps)) / np.max(ps) > 1e-9:
        return None
    return float(ps[2] / potential.constants.hbar)


def build_state(potential: PotentialModel, level: EnergyLevel,
                config: QuadratureConfig | None = None) -> StateFunction:
    """Construct and normalize the piecewise state for a solved level."""
    region = level.region
    if region.width <= 0.0:
        raise UsageError("cannot build a state on a degenerate region")
    cfg = config or QuadratureConfig()
    pot, reach_left = _tail_reach(potential, level.energy, region.left, -1)
    pot, reach_right = _tail_reach(pot, level.energy, region.right, +1)
    acc = PhaseAccumulator(pot, level.energy, region, cfg)

    xs = np.linspace(region.left, region.right, _INTERIOR_POINTS)
    us = np.array([acc.interior(float(x)) for x in xs])
    inner = simpson(2.0 * np.cos(us - 0.25 * math.pi) ** 2, x=xs)
    left = _tail_integral(acc, region.left, reach_left, "left")
    right = _tail_integral(acc, region.right, reach_right, "right")
    total = inner + left + right
    if not (np.isfinite(total) and total > 0.0):
        raise NormalizationError("norm integral came out non-positive")
    norm = 1.0 / math.sqrt(total)
    return StateFunction(pot, level, acc, norm,
                         _detect_wavenumber(pot, level))


def evaluate_state(potential: PotentialModel, level: EnergyLevel, x: float,
                   state: StateFunction | None = None) -> WavefunctionSample:
    """One sample of the normalized state; pass ``state`` to amortize."""
    if state is None:
        state = build_state(potential, level)
    return state.sample(x)


def numeric_normalization(potential: PotentialModel, level: EnergyLevel,
                          config: QuadratureConfig | None = None) -> float:
    """Normalization constant alone (builds the state internally)."""
    return build_state(potential, level, config).normalization_numeric


def paper_normalization(state: StateFunction) -> PaperNormalization:
    """Closed-form constant sqrt(k_n / (pi(n+1/2) + 1)) and its ratio
    to the numeric normalization; only standing-wave regions have one."""
    c = state.normalization_paper
    if c is None:
        raise UsageError(
            "no constant wavenumber for this level; the closed-form "
            "normalization applies to flat-momentum regions only")
    return PaperNormalization(c, c / state.normalization_numeric)


def standing_wave(state: StateFunction, x: float) -> float:
    """Flat-region closed form: sqrt(2k/(pi(n+1/2)+1)) cos(kx + pi n/2)."""
    if state.wavenumber is None:
        raise UsageError("standing-wave form needs a constant wavenumber")
    k = state.wavenumber
    n = state.level.n
    amp = math.sqrt(2.0 * k / (math.pi * (n + 0.5) + 1.0))
    return amp * math.cos(k * x + 0.5 * math.pi * n)


# -- quasi-classicality diagnostics -----------------------------------------

def _allowed_context(potential: PotentialModel, energy: float, x: float,
                     region: ClassicalRegion | None = None
                     ) -> tuple[float, ClassicalRegion, float]:
    if region is None:
        region = find_turning_points(potential, energy).require_single()
    field = MomentumField(potential, energy)
    q = field.q(x)
    try:
        _, v_min = potential.minimum()
        p_scale = math.sqrt(2.0 * potential.constants.mass
                            * max(energy - v_min, abs(energy), 1e-300))
    except Exception:
        p_scale = math.sqrt(2.0 * potential.constants.mass
                            * max(abs(energy), 1.0))
    if q <= 0.0 and (x < region.left or x > region.right):
        raise UsageError("point is not inside the allowed region")
    p = math.sqrt(max(q, 0.0))
    if p < 1e-12 * p_scale:
        raise SingularPointError(
            f"momentum at x = {x} is below the diagnostic floor; "
            "too close to a turning point")
    return p, region, p_scale


def _potential_slope(potential: PotentialModel, x: float,
                     region: ClassicalRegion) -> float:
    if potential.has_derivative:
        return float(potential.derivative(x))
    h = 1e-6 * region.width
    h = min(h, 0.5 * (x - region.left), 0.5 * (region.right - x)) or h
    return (potential.evaluate(x + h) - potential.evaluate(x - h)) / (2.0 * h)


def epsilon_parameter(potential: PotentialModel, energy: float, x: float,
                      region: ClassicalRegion | None = None) -> float:
    """Local expansion parameter (hbar / p^2) dp/dx.

    Zero for flat potentials, grows without bound toward turning points;
    the state construction is trustworthy where this is small.
    """
    p, region, _ = _allowed_context(potential, energy, x, region)
    hbar = potential.constants.hbar
    m = potential.constants.mass
    dv = _potential_slope(potential, x, region)
    return -hbar * m * dv / p ** 3


def delta_functional(potential: PotentialModel, energy: float, x: float,
                     region: ClassicalRegion | None = None) -> float:
    """Second-order diagnostic 0.5 d(eps)/d(phi) + 0.25 eps^2."""
    p, region, _ = _allowed_context(potential, energy, x, region)
    hbar = potential.constants.hbar
    h = 1e-6 * region.width
    margin = min(x - region.left, region.right - x)
    h = min(h, 0.45 * margin)
    if h <= 0.0:
        raise SingularPointError("no room for a derivative step here")
    eps_plus = epsilon_parameter(potential, energy, x + h, region)
    eps_minus = epsilon_parameter(potential, energy, x - h, region)
    deps_dx = (eps_plus - eps_minus) / (2.0 * h)
    eps = epsilon_parameter(potential, energy, x, region)
    return 0.5 * (hbar / p) * deps_dx + 0.25 * eps * eps


# -- connection checks -------------------------------------------------------

@dataclass(frozen=True)
class ContinuityReport:
    value_gap: tuple[float, float]        # |psi jump| probed at x1, x2
    derivative_gap: tuple[float, float]   # |dpsi/dphi jump| at x1, x2
    coefficient_residual: float           # matching-system residual
    max_residual: float


def connection_check(state: StateFunction) -> ContinuityReport:
    """Verify the branch hand-off at both anchors.

    Probes the evaluated state just inside and outside each turning point
    (value and phase-derivative), and checks the two-sided matching system
    A + B = C + D, i(A - B) = C - D for the complex decomposition of the
    interior branch against the exponential coefficients on either side.
    """
    region = state.level.region
    h = 1e-8 * region.width
    n = state.level.n

    gaps = []
    dgaps = []
    for anchor_x in (region.left, region.right):
        lo = state.sample(anchor_x - h)
        hi = state.sample(anchor_x + h)
        gaps.append(abs(hi.psi - lo.psi))
        dgaps.append(abs(state.branch_derivative(hi.phi, hi.region)
                         - state.branch_derivative(lo.phi, lo.region)))

    # Interior branch sqrt(2) cos(u - pi/4) = A e^{iu} + B e^{-iu} with
    # u the phase from the left anchor; left-side coefficients (C, D) in
    # the basis (e^{u}, e^{-u}) are (1, 0).
    a = complex(math.cos(0.25 * math.pi), -math.sin(0.25 * math.pi)) \
        / math.sqrt(2.0)
    b = a.conjugate()
    c, d = 1.0, 0.0
    res = max(abs(a + b - (c + d)), abs(1j * (a - b) - (c - d)))

    # Right anchor, in the phase variable v measured from phi2: interior
    # branch is (-1)^n sqrt(2) cos(v + pi/4); right coefficients (0, (-1)^n).
    sign = -1.0 if n % 2 else 1.0
    a2 = sign * b
    b2 = sign * a
    c2, d2 = 0.0, sign
    res = max(res, abs(a2 + b2 - (c2 + d2)),
              abs(1j * (a2 - b2) - (c2 - d2)))

    return ContinuityReport(tuple(gaps), tuple(dgaps), res,
                            max(res, *gaps, *dgaps))
