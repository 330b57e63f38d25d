"""Independent grid-based reference solver for auditing quantized spectra.

The potential is discretized with second-order central differences on a
Dirichlet box and the resulting symmetric tridiagonal operator is solved
by Sturm-sequence bisection.  Nothing here touches the phase-integral
machinery: this path exists so the two solvers can be compared without a
shared failure mode, so keep it that way.

Box selection in auto mode: both edges must clear the highest requested
level by a margin of 5*hbar*omega_char (omega_char from the level spacing
at the top of the stack, or from the curvature at the well bottom when
only one level is asked for) and accumulate a decay exponent of at least
14 across the forbidden zone, which keeps the truncation error below the
h^2 discretization error.  Where a potential flattens out below the
margin bar (Morse tails, Coulomb tails) the march stops once the decay
exponent alone reaches 16; insisting on the unreachable margin would
reject confining wells that plainly hold bound states.  Hard domain
edges (tabulated data, the r = 0 axis) are used as walls directly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import OracleError, UsageError
from .potentials import PotentialModel

_DECAY_REQUIRED = 14.0
_DECAY_ENOUGH = 16.0
_MAX_SWEEPS = 260


@dataclass(frozen=True)
class OracleConfig:
    grid_points: int = 4001
    box: tuple[float, float] | None = None
    target_levels: int = 1
    eigen_tol: float = 1e-10
    extrapolate: bool = False
    keep_eigenvectors: bool = False

    def __post_init__(self):
        if self.grid_points < 201 or self.grid_points % 2 == 0:
            raise UsageError("grid_points must be odd and at least 201")
        if self.target_levels < 1:
            raise UsageError("target_levels must be at least 1")
        if not 0.0 < self.eigen_tol < 1e-2:
            raise UsageError("eigen_tol out of range")
        if self.box is not None:
            a, b = self.box
            if not (np.isfinite(a) and np.isfinite(b) and a < b):
                raise UsageError("box must be finite with a < b")


@dataclass(frozen=True)
class TridiagonalOperator:
    """Symmetric tridiagonal Hamiltonian on an interior grid."""

    diag: np.ndarray
    off: float
    a: float
    b: float
    h: float
    x: np.ndarray

    @property
    def size(self) -> int:
        return len(self.diag)

    def sturm_count(self, sigma: float, retries: int = 5) -> int:
        """Number of eigenvalues strictly below sigma.

        Counts negative pivots of the LDL^T factorization of T - sigma*I.
        An exact zero pivot breaks the recurrence; the shift is then
        perturbed by 1e-12 of the spectral scale and the count retried.
        """
        off_sq = float(self.off) * float(self.off)
        diag = self.diag.tolist()  # plain floats so a zero pivot raises
        sigma = float(sigma)
        scale = max(1.0, max(abs(v) for v in diag))
        for _ in range(retries + 1):
            count = 0
            d = 1.0
            try:
                for i, di in enumerate(diag):
                    d = (di - sigma) - (off_sq / d if i else 0.0)
                    if d < 0.0:
                        count += 1
                return count
            except ZeroDivisionError:
                sigma += 1e-12 * scale
        raise OracleError("pivot breakdown persisted through shift retries")

    def counts(self, shifts: np.ndarray) -> np.ndarray:
        """Vectorized eigenvalue counting over many shifts at once.

        A zero pivot sends the next one to -inf, which the IEEE
        arithmetic then recovers from on its own, so no perturbation
        loop is needed here (cf. sturm_count).
        """
        shifts = np.asarray(shifts, dtype=float)
        diag = self.diag
        off_sq = self.off * self.off
        d = diag[0] - shifts
        count = (d < 0.0).astype(np.int64)
        buf = np.empty_like(d)
        neg = np.empty(d.shape, dtype=bool)
        with np.errstate(divide="ignore", over="ignore"):
            for i in range(1, self.size):
                np.divide(off_sq, d, out=buf)
                np.subtract(diag[i], shifts, out=d)
                d -= buf
                np.less(d, 0.0, out=neg)
                count += neg
        return count

    def solve_shifted(self, sigma: float, rhs: np.ndarray) -> np.ndarray:
        """(T - sigma*I) y = rhs by elimination with partial pivoting."""
        n = self.size
        dl = np.full(n - 1, self.off)
        d = self.diag - sigma
        du = np.full(n - 1, self.off)
        du2 = np.zeros(max(n - 2, 0))
        y = rhs.astype(float).copy()
        tiny = 1e-300
        for i in range(n - 1):
            if abs(d[i]) >= abs(dl[i]):
                piv = d[i] if d[i] != 0.0 else tiny
                m = dl[i] / piv
                d[i + 1] -= m * du[i]
                y[i + 1] -= m * y[i]
                if i < n - 2:
                    du2[i] = 0.0
            else:
                m = d[i] / dl[i]
                d[i], dl[i] = dl[i], d[i]
                du[i], d[i + 1] = d[i + 1], du[i] - m * d[i + 1]
                if i < n - 2:
                    du2[i] = du[i + 1]
                    du[i + 1] = -m * du2[i]
                y[i], y[i + 1] = y[i + 1], y[i] - m * y[i + 1]
        if d[n - 1] == 0.0:
            d[n - 1] = tiny
        y[n - 1] /= d[n - 1]
        if n > 1:
            piv = d[n - 2] if d[n - 2] != 0.0 else tiny
            y[n - 2] = (y[n - 2] - du[n - 2] * y[n - 1]) / piv
        for i in range(n - 3, -1, -1):
            piv = d[i] if d[i] != 0.0 else tiny
            y[i] = (y[i] - du[i] * y[i + 1] - du2[i] * y[i + 2]) / piv
        return y

    def eigenvector(self, eigenvalue: float, iterations: int = 3,
                    seed: int = 7) -> np.ndarray:
        """Inverse iteration at a converged eigenvalue; max-norm 1."""
        rng = np.random.default_rng(seed)
        v = rng.standard_normal(self.size)
        shift = eigenvalue + 1e-9 * max(1.0, abs(eigenvalue))
        for _ in range(iterations):
            v = self.solve_shifted(shift, v)
            v /= np.max(np.abs(v))
        lead = v[np.argmax(np.abs(v) > 1e-3)]
        if lead < 0.0:
            v = -v
        return v


@dataclass(frozen=True)
class OracleSpectrum:
    energies: np.ndarray
    eigenvectors: list[np.ndarray] | None
    grid: tuple[float, float, float]
    convergence: list[int]


def _char_frequency(potential: PotentialModel) -> float:
    x0, _ = potential.minimum()
    lo, hi = potential.domain
    h = 1e-4 * (hi - lo)
    x0 = min(max(x0, lo + h), hi - h)
    curv = (potential.evaluate(x0 + h) - 2.0 * potential.evaluate(x0)
            + potential.evaluate(x0 - h)) / (h * h)
    if curv > 0.0:
        return float(np.sqrt(curv / potential.constants.mass))
    return 0.0


def _estimate_top_level(potential: PotentialModel, count: int
                        ) -> tuple[float, float]:
    """Crude top-level estimate and the spacing just above it.

    A coarse solve on the raw domain for count+1 levels; the gap between
    the top target and the next level up sets the characteristic
    frequency for the box margin.
    """
    lo, hi = potential.domain
    op = _discretize_box(potential, (lo, hi), 801)
    coarse = _bisect_levels(op, count + 1, 1e-6)
    e_top = float(coarse.energies[count - 1])
    spacing = float(coarse.energies[count] - e_top)
    return e_top, spacing


def _extend_edge(potential: PotentialModel, e_top: float, side: int,
                 margin: float) -> float:
    """Box edge on one side (-1 lower, +1 upper).

    Marches outward from the classical boundary at e_top until the
    potential clears e_top + margin (margin rule) and the accumulated
    decay exponent reaches 14, or until the exponent alone reaches 16
    (for wells whose tails flatten out below the margin bar).  A hard
    domain edge is simply the wall.
    """
    lo, hi = potential.domain
    soft = potential.soft_edges[0] if side < 0 else potential.soft_edges[1]
    if not soft:
        return lo if side < 0 else hi
    m = potential.constants.mass
    hbar = potential.constants.hbar
    span = hi - lo
    target_v = e_top + margin

    xs = potential.grid(2001)
    mask = potential.evaluate(xs) <= e_top
    if not mask.any():
        raise OracleError("no classical region at the estimated top level")
    allowed = xs[mask]
    x = float(allowed[0] if side < 0 else allowed[-1])

    pot = potential
    expo = 0.0
    k_prev = 0.0
    dx = span / 1000.0
    limit = x - 64.0 * span if side < 0 else x + 64.0 * span
    while (x > limit) if side < 0 else (x < limit):
        x_next = x - dx if side < 0 else x + dx
        d_lo, d_hi = pot.domain
        if x_next < d_lo or x_next > d_hi:
            pot = pot.with_domain(d_lo - span if side < 0 else d_lo,
                                  d_hi if side < 0 else d_hi + span)
            continue
        v = pot.evaluate(x_next)
        k = np.sqrt(2.0 * m * max(v - e_top, 0.0)) / hbar
        expo += 0.5 * (k + k_prev) * dx
        if expo >= _DECAY_ENOUGH:
            return x_next
        if expo >= _DECAY_REQUIRED and v >= target_v:
            return x_next
        k_prev = k
        x = x_next
    raise OracleError(
        "auto box cannot confine the requested levels "
        f"({'below' if side < 0 else 'above'} the well)")


def _auto_box(potential: PotentialModel, count: int) -> tuple[float, float]:
    e_top, spacing = _estimate_top_level(potential, count)
    _, v_min = potential.minimum()
    if e_top <= v_min:
        raise OracleError("level estimate fell below the potential floor")
    hbar = potential.constants.hbar
    scale = max(1.0, abs(e_top), abs(v_min))
    omega = spacing / hbar if spacing > 1e-9 * scale \
        else _char_frequency(potential)
    margin = 5.0 * hbar * omega if omega > 0.0 \
        else 0.5 * (e_top - v_min)
    lo = _extend_edge(potential, e_top, -1, margin)
    hi = _extend_edge(potential, e_top, +1, margin)
    if not lo < hi:
        raise OracleError("auto box collapsed; potential looks unconfined")
    return lo, hi


def _discretize_box(potential: PotentialModel, box, n: int
                    ) -> TridiagonalOperator:
    a, b = float(box[0]), float(box[1])
    pot = potential
    dom_lo, dom_hi = pot.domain
    if a < dom_lo or b > dom_hi:
        pot = pot.with_domain(min(a, dom_lo), max(b, dom_hi))
    h = (b - a) / (n - 1)
    x = a + h * np.arange(1, n - 1)
    hbar, m = pot.constants.hbar, pot.constants.mass
    diag = hbar * hbar / (m * h * h) + pot.evaluate(x)
    off = -hbar * hbar / (2.0 * m * h * h)
    return TridiagonalOperator(diag, off, a, b, h, x)


def discretize(potential: PotentialModel,
               config: OracleConfig | None = None) -> TridiagonalOperator:
    """Central-difference Hamiltonian on the configured (or auto) box."""
    cfg = config or OracleConfig()
    box = cfg.box if cfg.box is not None \
        else _auto_box(potential, cfg.target_levels)
    return _discretize_box(potential, box, cfg.grid_points)


_PROBES = 15  # interior subdivision points per open level per sweep


def _bisect_levels(op: TridiagonalOperator, count: int, tol: float
                   ) -> OracleSpectrum:
    """Lowest eigenvalues by Sturm-count interval subdivision.

    Classic bisection halves each level's bracket per counting pass;
    since one pass is O(grid) regardless of how many shifts ride along,
    probing 15 interior points per level instead shrinks every bracket
    16-fold per sweep for nearly the same cost.
    """
    if count > op.size:
        raise UsageError("more levels requested than grid points")
    radius = 2.0 * abs(op.off)
    lo = np.full(count, float(np.min(op.diag)) - radius)
    hi = np.full(count, float(np.max(op.diag)) + radius)
    idx = np.arange(count)
    frac = np.arange(1, _PROBES + 1) / (_PROBES + 1.0)
    converged_at = np.zeros(count, dtype=int)
    for sweep in range(1, _MAX_SWEEPS + 1):
        width = hi - lo
        goal = tol * np.maximum(1.0, np.abs(lo) + np.abs(hi))
        open_ = width > goal
        if not open_.any():
            break
        probes = lo[open_, None] + width[open_, None] * frac
        c = op.counts(probes.ravel()).reshape(probes.shape)
        # counts are nondecreasing in the shift, so the probes with
        # count <= idx form a prefix of each row
        n_below = np.sum(c <= idx[open_, None], axis=1)
        rows = np.arange(probes.shape[0])
        lo[open_] = np.where(n_below > 0,
                             probes[rows, np.maximum(n_below - 1, 0)],
                             lo[open_])
        hi[open_] = np.where(n_below < _PROBES,
                             probes[rows, np.minimum(n_below, _PROBES - 1)],
                             hi[open_])
        converged_at[open_] = sweep
    else:
        raise OracleError("eigenvalue bisection did not converge")
    return OracleSpectrum(0.5 * (lo + hi), None,
                          (op.a, op.b, op.h), converged_at.tolist())


def eigenvalues_by_bisection(op: TridiagonalOperator, target_levels: int,
                             eigen_tol: float = 1e-10,
                             keep_eigenvectors: bool = False
                             ) -> OracleSpectrum:
    """Lowest eigenvalues by Sturm-count bisection, one bracket per level."""
    spec = _bisect_levels(op, target_levels, eigen_tol)
    if not keep_eigenvectors:
        return spec
    vecs = [op.eigenvector(e) for e in spec.energies]
    return OracleSpectrum(spec.energies, vecs, spec.grid, spec.convergence)


def node_count(vector: np.ndarray, threshold: float = 1e-8) -> int:
    """Interior sign changes, ignoring entries lost in numerical noise."""
    v = vector / np.max(np.abs(vector))
    signs = np.sign(v[np.abs(v) > threshold])
    return int(np.sum(signs[1:] * signs[:-1] < 0.0))


def reference_levels(potential: PotentialModel, count: int,
                     config: OracleConfig | None = None) -> np.ndarray:
    """Lowest ``count`` reference energies for a potential.

    With ``extrapolate`` set, eigenvalues from the configured grid and a
    doubled grid on the same box are Richardson-combined, trading one
    extra solve for two orders of grid accuracy.
    """
    cfg = config or OracleConfig()
    if count > cfg.target_levels:
        cfg = replace(cfg, target_levels=count)
    box = cfg.box if cfg.box is not None \
        else _auto_box(potential, cfg.target_levels)
    op = _discretize_box(potential, box, cfg.grid_points)
    coarse = _bisect_levels(op, count, cfg.eigen_tol).energies
    if not cfg.extrapolate:
        return coarse
    op_fine = _discretize_box(potential, box, 2 * cfg.grid_points - 1)
    fine = _bisect_levels(op_fine, count, cfg.eigen_tol).energies
    return (4.0 * fine - coarse) / 3.0
