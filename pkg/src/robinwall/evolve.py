"""Crank-Nicolson wave-packet evolution against the wall models.

The time-dependent equation i d/dt psi = (-d^2/dx^2 + V) psi (units
hbar^2/2m = 1) is discretized on a uniform grid over [x_min, 0] with the
3-point Laplacian and stepped with the implicit midpoint (Crank-Nicolson)
rule, which is unconditionally stable and exactly norm conserving:

    (1 + i*dt/2*H) psi_new = (1 - i*dt/2*H) psi_old.

Wall treatments at x = 0:

* Dirichlet eliminates the wall node (psi = 0 there).
* Neumann/Robin eliminate a ghost node via the centered second-order
  condition (psi_ghost - psi_{n-2})/(2h) = alpha*psi_{n-1}, keeping the
  operator tridiagonal and second order at the wall.

The left edge x_min is always Dirichlet; packet-support preconditions
keep the initial amplitude there negligible.

The Robin row produced by ghost elimination is symmetric with respect to
the trapezoid inner product (half weight on boundary nodes), not the
uniform one, so the discrete L2 norm used throughout carries trapezoid
weights: sum_j w_j |psi_j|^2 h with w = 1/2 at the end nodes. That
quantity is conserved by the scheme to rounding; for hard-wall runs the
end nodes are zero and it coincides with the plain sum.

A delta layer enters H as the diagonal entry lam/h at the node x = -L
(first-order consistent); the valley enters as -v on the interior nodes
of [-L, 0] with the averaged value -v/2 on the edge node at -L.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .analytic import PotentialKind, PotentialSpec, calibrated_spec
from .errors import ConfigError

__all__ = [
    "Grid",
    "WallBC",
    "Packet",
    "WaveState",
    "EvolutionTrace",
    "ComparisonResult",
    "init_gaussian",
    "step",
    "evolve",
    "weighted_distance",
    "weighted_overlap",
    "compare_evolutions",
    "reflect_and_compare",
]

SUPPORT_MARGIN = 5.0  # minimum boundary clearance in units of sigma


@dataclass(frozen=True)
class Grid:
    """Uniform grid on [x_min, 0] with n nodes; node n-1 sits at the wall."""

    x_min: float
    n: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x_min) and self.x_min < 0.0):
            raise ConfigError(f"x_min must be negative and finite, got {self.x_min}")
        if self.n < 16:
            raise ConfigError(f"need at least 16 nodes, got {self.n}")

    @property
    def h(self) -> float:
        return -self.x_min / (self.n - 1)

    def nodes(self) -> np.ndarray:
        return np.linspace(self.x_min, 0.0, self.n)

    def layer_index(self, L: float) -> int:
        """Index of the node at x = -L; L must be a whole number of cells."""
        ratio = L / self.h
        m = round(ratio)
        if m == 0 or abs(ratio - m) > 1e-9 * max(1.0, ratio):
            raise ConfigError(
                f"layer width L = {L} is not an integer multiple of the grid spacing h = {self.h:.6g}"
            )
        idx = (self.n - 1) - m
        if idx < 1:
            raise ConfigError(f"layer width L = {L} does not fit inside the grid (x_min = {self.x_min})")
        return idx

    def refined(self) -> "Grid":
        """Grid with halved spacing (same span, nodes preserved)."""
        return Grid(self.x_min, 2 * self.n - 1)


@dataclass(frozen=True)
class WallBC:
    """Boundary condition at the wall x = 0."""

    kind: str
    alpha: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("dirichlet", "neumann", "robin"):
            raise ConfigError(f"unknown wall boundary condition {self.kind!r}")
        if self.kind != "robin" and self.alpha != 0.0:
            raise ConfigError(f"alpha applies to the robin condition only, got kind={self.kind!r}")
        if not math.isfinite(self.alpha):
            raise ConfigError(f"alpha must be finite, got {self.alpha}")

    @classmethod
    def dirichlet(cls) -> "WallBC":
        return cls("dirichlet")

    @classmethod
    def neumann(cls) -> "WallBC":
        return cls("neumann")

    @classmethod
    def robin(cls, alpha: float) -> "WallBC":
        return cls("robin", alpha=float(alpha))


@dataclass(frozen=True)
class Packet:
    """Gaussian packet parameters: envelope exp(-(x-x0)^2/(4 sigma^2)) e^{i k0 x}."""

    x0: float
    sigma: float
    k0: float


def _grid_weights(grid: Grid) -> np.ndarray:
    w = np.ones(grid.n)
    w[0] = 0.5
    w[-1] = 0.5
    return w


@dataclass
class WaveState:
    """Discretized wavefunction with its wall treatment.

    ``potential`` is None for potential-free runs; a delta or valley
    spec requires the hard wall (that is the realization setup).
    """

    grid: Grid
    psi: np.ndarray
    bc: WallBC
    potential: PotentialSpec | None = None
    t: float = 0.0

    def __post_init__(self) -> None:
        self.psi = np.asarray(self.psi, dtype=np.complex128)
        if self.psi.shape != (self.grid.n,):
            raise ConfigError(f"psi must have shape ({self.grid.n},), got {self.psi.shape}")
        pot = self.potential
        if pot is not None and pot.kind is not PotentialKind.ROBIN:
            if self.bc.kind != "dirichlet":
                raise ConfigError("layered potentials run against the hard (Dirichlet) wall")
            self.grid.layer_index(pot.L)

    def norm(self) -> float:
        """Trapezoid-weighted discrete L2 norm."""
        w = _grid_weights(self.grid)
        return math.sqrt(float(np.sum(w * np.abs(self.psi) ** 2)) * self.grid.h)

    def x_mean(self) -> float:
        """Discrete position expectation <x>."""
        w = _grid_weights(self.grid)
        dens = w * np.abs(self.psi) ** 2
        total = float(np.sum(dens))
        return float(np.sum(self.grid.nodes() * dens)) / total


def init_gaussian(
    grid: Grid,
    x0: float,
    sigma: float,
    k0: float,
    bc: WallBC | None = None,
    potential: PotentialSpec | None = None,
) -> WaveState:
    """Normalized Gaussian packet, well separated from both boundaries.

    Both margins |x0| and |x0 - x_min| must exceed 5*sigma so that the
    truncation at x_min and the wall see negligible initial amplitude.
    Nodes eliminated by the boundary conditions are zeroed before
    normalization.
    """
    if bc is None:
        bc = WallBC.dirichlet()
    if sigma <= 0.0 or not math.isfinite(sigma):
        raise ConfigError(f"sigma must be > 0, got {sigma}")
    if not (grid.x_min < x0 < 0.0):
        raise ConfigError(f"packet center x0 = {x0} must lie inside ({grid.x_min}, 0)")
    wall_margin = -x0
    left_margin = x0 - grid.x_min
    if wall_margin <= SUPPORT_MARGIN * sigma:
        raise ConfigError(
            f"wall margin |x0| = {wall_margin:.6g} must exceed {SUPPORT_MARGIN}*sigma = {SUPPORT_MARGIN * sigma:.6g}"
        )
    if left_margin <= SUPPORT_MARGIN * sigma:
        raise ConfigError(
            f"left margin x0 - x_min = {left_margin:.6g} must exceed "
            f"{SUPPORT_MARGIN}*sigma = {SUPPORT_MARGIN * sigma:.6g}"
        )
    x = grid.nodes()
    psi = np.exp(-((x - x0) ** 2) / (4.0 * sigma**2) + 1j * k0 * x)
    psi[0] = 0.0
    if bc.kind == "dirichlet":
        psi[-1] = 0.0
    state = WaveState(grid=grid, psi=psi, bc=bc, potential=potential, t=0.0)
    state.psi /= state.norm()
    return state


def _potential_diagonal(grid: Grid, potential: PotentialSpec | None) -> np.ndarray:
    v = np.zeros(grid.n)
    if potential is None or potential.kind is PotentialKind.ROBIN:
        return v
    idx = grid.layer_index(potential.L)
    if potential.kind is PotentialKind.DELTA:
        v[idx] += potential.lam / grid.h
    else:
        v[idx + 1 :] = -potential.v
        v[idx] = -potential.v / 2.0
    return v


def _hamiltonian_bands(grid: Grid, bc: WallBC, potential: PotentialSpec | None):
    """Tridiagonal H restricted to the unknown nodes.

    Returns (main, lower, upper, lo, hi) where the unknowns are
    psi[lo:hi]. The x_min node is always eliminated; the wall node is
    eliminated for Dirichlet and kept (with the ghost row) otherwise.
    """
    h = grid.h
    inv_h2 = 1.0 / (h * h)
    lo = 1
    hi = grid.n - 1 if bc.kind == "dirichlet" else grid.n
    m = hi - lo
    main = np.full(m, 2.0 * inv_h2)
    lower = np.full(m - 1, -inv_h2)
    upper = np.full(m - 1, -inv_h2)
    main += _potential_diagonal(grid, potential)[lo:hi]
    if bc.kind != "dirichlet":
        alpha = bc.alpha if bc.kind == "robin" else 0.0
        main[-1] = 2.0 * inv_h2 - 2.0 * alpha / h
        lower[-1] = -2.0 * inv_h2
    return main, lower, upper, lo, hi


class _Propagator:
    """Factored Crank-Nicolson update for one (grid, bc, potential, dt)."""

    def __init__(self, grid: Grid, bc: WallBC, potential: PotentialSpec | None, dt: float):
        main, lower, upper, lo, hi = _hamiltonian_bands(grid, bc, potential)
        z = 0.5j * dt
        a_main = 1.0 + z * main
        a_lower = z * lower
        a_upper = z * upper
        matrix = sp.diags([a_lower, a_main, a_upper], [-1, 0, 1], format="csc")
        self._solve = spla.splu(matrix).solve
        self._b_main = 1.0 - z * main
        self._b_lower = -z * lower
        self._b_upper = -z * upper
        self._lo = lo
        self._hi = hi

    def apply(self, psi: np.ndarray) -> np.ndarray:
        lo, hi = self._lo, self._hi
        u = psi[lo:hi]
        rhs = self._b_main * u
        rhs[1:] += self._b_lower * u[:-1]
        rhs[:-1] += self._b_upper * u[1:]
        out = np.zeros_like(psi)
        out[lo:hi] = self._solve(rhs)
        return out


@lru_cache(maxsize=64)
def _propagator(grid: Grid, bc: WallBC, potential: PotentialSpec | None, dt: float) -> _Propagator:
    return _Propagator(grid, bc, potential, dt)


def _check_dt(dt: float) -> float:
    dt = float(dt)
    if dt == 0.0 or not math.isfinite(dt):
        raise ConfigError(f"time step must be nonzero and finite, got {dt}")
    return dt


def step(state: WaveState, dt: float) -> WaveState:
    """One Crank-Nicolson update.

    Negative dt is the exact inverse of the positive-dt update, which is
    what the time-reversal checks exercise.
    """
    dt = _check_dt(dt)
    prop = _propagator(state.grid, state.bc, state.potential, dt)
    return replace(state, psi=prop.apply(state.psi), t=state.t + dt)


@dataclass
class EvolutionTrace:
    """Final state of a run plus its norm history.

    ``norm_drift`` is max_t |norm(t)/norm(0) - 1| over every step.
    ``records`` holds (step, t, norm, x_mean) rows when requested.
    """

    state: WaveState
    norm_drift: float
    records: list[tuple[int, float, float, float]]


def evolve(state: WaveState, dt: float, n_steps: int, record_every: int = 0) -> EvolutionTrace:
    """Run ``n_steps`` updates, tracking norm drift at every step.

    With record_every = m > 0, (step, t, norm, <x>) is recorded at step
    0, every m-th step, and the final step.
    """
    dt = _check_dt(dt)
    if n_steps < 1:
        raise ConfigError(f"n_steps must be >= 1, got {n_steps}")
    prop = _propagator(state.grid, state.bc, state.potential, dt)
    current = replace(state, psi=state.psi.copy())
    norm0 = current.norm()
    drift = 0.0
    records: list[tuple[int, float, float, float]] = []
    if record_every > 0:
        records.append((0, current.t, current.norm(), current.x_mean()))
    for i in range(1, n_steps + 1):
        current.psi = prop.apply(current.psi)
        current.t += dt
        drift = max(drift, abs(current.norm() / norm0 - 1.0))
        if record_every > 0 and (i % record_every == 0 or i == n_steps):
            records.append((i, current.t, current.norm(), current.x_mean()))
    return EvolutionTrace(state=current, norm_drift=drift, records=records)


def weighted_distance(a: WaveState, b: WaveState) -> float:
    """Discrete L2 distance between two states on the same grid."""
    if a.grid != b.grid:
        raise ConfigError("states live on different grids")
    w = _grid_weights(a.grid)
    return math.sqrt(float(np.sum(w * np.abs(a.psi - b.psi) ** 2)) * a.grid.h)


def weighted_overlap(u: WaveState, v: WaveState) -> complex:
    """Discrete inner product <u, v> = sum w conj(u) v h."""
    if u.grid != v.grid:
        raise ConfigError("states live on different grids")
    w = _grid_weights(u.grid)
    return complex(np.sum(w * np.conj(u.psi) * v.psi) * u.grid.h)


@dataclass
class ComparisonResult:
    """Outcome of evolving the same packet under two wall treatments.

    ``distance`` is the L2 distance of the final states and ``overlap``
    the inner product <psi_b, psi_a> (realization first). ``norm_drift``
    is the larger of the two runs' drifts.
    """

    L: float | None
    distance: float
    overlap: complex
    horizon: float
    n_steps: int
    norm_drift: float
    trace_a: EvolutionTrace
    trace_b: EvolutionTrace


def compare_evolutions(
    grid: Grid,
    packet: Packet,
    dt: float,
    horizon: float,
    bc_a: WallBC,
    potential_a: PotentialSpec | None,
    bc_b: WallBC,
    potential_b: PotentialSpec | None,
    L: float | None = None,
    record_every: int = 0,
) -> ComparisonResult:
    """Evolve the packet under setups a and b on one grid and compare."""
    dt = _check_dt(dt)
    if dt < 0.0 or horizon <= 0.0 or not math.isfinite(horizon):
        raise ConfigError(f"horizon and dt must be positive, got horizon={horizon}, dt={dt}")
    n_steps = round(horizon / dt)
    if n_steps < 1:
        raise ConfigError(f"horizon {horizon} is shorter than one step dt = {dt}")
    trace_a = evolve(
        init_gaussian(grid, packet.x0, packet.sigma, packet.k0, bc=bc_a, potential=potential_a),
        dt, n_steps, record_every=record_every,
    )
    trace_b = evolve(
        init_gaussian(grid, packet.x0, packet.sigma, packet.k0, bc=bc_b, potential=potential_b),
        dt, n_steps, record_every=record_every,
    )
    return ComparisonResult(
        L=L,
        distance=weighted_distance(trace_a.state, trace_b.state),
        overlap=weighted_overlap(trace_b.state, trace_a.state),
        horizon=n_steps * dt,
        n_steps=n_steps,
        norm_drift=max(trace_a.norm_drift, trace_b.norm_drift),
        trace_a=trace_a,
        trace_b=trace_b,
    )


def reflect_and_compare(
    alpha: float,
    kind: PotentialKind | str,
    L: float | None,
    packet: Packet,
    horizon: float,
    dt: float,
    grid: Grid,
    record_every: int = 0,
) -> ComparisonResult:
    """Robin(alpha) evolution vs the calibrated realization of the same wall.

    Run a is the Robin boundary condition with no potential; run b is
    the hard wall with the calibrated layer of the given kind and width
    (or an identical Robin run for kind "robin", the control case).
    A sensible horizon lets the packet reach the wall and return,
    roughly |x0|/k0 and upward in these units.
    """
    kind = PotentialKind(kind)
    bc_a = WallBC.robin(alpha)
    if kind is PotentialKind.ROBIN:
        bc_b, potential_b, L = bc_a, None, None
    else:
        if L is None:
            raise ConfigError(f"{kind.value} realization requires a layer width L")
        bc_b = WallBC.dirichlet()
        potential_b = calibrated_spec(kind, L, alpha)
    return compare_evolutions(
        grid, packet, dt, horizon,
        bc_a=bc_a, potential_a=None,
        bc_b=bc_b, potential_b=potential_b,
        L=L, record_every=record_every,
    )
