"""Shooting oracle: reflection amplitudes by direct ODE integration.

Ground truth for the closed forms in :mod:`robinwall.analytic`, computed
without them. The stationary equation -psi'' + V psi = k^2 psi is
integrated leftward from the wall with psi(0) = 0, psi'(0) = 1 using
classical fixed-step RK4 on the system (psi, psi'); a delta layer enters
as the exact derivative jump psi'(-L-) = psi'(-L+) - lam*psi(-L) applied
at a grid node. In the free region x < -L the solution is decomposed
into A*exp(ikx) + B*exp(-ikx), and b = B/A. The arbitrary shooting
normalization divides out of that ratio.

Step sizes: the requested h is shrunk per segment to the nearest value
that divides the segment exactly, so the layer edge and the stop point
land on nodes; the adjusted values are recorded on the returned state.
The integration is real (real initial data, real potential) but the
state is stored complex since the decomposition is.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numba

from .analytic import PotentialKind, PotentialSpec
from .errors import DomainError

__all__ = [
    "DEFAULT_STEP",
    "FREE_REGION_MARGIN",
    "ShootingState",
    "shoot",
    "extract_reflection",
    "oracle_reflection",
]

DEFAULT_STEP = 1e-5
FREE_REGION_MARGIN = 1.0


@dataclass(frozen=True)
class ShootingState:
    """Shooting solution (psi, psi') at position x.

    ``layer_psi``/``layer_dpsi`` are the interior-side values at the
    layer edge x = -L, recorded on the way out; ``h_interior`` and
    ``h_exterior`` are the per-segment step sizes actually used after
    the commensurability adjustment.
    """

    x: float
    psi: complex
    dpsi: complex
    layer_psi: complex | None = None
    layer_dpsi: complex | None = None
    h_interior: float | None = None
    h_exterior: float | None = None


@numba.njit(cache=True)
def _rk4_constant(psi: float, dpsi: float, q: float, h: float, n: int):
    """n RK4 steps of size h (signed) for psi'' = q*psi, q constant."""
    for _ in range(n):
        k1p = dpsi
        k1d = q * psi
        k2p = dpsi + 0.5 * h * k1d
        k2d = q * (psi + 0.5 * h * k1p)
        k3p = dpsi + 0.5 * h * k2d
        k3d = q * (psi + 0.5 * h * k2p)
        k4p = dpsi + h * k3d
        k4d = q * (psi + h * k3p)
        psi = psi + (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        dpsi = dpsi + (h / 6.0) * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
    return psi, dpsi


def _segment_step(length: float, h: float) -> tuple[float, int]:
    """Largest step <= h that divides ``length`` into whole steps."""
    n = max(1, math.ceil(length / h - 1e-12))
    return length / n, n


def shoot(
    spec: PotentialSpec,
    k: float,
    x_stop: float | None = None,
    h: float = DEFAULT_STEP,
) -> ShootingState:
    """Integrate from the wall out to ``x_stop`` in the free region.

    ``x_stop`` defaults to -L - 1; any point with x_stop < -L is
    equivalent for the subsequent plane-wave decomposition.
    """
    if spec.kind is PotentialKind.ROBIN:
        raise DomainError("shooting applies to the layered kinds; the Robin wall has no potential region")
    k = float(k)
    if not (math.isfinite(k) and k > 0.0):
        raise DomainError(f"wave number k must be > 0, got {k}")
    if not (math.isfinite(h) and h > 0.0):
        raise DomainError(f"step size h must be > 0, got {h}")
    L = spec.L
    if x_stop is None:
        x_stop = -L - FREE_REGION_MARGIN
    x_stop = float(x_stop)
    if not (math.isfinite(x_stop) and x_stop < -L):
        raise DomainError(f"x_stop must lie in the free region x < -L = {-L}, got {x_stop}")

    if spec.kind is PotentialKind.VALLEY:
        q_in = -(k * k + spec.v)
    else:
        q_in = -k * k
    h_in, n_in = _segment_step(L, h)
    psi, dpsi = _rk4_constant(0.0, 1.0, q_in, -h_in, n_in)
    layer_psi, layer_dpsi = psi, dpsi

    if spec.kind is PotentialKind.DELTA:
        dpsi = dpsi - spec.lam * psi

    h_out, n_out = _segment_step(-L - x_stop, h)
    psi, dpsi = _rk4_constant(psi, dpsi, -k * k, -h_out, n_out)

    return ShootingState(
        x=x_stop,
        psi=complex(psi),
        dpsi=complex(dpsi),
        layer_psi=complex(layer_psi),
        layer_dpsi=complex(layer_dpsi),
        h_interior=h_in,
        h_exterior=h_out,
    )


def extract_reflection(state: ShootingState, k: float) -> complex:
    """Decompose a free-region state into plane waves and return b = B/A.

    Solves psi = A e^{ikx} + B e^{-ikx}, psi' = ik(A e^{ikx} - B e^{-ikx})
    at x = state.x. Invariant under any complex rescaling of the state.
    A = 0 would require |B/A| unbounded, impossible for a real potential
    with an impenetrable wall; it is guarded against anyway.
    """
    k = float(k)
    if not (math.isfinite(k) and k > 0.0):
        raise DomainError(f"wave number k must be > 0, got {k}")
    phase = cmath.exp(1j * k * state.x)
    a = (state.psi - 1j * state.dpsi / k) / (2.0 * phase)
    b_cof = (state.psi + 1j * state.dpsi / k) * phase / 2.0
    if abs(a) <= 1e-12 * abs(b_cof):
        raise DomainError("degenerate decomposition: no incoming component in the shot solution")
    return b_cof / a


def oracle_reflection(
    spec: PotentialSpec,
    k: float,
    h: float = DEFAULT_STEP,
    x_stop: float | None = None,
) -> complex:
    """Reflection amplitude of ``spec`` recovered purely by shooting."""
    return extract_reflection(shoot(spec, k, x_stop=x_stop, h=h), k)
