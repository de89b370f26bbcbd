"""Closed-form reflection amplitudes for soft walls on the half line.

Everything here concerns stationary solutions of

    -psi'' + V(x) psi = k^2 psi      on (-inf, 0],  k > 0,

in units hbar^2/2m = 1, with unit incoming wave exp(ikx). Three wall
models are supported:

* ``robin``   -- no potential, boundary condition psi'(0) = alpha*psi(0)
  (alpha = 0 is the Neumann wall).
* ``delta``   -- hard wall psi(0) = 0 plus a point potential
  lam * delta(x + L) a distance L in front of it.
* ``valley``  -- hard wall psi(0) = 0 plus a constant well -v on [-L, 0].

With the calibrated strengths ``lam = -(1/L + alpha)`` and
``v = (pi/(2L) + 2*alpha/pi)**2`` the layered walls reflect like the
Robin wall up to an O(L) error, which :func:`convergence_curve`
measures. All reflection amplitudes are unimodular (the wall is
impenetrable and the potential real), which the tests lean on heavily.

The interior coefficient and the valley amplitude are evaluated in
sin/cos form rather than the equivalent ``1/(1 - exp(2ikL))`` and
``cot(KL)`` forms, whose removable singularities at k*L = n*pi and
K*L = n*pi are numerically hostile.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .errors import ConfigError, DomainError

__all__ = [
    "PotentialKind",
    "ScatterInput",
    "PotentialSpec",
    "ReflectionResult",
    "PiecewiseEigenfunction",
    "ResidualReport",
    "ConvergencePoint",
    "robin_reflection",
    "calibrate_delta",
    "calibrate_valley",
    "delta_reflection",
    "valley_reflection",
    "calibrated_spec",
    "eigenfunction",
    "eval_eigenfunction",
    "boundary_residuals",
    "convergence_curve",
]


class PotentialKind(str, Enum):
    """Tag for the three wall models."""

    ROBIN = "robin"
    DELTA = "delta"
    VALLEY = "valley"


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def _require_wavenumber(k: float) -> float:
    k = _require_finite("k", k)
    if k <= 0.0:
        raise DomainError(f"wave number k must be > 0, got {k}")
    return k


def _require_width(L: float) -> float:
    L = _require_finite("L", L)
    if L <= 0.0:
        raise DomainError(f"layer width L must be > 0, got {L}")
    return L


@dataclass(frozen=True)
class ScatterInput:
    """Independent variables of a scattering problem.

    ``L`` is None for the pure Robin wall, which has no layer.
    """

    k: float
    alpha: float
    L: float | None = None

    def __post_init__(self) -> None:
        _require_wavenumber(self.k)
        _require_finite("alpha", self.alpha)
        if self.L is not None:
            _require_width(self.L)


@dataclass(frozen=True)
class PotentialSpec:
    """Tagged description of the wall-adjacent potential.

    ``lam`` is the delta strength (any real sign), ``v`` the valley
    depth (>= 0); each is present only for its own kind.
    """

    kind: PotentialKind
    L: float | None = None
    lam: float | None = None
    v: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", PotentialKind(self.kind))
        if self.kind is PotentialKind.ROBIN:
            if self.L is not None or self.lam is not None or self.v is not None:
                raise ConfigError("a pure Robin wall has no layer parameters")
            return
        if self.L is None:
            raise ConfigError(f"{self.kind.value} layer requires a width L")
        _require_width(self.L)
        if self.kind is PotentialKind.DELTA:
            if self.lam is None or self.v is not None:
                raise ConfigError("delta layer takes lam only")
            _require_finite("lam", self.lam)
        else:
            if self.v is None or self.lam is not None:
                raise ConfigError("valley takes v only")
            _require_finite("v", self.v)
            if self.v < 0.0:
                raise DomainError(f"valley depth v must be >= 0, got {self.v}")

    @classmethod
    def robin(cls) -> "PotentialSpec":
        return cls(PotentialKind.ROBIN)

    @classmethod
    def delta_layer(cls, lam: float, L: float) -> "PotentialSpec":
        return cls(PotentialKind.DELTA, L=L, lam=lam)

    @classmethod
    def valley(cls, v: float, L: float) -> "PotentialSpec":
        return cls(PotentialKind.VALLEY, L=L, v=v)


@dataclass(frozen=True)
class ReflectionResult:
    """Exterior reflection amplitude b and interior amplitude c.

    ``c`` is None for the pure Robin wall, which has no interior region.
    |b| = 1 for every real-parameter input.
    """

    b: complex
    c: complex | None = None


def robin_reflection(k: float, alpha: float) -> complex:
    """Reflection amplitude (k + i*alpha)/(k - i*alpha) of the Robin wall.

    The boundary condition psi'(0) = alpha*psi(0) applied to
    exp(ikx) + b*exp(-ikx) fixes b uniquely; the result is unimodular.
    """
    k = _require_wavenumber(k)
    alpha = _require_finite("alpha", alpha)
    return complex(k, alpha) / complex(k, -alpha)


def calibrate_delta(L: float, alpha: float) -> float:
    """Delta strength lam = -(1/L + alpha) that targets Robin parameter alpha."""
    L = _require_width(L)
    alpha = _require_finite("alpha", alpha)
    return -(1.0 / L + alpha)


def calibrate_valley(L: float, alpha: float) -> float:
    """Valley depth v = (pi/(2L) + 2*alpha/pi)**2 that targets Robin parameter alpha.

    Requires pi/(2L) + 2*alpha/pi > 0, i.e. L < -pi**2/(4*alpha) when
    alpha < 0 (always satisfied for alpha >= 0).
    """
    L = _require_width(L)
    alpha = _require_finite("alpha", alpha)
    root = math.pi / (2.0 * L) + 2.0 * alpha / math.pi
    if root <= 0.0:
        raise DomainError(
            f"valley calibration needs pi/(2L) + 2*alpha/pi > 0; "
            f"for alpha = {alpha} this means L < -pi**2/(4*alpha) = "
            f"{-math.pi ** 2 / (4.0 * alpha):.6g}, got L = {L}"
        )
    return root * root


def delta_reflection(k: float, L: float, lam: float) -> ReflectionResult:
    """Solve the delta-layer matching system for (b, c).

    Matching at x = -L imposes continuity of psi and the derivative jump
    psi'(-L+) - psi'(-L-) = lam*psi(-L); the hard wall forces the
    interior wave c*(exp(ikx) - exp(-ikx)). The common denominator
    k*exp(-ikL) + lam*sin(kL) never vanishes for real k > 0: its
    imaginary part -k*sin(kL) is zero only at sin(kL) = 0, where the
    real part is k*cos(kL) = +-k != 0.
    """
    k = _require_wavenumber(k)
    L = _require_width(L)
    lam = _require_finite("lam", lam)
    kl = k * L
    s = math.sin(kl)
    den = k * cmath.exp(-1j * kl) + lam * s
    b = -cmath.exp(-2j * kl) * (k * cmath.exp(1j * kl) + lam * s) / den
    c = k * cmath.exp(-1j * kl) / den
    return ReflectionResult(b=b, c=c)


def valley_reflection(k: float, L: float, v: float) -> ReflectionResult:
    """Solve the valley matching system for (b, c).

    Inside the well the wave number is K = sqrt(k^2 + v); matching at
    x = -L imposes continuity of psi and psi'. The denominator
    k*sin(KL) + i*K*cos(KL) has squared modulus
    k^2 sin^2(KL) + K^2 cos^2(KL) >= k^2 > 0 (K >= k), so no special
    casing is needed.
    """
    k = _require_wavenumber(k)
    L = _require_width(L)
    v = _require_finite("v", v)
    if v < 0.0:
        raise DomainError(f"valley depth v must be >= 0, got {v}")
    K = math.sqrt(k * k + v)
    kl = k * L
    KL = K * L
    sK = math.sin(KL)
    cK = math.cos(KL)
    b = cmath.exp(-2j * kl) * complex(k * sK, -K * cK) / complex(k * sK, K * cK)
    c = k * cmath.exp(-1j * kl) / complex(K * cK, -k * sK)
    return ReflectionResult(b=b, c=c)


def calibrated_spec(kind: PotentialKind | str, L: float, alpha: float) -> PotentialSpec:
    """Layer spec of the given kind with the strength calibrated for alpha."""
    kind = PotentialKind(kind)
    if kind is PotentialKind.DELTA:
        return PotentialSpec.delta_layer(calibrate_delta(L, alpha), L)
    if kind is PotentialKind.VALLEY:
        return PotentialSpec.valley(calibrate_valley(L, alpha), L)
    raise ConfigError("only delta and valley layers have a calibrated strength")


@dataclass(frozen=True)
class PiecewiseEigenfunction:
    """Generalized eigenfunction assembled from plane-wave coefficients.

    Exterior (x < -L): exp(ikx) + b*exp(-ikx). Interior (-L <= x <= 0):
    c*(exp(iKx) - exp(-iKx)) with K = k for the delta layer and
    K = sqrt(k^2 + v) for the valley. The Robin wall uses the exterior
    form everywhere on x <= 0.
    """

    scatter: ScatterInput
    spec: PotentialSpec
    coeffs: ReflectionResult
    K: float

    def __call__(self, x: float) -> complex:
        return eval_eigenfunction(self, x)

    def derivative(self, x: float) -> complex:
        """Analytic derivative of the active plane-wave branch at x."""
        _check_position(self, x)
        k = self.scatter.k
        b = self.coeffs.b
        if self.spec.kind is PotentialKind.ROBIN or x < -self.spec.L:
            return 1j * k * (cmath.exp(1j * k * x) - b * cmath.exp(-1j * k * x))
        c = self.coeffs.c
        K = self.K
        return 1j * K * c * (cmath.exp(1j * K * x) + cmath.exp(-1j * K * x))


def eigenfunction(
    k: float, spec: PotentialSpec, alpha: float = 0.0
) -> PiecewiseEigenfunction:
    """Solve the matching system for ``spec`` and wrap it as an eigenfunction.

    ``alpha`` is only consulted for the Robin kind (the layered kinds
    carry their strength in the spec); it is stored either way so
    :func:`boundary_residuals` can check the Robin condition.
    """
    kind = spec.kind
    if kind is PotentialKind.ROBIN:
        coeffs = ReflectionResult(b=robin_reflection(k, alpha))
        K = float(k)
    elif kind is PotentialKind.DELTA:
        coeffs = delta_reflection(k, spec.L, spec.lam)
        K = float(k)
    else:
        coeffs = valley_reflection(k, spec.L, spec.v)
        K = math.sqrt(k * k + spec.v)
    return PiecewiseEigenfunction(
        scatter=ScatterInput(k=k, alpha=alpha, L=spec.L),
        spec=spec,
        coeffs=coeffs,
        K=K,
    )


def _check_position(eig: PiecewiseEigenfunction, x: float) -> None:
    x = _require_finite("x", x)
    if x > 0.0:
        raise DomainError(f"x = {x} lies beyond the wall at x = 0")


def eval_eigenfunction(eig: PiecewiseEigenfunction, x: float) -> complex:
    """Evaluate the eigenfunction at x <= 0."""
    _check_position(eig, x)
    k = eig.scatter.k
    b = eig.coeffs.b
    if eig.spec.kind is PotentialKind.ROBIN or x < -eig.spec.L:
        return cmath.exp(1j * k * x) + b * cmath.exp(-1j * k * x)
    c = eig.coeffs.c
    K = eig.K
    return c * (cmath.exp(1j * K * x) - cmath.exp(-1j * K * x))


@dataclass(frozen=True)
class ResidualReport:
    """Absolute residuals of the matching/boundary conditions.

    Fields are None where the condition does not apply to the kind:
    the Robin wall has only ``robin``; the layered walls have ``wall``,
    ``continuity`` and ``jump_or_smoothness`` (derivative jump equal to
    lam*psi(-L) for the delta layer, derivative continuity for the
    valley). Derivatives come from the plane-wave branches, not from
    numerical differencing.
    """

    wall: float | None = None
    continuity: float | None = None
    jump_or_smoothness: float | None = None
    robin: float | None = None

    def worst(self) -> float:
        applicable = (self.wall, self.continuity, self.jump_or_smoothness, self.robin)
        return max(r for r in applicable if r is not None)


def boundary_residuals(eig: PiecewiseEigenfunction) -> ResidualReport:
    """Evaluate how well the stored coefficients satisfy their conditions.

    For coefficients produced by :func:`eigenfunction` every applicable
    residual is at rounding level; perturbed coefficients give O(1)
    residuals, which is what makes this a useful detector.
    """
    k = eig.scatter.k
    b = eig.coeffs.b
    if eig.spec.kind is PotentialKind.ROBIN:
        alpha = eig.scatter.alpha
        psi0 = 1.0 + b
        dpsi0 = 1j * k * (1.0 - b)
        return ResidualReport(robin=abs(dpsi0 - alpha * psi0))

    L = eig.spec.L
    c = eig.coeffs.c
    K = eig.K
    # exterior branch at -L
    e_out = cmath.exp(-1j * k * L)
    psi_out = e_out + b / e_out
    dpsi_out = 1j * k * (e_out - b / e_out)
    # interior branch at -L and at the wall
    e_in = cmath.exp(-1j * K * L)
    psi_in = c * (e_in - 1.0 / e_in)
    dpsi_in = 1j * K * c * (e_in + 1.0 / e_in)
    wall = abs(eval_eigenfunction(eig, 0.0))
    continuity = abs(psi_out - psi_in)
    if eig.spec.kind is PotentialKind.DELTA:
        jump = abs(dpsi_in - dpsi_out - eig.spec.lam * psi_in)
    else:
        jump = abs(dpsi_in - dpsi_out)
    return ResidualReport(wall=wall, continuity=continuity, jump_or_smoothness=jump)


@dataclass(frozen=True)
class ConvergencePoint:
    """One row of a convergence curve.

    ``order`` is the observed order between this width and the previous
    one, log(err_prev/err)/log(L_prev/L); None on the first row.
    """

    L: float
    error: float
    order: float | None


def convergence_curve(
    k: float,
    alpha: float,
    kind: PotentialKind | str,
    Ls: list[float],
) -> list[ConvergencePoint]:
    """Error |b(L) - b_robin| of the calibrated layer along descending widths.

    Each row uses the strength calibrated for (L, alpha). The complex
    modulus is used as the error metric so both phase and (absent)
    amplitude error are captured.
    """
    kind = PotentialKind(kind)
    if kind is PotentialKind.ROBIN:
        raise ConfigError("convergence is measured for the layered kinds only")
    if len(Ls) < 2:
        raise ConfigError("need at least two widths to observe convergence")
    widths = [_require_width(L) for L in Ls]
    if any(later >= earlier for earlier, later in zip(widths, widths[1:])):
        raise ConfigError("widths must be strictly descending")

    target = robin_reflection(k, alpha)
    points: list[ConvergencePoint] = []
    prev: ConvergencePoint | None = None
    for L in widths:
        if kind is PotentialKind.DELTA:
            b = delta_reflection(k, L, calibrate_delta(L, alpha)).b
        else:
            b = valley_reflection(k, L, calibrate_valley(L, alpha)).b
        err = abs(b - target)
        order = None
        if prev is not None and err > 0.0 and prev.error > 0.0:
            order = math.log(prev.error / err) / math.log(prev.L / L)
        prev = ConvergencePoint(L=L, error=err, order=order)
        points.append(prev)
    return points
