"""Dominant-pole placement and the characteristic-equation residual fitness.

Design requirements (overshoot and rise time, or damping ratio and natural
frequency directly) fix a complex-conjugate dominant pole pair. Forcing a
pole to satisfy the closed-loop characteristic equation constrains the five
controller parameters; the constraint violation is folded into a scalar
fitness that a bounded particle swarm minimizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .cpower import cpow
from .plant import ControllerParams, FractionalTransferFunction
from .pso import PsoConfig, SwarmResult, minimize

Mode = Literal["fractional", "integer"]

# Search-box defaults for (kp, ti, td, lam, delta).
DEFAULT_KP_BOUNDS = (1.0, 1000.0)
DEFAULT_TI_BOUNDS = (1.0, 500.0)
DEFAULT_TD_BOUNDS = (1.0, 500.0)
DEFAULT_ORDER_BOUNDS = (0.0, 2.0)

# Componentwise velocity clamp fraction used by tune()'s default optimizer
# setup. A full-range clamp lets early overshoots pile the swarm onto a
# bound corner where it stalls; 0.05 measured best on the bundled problems.
DEFAULT_VELOCITY_FRACTION = 0.05


@dataclass(frozen=True)
class DominantPoles:
    """Conjugate pole pair -x +/- jy with x > 0 (decay) and y > 0 (ringing)."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (self.x > 0 and self.y > 0):
            raise ValueError("pole pair requires x > 0 and y > 0")
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("pole coordinates must be finite")

    @property
    def upper(self) -> complex:
        """The pole in the upper half plane, -x + jy."""
        return complex(-self.x, self.y)

    @property
    def lower(self) -> complex:
        """The conjugate pole, -x - jy."""
        return complex(-self.x, -self.y)


def poles_from_damping(zeta: float, omega0: float) -> DominantPoles:
    """Place the dominant pair at -zeta*omega0 +/- j*omega0*sqrt(1 - zeta^2).

    Requires an underdamped specification: 0 < zeta < 1 and omega0 > 0.
    """
    if not 0 < zeta < 1:
        raise ValueError(f"zeta must be in (0, 1) for a complex pole pair, got {zeta}")
    if not omega0 > 0:
        raise ValueError(f"omega0 must be positive, got {omega0}")
    return DominantPoles(x=zeta * omega0, y=omega0 * math.sqrt(1.0 - zeta * zeta))


def spec_to_damping(mp: float, trise: float) -> tuple[float, float]:
    """Map (peak overshoot fraction, 10-90-ish rise time) to (zeta, omega0).

    Classical underdamped second-order relations:
        zeta   = -ln(mp) / sqrt(pi^2 + ln(mp)^2)
        omega0 = (pi - arccos(zeta)) / (trise * sqrt(1 - zeta^2))
    """
    if not 0 < mp < 1:
        raise ValueError(f"mp must be a fraction in (0, 1), got {mp}")
    if not trise > 0:
        raise ValueError(f"trise must be positive, got {trise}")
    log_mp = math.log(mp)
    zeta = -log_mp / math.sqrt(math.pi**2 + log_mp**2)
    omega0 = (math.pi - math.acos(zeta)) / (trise * math.sqrt(1.0 - zeta * zeta))
    return zeta, omega0


@dataclass(frozen=True)
class DesignSpec:
    """Either (mp, trise) or (zeta, omega0); exactly one form is active."""

    mp: float | None = None
    trise: float | None = None
    zeta: float | None = None
    omega0: float | None = None

    def __post_init__(self) -> None:
        overshoot_form = self.mp is not None or self.trise is not None
        damping_form = self.zeta is not None or self.omega0 is not None
        if overshoot_form and damping_form:
            raise ValueError("give either (mp, trise) or (zeta, omega0), not both")
        if overshoot_form:
            if self.mp is None or self.trise is None:
                raise ValueError("overshoot form needs both mp and trise")
            if not 0 < self.mp < 1:
                raise ValueError(f"mp must be a fraction in (0, 1), got {self.mp}")
            if not self.trise > 0:
                raise ValueError(f"trise must be positive, got {self.trise}")
        elif damping_form:
            if self.zeta is None or self.omega0 is None:
                raise ValueError("damping form needs both zeta and omega0")
            if not 0 < self.zeta < 1:
                raise ValueError(f"zeta must be in (0, 1), got {self.zeta}")
            if not self.omega0 > 0:
                raise ValueError(f"omega0 must be positive, got {self.omega0}")
        else:
            raise ValueError("empty design spec")

    def damping(self) -> tuple[float, float]:
        if self.zeta is not None:
            return self.zeta, self.omega0  # type: ignore[return-value]
        return spec_to_damping(self.mp, self.trise)  # type: ignore[arg-type]

    def poles(self) -> DominantPoles:
        return poles_from_damping(*self.damping())


@dataclass(frozen=True)
class ParameterBounds:
    """Inclusive search ranges for the five controller parameters."""

    kp: tuple[float, float] = DEFAULT_KP_BOUNDS
    ti: tuple[float, float] = DEFAULT_TI_BOUNDS
    td: tuple[float, float] = DEFAULT_TD_BOUNDS
    lam: tuple[float, float] = DEFAULT_ORDER_BOUNDS
    delta: tuple[float, float] = DEFAULT_ORDER_BOUNDS

    def vectors(self, mode: Mode) -> tuple[np.ndarray, np.ndarray]:
        """Lower/upper bound vectors for the given search mode."""
        gains = [self.kp, self.ti, self.td]
        ranges = gains + ([self.lam, self.delta] if mode == "fractional" else [])
        lower = np.array([lo for lo, _ in ranges])
        upper = np.array([hi for _, hi in ranges])
        return lower, upper


@dataclass(frozen=True)
class ResidualValue:
    """Real part, imaginary part, phase, and the scalar fitness |r|+|i|+|p|."""

    r: float
    i: float
    p: float
    f: float


@dataclass(frozen=True)
class TuningProblem:
    """Plant, target pole pair, search mode, and parameter box.

    Integer mode pins lam = delta = 1 and searches only (kp, ti, td).
    """

    plant: FractionalTransferFunction
    poles: DominantPoles
    mode: Mode = "fractional"
    bounds: ParameterBounds = field(default_factory=ParameterBounds)

    def __post_init__(self) -> None:
        if self.mode not in ("fractional", "integer"):
            raise ValueError(f"mode must be 'fractional' or 'integer', got {self.mode!r}")

    @property
    def dims(self) -> int:
        return 5 if self.mode == "fractional" else 3

    def decode(self, position: np.ndarray) -> ControllerParams:
        """Translate an optimizer position vector into controller parameters."""
        values = [float(v) for v in position]
        if self.mode == "fractional":
            if len(values) != 5:
                raise ValueError("fractional mode expects a 5-vector")
            return ControllerParams(*values)
        if len(values) != 3:
            raise ValueError("integer mode expects a 3-vector")
        return ControllerParams(values[0], values[1], values[2], 1.0, 1.0)

    def fitness(self, position: np.ndarray) -> float:
        return residual(self.decode(position), self).f


def _phase(r: float, i: float) -> float:
    """atan(i/r) with the conventions p=0 at the origin, +/-pi/2 on r=0."""
    if r == 0.0:
        if i == 0.0:
            return 0.0
        return math.copysign(math.pi / 2.0, i)
    return math.atan(i / r)


def residual(
    params: ControllerParams, problem: TuningProblem, conjugate: bool = False
) -> ResidualValue:
    """Characteristic-equation residual at the dominant pole.

    The unity-feedback characteristic condition 1 + Gc(p)*Gp(p) = 0 is
    evaluated with the plant denominator cleared: the returned complex value
    is Dp(p) + Gc(p)*Np(p), whose zero set matches the original condition
    wherever Dp(p) != 0 and whose real/imaginary split matches the
    hand-derived component expressions for the bundled benchmark. The phase
    is atan(i/r) (not the quadrant-corrected form) and the fitness is
    f = |r| + |i| + |p|.

    Raises:
        ValueError: if the plant denominator vanishes at the pole.
    """
    pole = problem.poles.lower if conjugate else problem.poles.upper
    den_value = problem.plant.denominator.evaluate(pole)
    # Collision guard: the pole must not be (numerically) a plant pole, or the
    # cleared expression no longer represents the characteristic condition.
    den_scale = sum(
        abs(c) * abs(pole) ** e for c, e in problem.plant.denominator.terms
    )
    if abs(den_value) <= 1e-12 * den_scale:
        raise ValueError(f"plant denominator vanishes at the design pole {pole}")
    num_value = problem.plant.numerator.evaluate(pole)
    gc_value = (
        params.kp
        + params.ti * cpow(pole, -params.lam)
        + params.td * cpow(pole, params.delta)
    )
    expression = den_value + gc_value * num_value
    r = expression.real
    i = expression.imag
    p = _phase(r, i)
    return ResidualValue(r=r, i=i, p=p, f=abs(r) + abs(i) + abs(p))


def default_pso_config(problem: TuningProblem, seed: int = 0, **overrides) -> PsoConfig:
    """Optimizer setup matched to a tuning problem's mode and bounds."""
    lower, upper = problem.bounds.vectors(problem.mode)
    settings = dict(
        dims=problem.dims,
        lower_bounds=lower,
        upper_bounds=upper,
        seed=seed,
        velocity_limit_fraction=DEFAULT_VELOCITY_FRACTION,
    )
    settings.update(overrides)
    return PsoConfig(**settings)


def tune(
    problem: TuningProblem, pso: PsoConfig | None = None, seed: int = 0
) -> tuple[ControllerParams, SwarmResult]:
    """Minimize the residual fitness and decode the best particle.

    The returned parameters reproduce the reported fitness exactly:
    residual(params, problem).f == result.best_fitness. Non-convergence
    (best fitness above target) is not an error; callers decide how to flag
    it.
    """
    if pso is None:
        pso = default_pso_config(problem, seed=seed)
    if pso.dims != problem.dims:
        raise ValueError(
            f"optimizer dims {pso.dims} do not match {problem.mode} mode "
            f"(expected {problem.dims})"
        )
    lower, upper = problem.bounds.vectors(problem.mode)
    if not (
        np.array_equal(pso.lower_bounds, lower)
        and np.array_equal(pso.upper_bounds, upper)
    ):
        raise ValueError("optimizer bounds do not match the problem bounds")
    result = minimize(pso, problem.fitness)
    return problem.decode(result.best_position), result
