"""Bounded continuous particle swarm optimizer (global best, synchronous).

Velocity and position of every particle follow the classic inertia-weight
update: per dimension,

    v <- inertia*v + cognitive*phi1*(pbest - x) + social*phi2*(gbest - x)
    x <- x + v

with phi1, phi2 drawn fresh, uniformly on [0, 1], per particle and per
dimension. Positions are clamped to the search box; velocities are clamped
componentwise to velocity_limit_fraction * (upper - lower). The global best
is advanced only after all fitness evaluations of an iteration complete, and
personal/global bests are replaced only on strict improvement, which keeps
runs deterministic for a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

FitnessFunction = Callable[[np.ndarray], float]


class FitnessError(RuntimeError):
    """A fitness evaluation failed; carries the offending position."""

    def __init__(self, position: np.ndarray, cause: BaseException):
        super().__init__(f"fitness evaluation failed at {position!r}: {cause}")
        self.position = np.array(position, dtype=float)


@dataclass
class PsoConfig:
    """Swarm geometry, coefficients, bounds, and stopping rule."""

    dims: int
    lower_bounds: np.ndarray
    upper_bounds: np.ndarray
    swarm_size: int = 30
    inertia: float = 0.729
    cognitive: float = 1.494
    social: float = 1.494
    max_iterations: int = 500
    target_fitness: float = 1e-6
    seed: int = 0
    # Fraction of (upper - lower) used as the componentwise velocity clamp.
    velocity_limit_fraction: float = 1.0

    def __post_init__(self) -> None:
        self.lower_bounds = np.asarray(self.lower_bounds, dtype=float)
        self.upper_bounds = np.asarray(self.upper_bounds, dtype=float)
        if self.dims < 1:
            raise ValueError("dims must be >= 1")
        if self.lower_bounds.shape != (self.dims,) or self.upper_bounds.shape != (
            self.dims,
        ):
            raise ValueError("bounds must be vectors of length dims")
        if not np.all(self.lower_bounds < self.upper_bounds):
            raise ValueError("every lower bound must be strictly below its upper bound")
        if min(self.inertia, self.cognitive, self.social) < 0:
            raise ValueError("inertia, cognitive and social coefficients must be >= 0")
        if self.swarm_size < 1:
            raise ValueError("swarm_size must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.target_fitness < 0:
            raise ValueError("target_fitness must be >= 0")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        if not 0 < self.velocity_limit_fraction <= 1:
            raise ValueError("velocity_limit_fraction must be in (0, 1]")

    @property
    def velocity_limit(self) -> np.ndarray:
        return self.velocity_limit_fraction * (self.upper_bounds - self.lower_bounds)


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    best_position: np.ndarray
    best_fitness: float = math.inf


@dataclass
class SwarmResult:
    """Best point found, its fitness, and the per-iteration gbest trace."""

    best_position: np.ndarray
    best_fitness: float
    iterations_run: int
    fitness_history: list[float]


def initialize(config: PsoConfig, rng: np.random.Generator) -> list[Particle]:
    """Draw the starting swarm.

    Positions are uniform inside the box; velocity components are uniform in
    [-(upper-lower), +(upper-lower)]. Personal bests start at the initial
    positions with unset (infinite) fitness; the first evaluation records it.
    """
    span = config.upper_bounds - config.lower_bounds
    particles = []
    for _ in range(config.swarm_size):
        position = config.lower_bounds + rng.random(config.dims) * span
        velocity = -span + rng.random(config.dims) * (2.0 * span)
        particles.append(Particle(position, velocity, position.copy()))
    return particles


def _evaluate(fitness: FitnessFunction, position: np.ndarray) -> float:
    try:
        return float(fitness(position))
    except Exception as exc:
        raise FitnessError(position, exc) from exc


def step(
    particles: Sequence[Particle],
    best_position: np.ndarray,
    best_fitness: float,
    config: PsoConfig,
    rng: np.random.Generator,
    fitness: FitnessFunction,
) -> tuple[np.ndarray, float]:
    """Advance the swarm one iteration; returns the (possibly new) global best.

    All particles move and are evaluated against the incumbent global best
    before it advances (synchronous update). Particles are mutated in place.
    """
    vmax = config.velocity_limit
    for particle in particles:
        phi1 = rng.random(config.dims)
        phi2 = rng.random(config.dims)
        particle.velocity = (
            config.inertia * particle.velocity
            + config.cognitive * phi1 * (particle.best_position - particle.position)
            + config.social * phi2 * (best_position - particle.position)
        )
        np.clip(particle.velocity, -vmax, vmax, out=particle.velocity)
        particle.position = particle.position + particle.velocity
        np.clip(
            particle.position,
            config.lower_bounds,
            config.upper_bounds,
            out=particle.position,
        )
        fitness_value = _evaluate(fitness, particle.position)
        if fitness_value < particle.best_fitness:
            particle.best_fitness = fitness_value
            particle.best_position = particle.position.copy()
    for particle in particles:
        if particle.best_fitness < best_fitness:
            best_fitness = particle.best_fitness
            best_position = particle.best_position.copy()
    return best_position, best_fitness


def minimize(config: PsoConfig, fitness: FitnessFunction) -> SwarmResult:
    """Run the optimizer until the iteration budget or target fitness is hit.

    The fitness history holds the global best after initialization plus one
    entry per iteration; it is monotone non-increasing. Identical seeds give
    bit-identical results.
    """
    rng = np.random.default_rng(config.seed)
    particles = initialize(config, rng)
    for particle in particles:
        particle.best_fitness = _evaluate(fitness, particle.position)
    best_position = particles[0].best_position.copy()
    best_fitness = particles[0].best_fitness
    for particle in particles[1:]:
        if particle.best_fitness < best_fitness:
            best_fitness = particle.best_fitness
            best_position = particle.best_position.copy()
    history = [best_fitness]
    iterations = 0
    while iterations < config.max_iterations and best_fitness > config.target_fitness:
        best_position, best_fitness = step(
            particles, best_position, best_fitness, config, rng, fitness
        )
        history.append(best_fitness)
        iterations += 1
    return SwarmResult(best_position.copy(), best_fitness, iterations, history)
