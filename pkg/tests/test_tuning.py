"""Tests for pole placement, the residual fitness, and tuning."""

import math

import numpy as np
import pytest

from fopid import benchmarks
from fopid.plant import ControllerParams, FractionalTransferFunction
from fopid.pso import PsoConfig
from fopid.tuning import (
    DesignSpec,
    DominantPoles,
    ParameterBounds,
    TuningProblem,
    default_pso_config,
    poles_from_damping,
    residual,
    spec_to_damping,
    tune,
)

INTEGER_PARAMS = ControllerParams(214.84, 361.57, 76.76, 1.0, 1.0)
FRACTIONAL_PARAMS = ControllerParams(442.68, 324.03, 115.27, 1.5, 1.41)


class TestPolesFromDamping:
    def test_design_point(self):
        poles = poles_from_damping(0.65, 2.2)
        assert poles.x == pytest.approx(1.43, rel=1e-12)
        assert poles.y == pytest.approx(1.672, abs=5e-4)

    def test_nearly_undamped(self):
        poles = poles_from_damping(1e-9, 3.0)
        assert poles.x == pytest.approx(0.0, abs=1e-8)
        assert poles.y == pytest.approx(3.0, rel=1e-12)

    def test_half_damping(self):
        poles = poles_from_damping(0.5, 2.0)
        assert poles.x == 1.0
        assert poles.y == pytest.approx(math.sqrt(3.0), rel=1e-15)

    def test_radius_and_decay_invariants(self):
        for zeta, omega0 in [(0.1, 0.5), (0.65, 2.2), (0.93, 11.0)]:
            poles = poles_from_damping(zeta, omega0)
            assert math.hypot(poles.x, poles.y) == pytest.approx(omega0, rel=1e-12)
            assert poles.x == pytest.approx(zeta * omega0, rel=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            poles_from_damping(1.0, 2.0)
        with pytest.raises(ValueError):
            poles_from_damping(0.5, 0.0)

    def test_pole_pair_values(self):
        poles = DominantPoles(1.43, 1.67)
        assert poles.upper == complex(-1.43, 1.67)
        assert poles.lower == complex(-1.43, -1.67)


class TestSpecToDamping:
    def test_ten_percent_overshoot(self):
        zeta, omega0 = spec_to_damping(0.10, 0.3)
        assert zeta == pytest.approx(0.5912, abs=1e-4)
        assert omega0 == pytest.approx(9.1057, abs=1e-3)

    def test_round_trip_through_overshoot_formula(self):
        # Independent check: zeta must invert the overshoot relation
        # mp = exp(-pi*zeta/sqrt(1-zeta^2)).
        for mp in (0.02, 0.1, 0.35, 0.8):
            zeta, _ = spec_to_damping(mp, 1.0)
            back = math.exp(-math.pi * zeta / math.sqrt(1.0 - zeta * zeta))
            assert back == pytest.approx(mp, rel=1e-12)

    def test_full_overshoot_limit(self):
        zeta, _ = spec_to_damping(0.999999, 1.0)
        assert zeta == pytest.approx(0.0, abs=1e-5)

    def test_exp_minus_pi_gives_sqrt_half(self):
        zeta, _ = spec_to_damping(math.exp(-math.pi), 1.0)
        assert zeta == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-12)


class TestDesignSpec:
    def test_damping_form(self):
        spec = DesignSpec(zeta=0.65, omega0=2.2)
        assert spec.damping() == (0.65, 2.2)

    def test_overshoot_form(self):
        spec = DesignSpec(mp=0.1, trise=0.3)
        zeta, _ = spec.damping()
        assert zeta == pytest.approx(0.5912, abs=1e-4)

    def test_rejects_mixed_and_partial_forms(self):
        with pytest.raises(ValueError):
            DesignSpec(zeta=0.5, omega0=1.0, mp=0.1, trise=0.3)
        with pytest.raises(ValueError):
            DesignSpec(zeta=0.5)
        with pytest.raises(ValueError):
            DesignSpec()

    def test_rejects_overdamped(self):
        with pytest.raises(ValueError, match="zeta"):
            DesignSpec(zeta=1.2, omega0=2.0)


class TestResidual:
    def test_reference_integer_parameters_nearly_solve(self):
        value = residual(INTEGER_PARAMS, benchmarks.fractional_problem("integer"))
        assert value.r == pytest.approx(0.116, abs=2e-3)
        assert abs(value.i) < 0.01
        assert value.f < 0.2

    def test_no_integral_or_derivative_action(self):
        problem = benchmarks.fractional_problem()
        for kp in (1.0, 57.0, 813.0):
            value = residual(ControllerParams(kp, 0.0, 0.0, 1.0, 1.0), problem)
            assert value.i == pytest.approx(-3.428, abs=5e-3)

    def test_zero_controller_equals_plant_denominator(self):
        # With no control action the cleared expression reduces to the plant
        # denominator at the pole (not 1: the expression is denominator-cleared).
        problem = benchmarks.fractional_problem()
        pole = problem.poles.upper
        expected = problem.plant.denominator.evaluate(pole)
        value = residual(ControllerParams(0.0, 0.0, 0.0, 1.0, 1.0), problem)
        assert value.r == expected.real
        assert value.i == expected.imag
        assert value.f == abs(value.r) + abs(value.i) + abs(value.p)

    def test_mode_consistency_at_unit_orders(self):
        problem = benchmarks.fractional_problem()
        pole = problem.poles.upper
        rng = np.random.default_rng(8)
        for _ in range(50):
            kp, ti, td = rng.uniform(1.0, 500.0, size=3)
            value = residual(ControllerParams(kp, ti, td, 1.0, 1.0), problem)
            gc = kp + ti / pole + td * pole
            direct = problem.plant.denominator.evaluate(pole) + gc
            assert value.r == pytest.approx(direct.real, rel=1e-12)
            assert value.i == pytest.approx(direct.imag, rel=1e-12)

    def test_conjugate_pole_has_identical_fitness(self):
        rng = np.random.default_rng(9)
        for problem in (benchmarks.fractional_problem(), benchmarks.servo_problem()):
            for _ in range(25):
                params = ControllerParams(
                    rng.uniform(1, 1000), rng.uniform(1, 500), rng.uniform(1, 500),
                    rng.uniform(0, 2), rng.uniform(0, 2),
                )
                upper = residual(params, problem)
                lower = residual(params, problem, conjugate=True)
                assert lower.r == upper.r
                assert lower.i == -upper.i
                assert lower.f == upper.f

    def test_phase_stays_in_half_interval(self):
        rng = np.random.default_rng(10)
        problem = benchmarks.servo_problem()
        for _ in range(50):
            params = ControllerParams(
                rng.uniform(1, 1000), rng.uniform(1, 500), rng.uniform(1, 500),
                rng.uniform(0, 2), rng.uniform(0, 2),
            )
            value = residual(params, problem)
            assert -math.pi / 2 <= value.p <= math.pi / 2
            assert value.f == abs(value.r) + abs(value.i) + abs(value.p)

    def test_servo_integer_parameters(self):
        value = residual(
            ControllerParams(3.2, 5.41, 1.0, 1.0, 1.0),
            benchmarks.servo_problem("integer"),
        )
        assert value.r == pytest.approx(-3.6138, abs=1e-3)
        assert value.i == pytest.approx(0.0544, abs=1e-3)

    def test_pole_collision_raises(self):
        # Denominator (s - p)(s - conj p) = s^2 + 2.86 s + 4.84 vanishes at
        # the design pole.
        plant = FractionalTransferFunction.from_terms(
            [(1.0, 0.0)], [(1.0, 2.0), (2.86, 1.0), (4.84, 0.0)]
        )
        problem = TuningProblem(plant, poles_from_damping(0.65, 2.2))
        with pytest.raises(ValueError, match="vanishes"):
            residual(ControllerParams(1.0, 1.0, 1.0, 1.0, 1.0), problem)


class TestClosedFormOracle:
    def test_agreement_at_matching_pole(self):
        # The oracle's constants encode the design pole in rounded polar
        # form; the generic residual must agree there to ~1e-3 (limited by
        # the 4-figure constants).
        problem = TuningProblem(
            benchmarks.fractional_plant(), benchmarks.rounded_polar_pole()
        )
        rng = np.random.default_rng(11)
        for _ in range(100):
            params = ControllerParams(
                rng.uniform(1, 1000), rng.uniform(1, 500), rng.uniform(1, 500),
                rng.uniform(0, 2), rng.uniform(0, 2),
            )
            generic = residual(params, problem)
            oracle = benchmarks.closed_form_residual(params)
            assert generic.r == pytest.approx(oracle.r, abs=1e-3)
            assert generic.i == pytest.approx(oracle.i, abs=1e-3)
            assert generic.f == pytest.approx(oracle.f, abs=1e-3)

    def test_offsets_without_integral_derivative_action(self):
        value = benchmarks.closed_form_residual(ControllerParams(10.0, 0.0, 0.0, 1.0, 1.0))
        assert value.r == 10.0 + 1.0 + 0.875
        assert value.i == -3.428

    def test_ti_cosine_term_vanishes_at_quadrature(self):
        lam = 90.0 / 130.57
        a = benchmarks.closed_form_residual(ControllerParams(5.0, 100.0, 0.0, lam, 1.0))
        b = benchmarks.closed_form_residual(ControllerParams(5.0, 400.0, 0.0, lam, 1.0))
        assert a.r == pytest.approx(b.r, abs=1e-9)


class TestTune:
    def test_integer_mode_pins_unit_orders(self):
        problem = benchmarks.fractional_problem("integer")
        config = default_pso_config(problem, seed=3, swarm_size=15, max_iterations=60)
        params, result = tune(problem, config)
        assert params.lam == 1.0
        assert params.delta == 1.0
        assert residual(params, problem).f == result.best_fitness

    def test_parameters_respect_bounds(self):
        problem = benchmarks.servo_problem()
        config = default_pso_config(problem, seed=4, swarm_size=15, max_iterations=60)
        params, result = tune(problem, config)
        bounds = problem.bounds
        assert bounds.kp[0] <= params.kp <= bounds.kp[1]
        assert bounds.ti[0] <= params.ti <= bounds.ti[1]
        assert bounds.td[0] <= params.td <= bounds.td[1]
        assert bounds.lam[0] <= params.lam <= bounds.lam[1]
        assert bounds.delta[0] <= params.delta <= bounds.delta[1]
        assert result.best_fitness == residual(params, problem).f

    def test_dims_mismatch_rejected(self):
        problem = benchmarks.fractional_problem("integer")
        lower, upper = ParameterBounds().vectors("fractional")
        config = PsoConfig(dims=5, lower_bounds=lower, upper_bounds=upper)
        with pytest.raises(ValueError, match="dims"):
            tune(problem, config)

    def test_bounds_mismatch_rejected(self):
        problem = benchmarks.fractional_problem()
        lower, upper = ParameterBounds().vectors("fractional")
        config = PsoConfig(dims=5, lower_bounds=lower * 0.5, upper_bounds=upper)
        with pytest.raises(ValueError, match="bounds"):
            tune(problem, config)

    def test_characteristic_magnitude_bounded_by_fitness(self):
        # |1 + Gc(p)Gp(p)| = |cleared residual| / |Dp(p)| <= sqrt(2) * f
        # whenever |Dp(p)| >= 1, which holds for both bundled plants.
        from fopid.plant import controller_tf

        for problem in (
            benchmarks.fractional_problem("integer"),
            benchmarks.servo_problem("integer"),
        ):
            config = default_pso_config(problem, seed=5, swarm_size=20,
                                        max_iterations=150)
            params, result = tune(problem, config)
            pole = problem.poles.upper
            gc = controller_tf(params).evaluate(pole)
            gp = problem.plant.evaluate(pole)
            assert abs(1 + gc * gp) < math.sqrt(2) * result.best_fitness
