import math

import numpy as np
import pytest

from qlss import (Schedule, eval_exponential, eval_power_one, eval_power_p,
                  eval_vanilla, ode_oracle)
from qlss.errors import InvalidP, OutOfRange
from qlss.schedules import adaptive_simpson, bump


class TestVanilla:
    def test_values(self):
        assert eval_vanilla(0.0) == 0.0
        assert eval_vanilla(1.0) == 1.0
        assert eval_vanilla(0.3) == 0.3

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            eval_vanilla(-0.1)
        with pytest.raises(OutOfRange):
            eval_vanilla(1.1)


class TestPowerSchedules:
    @pytest.mark.parametrize("p,kappa", [(1.25, 4.0), (1.5, 10.0), (2.0, 100.0)])
    def test_boundary_conditions(self, p, kappa):
        sched = Schedule.power(p, kappa)
        assert eval_power_p(sched, 0.0) == pytest.approx(0.0, abs=1e-15)
        assert eval_power_p(sched, 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_p2_closed_form_value(self):
        # kappa/(kappa-1) [1 - (1 + s(kappa-1))^-1] at kappa=2, s=1/2 is 2/3
        assert eval_power_p(Schedule.power(2.0, 2.0), 0.5) == pytest.approx(2.0 / 3.0,
                                                                            abs=1e-15)

    def test_power_one_frozen_value(self):
        got = eval_power_one(10.0, 0.5)
        assert got == pytest.approx(0.7597469266479578, abs=1e-15)
        # cross-check the closed form against the independent RK4 oracle
        table = ode_oracle(10.0, 1.0, grid=10_000)
        mid = table[5_000]
        assert mid[0] == pytest.approx(0.5, abs=1e-12)
        assert got == pytest.approx(mid[1], abs=1e-8)

    def test_power_one_boundaries(self):
        assert eval_power_one(7.0, 0.0) == 0.0
        assert eval_power_one(7.0, 1.0) == pytest.approx(1.0, abs=1e-15)

    def test_normalization_constant_at_kappa_e(self):
        sched = Schedule.power(1.0, math.e)
        assert sched.c_p == pytest.approx(math.e / (math.e - 1.0), abs=1e-12)

    def test_c_p_matches_quadrature(self):
        for p, kappa in [(1.0, 10.0), (1.5, 10.0), (2.0, 3.0)]:
            sched = Schedule.power(p, kappa)
            shrink = 1.0 - 1.0 / kappa
            quad = adaptive_simpson(lambda u: (1.0 - shrink * u) ** (-p), 0.0, 1.0, 1e-12)
            assert sched.c_p == pytest.approx(quad, rel=1e-10)

    def test_p_one_routes_to_exact_form(self):
        sched = Schedule.power(1.0, 10.0)
        for s in (0.2, 0.5, 0.9):
            assert eval_power_p(sched, s) == eval_power_one(10.0, s)

    def test_invalid_p(self):
        with pytest.raises(InvalidP):
            Schedule.power(0.5, 10.0)
        with pytest.raises(InvalidP):
            Schedule.power(2.5, 10.0)

    def test_matches_ode_oracle_on_grid(self):
        table = ode_oracle(10.0, 1.5, grid=10_000)
        sched = Schedule.power(1.5, 10.0)
        vals = sched.samples(10_000)
        assert np.abs(table[1:, 1] - vals).max() <= 1e-8


class TestExponentialSchedule:
    def test_normalization_constant(self):
        # printed reference value 0.0070
        assert abs(Schedule.exponential().c_e - 0.0070) <= 5e-5

    def test_midpoint_symmetry(self):
        sched = Schedule.exponential()
        assert eval_exponential(sched, 0.5) == pytest.approx(0.5, abs=1e-12)
        for s in (0.1, 0.25, 0.4, 0.45):
            total = eval_exponential(sched, s) + eval_exponential(sched, 1.0 - s)
            assert total == pytest.approx(1.0, abs=1e-11)

    def test_derivative_matches_bump(self):
        sched = Schedule.exponential()
        ce = sched.c_e
        delta = 1e-4
        for s in (0.2, 0.5, 0.8):
            fd = (eval_exponential(sched, s + delta)
                  - eval_exponential(sched, s - delta)) / (2.0 * delta)
            assert fd == pytest.approx(bump(s) / ce, rel=1e-6)

    def test_flat_boundaries(self):
        sched = Schedule.exponential()
        delta = 5e-3
        for s in (0.01, 0.99):
            lo = max(0.0, s - delta)
            hi = min(1.0, s + delta)
            fd = (eval_exponential(sched, hi) - eval_exponential(sched, lo)) / (hi - lo)
            assert abs(fd) <= 1e-20

    def test_samples_match_scalar_path(self):
        sched = Schedule.exponential()
        vals = sched.samples(137)
        for k in (1, 17, 68, 100, 137):
            assert vals[k - 1] == pytest.approx(eval_exponential(sched, k / 137),
                                                abs=1e-12)


class TestScheduleObject:
    @pytest.mark.parametrize("sched", [Schedule.vanilla(),
                                       Schedule.power(1.0, 10.0),
                                       Schedule.power(1.5, 10.0),
                                       Schedule.exponential()])
    def test_strictly_increasing_on_grid(self, sched):
        vals = sched.samples(1000)
        assert np.all(np.diff(vals) >= 0)
        # the exponential kind is flat beyond float resolution at the tails
        # (all boundary derivatives vanish), so strictness is checked where
        # increments are representable
        s = np.arange(1, 1001) / 1000
        interior = (s > 0.02) & (s < 0.97)
        assert np.all(np.diff(vals[interior]) > 0)
        assert vals[-1] == pytest.approx(1.0, abs=1e-12)
        assert sched(0.0) == pytest.approx(0.0, abs=1e-15)
        assert sched(1.0) == pytest.approx(1.0, abs=1e-12)

    def test_labels(self):
        assert Schedule.vanilla().label == "vanilla"
        assert Schedule.power(1.5, 10.0).label == "aqc-p1.5"
        assert Schedule.exponential().label == "aqc-exp"

    def test_power_samples_match_scalar(self):
        sched = Schedule.power(1.75, 20.0)
        vals = sched.samples(50)
        for k in (1, 25, 50):
            assert vals[k - 1] == pytest.approx(eval_power_p(sched, k / 50), abs=1e-14)


class TestOdeOracle:
    def test_p2_matches_closed_form(self):
        table = ode_oracle(2.0, 2.0, grid=10_000)
        sched = Schedule.power(2.0, 2.0)
        closed = sched.samples(10_000)
        assert np.abs(table[1:, 1] - closed).max() <= 1e-8

    def test_monotone_and_normalized(self):
        table = ode_oracle(10.0, 1.5, grid=10_000)
        assert np.all(np.diff(table[:, 1]) > 0)
        assert abs(table[-1, 1] - 1.0) <= 1e-6

    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0])
    @pytest.mark.parametrize("kappa", [2.0, 10.0])
    def test_closed_forms_agree(self, p, kappa):
        table = ode_oracle(kappa, p, grid=10_000)
        sched = Schedule.power(p, kappa)
        assert np.abs(table[1:, 1] - sched.samples(10_000)).max() <= 1e-6

    def test_invalid_arguments(self):
        with pytest.raises(OutOfRange):
            ode_oracle(1.0, 1.5)
        with pytest.raises(InvalidP):
            ode_oracle(10.0, 3.0)
