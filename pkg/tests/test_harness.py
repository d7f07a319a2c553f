import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_state
from overrelax import BoundaryClosure, ProblemSetup, SchemeConfig, initial_state
from overrelax.harness import (RunReport, StabilityError, build_table,
                               convergence_study, counter_propagation_test, emit_profiles, emit_table,
                               l2_error, least_squares_slope, observed_orders, peak_position,
                               read_profiles, run_simulation, step_count)
from overrelax.problems import exact_solution, grid

# Neumann outflow, dx = 2^-7, t = 1; frozen from the first build after the
# step-by-step comparison with the plain-Python reference in test_kinetic_core
NEUMANN_2_7_L2 = 0.032020457890050646


def exact_state(setup, n, t=0.0):
    u = exact_solution(setup, grid(n), t)
    return make_state(u, setup.c * u)


class TestL2Error:

    def test_zero_on_exact(self, fig2):
        assert l2_error(exact_state(fig2, 31), fig2, 0.0) == 0.0

    def test_single_point(self, fig2):
        s = exact_state(fig2, 31)
        w = s.w.copy()
        w[7] += 0.3
        dx = 1 / 32
        assert l2_error(make_state(w, s.z), fig2, 0.0) == pytest.approx(math.sqrt(dx) * 0.3, rel=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.floats(-5, 5))
    def test_norm_properties(self, seed, k):
        setup = ProblemSetup()
        rng = np.random.default_rng(seed)
        base = exact_state(setup, 15)
        d1, d2 = rng.normal(size=(2, 2, 17))
        err = lambda d: l2_error(make_state(base.w + d[0], base.z + d[1]), setup, 0.0)  # noqa: E731
        e1, e2 = err(d1), err(d2)
        assert err(k * d1) == pytest.approx(abs(k) * e1, rel=1e-9, abs=1e-14)
        assert err(d1 + d2) <= e1 + e2 + 1e-12

    def test_neumann_regression(self, fig2, cfg7):
        rep = run_simulation(fig2, cfg7, BoundaryClosure.physical("neumann", fig2))
        assert rep.error == pytest.approx(NEUMANN_2_7_L2, rel=1e-12)


class TestRunSimulation:

    def test_step_count_gaussian_test(self, fig2, cfg7):
        assert cfg7.dt == 2.0 ** -6
        rep = run_simulation(fig2, cfg7, BoundaryClosure.physical("neumann", fig2))
        assert rep.step_count == 64
        assert rep.final_time == 1.0
        assert rep.final_state.quarters == 256

    def test_rounded_final_time(self, fig1, cfg7):
        rep = run_simulation(fig1, cfg7, BoundaryClosure.physical("neumann", fig1))
        assert rep.final_time == rep.step_count * cfg7.dt
        assert abs(rep.final_time - fig1.t_max) <= cfg7.dt / 2
        assert step_count(0.33, 2.0 ** -6) == 21

    def test_bit_reproducible(self, fig2):
        cfg = SchemeConfig.from_exponent(6)
        closure = BoundaryClosure.physical("dirichlet", fig2)
        a = run_simulation(fig2, cfg, closure).final_state
        b = run_simulation(fig2, cfg, closure).final_state
        assert np.array_equal(a.w, b.w) and np.array_equal(a.z, b.z)

    def test_neumann_beats_dirichlet_in_max_norm(self, fig2, cfg7):
        neu = run_simulation(fig2, cfg7, BoundaryClosure.physical("neumann", fig2))
        dir_ = run_simulation(fig2, cfg7, BoundaryClosure.physical("dirichlet", fig2))
        assert neu.max_error < dir_.max_error

    def test_snapshots(self, fig2):
        cfg = SchemeConfig.from_exponent(5)
        rep = run_simulation(fig2, cfg, BoundaryClosure.physical("neumann", fig2), snapshots=5)
        times = [s.time for s in rep.snapshots]
        assert times[0] == 0.0 and times[-1] == rep.final_time and len(times) == 5

    def test_unstable_run_aborts(self):
        setup = ProblemSetup(t_max=20.0)
        cfg = SchemeConfig.from_exponent(7, lam=0.5)
        with pytest.raises(StabilityError) as info:
            run_simulation(setup, cfg, BoundaryClosure.periodic())
        assert info.value.report.step_count < step_count(20.0, cfg.dt)


class TestConvergence:

    @pytest.mark.parametrize("p", [1.0, 2.0, 2.7])
    def test_recovers_synthetic_order(self, p):
        dx = [2.0 ** -k for k in range(5, 10)]
        err = [3.7 * h ** p for h in dx]
        table = build_table([int(1 / h) - 1 for h in dx], dx, err)
        assert abs(table.slope - p) < 1e-12
        assert table.rows[0].order is None
        for r in table.rows[1:]:
            assert abs(r.order - p) < 1e-12

    def test_rows_sorted_coarse_first(self):
        table = build_table([63, 31], [1 / 64, 1 / 32], [0.25, 1.0])
        assert [r.n_interior for r in table.rows] == [31, 63]
        assert table.rows[1].order == pytest.approx(2.0)

    def test_orders_helper(self):
        assert observed_orders([0.1, 0.05], [1.0, 0.5]) == [None, pytest.approx(1.0)]
        assert math.isnan(least_squares_slope([0.1], [1.0]))

    def test_small_sweep(self, fig2):
        table = convergence_study(fig2, SchemeConfig(n_interior=31), BoundaryClosure.physical("neumann", fig2),
                                  exponents=[6, 5])
        assert [r.n_interior for r in table.rows] == [31, 63]
        assert not table.failed

    def test_unstable_sweep_marks_failure(self):
        setup = ProblemSetup(t_max=40.0)
        table = convergence_study(setup, SchemeConfig(n_interior=31, lam=0.5), BoundaryClosure.periodic(),
                                  exponents=[5, 6])
        assert table.failed


class TestPeaks:

    def test_parabolic_refinement_recovers_vertex(self):
        x = np.linspace(0, 1, 41)
        vals = 1.0 - (x - 0.3137) ** 2
        assert peak_position(x, vals) == pytest.approx(0.3137, abs=1e-12)

    def test_flat_rejected(self):
        with pytest.raises(ValueError):
            peak_position(np.linspace(0, 1, 5), np.zeros(5))

    def test_tied_maxima_rejected(self):
        with pytest.raises(ValueError):
            peak_position(np.linspace(0, 1, 5), np.array([0, 1.0, 0, 1.0, 0]))

    def test_no_disequilibrium(self, fig2):
        setup = ProblemSetup(alpha=0.25, t_max=0.33)
        fit = counter_propagation_test(setup, SchemeConfig.from_exponent(7), BoundaryClosure.physical("neumann", setup))
        assert fit.v_y is None
        assert fit.v_w == pytest.approx(1.0, abs=0.05)
        assert fit.y_max.max() < 0.05

    def test_needs_enough_snapshots(self, fig1, cfg7):
        with pytest.raises(ValueError):
            counter_propagation_test(fig1, cfg7, BoundaryClosure.periodic(), n_snapshots=4)


class TestOutput:

    def test_header_only(self, tmp_path, fig2):
        s = initial_state(fig2, SchemeConfig(n_interior=3))
        rep = RunReport(final_state=s, error=0.0, step_count=0, final_time=0.0)
        path = emit_profiles(rep, fig2, tmp_path / "p.csv")
        assert path.read_text().splitlines() == ["t,x,w,z,y,u_exact"]

    def test_table_lines(self, tmp_path):
        dx = [2.0 ** -k for k in range(5, 10)]
        table = build_table([int(1 / h) - 1 for h in dx], dx, [h ** 2 for h in dx])
        lines = emit_table(table, tmp_path / "t.csv").read_text().splitlines()
        assert len(lines) == 6
        assert lines[0] == "N,dx,error,order"
        assert lines[1].endswith(",")

    def test_profile_round_trip(self, tmp_path, fig1):
        cfg = SchemeConfig.from_exponent(5)
        rep = run_simulation(fig1, cfg, BoundaryClosure.periodic(), snapshots=3)
        back = read_profiles(emit_profiles(rep, fig1, tmp_path / "out" / "p.csv"))
        assert len(back) == 3
        for got, want in zip(back, rep.snapshots):
            assert got.time == want.time
            assert np.array_equal(got.w, want.w)
            assert np.array_equal(got.z, want.z)


class TestAsymptoticOrders:
    """Pairwise orders on grids finer than the acceptance sweep.

    The coarse end of 2^-5..2^-9 is under-resolved for A = 80, so the
    least-squares slope there mixes in pre-asymptotic rows; these pin the
    limiting orders separately.
    """

    def test_dirichlet_tends_to_first_order(self, fig2):
        table = convergence_study(fig2, SchemeConfig(n_interior=31), BoundaryClosure.physical("dirichlet", fig2),
                                  exponents=[11, 12])
        assert 0.9 <= table.rows[1].order <= 1.1

    def test_periodic_s2_second_order(self, fig2):
        table = convergence_study(fig2, SchemeConfig(n_interior=31), BoundaryClosure.periodic(), exponents=[8, 9, 10])
        assert all(1.9 <= r.order <= 2.1 for r in table.rows[1:])

    def test_s1_tends_to_first_order(self, fig2):
        cfg = SchemeConfig(n_interior=31, scheme="s1", relaxation="project")
        table = convergence_study(fig2, cfg, BoundaryClosure.periodic(), exponents=[12, 13])
        assert 0.8 <= table.rows[1].order <= 1.1
