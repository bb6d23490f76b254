import numpy as np
import pytest

from swaphedge.engine import make_problem, terminal_wealth
from swaphedge.kernels import (ABORT_NONFINITE, build_tables, make_scratch,
                               path_wealth, rm_chunk, wealth_batch)
from swaphedge.liquidity import CostModel
from swaphedge.optimizer import (CompactFamily, ConstantStep, OptimizerState,
                                 PowerLawStep, rm_step)

COSTS = {
    "perfect": CostModel.perfect(),
    "proportional": CostModel.proportional(0.05),
    "threshold": CostModel.threshold(0.05, 0.4),
    "smoothed": CostModel.threshold(0.05, 0.4).smooth(1e-4),
}


def wealth_by_kernel(problem, alpha, draws, want_gradient=False):
    tables = build_tables(problem)
    scratch = make_scratch(tables)
    wealth = np.empty(draws.shape[0])
    grads = np.empty((draws.shape[0], tables.size))
    for row in range(draws.shape[0]):
        wealth[row] = path_wealth(draws[row], alpha, tables, scratch,
                                  want_gradient)
        grads[row] = scratch.gradient
    return (wealth, grads) if want_gradient else wealth


class TestTables:
    def test_shapes_follow_problem(self):
        problem = make_problem(3, 2)
        tables = build_tables(problem)
        assert tables.num_payments == 3
        assert tables.degree == 2
        assert tables.size == problem.layout.size
        assert tables.decay.shape == (4,)
        assert tables.bond_coef_a.shape == (4, 4)
        assert tables.pair_i.shape == tables.pair_lo.shape
        assert len(problem.layout.pairs) == tables.pair_i.shape[0]
        scratch = make_scratch(tables)
        assert scratch.gradient.shape == (tables.size,)
        assert scratch.rates.shape == (4,)

    def test_last_date_has_no_explicit_pairs(self):
        tables = build_tables(make_problem(3, 1))
        assert tables.date_pair_lo[-1] == tables.date_pair_hi[-1]


class TestWealthAgreement:
    @pytest.mark.parametrize("name", list(COSTS))
    def test_matches_engine(self, name, rng):
        tol = 1e-10 if name == "smoothed" else 1e-12
        problem = make_problem(3, 2, cost=COSTS[name])
        alpha = rng.standard_normal(problem.layout.size) * 0.4
        draws = rng.standard_normal((64, 4))
        w_ref, g_ref = terminal_wealth(problem, alpha, draws,
                                       want_gradient=True)
        w_jit, g_jit = wealth_by_kernel(problem, alpha, draws,
                                        want_gradient=True)
        assert np.max(np.abs(w_jit - w_ref)) < tol
        assert np.max(np.abs(g_jit - g_ref)) < tol

    def test_memory_restricted_problem(self, rng):
        problem = make_problem(4, 2, cost=CostModel.proportional(0.03),
                               memory=1)
        alpha = rng.standard_normal(problem.layout.size) * 0.3
        draws = rng.standard_normal((32, 5))
        w_ref = terminal_wealth(problem, alpha, draws)
        w_jit = wealth_by_kernel(problem, alpha, draws)
        assert np.max(np.abs(w_jit - w_ref)) < 1e-12

    def test_batch_wrapper_matches_loop(self, rng):
        problem = make_problem(2, 1, cost=CostModel.proportional(0.05))
        tables = build_tables(problem)
        scratch = make_scratch(tables)
        alpha = rng.standard_normal(tables.size) * 0.3
        draws = rng.standard_normal((16, 3))
        out = np.empty(16)
        wealth_batch(draws, alpha, tables, scratch, out)
        assert out == pytest.approx(wealth_by_kernel(problem, alpha, draws),
                                    abs=1e-15)


class TestChunkedIteration:
    def reference_run(self, problem, schedule, normals, initial,
                      compacts=CompactFamily()):
        # plain-python mirror of the jit loop, one rm_step per path
        start = np.asarray(initial, dtype=float)
        state = OptimizerState(start.copy())
        tables = build_tables(problem)
        scratch = make_scratch(tables)
        for row in range(normals.shape[0]):
            wealth = path_wealth(normals[row], state.alpha, tables,
                                 scratch, True)
            state = rm_step(state, 2.0 * wealth * scratch.gradient,
                            schedule, compacts, start)
        return state

    def jit_run(self, problem, schedule, normals, initial):
        tables = build_tables(problem)
        scratch = make_scratch(tables)
        alpha = np.array(initial, dtype=float)
        counters = np.zeros(4, dtype=np.int64)
        accum = np.array([0.0, 0.0, CompactFamily().base_radius])
        if isinstance(schedule, PowerLawStep):
            kind, v1, v2, beta = 0, schedule.v1, schedule.v2, schedule.beta
        else:
            kind, v1, v2, beta = 1, schedule.v1, 0.0, 1.0
        trace_gamma = np.empty(0, dtype=np.int64)
        trace_alpha = np.empty((0, tables.size))
        trace_value = np.empty(0)
        status = rm_chunk(normals, alpha, np.array(initial, dtype=float),
                          counters, accum, kind, v1, v2, beta,
                          CompactFamily().growth, 0, trace_gamma,
                          trace_alpha, trace_value, tables, scratch)
        return status, alpha, counters

    @pytest.mark.parametrize("schedule", [PowerLawStep(50.0, 10.0, 0.8),
                                          ConstantStep(4.0)])
    def test_matches_stepwise_reference(self, schedule, rng):
        problem = make_problem(2, 1)
        normals = rng.standard_normal((400, 3))
        start = np.zeros(problem.layout.size)
        ref = self.reference_run(problem, schedule, normals, start)
        status, alpha, counters = self.jit_run(problem, schedule, normals,
                                               start)
        assert status == 0
        assert counters[0] == ref.step_count == 400
        assert counters[1] == ref.compact_level
        assert counters[2] == ref.reinit_count
        # the two loops associate the step product differently, so agreement
        # is to rounding, not bitwise
        assert alpha == pytest.approx(ref.alpha, rel=1e-10, abs=1e-12)

    def test_reinitialization_path_agrees(self, rng):
        # a huge constant step forces escapes from the starting compact
        problem = make_problem(2, 1)
        schedule = ConstantStep(5e4)
        normals = rng.standard_normal((300, 3))
        start = np.zeros(problem.layout.size)
        ref = self.reference_run(problem, schedule, normals, start)
        status, alpha, counters = self.jit_run(problem, schedule, normals,
                                               start)
        assert status == 0
        assert ref.reinit_count > 0
        assert counters[2] == ref.reinit_count
        assert counters[1] == ref.compact_level
        assert alpha == pytest.approx(ref.alpha, rel=1e-10, abs=1e-12)

    def test_window_mean_matches_wealth(self, rng):
        problem = make_problem(2, 1)
        normals = rng.standard_normal((50, 3))
        tables = build_tables(problem)
        scratch = make_scratch(tables)
        alpha = np.zeros(tables.size)
        counters = np.zeros(4, dtype=np.int64)
        accum = np.array([0.0, 0.0, CompactFamily().base_radius])
        trace_gamma = np.empty(0, dtype=np.int64)
        trace_alpha = np.empty((0, tables.size))
        trace_value = np.empty(0)
        rm_chunk(normals, alpha, np.zeros(tables.size), counters, accum,
                 1, 1e-12, 0.0, 1.0, 2.0, 0, trace_gamma, trace_alpha,
                 trace_value, tables, scratch)
        # with a negligible step the visited points stay at the start, so
        # the accumulated window is just sum of W(0)^2 over the paths
        w = wealth_by_kernel(problem, np.zeros(tables.size), normals)
        assert accum[1] == 50.0
        assert accum[0] == pytest.approx(np.sum(w * w), rel=1e-6)

    def test_nonfinite_draw_aborts(self):
        problem = make_problem(2, 1)
        normals = np.zeros((10, 3))
        normals[4, 1] = np.nan
        status, _, counters = self.jit_run(
            problem, ConstantStep(1.0), normals,
            np.zeros(problem.layout.size))
        assert status == ABORT_NONFINITE
        assert counters[0] == 4  # stopped before consuming the bad path
