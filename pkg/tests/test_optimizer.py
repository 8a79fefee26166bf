import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plandscape.distributions import RngStream
from plandscape.experiments import ExperimentConfig, realize
from plandscape.network import InteractionMatrix, NetworkConfig, build_network
from plandscape.optimizer import (
    InfeasibleStateError,
    Landscape,
    brute_force_optimum,
    climb,
    feasible_neighbors,
    is_local_optimum,
    landscape_table,
    neighbors,
    step,
    write_landscape,
    write_trajectory,
)
from plandscape.performance import BudgetSpec, ImportanceWeights, PerformanceParams, sample_weights


def _lists(arrays):
    return [a.tolist() for a in arrays]


def _brute_neighbours(x, a, b_t):
    """Arrays at Euclidean distance 0 or 1 from ``x`` within budget, by enumeration."""
    x = np.array(x)
    out = []
    for y in itertools.product(range(a), repeat=x.size):
        d = np.sqrt(np.sum((np.array(y) - x) ** 2))
        if d <= 1 and sum(y) <= b_t:
            out.append(list(y))
    return out


@pytest.mark.parametrize("x, count", [([2, 2, 2], 7), ([0, 0, 0], 4), ([4, 4, 4], 4)])
def test_neighbour_counts(x, count):
    assert len(neighbors(x, 5)) == count


def test_neighbour_order_is_canonical():
    assert _lists(neighbors([1, 0], 3)) == [[1, 0], [0, 0], [2, 0], [1, 1]]


def test_feasible_neighbours_at_boundary():
    got = _lists(feasible_neighbors([2, 4, 3], BudgetSpec(5, 9.5)))
    assert sorted(got) == sorted(_brute_neighbours([2, 4, 3], 5, 9.5))
    assert got == [[2, 4, 3], [1, 4, 3], [2, 3, 3], [2, 4, 2]]
    got = _lists(feasible_neighbors([1, 2, 3], BudgetSpec(5, 6)))
    assert got == [[1, 2, 3], [0, 2, 3], [1, 1, 3], [1, 2, 2]]


def test_feasible_neighbours_unconstrained():
    x = [3, 0, 4, 1]
    assert _lists(feasible_neighbors(x, BudgetSpec(5, 16))) == _lists(neighbors(x, 5))


def test_feasible_neighbours_rejects_infeasible():
    with pytest.raises(InfeasibleStateError):
        feasible_neighbors([4, 4, 4], BudgetSpec(5, 9.5))


@pytest.fixture
def tiny(make_landscape):
    return make_landscape([[1.0, 1.0]], weights=[1], alphabet=2, budget=2)


def test_tie_breaks_to_first_candidate(tiny):
    assert tiny.evaluate([1, 0]) == tiny.evaluate([0, 1])
    assert step([0, 0], tiny).tolist() == [1, 0]
    assert step([1, 0], tiny).tolist() == [1, 1]
    assert step([1, 1], tiny).tolist() == [1, 1]


def test_tiny_climb(tiny):
    traj = climb([0, 0], tiny)
    assert _lists(traj.states) == [[0, 0], [1, 0], [1, 1]]
    assert traj.steps == 2 and traj.converged
    assert traj.performances == sorted(traj.performances)


def test_climb_from_optimum_is_zero_length(tiny):
    traj = climb([1, 1], tiny)
    assert traj.steps == 0 and traj.converged
    assert traj.performances == [tiny.evaluate([1, 1])]


def test_current_state_wins_exact_ties(make_landscape):
    # a target with a zero-weight column: moving policy 1 changes nothing
    land = make_landscape([[0.5, 0.0]], weights=[1], alphabet=3)
    assert step([2, 1], land).tolist() == [2, 1]
    assert is_local_optimum([2, 1], land)


def test_step_and_climb_reject_infeasible(tiny):
    with pytest.raises(InfeasibleStateError):
        step([1, 1], tiny.with_budget(BudgetSpec(2, 1)))
    with pytest.raises(InfeasibleStateError):
        climb([1, 1], tiny.with_budget(BudgetSpec(2, 1)))


def test_positive_coefficients_optimum_is_full_allocation(make_landscape):
    for n in range(1, 5):
        c = np.full((2, n), 0.3)
        land = make_landscape(c, weights=[2, 5])
        full = np.full(n, 4)
        table = landscape_table(land)
        assert table["local_optimum"].sum() == 1
        assert table["states"][table["local_optimum"]][0].tolist() == full.tolist()
        assert is_local_optimum(full, land)
        assert not is_local_optimum(np.zeros(n, dtype=int), land.with_budget(BudgetSpec(5, 1)))


def test_brute_force_single_target_rows(make_landscape):
    land = make_landscape(np.eye(3)[:3] * 0.7 + 0.0, budget=12)
    x, f = brute_force_optimum(land)
    assert x.tolist() == [4, 4, 4]
    assert f == land.evaluate([4, 4, 4])


def test_brute_force_zero_budget(make_landscape):
    land = make_landscape([[0.4, -0.2, 0.9]], budget=0)
    x, f = brute_force_optimum(land)
    assert x.tolist() == [0, 0, 0] and f == 0.5


def test_brute_force_prefers_lexicographic_minimum(tiny):
    x, _ = brute_force_optimum(tiny.with_budget(BudgetSpec(2, 1)))
    assert x.tolist() == [0, 1]


def test_brute_force_size_guard(make_landscape):
    land = make_landscape(np.full((1, 11), 0.2))
    with pytest.raises(ValueError, match="enumeration limit"):
        brute_force_optimum(land)


def _random_landscape(seed, n=3, m=30, b_t=9.5):
    cfg = NetworkConfig(n, m, 5, 2, 1 / 3, 2)
    root = RngStream(seed)
    matrix = build_network(cfg, root.child(0))
    weights = sample_weights(m, 8, 15, root.child(1))
    return Landscape(matrix, weights, BudgetSpec(5, b_t))


@pytest.mark.parametrize("seed", range(10))
def test_oracle_cross_check(seed):
    land = _random_landscape(seed)
    gx, gf = brute_force_optimum(land)
    table = landscape_table(land)
    endpoints = []
    for x0 in table["states"][table["feasible"]]:
        traj = climb(x0, land)
        assert is_local_optimum(traj.final_state, land)
        endpoints.append(land.evaluate(traj.final_state))
    assert gf >= max(endpoints)
    assert gf == max(endpoints)


def test_landscape_table_agrees_with_is_local_optimum():
    land = _random_landscape(3)
    table = landscape_table(land)
    assert table["states"].shape == (125, 3)
    assert table["feasible"].sum() == 115
    for x, feas, loc in zip(table["states"], table["feasible"], table["local_optimum"]):
        if feas:
            assert loc == is_local_optimum(x, land)
        else:
            assert not loc
    assert table["local_optimum"].any()


def test_climb_is_deterministic():
    land, x0 = realize(ExperimentConfig(base_seed=3), 5)
    a, b = climb(x0, land), climb(x0, land)
    assert _lists(a.states) == _lists(b.states)
    assert a.performances == b.performances


def test_unconstrained_budgets_give_identical_climbs():
    land, x0 = realize(ExperimentConfig(N=20, B_T=80, base_seed=4), 0)
    a = climb(x0, land)
    b = climb(x0, land.with_budget(BudgetSpec(5, 500)))
    assert _lists(a.states) == _lists(b.states) and a.performances == b.performances


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 12), st.integers(2, 12), st.floats(0, 60))
def test_trajectory_invariants(seed, n, m, b_t):
    cfg = ExperimentConfig(N=n, M=m, B_T=b_t, mu_k=min(5.0, m - 0.5), base_seed=seed)
    land, x0 = realize(cfg, 0)
    traj = climb(x0, land, max_steps=n * 4 * m * 1000)
    assert traj.converged
    assert all(b > a for a, b in zip(traj.performances, traj.performances[1:]))
    for s, t in zip(traj.states, traj.states[1:]):
        assert np.abs(s - t).sum() == 1
    assert all(s.sum() <= b_t for s in traj.states)
    assert is_local_optimum(traj.final_state, land)


def test_max_steps_cap_reports_non_convergence(make_landscape):
    land = make_landscape(np.full((1, 4), 0.5))
    traj = climb(np.zeros(4, dtype=int), land, max_steps=3)
    assert traj.steps == 3 and not traj.converged
    with pytest.raises(ValueError):
        climb(np.zeros(4, dtype=int), land, max_steps=0)


def test_trajectory_and_landscape_exports(tmp_path, tiny):
    lines = write_trajectory(climb([0, 0], tiny), tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "step,x_1,x_2,cost,F"
    assert [ln.split(",")[:4] for ln in lines[1:]] == [["0", "0", "0", "0"], ["1", "1", "0", "1"], ["2", "1", "1", "2"]]
    rows = write_landscape(landscape_table(tiny), tmp_path / "l.csv").read_text().splitlines()
    assert rows[0] == "x_1,x_2,cost,F,is_feasible,is_local_optimum"
    assert len(rows) == 5 and rows[-1].endswith(",1,1")
