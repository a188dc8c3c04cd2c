import numpy as np
import pytest

from edgecascade.graph import GraphInputError, Network
from edgecascade.loadmodel import ModelParams
from edgecascade.cascade import run_cascade
from edgecascade.metrics import (
    AttackMode,
    base_state,
    epsilon_grid,
    find_epsilon_threshold,
    gamma,
    gamma_grid,
    make_instances,
    threshold_from_curve,
)
from edgecascade.netgen import BaParams, Topology, WsParams, generate_ba


def test_gamma_zero_with_headroom(triangle):
    assert gamma(triangle, ModelParams(1.0, 5.0), [0, 1, 2]).gamma == 0


def test_gamma_triangle(triangle):
    res = gamma(triangle, ModelParams(1.0, 0.3), [0])
    assert res.gamma == 1.0
    assert res.per_attack == ((0, 2),)


def test_gamma_star(star):
    assert gamma(star, ModelParams(1.0, 0.4), [0]).gamma == 1.0


def test_gamma_requires_two_edges():
    with pytest.raises(GraphInputError):
        gamma(Network.from_edges(2, [(0, 1)]), ModelParams(1.0, 0.1), [0])


def test_gamma_is_sum_over_independent_cascades():
    net = generate_ba(BaParams(2, 2, 150), 5)
    p = ModelParams(0.8, 0.1)
    attack = list(range(0, net.m, 29))
    counts = [run_cascade(net, p, e).failed_edges for e in attack]
    res = gamma(net, p, attack)
    assert res.gamma == sum(counts) / (len(attack) * (net.m - 1))
    assert 0 <= res.gamma <= 1
    assert gamma(net, ModelParams(0.8, 50.0), list(range(net.m))).gamma == 0


def test_gamma_edge_relabel_invariant():
    net = generate_ba(BaParams(2, 2, 120), 8)
    p = ModelParams(1.2, 0.08)
    rng = np.random.default_rng(0)
    order = [int(x) for x in rng.permutation(net.m)]
    moved = net.relabel_edges(order)
    new_id = {old: new for new, old in enumerate(order)}
    attack = [3, 40, 77, 100]
    a = gamma(net, p, attack)
    b = gamma(moved, p, [new_id[e] for e in attack])
    assert a.gamma == b.gamma


def test_sequential_mode_skips_failed_targets(triangle):
    res = gamma(triangle, ModelParams(1.0, 0.3), [0, 1, 2], mode=AttackMode.SEQUENTIAL)
    assert res.per_attack == ((0, 2), (1, 0), (2, 0))
    assert res.gamma == 2 / (3 * 2)


def test_threshold_triangle_exact(triangle):
    grid = epsilon_grid(0.0, 0.8, 0.005)
    full = find_epsilon_threshold(triangle, 1.0, "hlea", 1, 1, grid, master_seed=0)
    fast = find_epsilon_threshold(triangle, 1.0, "hlea", 1, 1, grid, master_seed=0, fast=True)
    assert full.epsilon_t == fast.epsilon_t == 0.5
    assert full.grid_step == 0.005
    curve = dict(full.gamma_curve)
    assert curve[0.5] == 0 and curve[0.495] > 0


def test_threshold_not_found(triangle):
    res = find_epsilon_threshold(triangle, 1.0, "hlea", 1, 1, [0.1, 0.2], 0)
    assert res.epsilon_t is None and not res.found


def test_threshold_errors(triangle):
    with pytest.raises(GraphInputError):
        find_epsilon_threshold(triangle, 1.0, "hlea", 1, 1, [], 0)
    with pytest.raises(GraphInputError):
        find_epsilon_threshold(triangle, 1.0, "hlea", 1, 1, [0.2, 0.1], 0)
    with pytest.raises(GraphInputError):
        find_epsilon_threshold(triangle, 1.0, "hlea", 1, 0, [0.1], 0)


def test_threshold_requires_zero_tail():
    grid = [0.1, 0.2, 0.3, 0.4]
    rows = [[0.5, 0.1], [0.0, 0.0], [0.0, 0.2], [0.0, 0.0]]
    assert threshold_from_curve(grid, rows) == 0.4
    assert threshold_from_curve(grid, [[0.0]] * 4) == 0.1


@pytest.mark.parametrize("strategy", ["hlea", "llea"])
@pytest.mark.parametrize("topo", [Topology.ba(BaParams(2, 2, 200)), Topology.ws(WsParams(200, 4, 0.1))])
def test_fast_scan_matches_full_scan(topo, strategy):
    grid = epsilon_grid(0.0, 0.5, 0.01)
    kw = dict(master_seed=11, seed_key=("t",))
    full = find_epsilon_threshold(topo, 0.6, strategy, 5, 3, grid, **kw)
    fast = find_epsilon_threshold(topo, 0.6, strategy, 5, 3, grid, fast=True, **kw)
    assert full.epsilon_t == fast.epsilon_t
    assert full.found
    curve = dict(full.gamma_curve)
    assert curve[full.epsilon_t] == 0
    assert curve[round(full.epsilon_t - full.grid_step, 12)] > 0


def test_instances_are_reproducible():
    topo = Topology.ba(BaParams(2, 2, 100))
    a = make_instances(topo, 1.0, "hlea", 5, 3, 42, ("x",))
    b = make_instances(topo, 1.0, "hlea", 5, 3, 42, ("x",))
    assert [i.network.edges for i in a] == [i.network.edges for i in b]
    assert [i.attack_set for i in a] == [i.attack_set for i in b]
    assert len({i.seed for i in a}) == 3


def test_gamma_grid_shape():
    topo = Topology.ws(WsParams(60, 4, 0.1))
    insts = make_instances(topo, 1.0, "llea", 3, 2, 0)
    rows = gamma_grid(insts, [0.0, 0.5, 2.0], 1.0)
    assert len(rows) == 3 and all(len(r) == 2 for r in rows)
    assert rows[-1] == [0.0, 0.0]
    assert rows[0][0] >= rows[1][0]


def test_epsilon_grid_default():
    g = epsilon_grid()
    assert len(g) == 161 and g[0] == 0.0 and g[-1] == 0.8 and g[100] == 0.5


def test_base_state_matches_initialize():
    from edgecascade.loadmodel import EdgeLoadState, initial_loads

    net = generate_ba(BaParams(2, 2, 50), 1)
    a = base_state(net, initial_loads(net, 0.7), 0.25, 1.0)
    b = EdgeLoadState.initialize(net, ModelParams(0.7, 0.25))
    assert a == b
    c = base_state(net, initial_loads(net, 0.7), 0.25, 0.5)
    d = EdgeLoadState.initialize(net, ModelParams(0.7, 0.25, 0.5))
    assert c == d
