import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgecascade.cascade import cascade_in_place, run_cascade
from edgecascade.graph import GraphInputError, Network
from edgecascade.loadmodel import EdgeLoadState, EdgeStatus, ModelParams
from edgecascade.netgen import BaParams, WsParams, generate_ba, generate_ws

from reference import reference_cascade
from test_graph import simple_graphs


@pytest.mark.parametrize("attacked", [0, 1, 2])
def test_triangle_collapses_below_half(triangle, attacked):
    # neighbors reach 6 > 5.2 and then have nowhere to send their load
    res = run_cascade(triangle, ModelParams(1.0, 0.3), attacked)
    assert res.failed_edges == 2
    assert res.rounds == 1
    assert res.dropped_load == 12.0
    assert res.removed_isolated_nodes == 3


@pytest.mark.parametrize("attacked", [0, 1, 2])
def test_triangle_survives_at_half(triangle, attacked):
    res = run_cascade(triangle, ModelParams(1.0, 0.5), attacked)
    assert res.failed_edges == 0
    assert res.rounds == 0
    assert res.removed_isolated_nodes == 0


@pytest.mark.parametrize("delta", [0.2, 0.5, 1.0, 1.7, 2.0])
def test_path3_boundary(path3, delta):
    res = run_cascade(path3, ModelParams(delta, 1.0), 0)
    assert res.failed_edges == 0
    # the attacked edge's leaf is stranded
    assert res.removed_isolated_nodes == 1
    assert run_cascade(path3, ModelParams(delta, 0.995), 0).failed_edges == 1


def test_star_boundary(star):
    assert run_cascade(star, ModelParams(1.0, 0.5), 0).failed_edges == 0
    res = run_cascade(star, ModelParams(1.0, 0.4), 0)
    assert res.failed_edges == 2 and res.rounds == 1


def test_attacking_dead_edge_is_an_error(triangle):
    state = EdgeLoadState.initialize(triangle, ModelParams(1.0, 0.3))
    state.status[0] = EdgeStatus.ATTACKED
    with pytest.raises(GraphInputError):
        cascade_in_place(triangle, state, 0)
    with pytest.raises(GraphInputError):
        run_cascade(triangle, ModelParams(1.0, 0.3), 5)


def test_base_state_is_not_modified(triangle):
    base = EdgeLoadState.initialize(triangle, ModelParams(1.0, 0.3))
    snapshot = (list(base.current_load), list(base.status))
    run_cascade(triangle, ModelParams(1.0, 0.3), 0, base=base)
    assert (base.current_load, base.status) == snapshot


def test_trace_lines(triangle):
    res = run_cascade(triangle, ModelParams(1.0, 0.3), 0, trace=True)
    assert [t.round for t in res.trace] == [0, 1]
    assert res.trace[1].failed == (1, 2)
    assert res.trace[1].format() == "round=1 failed=[1,2] dropped=12"


def test_max_rounds_truncates():
    net = generate_ba(BaParams(2, 2, 300), 3)
    p = ModelParams(1.0, 0.05)
    full = next(r for r in (run_cascade(net, p, e) for e in range(net.m)) if r.rounds > 1)
    one = run_cascade(net, p, full.attacked, max_rounds=1)
    assert one.rounds == 1
    assert one.failed == full.failed[: one.failed_edges]


def test_initial_transfer_mode_differs_downstream():
    # 0-1-2-3 path plus a pendant on 3: second-generation failures pass on less load
    net = Network.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    p = ModelParams(1.0, 0.1)
    cur = run_cascade(net, p, 0, transfer="current", trace=True)
    ini = run_cascade(net, p, 0, transfer="initial", trace=True)
    assert cur.failed_edges >= 1 and ini.failed_edges >= 1
    assert ini.dropped_load < cur.dropped_load


def _check_invariants(net, params, e):
    res = run_cascade(net, params, e, trace=True)
    assert 0 <= res.failed_edges <= net.m - 1
    assert (res.rounds == 0) == (res.failed_edges == 0)
    assert res.rounds <= net.m
    assert len(set(res.failed)) == res.failed_edges and e not in res.failed
    total = res.total_initial_load
    for rt in res.trace:
        assert rt.alive_load + rt.dropped_total == pytest.approx(total, rel=1e-9, abs=1e-9)
        if rt.round:
            assert rt.failed
    return res


@settings(max_examples=80, deadline=None)
@given(simple_graphs(max_nodes=9), st.sampled_from([0.3, 1.0, 2.0]), st.floats(0, 1.2), st.data())
def test_cascade_properties(net, delta, eps, data):
    if net.m == 0:
        return
    e = data.draw(st.integers(0, net.m - 1))
    res = _check_invariants(net, ModelParams(delta, eps), e)
    failed, rounds, dropped = reference_cascade(net.n, list(net.edges), delta, eps, e)
    assert list(res.failed) == failed
    assert res.rounds == rounds
    assert math.isclose(res.dropped_load, dropped, rel_tol=1e-9, abs_tol=1e-9)


def test_determinism_and_alive_set_shrinks():
    net = generate_ws(WsParams(200, 4, 0.1), 9)
    p = ModelParams(1.0, 0.02)
    a = run_cascade(net, p, 17, trace=True)
    b = run_cascade(net, p, 17, trace=True)
    assert a == b and a.trace == b.trace
    sizes = [len(t.failed) for t in a.trace]
    assert all(s >= 1 for s in sizes)


@pytest.mark.parametrize("make", [
    lambda s: generate_ws(WsParams(), s),
    lambda s: generate_ba(BaParams(), s),
])
@pytest.mark.parametrize("delta", [0.2, 1.0, 2.0])
def test_large_headroom_never_cascades(make, delta):
    net = make(0)
    state = EdgeLoadState.initialize(net, ModelParams(delta, 10.0))
    for e in range(net.m):
        assert cascade_in_place(net, state.copy(), e, max_rounds=1).failed_edges == 0
