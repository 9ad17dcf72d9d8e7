# -*- coding: utf-8 -*-
# mypy: ignore-errors

import itertools
import logging
from collections import Counter

import numpy as np
import pytest

from tlan.collective import (
    BatchConfig,
    TablePredictor,
    ZeroPredictor,
    cs_mat,
    csmat,
    define_candidate_set,
    form_batch,
    is_free_flow_path_congested,
    select_minimal_arrival,
)
from tlan.routing import (
    LoadAwareRouter,
    Query,
    StaticLoadRouter,
    TopKRouter,
    dijkstra_free_flow,
    free_flow_path,
    yen_k_shortest,
)
from tlan.simulation import (
    ReplayEntry,
    plan_chronological,
    replay_assignment,
)
from tlan.state import EdgeLoadMatrix

ROUTES = [(1, 2, 3), (4, 5, 3), (1, 6, 7)]


@pytest.fixture
def motivating_queries():
    return [Query(i, 1, 4, 0.5) for i in range(1, 7)]


def replay_total(net, queries, routes):
    entries = [
        ReplayEntry(q, route, 0.03) for q, route in zip(queries, routes)
    ]
    result = replay_assignment(net, entries)
    assert not result.dropped
    return sum(p.total_arrival for p in result.paths.values())


def test_motivating_example(motivating_net, motivating_queries):
    result = cs_mat(
        motivating_net, motivating_queries, BatchConfig(parallelism=1)
    )
    assert not result.failures
    assert sorted(result.order) == [1, 2, 3, 4, 5, 6]
    assert result.order[:2] == [1, 2]
    assert result.paths[1].edge_ids == ROUTES[0]
    assert result.paths[2].edge_ids == ROUTES[0]

    routes = Counter(p.edge_ids for p in result.paths.values())
    assert routes == {route: 2 for route in ROUTES}
    total = sum(p.total_arrival for p in result.paths.values())
    np.testing.assert_allclose(total, 3.38)
    for p in result.paths.values():
        detour = 0.0 if p.edge_ids == ROUTES[0] else 0.05
        np.testing.assert_allclose(p.duration, p.free_flow_cost + detour)

    # The replay reproduces the plan
    routes = [result.paths[q.id].edge_ids for q in motivating_queries]
    replayed = replay_total(motivating_net, motivating_queries, routes)
    np.testing.assert_allclose(replayed, 3.38)


def test_motivating_example_is_optimal(motivating_net, motivating_queries):
    totals = [
        replay_total(motivating_net, motivating_queries, routes)
        for routes in itertools.product(ROUTES, repeat=len(motivating_queries))
    ]
    np.testing.assert_allclose(min(totals), 3.38)

    # Sending everyone along the free-flow shortest path is worse
    direct = replay_total(motivating_net, motivating_queries, [ROUTES[0]] * 6)
    assert direct > 3.38 + 0.01


def congested_grid(make_network, random, size=4, n=30):
    records = []
    eid = 0
    for r in range(size):
        for c in range(size):
            node = r * size + c
            for dr, dc in ((0, 1), (1, 0), (0, -1), (-1, 0)):
                rr, cc = r + dr, c + dc
                if 0 <= rr < size and 0 <= cc < size:
                    upsilon = float(random.uniform(0.05, 0.2))
                    records.append((eid, node, rr * size + cc, upsilon, 1.0))
                    eid += 1
    net = make_network(records)
    queries = []
    for i in range(n):
        src, dst = random.choice(size * size, size=2, replace=False)
        queries.append(
            Query(i, int(src), int(dst), float(random.uniform(0, 1.0)))
        )
    return net, queries


def congested_penalty():
    return TablePredictor({}, global_mean=0.3)


def same_result(a, b):
    assert a.order == b.order
    assert a.paths == b.paths
    assert a.elm == b.elm
    assert set(a.failures) == set(b.failures)


@pytest.mark.parametrize("seed", range(20))
def test_refresh_matches_full_replanning(make_network, seed):
    net, queries = congested_grid(make_network, np.random.default_rng(seed))
    assert len(queries) <= 30
    refreshed = cs_mat(
        net, queries, BatchConfig(parallelism=1), congested_penalty()
    )
    replanned = cs_mat(
        net,
        queries,
        BatchConfig(parallelism=1, refresh=False),
        congested_penalty(),
    )
    same_result(refreshed, replanned)
    assert len(refreshed.paths) == len(queries)


def test_candidate_sets_grow(make_network, monkeypatch):
    sizes = []

    def recording(*args, **kwargs):
        candidates = define_candidate_set(*args, **kwargs)
        sizes.append(len(candidates))
        return candidates

    monkeypatch.setattr(csmat, "define_candidate_set", recording)
    peak = 0
    for seed in range(5):
        net, queries = congested_grid(
            make_network, np.random.default_rng(seed)
        )
        result = cs_mat(
            net, queries, BatchConfig(parallelism=1), congested_penalty()
        )
        peak = max(peak, max(result.elm.cells().values()))
    # Several vehicles share some road and interval
    assert peak >= 2
    assert sizes
    assert max(sizes) > 1

    # The zero predictor never lets anyone compete with the base query
    sizes.clear()
    net, queries = congested_grid(make_network, np.random.default_rng(0))
    cs_mat(net, queries, BatchConfig(parallelism=1), ZeroPredictor())
    assert set(sizes) == {1}


@pytest.mark.parametrize("seed", range(3))
def test_parallel_matches_serial(make_network, caplog, seed):
    net, queries = congested_grid(make_network, np.random.default_rng(seed))
    serial = cs_mat(
        net, queries, BatchConfig(parallelism=1), congested_penalty()
    )
    with caplog.at_level(logging.DEBUG, logger="tlan.collective.csmat"):
        parallel = cs_mat(
            net,
            queries,
            BatchConfig(parallelism=4, parallel_min_candidates=2),
            congested_penalty(),
        )
    assert "worker processes" in caplog.text
    same_result(serial, parallel)


@pytest.mark.parametrize("router_cls", [StaticLoadRouter, TopKRouter])
def test_other_routers(make_network, random, router_cls):
    net, queries = congested_grid(make_network, random)
    result = cs_mat(
        net,
        queries,
        BatchConfig(
            parallelism=2, max_candidates=5, parallel_min_candidates=2
        ),
        congested_penalty(),
        router=router_cls(net),
    )
    assert set(result.paths) | set(result.failures) == {
        q.id for q in queries
    }
    expected = EdgeLoadMatrix(net.horizon)
    for qid in result.order:
        expected.add_path(result.paths[qid])
    assert expected == result.elm


def total_arrival(result):
    return sum(p.total_arrival for p in result.paths.values())


def test_never_worse_than_chronological(
    make_network, motivating_net, motivating_queries
):
    router = LoadAwareRouter(motivating_net)
    one_by_one = plan_chronological(motivating_net, motivating_queries, router)
    collective = cs_mat(
        motivating_net,
        motivating_queries,
        BatchConfig(parallelism=1),
        congested_penalty(),
    )
    assert total_arrival(collective) <= total_arrival(one_by_one) + 1e-9

    for seed in range(5):
        net, queries = congested_grid(
            make_network, np.random.default_rng(100 + seed), size=5
        )
        assert net.num_nodes <= 25 and len(queries) <= 30
        one_by_one = plan_chronological(net, queries, LoadAwareRouter(net))
        collective = cs_mat(
            net, queries, BatchConfig(parallelism=1), congested_penalty()
        )
        assert set(collective.paths) == set(one_by_one.paths)
        assert (
            total_arrival(collective) <= total_arrival(one_by_one) + 1e-9
        )


def test_failures_and_duplicates(line_net):
    queries = [Query(0, "a", "c", 0.0), Query(1, "c", "a", 0.0)]
    result = cs_mat(line_net, queries, BatchConfig(parallelism=1))
    assert list(result.paths) == [0]
    assert list(result.failures) == [1]
    assert set(result.runtimes) == {0, 1}

    with pytest.raises(ValueError):
        cs_mat(line_net, [Query(0, "a", "c", 0.0)] * 2)


def test_background_load(line_net):
    background = EdgeLoadMatrix(line_net.horizon)
    background.set_load("ab", 0, 11)
    background.freeze()
    result = cs_mat(
        line_net,
        [Query(0, "a", "c", 0.5)],
        BatchConfig(parallelism=1),
        background=background,
    )
    path = result.paths[0]
    np.testing.assert_allclose(path.total_arrival, 0.5 ** (1 / 6) + 0.2)
    assert result.elm.controlled_load("ab", 0) == 1
    assert result.elm.load("ab", 0) == 12


def test_form_batch():
    queries = [
        Query("a", 1, 2, 0.0),
        Query("b", 1, 2, 1.0),
        Query("c", 1, 2, 2.0),
        Query("d", 1, 2, 2.5),
    ]
    free_flow = {"a": 1.5, "b": 0.2, "c": 0.5, "d": 0.1}
    batch = form_batch(
        queries, queries[0], BatchConfig(window_y_s=720.0), free_flow
    )
    assert [q.id for q in batch] == ["b", "a", "c"]

    batch = form_batch(
        queries[1:],
        queries[1],
        BatchConfig(window_y_s=60.0),
        free_flow,
        interval_length_s=60.0,
    )
    assert [q.id for q in batch] == ["b", "c"]


def test_define_candidate_set():
    queries = [Query(i, "s", "d", 0.0) for i in range(5)]
    free_flow = {0: 0.6, 1: 0.5, 2: 0.7, 3: 0.85, 4: 0.9}
    base = queries[0]
    predictor = TablePredictor({("s", "d"): 0.2})
    candidates = define_candidate_set(queries, base, predictor, free_flow)
    assert [q.id for q in candidates] == [1, 0, 2]

    capped = define_candidate_set(
        queries, base, predictor, free_flow, BatchConfig(max_candidates=2)
    )
    assert [q.id for q in capped] == [1, 0]

    # Without a penalty only strictly earlier free-flow arrivals compete
    alone = define_candidate_set(queries, base, ZeroPredictor(), free_flow)
    assert [q.id for q in alone] == [1, 0]


def test_select_minimal_arrival(diamond_net):
    early = Query("x", "s", "d", 0.0)
    late = Query("y", "s", "d", 0.05)
    fast = free_flow_path(diamond_net, ["sm", "md"], 0.05, query_id="y")
    slow = free_flow_path(diamond_net, ["su", "ud"], 0.0, query_id="x")
    assert select_minimal_arrival([(early, slow), (late, fast)])[0] is late
    assert select_minimal_arrival([(late, fast), (early, slow)])[0] is late

    # Equal arrivals go to the earlier free-flow arrival
    tie = free_flow_path(
        diamond_net, ["sm", "md"], 0.05, query_id="x", free_flow_cost=0.1
    )
    chosen, _ = select_minimal_arrival([(late, fast), (early, tie)])
    assert chosen is early

    with pytest.raises(ValueError):
        select_minimal_arrival([])


def test_congestion_check(motivating_net):
    q = Query(0, 1, 4, 0.5)
    phi = dijkstra_free_flow(motivating_net, q)
    elm = EdgeLoadMatrix(motivating_net.horizon)
    assert not is_free_flow_path_congested(motivating_net, elm, phi)
    elm.set_load(1, 0, 1)
    assert not is_free_flow_path_congested(motivating_net, elm, phi)
    elm.set_load(1, 0, 2)
    assert is_free_flow_path_congested(motivating_net, elm, phi)

    # Cells beyond the horizon are not inspected
    late = yen_k_shortest(motivating_net, Query(1, 1, 4, 47.99), 1)[0]
    assert not is_free_flow_path_congested(
        motivating_net, EdgeLoadMatrix(motivating_net.horizon), late
    )


def test_batch_config_validation():
    with pytest.raises(ValueError):
        BatchConfig(window_y_s=0.0)
    with pytest.raises(ValueError):
        BatchConfig(max_candidates=-1)
    with pytest.raises(ValueError):
        BatchConfig(parallelism=0)
    with pytest.raises(ValueError):
        BatchConfig(parallel_min_candidates=1)
    assert BatchConfig(parallelism=3).workers == 3
    assert BatchConfig().workers >= 1
