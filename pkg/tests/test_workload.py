# -*- coding: utf-8 -*-
# mypy: ignore-errors

import numpy as np
import pytest

from tlan.errors import QueryFormatError
from tlan.network import generate_grid_network
from tlan.routing import Query
from tlan.workload import (
    QuerySet,
    generate_queries,
    load_queries,
    precompute_free_flow,
    save_queries,
)


def write(tmp_path, text):
    path = tmp_path / "queries.csv"
    path.write_text(text)
    return path


def test_load(tmp_path, motivating_net):
    path = write(
        tmp_path,
        "# seed=1\nquery_id,src,dst,depart_s\n"
        "7,1,4,540\n3,1,4,180\n5,2,4,180\n",
    )
    qs = load_queries(path, motivating_net)
    assert [q.id for q in qs] == [3, 5, 7]
    assert qs.by_id()[7] == Query(7, 1, 4, 1.5)
    assert qs.depart_s == {7: 540.0, 3: 180.0, 5: 180.0}
    assert len(qs) == 3


def test_save_and_load(tmp_path, grid_net):
    qs = generate_queries(grid_net, 25, (0.0, 3600.0), seed=4)
    path = save_queries(qs, tmp_path / "q.csv", grid_net)
    assert path.read_text().startswith("# seed=4 n=25 ")
    loaded = load_queries(path, grid_net)
    assert loaded.queries == qs.queries
    assert loaded.depart_s == qs.depart_s


@pytest.mark.parametrize(
    "rows, line, match",
    [
        ("1,1,4,0\n1,2,4,10\n", 3, "duplicate"),
        ("1,1,9,0\n", 2, "unknown node"),
        ("1,1,4,0\n2,1,4,soon\n", 3, "depart_s"),
        ("1,1,4,-5\n", 2, "horizon"),
        ("1,1,4,17280\n", 2, "horizon"),
        ("1,4,4,0\n", 2, "identical"),
    ],
)
def test_invalid(tmp_path, motivating_net, rows, line, match):
    path = write(tmp_path, "query_id,src,dst,depart_s\n" + rows)
    with pytest.raises(QueryFormatError, match=match) as err:
        load_queries(path, motivating_net)
    assert err.value.line == line


def test_comment_lines_shift_line_numbers(tmp_path, motivating_net):
    path = write(
        tmp_path, "# a\n# b\nquery_id,src,dst,depart_s\n1,1,4,0\n2,1,9,0\n"
    )
    with pytest.raises(QueryFormatError) as err:
        load_queries(path, motivating_net)
    assert err.value.line == 5


def test_missing_column(tmp_path, motivating_net):
    path = write(tmp_path, "query_id,src,dst\n1,1,4\n")
    with pytest.raises(QueryFormatError, match="depart_s"):
        load_queries(path, motivating_net)


def test_generate(grid_net):
    qs = generate_queries(grid_net, 200, (360.0, 1800.0), seed=2)
    assert len(qs) == 200
    assert [q.id for q in qs] == list(range(200))
    departs = np.array([q.depart for q in qs])
    assert np.all(np.diff(departs) >= 0)
    assert departs.min() >= 1.0 and departs.max() <= 5.0
    assert all(q.source != q.destination for q in qs)

    again = generate_queries(grid_net, 200, (360.0, 1800.0), seed=2)
    assert again.queries == qs.queries
    other = generate_queries(grid_net, 200, (360.0, 1800.0), seed=3)
    assert other.queries != qs.queries


def test_endpoints_are_uniform():
    net = generate_grid_network(3, 3, 300.0, 10.0)
    # The 95% quantile of the chi-square distribution with 8 dof
    critical = 15.507
    passed = 0
    for seed in range(5):
        qs = generate_queries(net, 900, (0.0, 3600.0), seed=seed)
        counts = np.bincount([q.source for q in qs], minlength=9)
        stat = np.sum((counts - 100.0) ** 2 / 100.0)
        passed += stat < critical
    assert passed >= 4


def test_hotspots():
    net = generate_grid_network(10, 10, 300.0, 10.0)
    qs = generate_queries(net, 300, (0.0, 3600.0), hotspot_bias=1.0, seed=1)
    centre = {44, 45, 54, 55}
    touching = [q for q in qs if {q.source, q.destination} & centre]
    # Ten hot nodes out of 100, and the four central ones are among them
    assert len(touching) > 0.3 * len(qs)

    plain = generate_queries(net, 300, (0.0, 3600.0), seed=1)
    touching_plain = [
        q for q in plain if {q.source, q.destination} & centre
    ]
    assert len(touching) > 2 * len(touching_plain)


def test_generate_validation(grid_net):
    with pytest.raises(ValueError):
        generate_queries(grid_net, 0, (0.0, 10.0))
    with pytest.raises(ValueError):
        generate_queries(grid_net, 5, (0.0, 10.0), hotspot_bias=2.0)
    with pytest.raises(ValueError):
        generate_queries(grid_net, 5, (100.0, 10.0))
    with pytest.raises(ValueError):
        generate_queries(grid_net, 5, (0.0, 48 * 360.0))


@pytest.mark.parametrize("workers", [1, 3])
def test_precompute_free_flow(line_net, workers):
    qs = QuerySet.from_queries(
        [
            Query(0, "a", "c", 0.5),
            Query(1, "c", "a", 0.2),
            Query(2, "a", "b", 0.1),
        ]
    )
    assert [q.id for q in qs] == [2, 1, 0]
    qs = precompute_free_flow(line_net, qs, workers=workers)
    assert qs.unreachable == {1}
    assert [q.id for q in qs.routable] == [2, 0]
    np.testing.assert_allclose(qs.free_flow_costs[0], 0.2)
    assert qs.free_flow[2].edge_ids == ("ab",)


def test_query_set_validation():
    with pytest.raises(ValueError):
        QuerySet.from_queries([Query(0, 1, 2, 0.0), Query(0, 2, 1, 1.0)])
    with pytest.raises(ValueError):
        QuerySet(
            (Query(0, 1, 2, 1.0), Query(1, 2, 1, 0.0)),
            {},
            {},
            frozenset(),
            {},
        )
