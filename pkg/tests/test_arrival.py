# -*- coding: utf-8 -*-
# mypy: ignore-errors

import jax.numpy as jnp
import numpy as np
import pytest

from tlan.arrival import (
    ArrivalQuery,
    arrival_curve,
    arrival_time,
    arrival_times,
    delay_exponent,
    delay_exponents,
    exit_time,
    traverse,
)
from tlan.errors import HorizonOverflowError
from tlan.network import EdgeAttrs
from tlan.state import EdgeLoadMatrix


@pytest.fixture
def attrs():
    return EdgeAttrs(
        length_m=720.0,
        speed_limit_mps=10.0,
        min_travel_time=0.3,
        free_flow_capacity=5.0,
    )


@pytest.mark.parametrize(
    "load, capacity, expected",
    [(3, 5, 1.0), (5, 5, 1.0), (9, 5, 0.25), (6, 5.5, 1.0), (105, 5, 0.01)],
)
def test_delay_exponent(load, capacity, expected):
    np.testing.assert_allclose(delay_exponent(load, capacity), expected)
    np.testing.assert_allclose(
        delay_exponents(jnp.float64(load), jnp.float64(capacity)), expected
    )


def test_exit_time():
    np.testing.assert_allclose(exit_time(2.0, 0, 5.0, 0.3), 2.3)
    np.testing.assert_allclose(
        exit_time(2.5, 7, 5.0, 0.3), 2 + 0.5**0.5 + 0.3
    )
    np.testing.assert_allclose(
        exit_time(2.9, 105, 5.0, 0.3), 2 + 0.9**0.01 + 0.3
    )
    np.testing.assert_allclose(exit_time(2.9, 105, 5.0, 0.3), 3.29895, 1e-5)

    # At a free-flow load the exit is exactly the entry plus Υ
    assert exit_time(3.7, 5, 5.0, 0.3) == 3.7 + 0.3


def test_traverse(attrs):
    elm = EdgeLoadMatrix(4)
    elm.set_load("e", 2, 7)
    np.testing.assert_allclose(
        traverse(elm, "e", attrs, 2.5), 2 + 0.5**0.5 + 0.3
    )
    np.testing.assert_allclose(traverse(elm, "e", attrs, 1.5), 1.8)

    # Counting the vehicle itself raises the load to 8 and ε to 1/3
    np.testing.assert_allclose(
        traverse(elm, "e", attrs, 2.5, include_self=True),
        2 + 0.5 ** (1 / 3) + 0.3,
    )
    np.testing.assert_allclose(
        arrival_time(elm, ArrivalQuery("e", 2.5, True), attrs),
        2 + 0.5 ** (1 / 3) + 0.3,
    )

    with pytest.raises(HorizonOverflowError):
        traverse(elm, "e", attrs, 3.8)
    with pytest.raises(HorizonOverflowError):
        traverse(elm, "e", attrs, 4.0)
    with pytest.raises(ValueError):
        traverse(elm, "e", attrs, -0.1)


def test_first_in_first_out(random):
    n = 50_000
    horizon = 20
    # Half the entries fall within 1e-6 of an interval boundary
    boundary = random.integers(1, horizon, size=n).astype(float)
    offset = random.uniform(0, 1e-6, size=n) * random.choice([-1, 1], n)
    entry = np.sort(
        np.concatenate(
            [random.uniform(0, horizon, size=n), boundary + offset]
        )
    )
    per_interval = random.integers(0, 40, size=horizon).astype(float)
    load = per_interval[np.floor(entry).astype(int)]
    exits = np.asarray(arrival_times(entry, load, 5.0, 0.3))
    assert np.all(np.diff(exits) >= -1e-9)
    assert np.all(exits >= entry + 0.3 - 1e-12)
    assert np.all(exits < np.floor(entry) + 1.3 + 1e-12)


def test_vectorized_matches_scalar(random):
    entry = random.uniform(0, 10, size=200)
    load = random.integers(0, 12, size=200).astype(float)
    capacity = random.uniform(0.5, 8, size=200)
    exits = np.asarray(arrival_times(entry, load, capacity, 0.2))
    expected = [
        exit_time(a, l, f, 0.2) for a, l, f in zip(entry, load, capacity)
    ]
    np.testing.assert_allclose(exits, expected)


def test_arrival_curve():
    table = arrival_curve([0, 6, 20], 5.0, 0.25, intervals=3, resolution=10)
    assert list(table.columns) == ["load", "entry_time", "arrival_time"]
    assert len(table) == 3 * 3 * 10
    free = table[table.load == 0]
    np.testing.assert_allclose(free.arrival_time, free.entry_time + 0.25)
    for _, group in table.groupby("load"):
        assert np.all(np.diff(group.arrival_time.to_numpy()) >= 0)

    with pytest.raises(ValueError):
        arrival_curve([0], 5.0, 0.25, resolution=0)
