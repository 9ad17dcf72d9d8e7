# -*- coding: utf-8 -*-
"""
The ``tlan`` command line tool::

    tlan generate network --rows 10 --cols 10 --out grid.json
    tlan generate queries --network grid.json --n 500 --out queries.csv
    tlan route --network grid.json --queries q.csv --alg csmat --out run/
    tlan compare run-ffnd/ run-csmat/
    tlan curve --capacity 5 --min-travel-time 0.3 --loads 0 5 10

The log level is read from the ``TLAN_LOG`` environment variable. The exit
status is 0 on success, 1 when a run fails and 2 for usage errors.
"""

from __future__ import annotations

__all__ = ["build_parser", "main"]

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

import jax

from tlan.arrival import arrival_curve
from tlan.errors import TlanError
from tlan.network.config import NetworkConfig
from tlan.network.generate import generate_grid_network
from tlan.network.io import load_network, save_network
from tlan.routing.registry import ALGORITHMS
from tlan.simulation.artifacts import compare_runs
from tlan.simulation.experiment import (
    PREDICTORS,
    ExperimentConfig,
    run_experiment,
)
from tlan.simulation.replay import REPLAY_ORDERS
from tlan.state import read_elm_csv
from tlan.workload import generate_queries, load_queries, save_queries

logger = logging.getLogger("tlan")


def _add_network_config(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("network configuration")
    group.add_argument(
        "--interval-s", type=float, help="interval length in seconds [360]"
    )
    group.add_argument(
        "--headway-s", type=float, help="minimum headway in seconds [3]"
    )
    group.add_argument(
        "--psi-factor",
        type=float,
        help="transition penalty as a fraction of the traversal time [0.5]",
    )
    group.add_argument(
        "--horizon", type=int, help="number of tracked intervals [48]"
    )


def _network_config(args: argparse.Namespace) -> Optional[NetworkConfig]:
    updates = {
        "interval_length_s": args.interval_s,
        "base_headway_s": args.headway_s,
        "transition_penalty_factor": args.psi_factor,
        "horizon_intervals": args.horizon,
    }
    updates = {k: v for k, v in updates.items() if v is not None}
    if not updates:
        return None
    return NetworkConfig().replace(**updates)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tlan",
        description="Collective routing on temporal load-aware road networks",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    generate = commands.add_parser("generate", help="write synthetic inputs")
    kinds = generate.add_subparsers(dest="kind", required=True)

    grid = kinds.add_parser("network", help="a jittered grid network")
    grid.add_argument("--rows", type=int, default=10)
    grid.add_argument("--cols", type=int, default=10)
    grid.add_argument("--edge-len-m", type=float, default=500.0)
    grid.add_argument("--speed-mps", type=float, default=13.9)
    grid.add_argument(
        "--jitter",
        type=float,
        default=0.0,
        help="relative random variation of the speed limits",
    )
    grid.add_argument("--seed", type=int, default=0)
    grid.add_argument(
        "--out", type=Path, required=True, help="a .json or .csv file"
    )
    _add_network_config(grid)

    workload = kinds.add_parser("queries", help="a seeded query set")
    workload.add_argument("--network", type=Path, required=True)
    workload.add_argument("--n", type=int, required=True)
    workload.add_argument(
        "--window-s",
        type=float,
        nargs=2,
        metavar=("START", "END"),
        default=(0.0, 7200.0),
    )
    workload.add_argument("--hotspot-bias", type=float, default=0.0)
    workload.add_argument("--seed", type=int, default=0)
    workload.add_argument("--out", type=Path, required=True)
    _add_network_config(workload)

    route = commands.add_parser("route", help="plan, replay and report")
    route.add_argument("--network", type=Path, required=True)
    route.add_argument("--queries", type=Path, required=True)
    route.add_argument("--alg", choices=ALGORITHMS, required=True)
    route.add_argument("--k", type=int, default=5)
    route.add_argument("--y-s", type=float, default=14400.0)
    route.add_argument("--max-candidates", type=int, default=0)
    route.add_argument(
        "--no-refresh",
        action="store_true",
        help="re-plan every candidate after each assignment",
    )
    route.add_argument("--gamma", type=float)
    route.add_argument(
        "--base-elm", type=Path, help="base load for the --gamma background"
    )
    route.add_argument("--seed", type=int, default=0)
    route.add_argument("--workers", type=int)
    route.add_argument(
        "--replay", choices=REPLAY_ORDERS, default="chronological"
    )
    route.add_argument(
        "--predictor",
        choices=PREDICTORS,
        default="table",
        help="congestion-penalty predictor of csmat",
    )
    route.add_argument(
        "--training-fraction",
        type=float,
        default=1.0,
        help="share of the workload the table predictor is trained on",
    )
    route.add_argument("--out", type=Path, required=True)
    _add_network_config(route)

    compare = commands.add_parser("compare", help="tabulate finished runs")
    compare.add_argument("runs", type=Path, nargs="+")
    compare.add_argument(
        "--out", type=Path, help="CSV file; printed when omitted"
    )

    curve = commands.add_parser(
        "curve", help="tabulate the arrival time against the entry time"
    )
    curve.add_argument("--capacity", type=float, required=True)
    curve.add_argument("--min-travel-time", type=float, required=True)
    curve.add_argument("--loads", type=float, nargs="+", required=True)
    curve.add_argument("--intervals", type=int, default=2)
    curve.add_argument("--resolution", type=int, default=100)
    curve.add_argument("--out", type=Path)
    return parser


def _cmd_generate(args: argparse.Namespace) -> int:
    cfg = _network_config(args)
    if args.kind == "network":
        net = generate_grid_network(
            args.rows,
            args.cols,
            args.edge_len_m,
            args.speed_mps,
            cfg,
            seed=args.seed,
            jitter=args.jitter,
        )
        written = save_network(net, args.out)
        print(
            f"wrote {net.num_nodes} nodes and {net.num_edges} edges to "
            + ", ".join(str(p) for p in written)
        )
        return 0

    net = load_network(args.network, cfg)
    qs = generate_queries(
        net,
        args.n,
        tuple(args.window_s),
        hotspot_bias=args.hotspot_bias,
        seed=args.seed,
    )
    save_queries(qs, args.out, net)
    print(f"wrote {len(qs)} queries to {args.out}")
    return 0


def _cmd_route(args: argparse.Namespace) -> int:
    if args.base_elm is not None and args.gamma is None:
        raise ValueError("--base-elm requires --gamma")
    net = load_network(args.network, _network_config(args))
    queries = load_queries(args.queries, net)
    base_elm = (
        read_elm_csv(args.base_elm, net.horizon)
        if args.base_elm is not None
        else None
    )
    cfg = ExperimentConfig(
        k=args.k,
        window_y_s=args.y_s,
        max_candidates=args.max_candidates,
        refresh=not args.no_refresh,
        gamma=args.gamma,
        seed=args.seed,
        workers=args.workers,
        replay_order=args.replay,
        predictor=args.predictor,
        training_fraction=args.training_fraction,
    )
    result = run_experiment(
        net,
        queries,
        args.alg,
        cfg,
        base_elm=base_elm,
        out_dir=args.out,
        network_path=args.network,
        queries_path=args.queries,
    )
    counts = result.manifest["counts"]
    print(
        f"{args.alg}: {counts['finished']} of {counts['queries']} queries "
        f"finished, AJT {result.metrics.ajt:.4f} min; wrote {args.out}"
    )
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    table = compare_runs(args.runs)
    if args.out is None:
        print(table.to_csv(index=False), end="")
    else:
        table.to_csv(args.out, index=False)
        print(f"wrote {len(table)} rows to {args.out}")
    return 0


def _cmd_curve(args: argparse.Namespace) -> int:
    table = arrival_curve(
        args.loads,
        args.capacity,
        args.min_travel_time,
        intervals=args.intervals,
        resolution=args.resolution,
    )
    if args.out is None:
        print(table.to_csv(index=False), end="")
    else:
        table.to_csv(args.out, index=False)
        print(f"wrote {len(table)} rows to {args.out}")
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "route": _cmd_route,
    "compare": _cmd_compare,
    "curve": _cmd_curve,
}


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        level=os.environ.get("TLAN_LOG", "WARNING").upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    jax.config.update("jax_enable_x64", True)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (TlanError, OSError) as e:
        logger.error("%s", e)
        return 1
    except ValueError as e:
        parser.error(str(e))
    return 2  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
