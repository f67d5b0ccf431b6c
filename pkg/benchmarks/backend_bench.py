"""Compare the two exploration lanes on a handful of verdict cells.

The compiled lane and the vectorized fallback produce bit-identical
graphs; this script times both on the same inputs and prints the
speedup, so a machine without a working compiler toolchain can judge
what the fallback costs.

Run from the repository root:

    python3 benchmarks/backend_bench.py
    python3 benchmarks/backend_bench.py --cells Vig3Cols:async --repeat 5
"""

import argparse
import json
import time

import numpy as np

from rvcheck.algorithms import builtin
from rvcheck.checker import ExploreOptions, explore
from rvcheck.engine import get_backend
from rvcheck.scheduling import SCHEDULER_NAMES

DEFAULT_CELLS = (
    "Vig2Cols:async",
    "Her2Cols:ssync",
    "Oku5ColsX:async",
    "Vig3Cols:async",
)


def parse_cell(token: str):
    try:
        algo, sched = token.split(":")
    except ValueError:
        raise SystemExit(f"bad cell {token!r}; expected ALGO:SCHEDULER")
    if sched not in SCHEDULER_NAMES:
        raise SystemExit(f"unknown scheduler {sched!r} in {token!r}")
    return algo, sched


def time_cell(algo: str, sched: str, backend: str, repeat: int):
    spec = builtin(algo)
    kind = SCHEDULER_NAMES[sched]
    options = ExploreOptions(backend=backend)
    best = None
    graph = verdict = None
    for _ in range(repeat):
        started = time.perf_counter()
        graph, verdict = explore(spec, kind, options)
        elapsed = time.perf_counter() - started
        best = elapsed if best is None else min(best, elapsed)
    return best, graph, verdict


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--cells", nargs="*", default=list(DEFAULT_CELLS),
        metavar="ALGO:SCHEDULER",
    )
    parser.add_argument("--repeat", type=int, default=3, help="best of N runs")
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args()

    cells = [parse_cell(token) for token in args.cells]

    lanes = []
    for lane in ("numba", "numpy"):
        try:
            get_backend(lane)
            lanes.append(lane)
        except Exception as exc:
            print(f"# lane {lane} unavailable: {exc}")
    if not lanes:
        raise SystemExit("no exploration lane available")

    if "numba" in lanes:
        # pull the jit compile out of the measured runs
        started = time.perf_counter()
        time_cell("Vig2Cols", "centralized", "numba", 1)
        print(f"# compile warmup {time.perf_counter() - started:.2f} s")

    rows = []
    for algo, sched in cells:
        row = {"cell": f"{algo}:{sched}"}
        graphs = {}
        for lane in lanes:
            best, graph, verdict = time_cell(algo, sched, lane, args.repeat)
            row[lane] = best
            row["states"] = graph.node_count
            row["edges"] = graph.edge_count
            row["verdict"] = verdict.outcome
            graphs[lane] = graph
        if len(graphs) == 2:
            same = np.array_equal(
                graphs["numba"].states, graphs["numpy"].states
            ) and np.array_equal(graphs["numba"].succs, graphs["numpy"].succs)
            row["lanes_agree"] = bool(same)
        rows.append(row)

    if args.json:
        print(json.dumps(rows, indent=2))
        return 0

    header = f"{'cell':<22}{'states':>9}{'edges':>10}  verdict"
    for lane in lanes:
        header += f"{lane:>10}"
    if len(lanes) == 2:
        header += f"{'speedup':>9}{'agree':>7}"
    print(header)
    for row in rows:
        line = (
            f"{row['cell']:<22}{row['states']:>9}{row['edges']:>10}  "
            f"{row['verdict']:<7}"
        )
        for lane in lanes:
            line += f"{row[lane]:>9.3f}s"
        if len(lanes) == 2:
            line += f"{row['numpy'] / row['numba']:>8.1f}x"
            line += f"{'yes' if row['lanes_agree'] else 'NO':>7}"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
