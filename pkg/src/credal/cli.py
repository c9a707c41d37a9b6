"""Command-line interface.

Subcommands: ``solve`` (credal bounds for a query), ``residual`` (print the
query's reduced program), ``stats`` (tree-decomposition statistics), and
``bench`` (CSV benchmark sweep).  Exit codes: 0 success, 1 usage or I/O
problem, 2 semantic failure (bad program text, odd loop over negation,
undefined credal semantics, cap exceeded).
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import bench as bench_mod
from .bounds import (DEFAULT_MAX_PROB_FACTS, DEFAULT_MAX_UNDEFINED,
                     CredalUndefinedError, ProbFactLimitError, SolveTimeout,
                     solve_query)
from .ground import (OlonError, build_call_graph, build_dependency_graph,
                     dot_call_graph, dot_dependency_graph, ground_program)
from .residual import extract_residual
from .stable import UndefinedAtomLimitError
from .syntax import (ParseError, ProgramError, parse_program, parse_query,
                     render_program)


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="credal",
                             description="credal inference for probabilistic "
                                         "answer set programs")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, query_required):
        p.add_argument("input", help="program file")
        p.add_argument("--query", required=query_required,
                       help="ground query atom, e.g. 'path(a,d)'")
        p.add_argument("--emit-graphs", action="store_true",
                       help="write call/dependency graphs as DOT files")

    solve = sub.add_parser("solve", help="print credal bounds for a query")
    add_common(solve, True)
    solve.add_argument("--mode", choices=("direct", "residual"), default="residual")
    solve.add_argument("--engine", choices=("enum", "twoamc"), default="enum")
    solve.add_argument("--max-prob-facts", type=int, default=DEFAULT_MAX_PROB_FACTS)
    solve.add_argument("--max-undefined", type=int, default=DEFAULT_MAX_UNDEFINED)

    residual = sub.add_parser("residual", help="print the query's residual program")
    add_common(residual, True)
    residual.add_argument("--out", help="write the residual here instead of stdout")

    stats = sub.add_parser("stats", help="print decomposition statistics")
    stats.add_argument("input", help="program file")

    bench = sub.add_parser("bench", help="run the benchmark sweep, emit CSV")
    bench.add_argument("--datasets", default="reachBA,reachGrid,smokersBA,smokersGrid",
                       help="comma-separated dataset names")
    bench.add_argument("--sizes", required=True, help="comma-separated sizes")
    bench.add_argument("--runs", type=int, default=10)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--engine", choices=("enum", "twoamc"), default="enum")
    bench.add_argument("--timeout", type=float, default=None,
                       help="per-row solve budget in seconds")
    bench.add_argument("--max-prob-facts", type=int, default=DEFAULT_MAX_PROB_FACTS)
    bench.add_argument("--max-undefined", type=int, default=DEFAULT_MAX_UNDEFINED)
    bench.add_argument("--out", help="write CSV here instead of stdout")
    return parser


def _read_program(path: str):
    text = Path(path).read_text(encoding="utf-8")
    return parse_program(text)


def _emit_graphs(program, input_path: str) -> None:
    stem = Path(input_path).stem
    call_path = Path(f"{stem}.call.dot")
    call_path.write_text(dot_call_graph(build_call_graph(program)), encoding="utf-8")
    grounded = ground_program(bench_mod.with_facts_as_rules(program))
    dep_path = Path(f"{stem}.dep.dot")
    dep_path.write_text(dot_dependency_graph(build_dependency_graph(grounded)),
                        encoding="utf-8")
    print(f"# wrote {call_path} and {dep_path}", file=sys.stderr)


def _cmd_solve(args) -> int:
    t0 = time.perf_counter()
    program = _read_program(args.input)
    query = parse_query(args.query)
    parse_ms = (time.perf_counter() - t0) * 1000.0
    if args.emit_graphs:
        _emit_graphs(program, args.input)
    t0 = time.perf_counter()
    interval, _residual = solve_query(program, query, mode=args.mode,
                                      engine=args.engine,
                                      max_prob_facts=args.max_prob_facts,
                                      max_undefined=args.max_undefined)
    solve_ms = (time.perf_counter() - t0) * 1000.0
    print(f"# parse {parse_ms:.3f} ms", file=sys.stderr)
    print(f"# {args.mode}/{args.engine} solve {solve_ms:.3f} ms", file=sys.stderr)
    print(f"P({query}) = [{interval.lower:.6f}, {interval.upper:.6f}]")
    return 0


def _cmd_residual(args) -> int:
    program = _read_program(args.input)
    query = parse_query(args.query)
    if args.emit_graphs:
        _emit_graphs(program, args.input)
    residual = extract_residual(program, query)
    text = render_program(residual.program)
    out = text + f"% status: {residual.query_status}\n"
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return 0


def _cmd_stats(args) -> int:
    program = _read_program(args.input)
    stats = bench_mod.primal_graph_stats(program)
    print(f"bags={stats.bag_count} width_ub={stats.width_upper_bound} "
          f"vertices={stats.vertex_count}")
    return 0


def _cmd_bench(args) -> int:
    datasets = [d.strip() for d in args.datasets.split(",") if d.strip()]
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise _UsageError(f"--sizes must be a comma-separated list of integers, "
                          f"got {args.sizes!r}")
    rows = bench_mod.run_benchmark(datasets, sizes, runs=args.runs,
                                   engine=args.engine, time_budget=args.timeout,
                                   base_seed=args.seed,
                                   max_prob_facts=args.max_prob_facts,
                                   max_undefined=args.max_undefined)
    sink = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        print(bench_mod.CSV_HEADER, file=sink)
        for row in rows:
            print(row, file=sink)
            sink.flush()
    finally:
        if args.out:
            sink.close()
    return 0


_COMMANDS = {
    "solve": _cmd_solve,
    "residual": _cmd_residual,
    "stats": _cmd_stats,
    "bench": _cmd_bench,
}


def dispatch(argv) -> int:
    try:
        args = _build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return 1
    except ParseError as exc:
        print(f"error[syntax]: {exc}", file=sys.stderr)
        return 2
    except ProgramError as exc:
        print(f"error[program]: {exc}", file=sys.stderr)
        return 2
    except OlonError as exc:
        print(f"error[olon]: {exc}", file=sys.stderr)
        return 2
    except (ProbFactLimitError, UndefinedAtomLimitError) as exc:
        print(f"error[limit]: {exc}", file=sys.stderr)
        return 2
    except CredalUndefinedError as exc:
        print(f"error[credal]: {exc}", file=sys.stderr)
        return 2
    except SolveTimeout as exc:
        print(f"error[timeout]: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
