"""Command-line experiments.

    eqconsensus run --input seq.txt --x0 0,1 --backend exact
    eqconsensus bound --n 8 --B 2 --epsilon 1e-3 --measure
    eqconsensus counterexample --n 10
    eqconsensus verify all --seed 42
    eqconsensus generate --kind counterexample --n 8 --horizon 8

Exit codes: 0 success, 1 a check failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import __version__
from .analysis import (
    BoundReport,
    ConsensusNotReached,
    contraction_series,
    epsilon_consensus_time,
    theoretical_bound,
)
from .dynamics import format_scalar, run, trajectory_csv
from .generators import (
    CounterexampleSpec,
    counterexample_sequence,
    fixed_degree_sequence,
    random_connected_graph,
)
from .graph import GraphError, SequenceFormatError, complete_graph, cycle_graph, format_sequence, read_sequence
from .suites import SUITES, jsonable


class UsageError(Exception):
    pass


def _meta(args: argparse.Namespace) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "output") and v is not None}
    return {"seed": args.seed, "config": config, "version": __version__}


def _emit(args: argparse.Namespace, text: str) -> None:
    if args.output:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=jsonable)


def _parse_vector(text: str) -> list[Fraction]:
    try:
        return [Fraction(tok.strip()) for tok in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse vector {text!r}") from None


def _load_sequence(args: argparse.Namespace):
    if args.input:
        try:
            return read_sequence(args.input)
        except FileNotFoundError:
            raise UsageError(f"no such sequence file: {args.input}") from None
        except SequenceFormatError as exc:
            raise UsageError(f"malformed sequence file {args.input}: {exc}") from None
    if args.n is None:
        raise UsageError("give --input or --n for the counterexample generator")
    m = args.n // 2
    horizon = args.horizon if args.horizon is not None else args.n
    return counterexample_sequence(CounterexampleSpec(args.n, -(-horizon // m))).truncated(horizon)


def cmd_run(args: argparse.Namespace) -> int:
    seq = _load_sequence(args)
    x0 = _parse_vector(args.x0) if args.x0 else [Fraction(i) for i in range(seq.n)]
    if len(x0) != seq.n:
        raise UsageError(f"--x0 has {len(x0)} entries, sequence has n={seq.n}")
    if args.backend == "float":
        x0 = [float(v) for v in x0]
    horizon = args.horizon if args.horizon is not None else len(seq)
    if horizon > len(seq):
        raise UsageError(f"--horizon {horizon} exceeds sequence length {len(seq)}")
    traj = run(seq, x0, horizon=horizon, backend=args.backend)
    meta = _meta(args)
    _emit(args, trajectory_csv(traj, {"seed": meta["seed"], "config": _dumps(meta["config"]).replace(" ", ""),
                                      "version": __version__}))
    return 0


def _base_graph(kind: str, n: int, seed):
    if kind == "complete":
        return complete_graph(n)
    if kind == "ring":
        return cycle_graph(n)
    return random_connected_graph(n, 0.3, random.Random(seed))


def cmd_bound(args: argparse.Namespace) -> int:
    try:
        bound = theoretical_bound(args.n, args.B, args.epsilon)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    measured = None
    if args.measure:
        horizon = int(bound) + 1
        horizon += -horizon % args.B
        seq = fixed_degree_sequence(_base_graph(args.base, args.n, args.seed), horizon, args.B,
                                    swaps_per_step=1, isolation_rate=0.3 if args.B > 1 else 0.0,
                                    seed=args.seed, lazy=True)
        measured = epsilon_consensus_time(seq, args.epsilon, backend=args.backend)
    report = BoundReport(args.n, args.B, args.epsilon, bound, measured)
    out = report.as_dict()
    if args.format == "json":
        _emit(args, _dumps({"meta": _meta(args), "report": out}) + "\n")
    else:
        lines = [f"{k} = {v}" for k, v in out.items() if v is not None]
        _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_counterexample(args: argparse.Namespace) -> int:
    if args.n < 4 or args.n % 2:
        raise UsageError("--n must be an even integer >= 4")
    eps = args.epsilon if args.backend == "exact" else float(args.epsilon)
    if not 0 < eps < 1:
        raise UsageError("--epsilon must lie in (0, 1)")
    m = args.n // 2
    max_t = args.horizon if args.horizon is not None else 10**6
    seq = counterexample_sequence(CounterexampleSpec(args.n, -(-max_t // m), "reversed"))
    series = list(contraction_series(seq, stride=m, horizon=max_t, backend=args.backend, stop_at=eps))
    first = series[-1][0] if series and series[-1][1] <= eps else None
    out = {"meta": _meta(args), "n": args.n, "epsilon": format_scalar(eps) if args.backend == "exact" else eps,
           "series": [[t, jsonable(c)] for t, c in series],
           "first_time": first if first is not None else "not reached",
           "lower_bound": 2 ** m / 8}
    _emit(args, _dumps(out) + "\n")
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    if args.kind == "counterexample":
        if args.n < 4 or args.n % 2:
            raise UsageError("--n must be an even integer >= 4")
        m = args.n // 2
        horizon = args.horizon if args.horizon is not None else m
        if horizon % m:
            raise UsageError(f"--horizon must be a multiple of n/2 = {m}")
        seq = counterexample_sequence(CounterexampleSpec(args.n, horizon // m, args.orientation))
    else:
        horizon = args.horizon if args.horizon is not None else 4 * args.B
        seq = fixed_degree_sequence(_base_graph(args.base, args.n, args.seed), horizon, args.B,
                                    swaps_per_step=1, isolation_rate=args.isolation_rate, seed=args.seed)
    _emit(args, format_sequence(seq))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.n is not None:
        overrides["max_n"] = args.n
    if args.t is not None:
        overrides["max_t"] = args.t
    if args.trials is not None:
        overrides["trials"] = args.trials
    lines = [_dumps({"meta": _meta(args)})]
    failed = False
    for name in names:
        rec = SUITES[name](**overrides)
        failed |= not rec["pass"]
        lines.append(_dumps(rec))
    _emit(args, "\n".join(lines) + "\n")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eqconsensus", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed_default=0):
        sp.add_argument("--seed", type=int, default=seed_default)
        sp.add_argument("--output", metavar="PATH")
        sp.add_argument("--backend", choices=("exact", "float"), default="float")

    sp = sub.add_parser("run", help="run the consensus iteration and write a CSV trajectory")
    common(sp)
    sp.add_argument("--input", metavar="PATH", help="graph-sequence file")
    sp.add_argument("--n", type=int, help="without --input: use the n-node counterexample")
    sp.add_argument("--x0", help="comma-separated initial values, e.g. 0,1/2,3")
    sp.add_argument("--horizon", type=int)
    sp.add_argument("--format", choices=("csv",), default="csv")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("bound", help="evaluate the polynomial convergence-time bound")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--B", type=int, default=1)
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--measure", action="store_true",
                    help="also certify the consensus time of a generated fixed-degree sequence")
    sp.add_argument("--base", choices=("random", "ring", "complete"), default="random")
    sp.add_argument("--format", choices=("json", "text"), default="json")
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("counterexample", help="scan the degree-swapping sequence for its consensus time")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--epsilon", type=Fraction, default=Fraction(1, 4), help="e.g. 1/4 or 0.25")
    sp.add_argument("--horizon", type=int, help="largest t to scan (default 10**6)")
    sp.add_argument("--format", choices=("json",), default="json")
    sp.set_defaults(func=cmd_counterexample)

    sp = sub.add_parser("generate", help="write a generated graph sequence in the sequence file format")
    sp.add_argument("--kind", choices=("counterexample", "fixed-degree"), default="counterexample")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--B", type=int, default=1)
    sp.add_argument("--horizon", type=int, help="number of graphs")
    sp.add_argument("--orientation", choices=("forward", "reversed"), default="forward")
    sp.add_argument("--base", choices=("random", "ring", "complete"), default="ring")
    sp.add_argument("--isolation-rate", type=float, default=0.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--output", metavar="PATH")
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("verify", help="run verification suites; JSON lines out")
    sp.add_argument("suite", choices=["all", *SUITES])
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--output", metavar="PATH")
    sp.add_argument("--n", type=int, help="largest node count")
    sp.add_argument("--t", type=int, help="largest horizon")
    sp.add_argument("--trials", type=int)
    sp.add_argument("--format", choices=("json",), default="json")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConsensusNotReached as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
