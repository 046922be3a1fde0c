"""Command-line surface.

Subcommands: ``gen ellipse`` / ``gen tight`` write instance files,
``solve`` runs the solver on a point CSV, ``bench`` reproduces the
variant-comparison table over seeded replicates.

Exit codes: 0 success, 2 bad input or parameters, 3 precision target not
reached within max_iters, 4 singular moment matrix at initialization.
"""

import argparse
import json
import sys
from pathlib import Path

from . import io
from .bench import resolve_jobs, run_bench, summary_csv, summary_table
from .bounds import BoundKind
from .core import DesignProblem
from .exceptions import DomainError, OptDesignError, SingularDesign
from .instances import gen_gaussian_ellipse, gen_tightness
from .io import read_points_csv, write_points_csv
from .solver import Realloc, SolverConfig, solve

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_MAX_ITERS = 3
EXIT_SINGULAR = 4


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="optdesign",
        description="D-optimum design on finite candidate sets, with "
                    "support-point pruning and a benchmark harness.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate problem instances")
    gensub = gen.add_subparsers(dest="generator", required=True)

    ell = gensub.add_parser(
        "ellipse", help="random planar cloud lifted to (z1, z2, 1)")
    ell.add_argument("--n", type=int, required=True,
                     help="number of points (>= 3)")
    ell.add_argument("--seed", type=int, default=0)
    ell.add_argument("--out", type=Path, required=True)

    tight = gensub.add_parser(
        "tight", help="worst-case pruning instance with certificates")
    tight.add_argument("--m", type=int, required=True, help="dimension >= 2")
    tight.add_argument("--eps", type=float, required=True)
    tight.add_argument("--delta", type=float, required=True)
    tight.add_argument("--b", type=float, default=None,
                       help="distinguished-point scale; default: geometric "
                            "midpoint of the admissible interval")
    tight.add_argument("--out", type=Path, required=True,
                       help="point CSV; certificates go to a .json sidecar")

    slv = sub.add_parser("solve", help="solve a point CSV")
    slv.add_argument("input", type=Path)
    slv.add_argument("--bound", choices=["new", "old", "none"],
                     default="new")
    slv.add_argument("--delta", type=float, default=1e-3)
    slv.add_argument("--realloc", choices=["proportional", "boost"],
                     default="proportional")
    slv.add_argument("--boost-factor", type=float, default=2.0)
    slv.add_argument("--prune-every", type=int, default=1)
    slv.add_argument("--prune-tol", type=float, default=None,
                     help="default 1e-9 * dim")
    slv.add_argument("--max-iters", type=int, default=100_000)
    slv.add_argument("--trace", type=Path, default=None,
                     help="write a JSON-lines trace here")
    slv.add_argument("--lift", action="store_true",
                     help="append a constant-1 coordinate to every point")
    slv.add_argument("--seed", type=int, default=None,
                     help="reserved for randomized initial designs; the "
                          "default uniform init is deterministic")

    bench = sub.add_parser("bench", help="variant comparison over replicates")
    bench.add_argument("--replicates", type=int, default=50)
    bench.add_argument("--n", type=int, default=1000)
    bench.add_argument("--delta", type=float, default=1e-3)
    bench.add_argument("--seed-base", type=int, default=0)
    bench.add_argument("--variants", default="none,old,new",
                       help="comma-separated subset of none,old,new")
    bench.add_argument("--jobs", type=int, default=None,
                       help="parallel replicates; env OPTDESIGN_JOBS "
                            "overrides")
    bench.add_argument("--max-iters", type=int, default=100_000)
    bench.add_argument("--out", type=Path, default=None,
                       help="write the summary CSV here (otherwise stdout)")
    return parser


def _cmd_gen(args):
    if args.generator == "ellipse":
        if args.n < 3:
            print(f"error: need n >= 3 (got {args.n})", file=sys.stderr)
            return EXIT_BAD_INPUT
        problem = gen_gaussian_ellipse(args.n, args.seed)
        write_points_csv(args.out, problem.points)
        print(f"wrote {problem.n_points} points to {args.out}")
        return EXIT_OK
    inst = gen_tightness(args.m, args.eps, args.delta, args.b)
    write_points_csv(args.out, inst.problem.points)
    sidecar = args.out.with_suffix(".json")
    with open(sidecar, "w", encoding="ascii") as fh:
        json.dump(io.tight_certificates(inst), fh, indent=2)
        fh.write("\n")
    print(f"wrote {inst.problem.n_points} points to {args.out}, "
          f"certificates to {sidecar}")
    return EXIT_OK


def _cmd_solve(args):
    try:
        points = read_points_csv(args.input, lift=args.lift)
    except (OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BAD_INPUT
    cfg = SolverConfig(
        bound=BoundKind.from_string(args.bound),
        delta=args.delta,
        prune_every=args.prune_every,
        prune_tol=args.prune_tol,
        realloc=Realloc.BOOST if args.realloc == "boost"
        else Realloc.PROPORTIONAL,
        boost_factor=args.boost_factor,
        max_iters=args.max_iters,
        record_trace=True,
    )
    try:
        problem = DesignProblem(points)
        solution, trace = solve(problem, cfg=cfg)
    except SingularDesign as err:
        print(f"error: singular design at initialization: {err}",
              file=sys.stderr)
        return EXIT_SINGULAR
    if args.trace is not None:
        io.write_trace_jsonl(args.trace, trace)
    summary = io.solution_summary(solution, trace, problem)
    json.dump(summary, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK if solution.status == "converged" else EXIT_MAX_ITERS


def _cmd_bench(args):
    variants = [v.strip() for v in args.variants.split(",") if v.strip()]
    summary = run_bench(
        replicates=args.replicates,
        n=args.n,
        delta=args.delta,
        seed_base=args.seed_base,
        variants=variants,
        jobs=resolve_jobs(args.jobs),
        max_iters=args.max_iters,
    )
    sys.stdout.write(summary_table(summary))
    csv_text = summary_csv(summary)
    if args.out is not None:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(csv_text)
        print(f"wrote CSV to {args.out}")
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "solve":
            return _cmd_solve(args)
        return _cmd_bench(args)
    except (DomainError, OptDesignError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
