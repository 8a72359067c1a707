"""Command-line front end.

Exit codes: 0 success, 2 parse/usage error, 3 invariant violation,
4 precondition violation, 5 I/O error.
"""
from __future__ import annotations

import argparse
import json
import secrets
import sys
import time

from . import __version__
from .basis import expand
from .bound import (
    bound_check,
    check_admissible,
    commutator_expectation,
    normalize_observable,
    optimal_observable,
    witness_operator,
)
from .coherence import RoofBudget, l1_matrix, roof_estimate
from .io import ParseError, SweepRow, read_matrix_file, write_matrix_file, write_sweep_csv
from .operators import (
    DensityMatrix,
    DimensionMismatchError,
    HermitianOperator,
    InvariantError,
    PreconditionError,
    PureState,
    expectation,
)
from .sampling import Sampler, derive_seed, make_rng
from .shots import DEFAULT_Z, ProbabilityError, estimate_bound_from_shots, simulate_measurement

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_PRECONDITION = 4
EXIT_IO = 5


def _emit(report: dict) -> None:
    print(json.dumps(report, indent=2))


def _seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(64)
    return args.seed


def _load_state(path) -> DensityMatrix:
    obj = read_matrix_file(path)
    if isinstance(obj, PureState):
        return obj.density()
    if isinstance(obj, DensityMatrix):
        return obj
    raise ParseError(f"{path}: expected a density or state_vector file, got an observable")


def _load_observable(path) -> HermitianOperator:
    obj = read_matrix_file(path)
    if not isinstance(obj, HermitianOperator) or isinstance(obj, DensityMatrix):
        raise ParseError(f"{path}: expected an observable file")
    return obj


def _check_dims(rho, a) -> None:
    if rho.dim != a.dim:
        raise DimensionMismatchError(f"state has dim {rho.dim} but observable has dim {a.dim}")


def cmd_bound(args) -> int:
    rho = _load_state(args.state)
    a = _load_observable(args.observable)
    _check_dims(rho, a)
    budget = None
    if args.roof:
        budget = RoofBudget(args.restarts, args.iters, _seed(args))
    rep = bound_check(a, rho, auto_normalize=args.normalize, roof=args.roof, roof_budget=budget)
    out = rep.as_dict()
    if args.roof:
        out["seed"] = args.seed
    _emit(out)
    return EXIT_OK


def cmd_optimize(args) -> int:
    rho = _load_state(args.state)
    coeffs, value = optimal_observable(rho)
    a = expand(coeffs)
    write_matrix_file(args.out, a, "observable")
    c = l1_matrix(rho)
    out = {"lhs": value, "c_l1": c, "observable_file": str(args.out),
           "observable_coeffs": [float(x) for x in coeffs.a]}
    if c >= 1e-12:
        out["ratio"] = value / c
    _emit(out)
    return EXIT_OK


def sweep_rows(dims, trials: int, seed: int, roof: bool = False, budget: RoofBudget | None = None,
               timing: bool = False) -> list[SweepRow]:
    """One row per ``(dim, trial)``, each trial driven by its own derived seed."""
    rows = []
    for d in dims:
        for t in range(trials):
            t0 = time.perf_counter()
            s = derive_seed(seed, d, t)
            sampler = Sampler(d, make_rng(s))
            rank = int(sampler.rng.integers(1, d + 1))
            rho = sampler.density(rank)
            a, _ = sampler.observable()
            b = None
            if roof:
                base = budget or RoofBudget()
                b = RoofBudget(base.restarts, base.iterations, s, base.sizes)
            rep = bound_check(a, rho, roof=roof, roof_budget=b)
            _, opt = optimal_observable(rho)
            rows.append(SweepRow(
                dim=d, trial=t, seed=s, lhs=rep.lhs, c_l1=rep.c_l1,
                roof_upper=rep.roof_upper, margin=rep.margin, optimal_lhs=opt,
                runtime_ms=(time.perf_counter() - t0) * 1e3 if timing else None,
            ))
    return rows


def cmd_sweep(args) -> int:
    seed = _seed(args)
    rows = sweep_rows(args.dims, args.trials, seed, roof=args.roof == "on",
                      budget=RoofBudget(args.restarts, args.iters), timing=args.timing)
    if args.out is None or args.out == "-":
        write_sweep_csv(rows, sys.stdout)
        return EXIT_OK
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        write_sweep_csv(rows, fh)
    summary = {"rows": len(rows), "seed": seed, "out": str(args.out),
               "min_margin": min((r.margin for r in rows), default=None)}
    if args.roof == "on":
        summary["min_roof_gap"] = min((r.roof_upper - r.lhs for r in rows), default=None)
    print(json.dumps(summary), file=sys.stderr)
    return EXIT_OK


def cmd_witness(args) -> int:
    rho = _load_state(args.state)
    a = _load_observable(args.observable)
    _check_dims(rho, a)
    if args.normalize:
        a = normalize_observable(a)
    else:
        check_admissible(a)
    w = witness_operator(a)
    res = simulate_measurement(w, rho, args.shots, _seed(args), args.z)
    out = res.as_dict()
    out.update(seed=args.seed,
               lower_bound=estimate_bound_from_shots(res),
               exact_mean=expectation(w, rho).real,
               exact_lhs=abs(commutator_expectation(a, rho)))
    _emit(out)
    return EXIT_OK


def cmd_roof(args) -> int:
    rho = _load_state(args.state)
    est = roof_estimate(rho, RoofBudget(args.restarts, args.iters, _seed(args)))
    _emit({
        "value": est.value,
        "l1_matrix": l1_matrix(rho),
        "decomposition_size": len(est.best_decomposition),
        "converged": est.converged,
        "iterations": est.iterations,
        "restarts": args.restarts,
        "seed": args.seed,
    })
    return EXIT_OK


def _positive_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s!r}")
    return v


def _seed_arg(s: str) -> int:
    v = int(s)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _dims(s: str) -> list[int]:
    try:
        dims = [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--dims takes a comma-separated list of integers, got {s!r}")
    if not dims or any(d < 2 for d in dims):
        raise argparse.ArgumentTypeError("every dimension must be >= 2")
    return dims


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coherbound",
                                description="Commutator lower bounds on l1 quantum coherence.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def roof_opts(q, restarts=50, iters=500):
        q.add_argument("--restarts", type=_positive_int, default=restarts)
        q.add_argument("--iters", type=_positive_int, default=iters)

    q = sub.add_parser("bound", help="evaluate the bound for a state and an observable")
    q.add_argument("state")
    q.add_argument("observable")
    q.add_argument("--normalize", action="store_true",
                   help="remove the trace of A and rescale it to unit Frobenius norm")
    q.add_argument("--roof", action="store_true", help="also estimate the convex roof")
    q.add_argument("--seed", type=_seed_arg)
    roof_opts(q)
    q.set_defaults(func=cmd_bound)

    q = sub.add_parser("optimize", help="find the observable with the largest bound")
    q.add_argument("state")
    q.add_argument("--out", required=True, help="observable file to write")
    q.set_defaults(func=cmd_optimize)

    q = sub.add_parser("sweep", help="random (state, observable) sweep written as CSV")
    q.add_argument("--dims", type=_dims, default=[2, 3, 4])
    q.add_argument("--trials", type=_positive_int, default=100)
    q.add_argument("--seed", type=_seed_arg)
    q.add_argument("--roof", choices=("on", "off"), default="off")
    q.add_argument("--out", help="CSV path (default: stdout)")
    q.add_argument("--timing", action="store_true",
                   help="fill runtime_ms; output is then no longer byte-reproducible")
    roof_opts(q, restarts=8, iters=200)
    q.set_defaults(func=cmd_sweep)

    q = sub.add_parser("witness", help="simulate finite-shot measurement of i[A, A^D]")
    q.add_argument("state")
    q.add_argument("observable")
    q.add_argument("--shots", type=_positive_int, required=True)
    q.add_argument("--seed", type=_seed_arg)
    q.add_argument("--z", type=float, default=DEFAULT_Z)
    q.add_argument("--normalize", action="store_true")
    q.set_defaults(func=cmd_witness)

    q = sub.add_parser("roof", help="upper-bound the convex-roof l1 coherence")
    q.add_argument("state")
    q.add_argument("--seed", type=_seed_arg)
    roof_opts(q)
    q.set_defaults(func=cmd_roof)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, json.JSONDecodeError) as exc:
        code, msg = EXIT_PARSE, exc
    except (InvariantError, ProbabilityError) as exc:
        code, msg = EXIT_INVARIANT, exc
    except (PreconditionError, DimensionMismatchError) as exc:
        code, msg = EXIT_PRECONDITION, exc
    except OSError as exc:
        code, msg = EXIT_IO, exc
    print(f"coherbound {args.command}: error: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
