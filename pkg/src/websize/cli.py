"""Command-line entry point: ``websize <command> ...``.

Exit status: 0 success, 2 usage error, 3 domain or infeasibility error,
4 I/O error, 5 validation tolerance failure.
"""

from __future__ import annotations

import argparse
import sys

from . import report
from .desim import Deterministic, Exponential, Hyper2, SimConfig, simulate_queue
from .errors import DomainError
from .queueing import (HyperExp2, PageProfile, ServiceMoments, VacationSpec, fdm_wait,
                       h2_branches, h2_wait, md1_wait, mg1_vacation_wait, pk_wait,
                       tdm_wait, vacation_residual)
from .sizing import (DelayModel, WorkloadParams, integerize_users, object_size, segment_gap,
                     solve_users_raw)
from .validation import PRESETS, preset_cases, run_cases

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_IO, EXIT_VALIDATION = 0, 2, 3, 4, 5


def g6(x) -> str:
    return f"{x:.6g}"


def _add_load(p, *, required=True, multi=False):
    kw = {"type": float, "default": None}
    if multi:
        kw["nargs"] = "+"
    p.add_argument("--rho", dest="rho", **kw, help="load / arrival rate (synonym of --lambda)")
    p.add_argument("--lambda", dest="lam", **kw, help="synonym of --rho")
    p.set_defaults(_load_required=required)


def _resolve_load(parser, args):
    rho, lam = args.rho, args.lam
    if rho is not None and lam is not None and rho != lam:
        parser.error("--rho and --lambda are synonyms; got different values")
    value = rho if rho is not None else lam
    if value is None and args._load_required:
        parser.error("one of --rho / --lambda is required")
    return value


def parse_distribution(text: str, rate=None):
    """``det:V``, ``exp:RATE``, ``h2:P1,RATE1,RATE2`` or ``page:N`` (H2 page law at ``rate``)."""
    kind, _, arg = text.partition(":")
    try:
        if kind == "det":
            return Deterministic(float(arg))
        if kind == "exp":
            return Exponential(float(arg))
        if kind == "h2":
            p1, r1, r2 = (float(v) for v in arg.split(","))
            return Hyper2(HyperExp2(p1, r1, 1.0 - p1, r2))
        if kind == "page":
            return Hyper2(h2_branches(rate, int(arg)))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise argparse.ArgumentTypeError(f"bad distribution {text!r}: {exc}") from exc
    raise argparse.ArgumentTypeError(
        f"bad distribution {text!r}; use det:V, exp:RATE, h2:P1,RATE1,RATE2 or page:N")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="websize", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wait", help="closed-form mean queueing delay")
    p.add_argument("model", choices=["pk", "md1", "vacation", "fdm", "tdm", "h2"])
    _add_load(p)
    p.add_argument("--mean", type=float, help="E(S)")
    p.add_argument("--second-moment", type=float, help="E(S^2)")
    p.add_argument("--mu", type=float, help="service rate (md1)")
    p.add_argument("--v-mean", type=float, help="E(V)")
    p.add_argument("--v-second-moment", type=float, help="E(V^2)")
    p.add_argument("--m", type=float, help="multiplexed streams (fdm, tdm)")
    p.add_argument("--n", type=int, help="embedded objects N (h2)")

    p = sub.add_parser("users", help="concurrent users m from load and N")
    _add_load(p)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("size", help="web object size theta")
    _add_load(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mss", type=int, required=True)
    p.add_argument("--model", choices=["tdm", "h2"], required=True)

    p = sub.add_parser("sweep", help="object size tables over a grid")
    p.add_argument("--preset", choices=["paper"], default=None)
    _add_load(p, required=False, multi=True)
    p.add_argument("--n-min", type=int, default=report.REFERENCE_N_RANGE[0])
    p.add_argument("--n-max", type=int, default=report.REFERENCE_N_RANGE[1])
    p.add_argument("--mss", type=int, nargs="+", default=list(report.REFERENCE_MSS))
    p.add_argument("--model", choices=["tdm", "h2"], nargs="+", default=["tdm", "h2"])
    p.add_argument("--format", choices=["csv", "md", "svg"], default="csv")
    p.add_argument("--out", default="-", help="output path (default stdout)")
    p.add_argument("--plot", default=None, help="also render a matplotlib figure here")

    p = sub.add_parser("figure", help="figure data: users vs N, or size ratio vs load")
    p.add_argument("kind", choices=["users", "ratio"])
    _add_load(p, required=False, multi=True)
    p.add_argument("--n-min", type=int, default=report.REFERENCE_N_RANGE[0])
    p.add_argument("--n-max", type=int, default=report.REFERENCE_N_RANGE[1])
    p.add_argument("--mss", type=int, nargs="+", default=list(report.REFERENCE_MSS))
    p.add_argument("--format", choices=["csv", "svg"], default="csv")
    p.add_argument("--out", default="-")
    p.add_argument("--plot", default=None, help="also render a matplotlib figure here")

    p = sub.add_parser("simulate", help="discrete-event estimate of the mean wait")
    _add_load(p)
    p.add_argument("--service", required=True, help="det:V | exp:RATE | h2:P1,R1,R2 | page:N")
    p.add_argument("--vacation", default=None, help="vacation law, same syntax; omit for none")
    p.add_argument("--departures", type=int, default=1_000_000)
    p.add_argument("--warmup", type=float, default=0.1)
    p.add_argument("--batches", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("validate", help="simulation-vs-formula agreement grid")
    p.add_argument("--grid", choices=sorted(PRESETS), default="standard")
    p.add_argument("--tolerance", type=float, default=None,
                   help="relative tolerance (default: preset's)")
    p.add_argument("--seed", type=int, default=0)
    return parser


def _need(parser, args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        parser.error(f"wait {args.model} needs {flags}")


def cmd_wait(parser, args, lam, out):
    model = args.model
    if model == "pk":
        _need(parser, args, "mean", "second_moment")
        w = pk_wait(lam, ServiceMoments(args.mean, args.second_moment))
    elif model == "md1":
        _need(parser, args, "mu")
        w = md1_wait(lam, args.mu)
    elif model == "vacation":
        _need(parser, args, "mean", "second_moment", "v_mean", "v_second_moment")
        s = ServiceMoments(args.mean, args.second_moment)
        v = VacationSpec(args.v_mean, args.v_second_moment)
        print(f"R = {g6(vacation_residual(lam, s, v))}", file=out)
        w = mg1_vacation_wait(lam, s, v)
    elif model in ("fdm", "tdm"):
        _need(parser, args, "m")
        w = (fdm_wait if model == "fdm" else tdm_wait)(lam, args.m)
    else:
        _need(parser, args, "n")
        w = h2_wait(PageProfile(lam, args.n))
    print(f"W = {g6(w)}", file=out)


def _sweep_spec(parser, args, lam):
    if args.preset == "paper":
        if lam is not None:
            parser.error("--preset paper fixes the loads; drop --rho/--lambda")
        return report.REFERENCE_SPEC
    loads = lam if lam is not None else list(report.REFERENCE_LOADS)
    models = tuple(DelayModel.parse(m) for m in args.model)
    return report.SweepSpec(tuple(loads), (args.n_min, args.n_max), tuple(args.mss), models)


def _plot(obj, path):
    if path is None:
        return
    from .plotting import save_figure

    save_figure(report.table_as_figure(obj) if isinstance(obj, report.Table) else obj, path)


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    load = _resolve_load(parser, args) if hasattr(args, "rho") else None
    try:
        if args.command == "wait":
            cmd_wait(parser, args, load, out)
        elif args.command == "users":
            m_raw = solve_users_raw(load, args.n)
            print(f"m_raw = {g6(m_raw)}", file=out)
            print(f"m = {integerize_users(m_raw)}", file=out)
        elif args.command == "size":
            params, model = WorkloadParams(load, args.n, args.mss), DelayModel.parse(args.model)
            res = object_size(params, model)
            for key in ("m_raw", "m", "n", "theta_raw", "theta"):
                value = getattr(res, key)
                print(f"{key} = {value if isinstance(value, int) else g6(value)}", file=out)
            print(f"segment_gap = {g6(segment_gap(params, model))}", file=out)
        elif args.command == "sweep":
            table = report.object_size_table(_sweep_spec(parser, args, load))
            report.emit(table, args.format, out if args.out == "-" else args.out)
            _plot(table, args.plot)
        elif args.command == "figure":
            n_range = (args.n_min, args.n_max)
            if args.kind == "users":
                fig = report.users_figure(load or report.REFERENCE_LOADS, n_range)
            else:
                fig = report.ratio_figure(load or report.RATIO_LOADS, n_range, args.mss)
                for note in fig.notes:
                    print(f"warning: {note}", file=sys.stderr)
            report.emit(fig, args.format, out if args.out == "-" else args.out)
            _plot(fig, args.plot)
        elif args.command == "simulate":
            try:
                service = parse_distribution(args.service, load)
                vacation = parse_distribution(args.vacation, load) if args.vacation else None
            except argparse.ArgumentTypeError as exc:
                parser.error(str(exc))
            cfg = SimConfig(load, service, vacation, args.departures, args.warmup,
                            args.batches, args.seed)
            res = simulate_queue(cfg)
            print(f"mean_wait = {g6(res.mean_wait)}", file=out)
            print(f"std_error = {g6(res.std_error)}", file=out)
            print(f"departures_used = {res.departures_used}", file=out)
            print(f"batch_count = {res.batch_count}", file=out)
            print(f"seed = {res.seed}", file=out)
        elif args.command == "validate":
            _, tol, dtol = PRESETS[args.grid]
            if args.tolerance is not None:
                tol = dtol = args.tolerance
            failed = 0
            for outcome in run_cases(preset_cases(args.grid, args.seed), tol, dtol):
                print(outcome.line(), file=out, flush=True)
                failed += not outcome.passed
            print(f"{'FAIL' if failed else 'PASS'}: {failed} failing case(s)", file=out)
            if failed:
                return EXIT_VALIDATION
    except DomainError as exc:
        print(f"websize: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"websize: I/O error: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
