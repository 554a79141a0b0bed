"""Command-line interface.

Subcommands: ``generate``, ``solve``, ``sweep-kappa``, ``sweep-eps``, ``fit``.
Exit codes: 0 on success, 2 when a runtime target is unreachable, 1 on usage
or input errors.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import bench
from .bench import (SearchParams, SweepConfig, fit_loglog, method_label,
                    read_sweep_csv, rows_to_csv, sidecar_payload)
from .errors import QlssError, TargetUnreachable
from .evolution import TrotterPropagator, plan_for_runtime, write_trace_csv
from .hamiltonians import build_embedding
from .problems import (FAMILIES, GeneratorSpec, generate, load_instance,
                       save_instance)
from .qaoa import OptimizerConfig, optimize, write_qaoa_log_csv

_FAMILY_ALIASES = {"pd": "pd_laplacian", "nonh": "nonhermitian_laplacian"}
_DEFAULT_N = {"pd_laplacian": 64, "nonhermitian_laplacian": 32}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the interface contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _family(name: str) -> str:
    resolved = _FAMILY_ALIASES.get(name, name)
    if resolved not in FAMILIES:
        raise argparse.ArgumentTypeError(f"unknown family {name!r}")
    return resolved


def _float_list(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qlss",
                     description="Linear-system solver benchmarks via scheduled "
                                 "adiabatic evolution and QAOA")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="write a benchmark instance file")
    p_gen.add_argument("--family", type=_family, required=True,
                       help="pd | nonh (or full family names)")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--kappa", type=float, required=True)
    p_gen.add_argument("--out", required=True)

    p_solve = sub.add_parser("solve", help="evolve one instance")
    src = p_solve.add_mutually_exclusive_group(required=True)
    src.add_argument("--instance", help="instance file to load")
    src.add_argument("--family", type=_family)
    p_solve.add_argument("--n", type=int)
    p_solve.add_argument("--kappa", type=float)
    p_solve.add_argument("--allow-rescale", action="store_true",
                         help="normalize a loaded matrix to unit spectral norm")
    p_solve.add_argument("--method", required=True,
                         choices=["vanilla", "aqc-p", "aqc-exp", "qaoa"])
    p_solve.add_argument("--p", type=float, help="exponent for aqc-p")
    p_solve.add_argument("--depth", type=int, default=20, help="QAOA depth P")
    mode = p_solve.add_mutually_exclusive_group(required=True)
    mode.add_argument("--runtime", type=float)
    mode.add_argument("--target-fidelity", type=float)
    mode.add_argument("--target-eps", type=float)
    p_solve.add_argument("--trace", help="CSV trace / iteration log path")
    p_solve.add_argument("--t-init", type=float, default=1.0)
    p_solve.add_argument("--t-max", type=float, default=1e6)

    p_sk = sub.add_parser("sweep-kappa", help="runtime vs condition number")
    p_sk.add_argument("--method", required=True,
                      choices=["vanilla", "aqc-p", "aqc-exp", "qaoa"])
    p_sk.add_argument("--p", type=float)
    p_sk.add_argument("--family", type=_family, default="pd_laplacian")
    p_sk.add_argument("--n", type=int)
    p_sk.add_argument("--targets", type=_float_list, default=(0.99,))
    p_sk.add_argument("--kappas", type=_float_list,
                      default=bench.DEFAULT_KAPPA_GRID)
    p_sk.add_argument("--depth", type=int, help="fixed QAOA depth (default: grows with kappa)")
    p_sk.add_argument("--t-init", type=float, default=1.0)
    p_sk.add_argument("--t-max", type=float, default=1e6)
    p_sk.add_argument("--out", required=True)

    p_se = sub.add_parser("sweep-eps", help="runtime vs accuracy at fixed kappa")
    p_se.add_argument("--method", required=True,
                      choices=["vanilla", "aqc-p", "aqc-exp", "qaoa"])
    p_se.add_argument("--p", type=float)
    p_se.add_argument("--family", type=_family, default="pd_laplacian")
    p_se.add_argument("--n", type=int)
    p_se.add_argument("--kappa", type=float, default=10.0)
    p_se.add_argument("--eps", type=_float_list, default=bench.DEFAULT_EPS_GRID)
    p_se.add_argument("--depth", type=int, default=20)
    p_se.add_argument("--t-init", type=float, default=1.0)
    p_se.add_argument("--t-max", type=float, default=1e6)
    p_se.add_argument("--out", required=True)

    p_fit = sub.add_parser("fit", help="refit a sweep CSV")
    p_fit.add_argument("--in", dest="infile", required=True)
    p_fit.add_argument("--x", required=True, choices=["kappa", "inv_eps", "log_inv_eps"])

    return parser


def _instance_from_args(args):
    if args.instance:
        return load_instance(args.instance, allow_rescale=args.allow_rescale)
    if args.n is None or args.kappa is None:
        raise SystemExit(_usage_error("solve with --family needs --n and --kappa"))
    return generate(GeneratorSpec(n_dim=args.n, kappa=args.kappa, family=args.family))


def _usage_error(message: str) -> int:
    sys.stderr.write(f"qlss: error: {message}\n")
    return 1


def cmd_generate(args) -> int:
    inst = generate(GeneratorSpec(n_dim=args.n, kappa=args.kappa, family=args.family))
    save_instance(inst, args.out)
    print(f"wrote {args.out}: family={args.family} N={args.n} kappa={args.kappa:g}")
    return 0


def _solve_qaoa(args, inst) -> int:
    if args.runtime is not None:
        return _usage_error("--runtime is not meaningful for qaoa; use a target")
    emb = build_embedding(inst)
    if args.target_eps is not None:
        eps = args.target_eps
    else:
        if not 0.0 < args.target_fidelity < 1.0:
            return _usage_error("--target-fidelity must lie in (0, 1)")
        eps = math.sqrt(1.0 - args.target_fidelity)
    report = optimize(emb, args.depth, eps, OptimizerConfig())
    if args.trace:
        write_qaoa_log_csv(args.trace, report.history)
    print(f"method=qaoa depth={args.depth} iterations={report.iterations} "
          f"converged={report.converged}")
    print(f"objective={report.objective:.6e} fidelity={report.fidelity:.8f} "
          f"runtime_metric={report.runtime_metric:.6g}")
    if not report.converged:
        raise TargetUnreachable(
            f"objective {report.objective:.3e} did not reach {eps / emb.kappa:.3e}")
    return 0


def cmd_solve(args) -> int:
    if args.method == "aqc-p" and args.p is None:
        return _usage_error("--method aqc-p needs --p")
    inst = _instance_from_args(args)
    if args.method == "qaoa":
        return _solve_qaoa(args, inst)
    emb = build_embedding(inst)
    schedule = bench.schedule_for_method(args.method, args.p, inst.kappa)
    prop = TrotterPropagator(emb)
    label = method_label(args.method, args.p)
    if args.runtime is not None:
        plan = plan_for_runtime(args.runtime, schedule, record_trace=bool(args.trace))
        res = prop.evolve(plan)
        if args.trace:
            write_trace_csv(args.trace, res.trace)
        print(f"method={label} runtime_T={args.runtime:g} steps_M={plan.step_count_M}")
        print(f"fidelity={res.fidelity:.8f} density_error={res.density_error:.6e} "
              f"dark_overlap_max={res.dark_overlap_max:.3e}")
        return 0
    target = (args.target_fidelity if args.target_fidelity is not None
              else 1.0 - args.target_eps ** 2)
    search = SearchParams(t_init=args.t_init, t_max=args.t_max)
    t, res = bench._search_runtime(prop, schedule, target, search)
    if args.trace:
        res = prop.evolve(plan_for_runtime(t, schedule, record_trace=True))
        write_trace_csv(args.trace, res.trace)
    plan = plan_for_runtime(t, schedule)
    print(f"method={label} target_fidelity={target:.8f}")
    print(f"runtime_T={t:g} steps_M={plan.step_count_M} fidelity={res.fidelity:.8f} "
          f"density_error={res.density_error:.6e}")
    return 0


def cmd_sweep_kappa(args) -> int:
    if args.method == "aqc-p" and args.p is None:
        return _usage_error("--method aqc-p needs --p")
    n = args.n if args.n is not None else _DEFAULT_N[args.family]
    rows, payloads, missing_any = [], {}, False
    for target in args.targets:
        cfg = SweepConfig(method=args.method, family=args.family, n_dim=n,
                          kappa_grid=args.kappas, target_fidelity=target,
                          p=args.p, qaoa_depth=args.depth,
                          search=SearchParams(t_init=args.t_init, t_max=args.t_max))
        result = bench.sweep_kappa(cfg)
        rows.extend(result.rows)
        payloads[repr(target)] = sidecar_payload(cfg, result)
        missing_any = missing_any or bool(result.missing)
        for name, fit in result.fits.items():
            print(f"target={target:g} fit[{name}]: exponent={fit.exponent:.4f} "
                  f"intercept={fit.intercept:.4f} r2={fit.r_squared:.6f}")
        for key, reason in result.missing:
            print(f"target={target:g} kappa={key:g} missing: {reason}")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(rows_to_csv(rows))
    import json
    with open(args.out + ".json", "w", encoding="utf-8") as fh:
        json.dump(payloads, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 2 if missing_any else 0


def cmd_sweep_eps(args) -> int:
    if args.method == "aqc-p" and args.p is None:
        return _usage_error("--method aqc-p needs --p")
    n = args.n if args.n is not None else _DEFAULT_N[args.family]
    cfg = SweepConfig(method=args.method, family=args.family, n_dim=n,
                      target_eps=args.eps, p=args.p, qaoa_depth=args.depth,
                      search=SearchParams(t_init=args.t_init, t_max=args.t_max))
    result = bench.sweep_epsilon(cfg, kappa_fixed=args.kappa)
    for name, fit in result.fits.items():
        print(f"fit[{name}]: exponent={fit.exponent:.4f} "
              f"intercept={fit.intercept:.4f} r2={fit.r_squared:.6f}")
    for key, reason in result.missing:
        print(f"eps={key:g} missing: {reason}")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(rows_to_csv(result.rows))
    bench.write_sidecar_json(args.out + ".json", cfg, result,
                             extra={"kappa_fixed": args.kappa})
    print(f"wrote {args.out} ({len(result.rows)} rows)")
    return 2 if result.missing else 0


def cmd_fit(args) -> int:
    rows = read_sweep_csv(args.infile)
    if args.x == "kappa":
        points = [(r["kappa"], r["runtime_T"]) for r in rows]
    elif args.x == "inv_eps":
        points = [(1.0 / r["target"], r["runtime_T"]) for r in rows]
    else:
        points = [(np.log(1.0 / r["target"]), r["runtime_T"]) for r in rows]
    fit = fit_loglog(points)
    print(f"exponent={fit.exponent:.6f} intercept={fit.intercept:.6f} "
          f"r2={fit.r_squared:.8f} points={len(points)}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {"generate": cmd_generate, "solve": cmd_solve,
                "sweep-kappa": cmd_sweep_kappa, "sweep-eps": cmd_sweep_eps,
                "fit": cmd_fit}
    try:
        return handlers[args.command](args)
    except TargetUnreachable as exc:
        sys.stderr.write(f"qlss: target unreachable: {exc}\n")
        return 2
    except (QlssError, OSError) as exc:
        sys.stderr.write(f"qlss: error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
