"""Command-line front end.

Exit codes: 0 on success, 1 on a validation error, 2 when a verification or
reproduction check fails.
"""

import argparse
import sys

from .allocation import (
    allocate,
    common_alpha_band,
    feasibility_region,
)
from .analytic import conditional_outages, total_secondary_outage
from .harness import (
    MODES,
    REPRODUCE_TARGETS,
    SWEEP_AXES,
    SweepSpec,
    compare_analytic_mc,
    load_config,
    reproduce,
    resolve_out_dir,
    run_sweep,
)
from .montecarlo import SCHEMES, estimate
from .quadrature import QuadratureSpec
from .system import db_to_linear, derive, linear_to_db, secondary_cutoff_snr


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="crrelay",
        description="Outage analysis, simulation and power allocation for a "
                    "relay-aided underlay cognitive-radio link.")
    top.add_argument("--config", help="scenario config file (flat key=value)")
    top.add_argument("--set", action="append", default=[], metavar="KEY=VAL",
                     help="override a config key (repeatable), e.g. "
                          "link_vars.sp=0.1 or epsilon=0.05")
    top.add_argument("--seed", type=int, default=0)
    top.add_argument("--trials", type=int, default=None,
                     help="Monte Carlo trials (default 1e6; reproduction "
                          "targets default to 1e5 per sweep point)")
    top.add_argument("--workers", type=int, default=1)
    top.add_argument("--out-dir", default=None,
                     help="output directory (default $CRRELAY_OUT_DIR or ./out)")
    top.add_argument("--quad-tol", type=float, default=1e-10,
                     help="absolute and relative quadrature tolerance")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analytic", help="closed-form outage summary")
    p.add_argument("--alpha", type=float, default=0.5)

    p = sub.add_parser("simulate", help="Monte Carlo outage estimate")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--scheme", choices=SCHEMES, default="proposed")

    p = sub.add_parser("allocate", help="pick relay power split and SNR")
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--snr-r-db", type=float, default=None,
                   help="fix the relay SNR instead of searching the grid")

    p = sub.add_parser("region", help="split feasibility band for a rate pair")
    p.add_argument("--rate-p", type=float, default=None)
    p.add_argument("--rate-s", type=float, default=None)

    p = sub.add_parser("sweep", help="sweep one scenario axis")
    p.add_argument("--axis", required=True, choices=SWEEP_AXES)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--schemes", default="proposed",
                   help="comma-separated subset of " + ",".join(SCHEMES))
    p.add_argument("--mode", choices=MODES, default="both")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--snr-r-policy", choices=("fixed", "min_for_epsilon"),
                   default="fixed")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")

    p = sub.add_parser("reproduce", help="emit a reference target CSV + report")
    p.add_argument("--target", required=True,
                   choices=REPRODUCE_TARGETS + ("all",))

    p = sub.add_parser("verify", help="analytic vs simulation cross-check")
    p.add_argument("--alpha", type=float, default=0.5)

    return top


def _cmd_analytic(params, args, quad):
    derived = derive(params)
    cutoff = secondary_cutoff_snr(params.rate_p, params.epsilon,
                                  params.link_vars.pp)
    print(f"secondary snr: {derived.snr_s:.6g} "
          f"(admission cutoff {linear_to_db(cutoff):.4g} dB)")
    summary = total_secondary_outage(derived, args.alpha, quad)
    kind = "bound" if summary.bound else "exact"
    print(f"relay activation: {summary.p_d1:.6g}")
    print(f"total secondary outage ({kind}): {summary.total_sec:.6g}")
    print(f"total primary outage ({kind}):   {summary.total_pri:.6g}")
    if derived.snr_s > 0.0:
        cond = conditional_outages(derived, args.alpha, quad)
        print(f"conditionals: pri_d0={cond.pri_d0:.6g} sec_d0={cond.sec_d0:.6g} "
              f"pri_d1={cond.pri_d1:.6g} sec_d1={cond.sec_d1:.6g} "
              f"(d1 {'exact' if cond.d1_exact else 'bounds'})")
    return 0


def _cmd_simulate(params, args):
    trials = args.trials or 1_000_000
    est = estimate(params, args.alpha, trials, args.seed, args.scheme,
                   args.workers)
    print(f"scheme={args.scheme} alpha={args.alpha} trials={trials} "
          f"seed={args.seed}")
    print(f"secondary outage: {est.sec.p_hat:.6g} +- {est.sec.std_err:.3g}")
    print(f"primary outage:   {est.pri.p_hat:.6g} +- {est.pri.std_err:.3g}")
    if est.p_d1 is not None:
        print(f"relay active:     {est.p_d1.p_hat:.6g}")
    return 0


def _cmd_allocate(params, args):
    grid = None if args.snr_r_db is None else (db_to_linear(args.snr_r_db),)
    res = allocate(params, epsilon=args.epsilon, snr_r_grid=grid)
    if not res.feasible:
        print("infeasible: no grid point meets the primary bound "
              "(secondary outage 1)")
        return 0
    print(f"alpha={res.alpha:.6g} snr_r={res.snr_r:.6g} "
          f"({linear_to_db(res.snr_r):.4g} dB)")
    print(f"primary bound:          {res.u_p:.6g}")
    print(f"secondary outage bound: {res.u_s_total:.6g}")
    return 0


def _cmd_region(params, args):
    rate_p = params.rate_p if args.rate_p is None else args.rate_p
    rate_s = params.rate_s if args.rate_s is None else args.rate_s
    band = common_alpha_band(rate_p, rate_s)
    region = feasibility_region(params, (rate_p,), (rate_s,))
    if band is None:
        print(f"rates ({rate_p}, {rate_s}): no common split band")
    else:
        print(f"rates ({rate_p}, {rate_s}): common split band "
              f"[{band[0]:.4f}, {band[1]:.4f}]")
    print(f"common region nonempty: {bool(region.common[0, 0])}")
    return 0


def _cmd_sweep(params, args):
    schemes = tuple(s.strip() for s in args.schemes.split(",") if s.strip())
    spec = SweepSpec.from_range(
        params, args.axis, args.start, args.stop, args.step,
        schemes=schemes, mode=args.mode, trials=args.trials or 100_000,
        seed=args.seed, alpha=args.alpha, snr_r_policy=args.snr_r_policy)
    table = run_sweep(spec, workers=args.workers)
    if args.out is None:
        sys.stdout.write(table.to_csv_text())
    else:
        path = table.write_csv(args.out)
        print(f"wrote {path}")
    return 0


def _cmd_reproduce(args):
    targets = REPRODUCE_TARGETS if args.target == "all" else (args.target,)
    ok = True
    for target in targets:
        report = reproduce(target, out_dir=args.out_dir, trials=args.trials,
                           seed=args.seed, workers=args.workers)
        print(report.render())
        ok = ok and report.ok
    return 0 if ok else 2


def _cmd_verify(params, args, quad):
    report = compare_analytic_mc(params, args.alpha, args.trials or 1_000_000,
                                 args.seed, args.workers, quad)
    print(report.render())
    out = resolve_out_dir(args.out_dir)
    (out / "verify_report.txt").write_text(report.render())
    return 0 if report.ok else 2


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        quad = QuadratureSpec(abs_tol=args.quad_tol, rel_tol=args.quad_tol)
        params = load_config(args.config, args.set)
        if args.command == "analytic":
            return _cmd_analytic(params, args, quad)
        if args.command == "simulate":
            return _cmd_simulate(params, args)
        if args.command == "allocate":
            return _cmd_allocate(params, args)
        if args.command == "region":
            return _cmd_region(params, args)
        if args.command == "sweep":
            return _cmd_sweep(params, args)
        if args.command == "reproduce":
            return _cmd_reproduce(args)
        if args.command == "verify":
            return _cmd_verify(params, args, quad)
        raise ValueError(f"unknown command {args.command!r}")
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
