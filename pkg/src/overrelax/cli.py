"""Command-line driver: ``overrelax {run,converge,wave}``.

Defaults reproduce the Gaussian boundary test (c=1, lam=2, t_max=1,
alpha=beta=0, A=80, B=0, dx=2^-7, Neumann outflow, S2 with instant
relaxation).
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .boundary import BoundaryClosure
from .harness import (StabilityError, convergence_study, counter_propagation_test, emit_profiles,
                      emit_table, run_simulation)
from .lattice import SchemeConfig
from .problems import ProblemSetup

log = logging.getLogger("overrelax")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--c", type=float, default=1.0, help="transport speed (> 0)")
    p.add_argument("--lambda", dest="lam", type=float, default=2.0, help="kinetic speed")
    p.add_argument("--tmax", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.0, help="initial centre of w")
    p.add_argument("--beta", type=float, default=0.0, help="initial centre of the flux error")
    p.add_argument("--amp-A", dest="A", type=float, default=80.0, help="Gaussian sharpness")
    p.add_argument("--amp-B", dest="B", type=float, default=0.0, help="flux error amplitude")
    p.add_argument("--right-bc", choices=["exact", "dirichlet", "neumann", "periodic"], default="neumann")
    p.add_argument("--scheme", choices=["s1", "s2"], default="s2")
    p.add_argument("--relax", choices=["instant", "over", "exact", "project"], default="instant")
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--out", type=Path, default=None, help="output directory for CSV files")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="overrelax", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="single simulation")
    _common(run)
    run.add_argument("--dx-exp", type=int, default=7, help="dx = 2^-k")
    run.add_argument("--snapshots", type=int, default=2)

    conv = sub.add_parser("converge", help="resolution sweep")
    _common(conv)
    conv.add_argument("--dx-exps", type=int, nargs="+", default=[5, 6, 7, 8, 9])

    wave = sub.add_parser("wave", help="peak velocities of w and of the flux error")
    _common(wave)
    wave.add_argument("--dx-exp", type=int, default=7)
    wave.add_argument("--snapshots", type=int, default=16)
    return parser


def _setup_and_cfg(args, k: int):
    setup = ProblemSetup(c=args.c, A=args.A, alpha=args.alpha, B=args.B, beta=args.beta, t_max=args.tmax)
    cfg = SchemeConfig.from_exponent(k, lam=args.lam, epsilon=args.epsilon,
                                     scheme=args.scheme, relaxation=args.relax)
    closure = BoundaryClosure.from_name(args.right_bc, setup)
    return setup, cfg, closure


def cmd_run(args) -> int:
    setup, cfg, closure = _setup_and_cfg(args, args.dx_exp)
    rep = run_simulation(setup, cfg, closure, snapshots=args.snapshots)
    print(f"N={cfg.n_interior} dx={cfg.dx:.6g} dt={cfg.dt:.6g} steps={rep.step_count} "
          f"t={rep.final_time:.6g} l2_error={rep.error:.6e} max_error={rep.max_error:.6e}")
    if args.out is not None:
        path = emit_profiles(rep, setup, args.out / "profiles.csv")
        print(f"wrote {path}")
    return 0


def cmd_converge(args) -> int:
    setup, cfg, closure = _setup_and_cfg(args, min(args.dx_exps))
    table = convergence_study(setup, cfg, closure, exponents=args.dx_exps)
    print("N,dx,error,order")
    for r in table.rows:
        order = "" if r.order is None else f"{r.order:.4f}"
        print(f"{r.n_interior},{r.dx:.6g},{r.error:.6e},{order}")
    print(f"least-squares slope: {table.slope:.4f}")
    if args.out is not None:
        print(f"wrote {emit_table(table, args.out / f'convergence_{closure.label}.csv')}")
    return 1 if table.failed else 0


def cmd_wave(args) -> int:
    setup, cfg, closure = _setup_and_cfg(args, args.dx_exp)
    fit = counter_propagation_test(setup, cfg, closure, n_snapshots=args.snapshots)
    v_y = "n/a (B = 0)" if fit.v_y is None else f"{fit.v_y:+.5f}"
    print(f"v_w={fit.v_w:+.5f} v_y={v_y} max|y|(final)={fit.y_max[-1]:.3e}")
    if args.out is not None:
        rep = run_simulation(setup, cfg, closure, snapshots=args.snapshots)
        print(f"wrote {emit_profiles(rep, setup, args.out / 'wave_profiles.csv')}")
    return 0


COMMANDS = {"run": cmd_run, "converge": cmd_converge, "wave": cmd_wave}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except StabilityError as exc:
        print(f"unstable: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
