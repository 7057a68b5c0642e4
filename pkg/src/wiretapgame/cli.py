"""Command-line entry point.

Verbs:
  report <scenario>              payoff table and equilibria for the base config
  sweep <scenario> --out <csv>   run the scenario's sweep and write a CSV
  oracle <scenario>              cross-check the closed-form equilibrium
                                 against a brute-force maximin grid
  selftest                       quick internal consistency checks

Exit codes: 0 success, 1 parse/config error, 2 numerical error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from .channel import ScenarioConfig
from .errors import ConfigError, NumericalError
from .game import (
    Payoffs,
    saddle_oracle,
    solve_strategic,
    spe_alice_first,
    spe_eve_first,
)
from .rates import payoff_matrix
from .scenario import parse_scenario, report_equilibrium, run_sweep


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wiretapgame",
        description="MIMO wiretap channel simulator and game solver")
    sub = parser.add_subparsers(dest="verb", required=True)

    p_report = sub.add_parser("report", help="summarize one scenario")
    p_report.add_argument("scenario", help="scenario file path")
    p_report.add_argument("--trials", type=int, default=None,
                          help="override trial count")

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep to CSV")
    p_sweep.add_argument("scenario", help="scenario file path")
    p_sweep.add_argument("--out", required=True, help="output CSV path")
    p_sweep.add_argument("--trials", type=int, default=None,
                         help="override trial count per point")

    p_oracle = sub.add_parser("oracle",
                              help="verify the equilibrium against a grid search")
    p_oracle.add_argument("scenario", help="scenario file path")
    p_oracle.add_argument("--trials", type=int, default=None)
    p_oracle.add_argument("--step", type=float, default=0.001,
                          help="mixing-probability grid step")
    p_oracle.add_argument("--grid-out", default=None,
                          help="also dump the (p, q, value) surface to this CSV")

    sub.add_parser("selftest", help="run quick internal checks")
    return parser


def _cmd_report(args) -> int:
    spec = parse_scenario(args.scenario)
    print(report_equilibrium(spec.base, trials=args.trials,
                             clip_mode=spec.clip_mode))
    return 0


def _cmd_sweep(args) -> int:
    spec = parse_scenario(args.scenario)
    rows = run_sweep(spec, out_path=args.out, trials=args.trials)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _dump_grid(R: Payoffs, step: float, path: str) -> None:
    grid = np.round(np.arange(0.0, 1.0 + step / 2, step), 12)
    lines = ["p,q,value"]
    for p in grid:
        row_f = p * R.R_FE + (1 - p) * R.R_AE
        row_j = p * R.R_FJ + (1 - p) * R.R_AJ
        for q in grid:
            v = q * row_f + (1 - q) * row_j
            lines.append(f"{p:.9g},{q:.9g},{v:.9g}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _cmd_oracle(args) -> int:
    spec = parse_scenario(args.scenario)
    pm = payoff_matrix(spec.base, trials=args.trials, clip_mode=spec.clip_mode)
    R = Payoffs.from_matrix(pm)
    eq = solve_strategic(R, tol=1e-6)
    p, q, v = saddle_oracle(R, grid_step=args.step)
    spread = max(R.R_FE, R.R_FJ, R.R_AE, R.R_AJ) - min(R.R_FE, R.R_FJ, R.R_AE, R.R_AJ)
    tol = 2.0 * args.step * max(spread, 1.0)
    print(f"closed form: kind={eq.kind.value} p*={eq.p_star:.4f} "
          f"q*={eq.q_star:.4f} v={eq.value:.6f}")
    print(f"grid search: p={p:.4f} q={q:.4f} v={v:.6f} (step {args.step})")
    if args.grid_out:
        _dump_grid(R, max(args.step, 0.01), args.grid_out)
        print(f"wrote value surface to {args.grid_out}")
    if abs(eq.value - v) > tol:
        print(f"MISMATCH: |closed - grid| = {abs(eq.value - v):.6f} > {tol:.6f}")
        return 2
    print(f"agreement within {tol:.6f}")
    return 0


def _cmd_selftest() -> int:
    failures = 0

    def check(name: str, ok: bool) -> None:
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        failures += 0 if ok else 1

    rng = np.random.default_rng(1)

    # precoder orthonormality and transmit power
    from .channel import (AliceAction, build_precoders, complex_normal,
                          sample_channels)
    from .channel import alice_covariance
    cfg = ScenarioConfig(Na=4, Nb=3, Ne=2, Pa=10.0, Pe=5.0, g1=1.0, g2=1.0,
                         d=2, rho=0.6, trials=10, seed=0)
    ok_unitary, ok_power = True, True
    for _ in range(20):
        ch = sample_channels(cfg, rng)
        pre = build_precoders(ch.H_ba, cfg.d)
        full = np.hstack([pre.T, pre.Tp])
        ok_unitary &= np.allclose(full.conj().T @ full, np.eye(cfg.Na), atol=1e-10)
        qa = alice_covariance(cfg, pre, AliceAction.ARTIFICIAL_NOISE)
        ok_power &= abs(np.trace(qa).real - cfg.Pa) < 1e-8 * cfg.Pa
    check("precoder columns orthonormal", ok_unitary)
    check("transmit covariance uses full power", ok_power)

    # closed-form equilibrium agrees with the maximin grid
    ok_oracle = True
    for _ in range(20):
        cells = np.sort(rng.uniform(0.0, 8.0, size=4))
        R = Payoffs(R_FE=cells[0], R_AJ=cells[1], R_FJ=cells[2], R_AE=cells[3])
        eq = solve_strategic(R)
        _, _, v = saddle_oracle(R, grid_step=0.002)
        ok_oracle &= abs(eq.value - v) <= 2 * 0.002 * (cells[3] - cells[0] + 1)
    check("equilibrium value matches grid search", ok_oracle)

    # sequential solutions agree with leaf enumeration
    ok_spe = True
    for _ in range(20):
        vals = rng.uniform(0.0, 8.0, size=4)
        R = Payoffs(R_FE=min(vals[0], vals[2]), R_AE=max(vals[0], vals[2]),
                    R_AJ=min(vals[1], vals[3]), R_FJ=max(vals[1], vals[3]))
        spe1 = spe_alice_first(R)
        expected1 = max(min(R.R_FE, R.R_FJ), min(R.R_AE, R.R_AJ))
        spe2 = spe_eve_first(R)
        ok_spe &= (abs(spe1.value - expected1) < 1e-12
                   and abs(spe2.value - min(R.R_FJ, R.R_AE)) < 1e-12)
    check("sequential outcomes match enumeration", ok_spe)

    # rate orderings on a small Monte Carlo run
    from .rates import payoff_matrix as _pm
    pm = _pm(ScenarioConfig(Na=3, Nb=2, Ne=2, Pa=10.0, Pe=10.0, g1=1.0, g2=1.0,
                            d=1, trials=300, seed=5))
    se = 3 * np.hypot(pm.R_AJ.std_err, pm.R_FJ.std_err)
    check("splitting never helps against a listener less than full power",
          pm.R_FE.mean <= pm.R_AE.mean + 1e-12)
    check("splitting never helps against a jammer", pm.R_AJ.mean <= pm.R_FJ.mean + se)

    print(f"{'OK' if failures == 0 else 'FAILED'} "
          f"({failures} failing check{'s' if failures != 1 else ''})")
    return 0 if failures == 0 else 2


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.verb == "report":
            return _cmd_report(args)
        if args.verb == "sweep":
            return _cmd_sweep(args)
        if args.verb == "oracle":
            return _cmd_oracle(args)
        if args.verb == "selftest":
            return _cmd_selftest()
        raise ConfigError(f"unknown verb {args.verb!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
