"""Command line front end.

Subcommands: gen (write a synthetic instance to files), recover (solve one
instance, from files or synthetic), sweep (recovery error sweep to CSV),
tessellate (hyperplane tessellation report), verify (named statistical and
deterministic checks).  Exit codes: 0 success, 1 experiment failure, 2 usage.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .geometry import SignalSetSpec, single_hyperplane_separation_prob, tessellate_and_report
from .harness import (
    ExperimentConfig,
    ROOT_TWO_OVER_PI,
    run_sweep,
    verify_bernoulli_counterexample,
    verify_concentration,
    verify_uniform_concentration,
    write_manifest,
)
from .lp_core import ToleranceConfig
from .measurement import (
    derive_seed,
    gen_bernoulli_ensemble,
    gen_gaussian_ensemble,
    gen_sparse_signal,
    sign_quantize,
)
from .recovery import recover, recovery_error

CHECKS = ("concentration", "uniform-concentration", "bernoulli-counterexample", "separation")


def _m_list(text: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad m list {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty m list")
    return values


def _add_common(p: argparse.ArgumentParser, n: int, s: int, m: str,
                trials: int | None = None) -> None:
    p.add_argument("--n", type=int, default=n, help="ambient dimension")
    p.add_argument("--s", type=int, default=s, help="sparsity")
    p.add_argument("--m", type=_m_list, default=_m_list(m),
                   help="measurement count, comma separated for sweeps")
    if trials is not None:
        p.add_argument("--trials", type=int, default=trials)
    p.add_argument("--seed", type=int, default=0)


def _add_model(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dist", choices=("gaussian", "bernoulli"), default="gaussian")
    p.add_argument("--mag", choices=("unit_gaussian", "constant"), default="unit_gaussian")


def _add_tols(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol-feas", type=float, default=ToleranceConfig.feasibility)
    p.add_argument("--tol-opt", type=float, default=ToleranceConfig.optimality)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="onebit",
        description="One-bit compressed sensing by linear programming.")
    ap.add_argument("--version", action="version", version=f"onebit {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a synthetic instance to plain-text files")
    _add_common(gen, n=32, s=3, m="60")
    _add_model(gen)
    gen.add_argument("--out", required=True, help="output path prefix")

    rec = sub.add_parser("recover", help="recover a direction from sign measurements")
    _add_common(rec, n=32, s=3, m="60")
    _add_model(rec)
    _add_tols(rec)
    rec.add_argument("--matrix", help="measurement matrix file (rows of decimals)")
    rec.add_argument("--signs", help="sign pattern file (one of -1, 0, 1 per line)")
    rec.add_argument("--signal", help="optional true signal file for error reporting")
    rec.add_argument("--out", help="write the recovered direction here")

    sw = sub.add_parser("sweep", help="recovery error sweep over m, written as CSV")
    _add_common(sw, n=128, s=4, m="100,200,400,800", trials=25)
    _add_model(sw)
    _add_tols(sw)
    sw.add_argument("--out", required=True, help="CSV output path")

    tes = sub.add_parser("tessellate", help="sign-pattern tessellation report")
    _add_common(tes, n=32, s=2, m="50,100,200,400", trials=500)
    tes.add_argument("--delta", type=float, default=0.5)
    tes.add_argument("--out", help="per-m summary CSV path")

    ver = sub.add_parser("verify", help="run a named check")
    ver.add_argument("--check", required=True, choices=CHECKS)
    _add_common(ver, n=64, s=4, m="20000", trials=100)
    ver.add_argument("--delta", type=float, default=None,
                     help="deviation threshold or margin, check-specific default")
    ver.add_argument("--out", help="optional report path")
    return ap


def _load_matrix(path: str) -> np.ndarray:
    rows = np.loadtxt(path, dtype=np.float64, ndmin=2)
    return rows


def _load_signs(path: str) -> np.ndarray:
    y = np.atleast_1d(np.loadtxt(path, dtype=np.int64))
    if not np.all(np.isin(y, (-1, 0, 1))):
        raise ValueError("sign pattern entries must be -1, 0, or 1")
    return y


def _gen_instance(args):
    n, s, m = args.n, args.s, args.m[0]
    x = gen_sparse_signal(n, s, derive_seed(args.seed, 1), args.mag)
    if args.dist == "gaussian":
        ens = gen_gaussian_ensemble(m, n, derive_seed(args.seed, 2))
    else:
        ens = gen_bernoulli_ensemble(m, n, derive_seed(args.seed, 2))
    return x, ens


def cmd_gen(args) -> int:
    x, ens = _gen_instance(args)
    y = sign_quantize(ens.rows @ x)
    prefix = args.out
    parent = os.path.dirname(prefix)
    if parent:
        os.makedirs(parent, exist_ok=True)
    np.savetxt(prefix + "_matrix.txt", ens.rows, fmt="%.17e")
    np.savetxt(prefix + "_signal.txt", x.reshape(1, -1), fmt="%.17e")
    np.savetxt(prefix + "_signs.txt", y, fmt="%d")
    print(f"wrote {prefix}_matrix.txt ({ens.m}x{ens.n}), "
          f"{prefix}_signal.txt, {prefix}_signs.txt")
    return 0


def cmd_recover(args) -> int:
    tol = ToleranceConfig(feasibility=args.tol_feas, optimality=args.tol_opt)
    x_true = None
    if args.matrix:
        if not args.signs:
            raise ValueError("--matrix requires --signs")
        rows = _load_matrix(args.matrix)
        y = _load_signs(args.signs)
        if args.signal:
            x_true = np.loadtxt(args.signal, dtype=np.float64).ravel()
    else:
        x_true, ens = _gen_instance(args)
        rows = ens.rows
        y = sign_quantize(rows @ x_true)
    res = recover(rows, y, tol)
    cert = res.certificate
    print(f"m={rows.shape[0]} n={rows.shape[1]} status={res.lp_solution.status} "
          f"iterations={res.lp_solution.iterations}")
    print(f"l1={np.abs(res.x_hat).sum():.6f} l1/l2={res.l1_over_l2:.6f} "
          f"max_violation={res.lp_solution.max_constraint_violation:.3e}")
    print(f"certificate: |T|={cert.support.size} |Omega|={cert.active_rows.size} "
          f"cardinality_ok={cert.cardinality_ok} kernel_residual={cert.kernel_residual:.3e} "
          f"normalization_residual={cert.normalization_residual:.3e}")
    if x_true is not None:
        print(f"error={recovery_error(res.direction, x_true):.6f}")
    if args.out:
        np.savetxt(args.out, res.direction.reshape(1, -1), fmt="%.17e")
        print(f"wrote {args.out}")
    return 0


def cmd_sweep(args) -> int:
    config = ExperimentConfig(
        task="sweep", n=args.n, s=args.s, m_list=args.m, trials=args.trials,
        seed=args.seed, distribution=args.dist, magnitude_model=args.mag,
        tolerances=ToleranceConfig(feasibility=args.tol_feas, optimality=args.tol_opt),
        output_path=args.out)
    rows = run_sweep(config)
    for m in args.m:
        errs = [r.error for r in rows if r.m == m and np.isfinite(r.error)]
        ok = sum(1 for r in rows if r.m == m and r.cert_cardinality_ok)
        med = float(np.median(errs)) if errs else float("nan")
        print(f"m={m} trials={args.trials} median_error={med:.4f} "
              f"cardinality_ok={ok}/{args.trials}")
    print(f"wrote {args.out}")
    return 0


def cmd_tessellate(args) -> int:
    spec = SignalSetSpec(args.n, args.s, "effectively_sparse")
    lines = []
    for m in args.m:
        rep = tessellate_and_report(spec, m, args.delta, args.trials, args.seed)
        fwd = [p.count_fwd for p in rep.separation_stats]
        rev = [p.count_rev for p in rep.separation_stats]
        summary = {
            "m": m,
            "delta": args.delta,
            "sample_count": args.trials,
            "nonempty_cells": rep.nonempty_cells,
            "max_cell_diameter_lb": rep.max_cell_diameter_lb,
            "pairs_beyond_delta": len(rep.separation_stats),
            "min_count_fwd": min(fwd) if fwd else 0,
            "min_count_rev": min(rev) if rev else 0,
        }
        lines.append(summary)
        print(f"m={m} cells={summary['nonempty_cells']} "
              f"max_cell_diameter_lb={summary['max_cell_diameter_lb']:.4f} "
              f"pairs>{args.delta}={summary['pairs_beyond_delta']} "
              f"min_sep=({summary['min_count_fwd']},{summary['min_count_rev']})")
    if args.out:
        parent = os.path.dirname(args.out)
        if parent:
            os.makedirs(parent, exist_ok=True)
        cols = list(lines[0])
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(cols) + "\n")
            for rec in lines:
                cells = [f"{rec[c]:.11e}" if isinstance(rec[c], float) else str(rec[c])
                         for c in cols]
                fh.write(",".join(cells) + "\n")
        config = ExperimentConfig(task="tessellate", n=args.n, s=args.s, m_list=args.m,
                                  trials=args.trials, seed=args.seed, delta=args.delta,
                                  output_path=args.out)
        write_manifest(config, args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_verify(args) -> int:
    check = args.check
    if check == "concentration":
        t = 0.02 if args.delta is None else args.delta
        rep = verify_concentration(args.n, args.m[0], args.trials, t, args.seed)
        print(f"concentration: n={rep.n} m={rep.m} trials={rep.trials}")
        print(f"mean_abs_moment={rep.mean_abs_moment:.6f} target={ROOT_TWO_OVER_PI:.6f}")
        print(f"exceedance@{t}={rep.exceedance_fraction:.4f} decay_rate={rep.decay_rate:.3f}")
        passed = rep.exceedance_fraction <= 0.05 and \
            abs(rep.mean_abs_moment - ROOT_TWO_OVER_PI) <= 0.005
    elif check == "uniform-concentration":
        t = 0.1 if args.delta is None else args.delta
        rep = verify_uniform_concentration(args.n, args.s, args.m[0],
                                           args.trials, t, args.seed)
        print(f"uniform concentration: n={rep.n} s={rep.s} m={rep.m} "
              f"samples={rep.sample_count}")
        print(f"max_deviation={rep.max_deviation:.6f} threshold={t}")
        passed = not rep.exceeded
    elif check == "bernoulli-counterexample":
        rep = verify_bernoulli_counterexample(args.n, args.m[0], args.trials, args.seed)
        print(f"bernoulli counterexample: n={rep.n} m={rep.m} seeds={len(rep.seeds)}")
        print(f"identical sign patterns under +-1 rows: "
              f"{sum(rep.identical_per_seed)}/{len(rep.seeds)}")
        print(f"gaussian rows distinguish the pair: {rep.gaussian_differs}")
        passed = rep.all_identical and rep.gaussian_differs
    else:   # separation
        trials = args.trials if args.trials > 1 else 100000
        n = max(args.n, 2)
        e1 = np.zeros(n)
        e1[0] = 1.0
        e2 = np.zeros(n)
        e2[1] = 1.0
        p_orth = single_hyperplane_separation_prob(e1, e2, trials, args.seed, margin=0.0)
        p_anti = single_hyperplane_separation_prob(e1, -e1, trials,
                                                   derive_seed(args.seed, 1), margin=0.0)
        sigma = 0.5 / np.sqrt(trials)
        print(f"separation: trials={trials}")
        print(f"orthogonal pair: estimate={p_orth:.5f} exact=0.25")
        print(f"antipodal pair:  estimate={p_anti:.5f} exact=0.5")
        passed = abs(p_orth - 0.25) <= 5 * sigma and abs(p_anti - 0.5) <= 5 * sigma
    print("PASS" if passed else "FAIL")
    return 0 if passed else 1


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        if args.command == "gen":
            return cmd_gen(args)
        if args.command == "recover":
            return cmd_recover(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        if args.command == "tessellate":
            return cmd_tessellate(args)
        return cmd_verify(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
