"""Experiment harness: recovery sweeps, concentration checks, CSV and manifest output.

Per-trial seeds are derived from the master seed and the (m, trial) pair with
the SplitMix64 mixer, so every row of a sweep is reproducible in isolation and
removing trials does not shift the randomness of the others.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .geometry import SignalSetSpec, sample_sphere_cap
from .lp_core import ToleranceConfig
from .measurement import (
    derive_seed,
    gen_bernoulli_ensemble,
    gen_gaussian_ensemble,
    gen_sparse_signal,
    normal_grid,
    sign_quantize,
)
from .recovery import recover, recovery_error

ROOT_TWO_OVER_PI = float(np.sqrt(2.0 / np.pi))


@dataclass
class ExperimentConfig:
    task: str
    n: int
    s: int
    m_list: list[int]
    trials: int
    seed: int
    distribution: str = "gaussian"
    magnitude_model: str = "unit_gaussian"
    delta: float = 0.5
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    output_path: str | None = None


@dataclass
class SweepRow:
    """One recovery trial.  Field order is the CSV column order."""

    n: int
    s: int
    m: int
    trial: int
    seed: int
    error: float                 # ||direction - x/||x||||_2, nan on failure
    l1l2_ratio_in: float
    l1l2_ratio_out: float
    cert_cardinality_ok: bool
    normalization_residual: float
    wall_time_ms: float


SWEEP_FIELDS = list(SweepRow.__dataclass_fields__)


def _gen_ensemble(distribution: str, m: int, n: int, seed: int):
    if distribution == "gaussian":
        return gen_gaussian_ensemble(m, n, seed)
    if distribution == "bernoulli":
        return gen_bernoulli_ensemble(m, n, seed)
    raise ValueError(f"unknown distribution {distribution!r}")


def run_sweep(config: ExperimentConfig) -> list[SweepRow]:
    """Run the recovery sweep over config.m_list x config.trials.

    A trial that raises records a row with nan results and continues; the
    sweep itself only fails if every trial errored.  Rows come back sorted
    by (m, trial).  When config.output_path is set, the rows are written as
    CSV with a JSON manifest next to it.
    """
    rows: list[SweepRow] = []
    failures = 0
    for m in config.m_list:
        for trial in range(config.trials):
            tseed = derive_seed(config.seed, m, trial)
            x = gen_sparse_signal(config.n, config.s, derive_seed(tseed, 1),
                                  config.magnitude_model)
            ratio_in = float(np.abs(x).sum() / np.linalg.norm(x))
            ens = _gen_ensemble(config.distribution, m, config.n, derive_seed(tseed, 2))
            t0 = time.perf_counter()
            try:
                y = sign_quantize(ens.rows @ x)
                res = recover(ens, y, config.tolerances)
                wall = (time.perf_counter() - t0) * 1000.0
                rows.append(SweepRow(
                    n=config.n, s=config.s, m=m, trial=trial, seed=tseed,
                    error=recovery_error(res.direction, x),
                    l1l2_ratio_in=ratio_in,
                    l1l2_ratio_out=res.l1_over_l2,
                    cert_cardinality_ok=bool(res.certificate.cardinality_ok),
                    normalization_residual=res.certificate.normalization_residual,
                    wall_time_ms=wall,
                ))
            except Exception:
                failures += 1
                wall = (time.perf_counter() - t0) * 1000.0
                rows.append(SweepRow(
                    n=config.n, s=config.s, m=m, trial=trial, seed=tseed,
                    error=float("nan"), l1l2_ratio_in=ratio_in,
                    l1l2_ratio_out=float("nan"), cert_cardinality_ok=False,
                    normalization_residual=float("nan"), wall_time_ms=wall,
                ))
    if rows and failures == len(rows):
        raise RuntimeError("every sweep trial failed")
    if config.output_path:
        write_sweep_csv(rows, config.output_path)
        write_manifest(config, config.output_path)
    return rows


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.11e}"   # 12 significant digits


def write_sweep_csv(rows: list[SweepRow], path: str) -> None:
    """Write rows as CSV: header from the SweepRow fields, LF endings, UTF-8."""
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(SWEEP_FIELDS) + "\n")
        for row in rows:
            rec = asdict(row)
            fh.write(",".join(_fmt(rec[name]) for name in SWEEP_FIELDS) + "\n")


def write_manifest(config: ExperimentConfig, data_path: str) -> str:
    """Write the run manifest (config echo, version, timestamp) next to the data."""
    base, _ = os.path.splitext(data_path)
    path = base + ".manifest.json"
    payload = {
        "config": asdict(config),
        "version": __version__,
        "generated_at": datetime.now(timezone.utc).isoformat(),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def abs_moment_deviation(rows: np.ndarray, x) -> float:
    """|(1/m) sum_i |<a_i, x>| / ||x||_2 - sqrt(2/pi)|, scale-free in x."""
    v = np.asarray(x, dtype=np.float64)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("zero vector")
    m = rows.shape[0]
    if m == 0:
        raise ValueError("need at least one row")
    return float(abs(np.abs(rows @ v).sum() / (m * norm) - ROOT_TWO_OVER_PI))


@dataclass
class ConcentrationReport:
    n: int
    m: int
    trials: int
    threshold: float
    mean_abs_moment: float        # mean over trials of (1/m) sum |<a_i, x>|
    deviations: np.ndarray        # per-trial deviation from sqrt(2/pi)
    exceedance_fraction: float    # fraction of trials with deviation > threshold
    fit_thresholds: np.ndarray
    fit_fractions: np.ndarray
    decay_rate: float             # c in exceedance ~ C exp(-c m t^2), nan if unfit


def verify_concentration(n: int, m: int, trials: int, t: float,
                         seed: int) -> ConcentrationReport:
    """Check concentration of the first absolute moment on random unit vectors.

    Each trial draws a fresh unit vector and a fresh m-row Gaussian ensemble
    and computes (1/m) sum_i |<a_i, x>|, which concentrates around
    sqrt(2/pi) ~ 0.7979 at rate exp(-c m t^2).  The decay rate is fitted by
    regressing log exceedance on m t'^2 over a small threshold grid.
    """
    devs = np.empty(trials)
    moments = np.empty(trials)
    for k in range(trials):
        g = normal_grid(derive_seed(seed, k, 1), 1, n)[0]
        x = g / np.linalg.norm(g)
        ens = gen_gaussian_ensemble(m, n, derive_seed(seed, k, 2))
        moment = float(np.abs(ens.rows @ x).mean())
        moments[k] = moment
        devs[k] = abs(moment - ROOT_TWO_OVER_PI)
    grid = np.linspace(0.0, max(float(devs.max()), 1e-12), 9)[1:-1]
    fracs = np.array([(devs > g).mean() for g in grid])
    mask = fracs > 0
    if mask.sum() >= 2:
        slope = np.polyfit(m * grid[mask] ** 2, np.log(fracs[mask]), 1)[0]
        decay = float(-slope)
    else:
        decay = float("nan")
    return ConcentrationReport(
        n=n, m=m, trials=trials, threshold=t,
        mean_abs_moment=float(moments.mean()),
        deviations=devs,
        exceedance_fraction=float((devs > t).mean()),
        fit_thresholds=grid,
        fit_fractions=fracs,
        decay_rate=decay,
    )


@dataclass
class UniformConcentrationReport:
    n: int
    s: float
    m: int
    sample_count: int
    threshold: float
    deviations: np.ndarray    # one per sampled point, same ensemble throughout
    max_deviation: float      # lower bound on the supremum over the cap
    exceeded: bool


def verify_uniform_concentration(n: int, s: float, m: int, sample_count: int,
                                 t: float, seed: int) -> UniformConcentrationReport:
    """Check the moment deviation uniformly over sampled points of the cap.

    One ensemble, many points of K(n, s) on the sphere: the maximum sampled
    deviation lower-bounds the supremum that the uniform concentration bound
    controls with m ~ s log(2n/s) rows.
    """
    if sample_count < 1:
        raise ValueError("need at least one sample")
    spec = SignalSetSpec(n, s, "effectively_sparse")
    X = sample_sphere_cap(spec, sample_count, derive_seed(seed, 1))
    ens = gen_gaussian_ensemble(m, n, derive_seed(seed, 2))
    moments = np.abs(ens.rows @ X.T).mean(axis=0)
    devs = np.abs(moments - ROOT_TWO_OVER_PI)
    return UniformConcentrationReport(
        n=n, s=s, m=m, sample_count=sample_count, threshold=t,
        deviations=devs, max_deviation=float(devs.max()),
        exceeded=bool(devs.max() > t),
    )


@dataclass
class BernoulliCounterexampleReport:
    n: int
    m: int
    seeds: list[int]
    identical_per_seed: list[bool]   # sign(A x) == sign(A x') under +-1 rows
    all_identical: bool
    gaussian_differs: bool           # same pair distinguished by Gaussian rows


def verify_bernoulli_counterexample(n: int = 32, m: int = 1000,
                                    num_seeds: int = 20,
                                    seed: int = 0) -> BernoulliCounterexampleReport:
    """Demonstrate that +-1 measurement ensembles cannot work.

    For x = e1 and x' = e1 + e2/2, every +-1 row a satisfies
    sign(<a, x'>) = sign(a1 + a2/2) = sign(a1) = sign(<a, x>), since
    |a2/2| < |a1|.  The two distinct signals are indistinguishable from
    their one-bit measurements at any m.  Gaussian rows tell them apart.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    x = np.zeros(n)
    x[0] = 1.0
    xp = np.zeros(n)
    xp[0] = 1.0
    xp[1] = 0.5
    seeds = [derive_seed(seed, k) for k in range(num_seeds)]
    identical = []
    for sd in seeds:
        ens = gen_bernoulli_ensemble(m, n, sd)
        identical.append(bool(np.array_equal(sign_quantize(ens.rows @ x),
                                             sign_quantize(ens.rows @ xp))))
    gens = gen_gaussian_ensemble(m, n, derive_seed(seed, num_seeds))
    differs = not np.array_equal(sign_quantize(gens.rows @ x),
                                 sign_quantize(gens.rows @ xp))
    return BernoulliCounterexampleReport(
        n=n, m=m, seeds=seeds, identical_per_seed=identical,
        all_identical=all(identical), gaussian_differs=differs,
    )
