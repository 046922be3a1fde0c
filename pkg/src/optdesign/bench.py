"""Benchmark harness: seeded replicates, per-variant means, relative times.

Each replicate draws one lifted Gaussian instance (seed = seed_base +
replicate index) and solves it once per variant, so every variant sees
exactly the same problems. Reported per variant: mean iterations to the
target precision (k*), mean terminal active-set size n(delta), mean first
iteration with at most 10 active points (k_10), and mean solver wall time
normalized so the fastest variant reads 1. Iteration counts are also
reported rounded up to the next integer.

Replicates run concurrently on threads; the compiled solver loop releases
the GIL, and every replicate owns its problem and state exclusively.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from . import _kernels
from .bounds import BoundKind
from .instances import gen_gaussian_ellipse
from .solver import SolverConfig, solve

__all__ = ["VariantStats", "BenchSummary", "run_bench", "summary_csv",
           "summary_table", "resolve_jobs"]

JOBS_ENV_VAR = "OPTDESIGN_JOBS"


@dataclass
class VariantStats:
    variant: str
    replicates: int
    failures: int
    k_star_mean: float
    k_star_ceil: int
    n_delta_mean: float
    k_10_mean: Optional[float]
    k_10_ceil: Optional[int]
    wall_mean: float
    rel_time: float = float("nan")


@dataclass
class BenchSummary:
    variants: list
    replicates: int
    n: int
    delta: float
    seed_base: int


def _run_replicate(rep, seed_base, n, delta, variants, max_iters):
    problem = gen_gaussian_ellipse(n, seed_base + rep)
    out = {}
    for variant in variants:
        cfg = SolverConfig(bound=BoundKind.from_string(variant), delta=delta,
                           max_iters=max_iters, record_trace=True)
        try:
            solution, trace = solve(problem, cfg=cfg)
        except Exception as err:  # noqa: BLE001 - recorded, not swallowed
            out[variant] = ("error", repr(err))
            continue
        out[variant] = ("ok", {
            "k_star": trace.k_star,
            "n_delta": int(solution.active_indices.size),
            "k_10": trace.k_10,
            "wall": trace.wall_time,
            "status": solution.status,
        })
    return rep, out


def resolve_jobs(jobs=None):
    env = os.environ.get(JOBS_ENV_VAR)
    if env is not None:
        return max(1, int(env))
    if jobs is not None:
        return max(1, int(jobs))
    return max(1, os.cpu_count() or 1)


def run_bench(replicates=50, n=1000, delta=1e-3, seed_base=0,
              variants=("none", "old", "new"), jobs=None,
              max_iters=100_000, progress=None):
    """Solve ``replicates`` seeded instances under every variant.

    Replicates that fail (singular instance, max_iters) are excluded from
    the means and counted per variant in ``failures``. Results are
    deterministic given (seed_base, replicates, n, delta, variants), apart
    from the wall-time fields.
    """
    variants = list(variants)
    for v in variants:
        BoundKind.from_string(v)
    jobs = resolve_jobs(jobs)
    _kernels.ensure_compiled()

    results = [None] * replicates
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [
            pool.submit(_run_replicate, rep, seed_base, n, delta, variants,
                        max_iters)
            for rep in range(replicates)
        ]
        for fut in futures:
            rep, out = fut.result()
            results[rep] = out
            if progress is not None:
                progress(rep)

    stats = []
    for variant in variants:
        ks, nds, k10s, walls = [], [], [], []
        failures = 0
        for out in results:
            tag, payload = out[variant]
            if tag != "ok" or payload["status"] != "converged":
                failures += 1
                continue
            ks.append(payload["k_star"])
            nds.append(payload["n_delta"])
            walls.append(payload["wall"])
            if payload["k_10"] is not None:
                k10s.append(payload["k_10"])
        good = len(ks)
        if good == 0:
            raise RuntimeError(
                f"variant {variant!r}: no successful replicates")
        k_star_mean = sum(ks) / good
        k10_mean = sum(k10s) / len(k10s) if k10s else None
        stats.append(VariantStats(
            variant=variant,
            replicates=good,
            failures=failures,
            k_star_mean=k_star_mean,
            k_star_ceil=math.ceil(k_star_mean),
            n_delta_mean=sum(nds) / good,
            k_10_mean=k10_mean,
            k_10_ceil=None if k10_mean is None else math.ceil(k10_mean),
            wall_mean=sum(walls) / good,
        ))
    fastest = min(s.wall_mean for s in stats)
    for s in stats:
        s.rel_time = s.wall_mean / fastest if fastest > 0 else float("nan")
    return BenchSummary(variants=stats, replicates=replicates, n=n,
                        delta=delta, seed_base=seed_base)


def summary_csv(summary):
    lines = ["variant,replicates,failures,k_star,k_star_mean,T,"
             "n_delta_mean,k_10,k_10_mean,wall_mean_s"]
    for s in summary.variants:
        lines.append(",".join([
            s.variant,
            str(s.replicates),
            str(s.failures),
            str(s.k_star_ceil),
            f"{s.k_star_mean:.6g}",
            f"{s.rel_time:.4g}",
            f"{s.n_delta_mean:.6g}",
            "" if s.k_10_ceil is None else str(s.k_10_ceil),
            "" if s.k_10_mean is None else f"{s.k_10_mean:.6g}",
            f"{s.wall_mean:.6g}",
        ]))
    return "\n".join(lines) + "\n"


def summary_table(summary):
    header = (f"replicates={summary.replicates}  n={summary.n}  "
              f"delta={summary.delta:g}  seed_base={summary.seed_base}")
    rows = [header,
            f"{'variant':<8}{'k*':>8}{'T':>10}{'n(delta)':>12}{'k_10':>8}"]
    for s in summary.variants:
        k10 = "-" if s.k_10_ceil is None else str(s.k_10_ceil)
        rows.append(f"{s.variant:<8}{s.k_star_ceil:>8}{s.rel_time:>10.2f}"
                    f"{s.n_delta_mean:>12.2f}{k10:>8}")
    return "\n".join(rows) + "\n"
