"""File formats: point CSV, JSON-lines traces, JSON summaries.

Points are written one per line as comma-separated decimals with 17
significant digits, which round-trips IEEE-754 doubles exactly. Traces
are JSON-lines so partial files from interrupted runs stay parseable.
"""

import json

import numpy as np

__all__ = [
    "format_coord",
    "write_points_csv",
    "read_points_csv",
    "write_trace_jsonl",
    "solution_summary",
    "tight_certificates",
]


def format_coord(x):
    return format(float(x), ".17g")


def write_points_csv(path, points):
    pts = np.asarray(points, dtype=float)
    with open(path, "w", encoding="ascii") as fh:
        for row in pts:
            fh.write(",".join(format_coord(x) for x in row))
            fh.write("\n")


def read_points_csv(path, lift=False):
    """Parse a point file; malformed lines raise ValueError with the
    1-based line number. ``lift`` appends a constant-1 coordinate."""
    rows = []
    ncols = None
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if ncols is None:
                ncols = len(fields)
            elif len(fields) != ncols:
                raise ValueError(
                    f"{path}:{lineno}: expected {ncols} fields, "
                    f"got {len(fields)}")
            try:
                rows.append([float(f) for f in fields])
            except ValueError:
                raise ValueError(
                    f"{path}:{lineno}: malformed number in {line!r}"
                ) from None
    if not rows:
        raise ValueError(f"{path}: no points found")
    pts = np.asarray(rows, dtype=float)
    if not np.all(np.isfinite(pts)):
        raise ValueError(f"{path}: non-finite coordinate")
    if lift:
        pts = np.hstack([pts, np.ones((pts.shape[0], 1))])
    return pts


def write_trace_jsonl(path, trace):
    with open(path, "w", encoding="ascii") as fh:
        for row in trace.rows:
            fh.write(json.dumps({
                "k": row.k,
                "q": row.q,
                "eps": row.eps,
                "logdet": row.logdet,
                "removed": row.removed,
            }))
            fh.write("\n")


def solution_summary(solution, trace, problem):
    """JSON-able run summary."""
    return {
        "status": solution.status,
        "k_star": solution.k_star,
        "k_10": trace.k_10,
        "eps_final": solution.eps_final,
        "logdet_final": solution.info_final.logdet,
        "certificate": solution.certificate,
        "n_points": problem.n_points,
        "dim": problem.dim,
        "q_final": int(solution.active_indices.size),
        "support": [
            {"index": int(i), "weight": float(w)}
            for i, w in zip(solution.support, solution.support_weights)
        ],
        "wall_time": trace.wall_time,
    }


def tight_certificates(inst):
    """JSON-able certificate sidecar for a generated tightness instance."""
    return {
        "m": inst.dim,
        "h": inst.h,
        "eps": inst.eps_target,
        "delta": inst.delta_target,
        "b": inst.b,
        "x_star_index": inst.x_star_index,
        "x_block": [inst.x_block.start, inst.x_block.stop],
        "y_block": [inst.y_block.start, inst.y_block.stop],
        "d_at_x_star": inst.b * inst.h,
    }
