"""Independent oracles used by the test suite.

Kept free of the closed forms they check: the eigenvalue-floor oracle
minimizes over an explicit 2-D grid with local refinement, and the
reference trajectory driver composes the public single-step operations
instead of the fused solver loop.
"""

import numpy as np

from optdesign import (BoundKind, SolverConfig, SolverState,
                       lower_bound_new, multiplicative_step, prune_step,
                       solve)


def lambda1_min_oracle(m, eps, rounds=6, grid=2001, l_grid=101):
    """Brute-force floor on the smallest relative eigenvalue.

    Minimizes lam1 over pairs (lam1, L) representing spectra
    (lam1, L, ..., L) subject to

        1/lam1 + (m-1)/L <= m,
        lam1 + (m-1)*L   <= m + eps,
        lam1 <= L,

    by dense 2-D grid search with window refinement on lam1. The L axis
    of each column is sampled over that column's admissible interval
    [lam1, (m + eps - lam1)/(m - 1)] so the feasible sliver near the
    minimizer is never stepped over. Accurate to well below 1e-8.
    """
    if m == 1:
        return 1.0
    lo, hi = 1.0 / m + 1e-15, 1.0
    best = 1.0  # lam1 = L = 1 is always feasible
    ts = np.linspace(0.0, 1.0, l_grid)[:, None]
    for _ in range(rounds):
        lam = np.linspace(lo, hi, grid)
        L_hi = (m + eps - lam) / (m - 1.0)
        L = lam[None, :] + ts * (L_hi - lam)[None, :]
        feas = ((1.0 / lam[None, :] + (m - 1.0) / L <= m)
                & (lam[None, :] + (m - 1.0) * L <= m + eps)
                & (lam[None, :] <= L)).any(axis=0)
        if not feas.any():
            break
        i = int(np.argmax(feas))  # first feasible column = smallest lam1
        best = min(best, float(lam[i]))
        step = lam[1] - lam[0]
        lo = max(1.0 / m + 1e-15, lam[i] - 2.0 * step)
        hi = float(lam[i] + step)
    return best


def reference_trajectory(problem, cfg, init=None, observer=None):
    """Run the solver semantics via the public step operations.

    Mirrors the compiled loop exactly: stop checks first, pruning at
    iterations k >= 1 at multiples of prune_every (with a stop re-check
    after a removal), one multiplicative update per iteration. Returns
    (rows, final_state, k_star) with rows of (k, q, eps, logdet, removed).

    ``observer(state)`` is called on the state of each recorded row.
    """
    state = SolverState.initial(problem, init)
    rows = []
    k_star = None
    while True:
        removed = []
        stop = False
        if state.eps < cfg.delta:
            k_star = state.k
            stop = True
        elif state.k >= cfg.max_iters:
            stop = True
        elif (cfg.bound is not BoundKind.NONE and state.k >= 1
              and state.k % cfg.prune_every == 0):
            state, removed = prune_step(state, cfg)
            if removed and state.eps < cfg.delta:
                k_star = state.k
                stop = True
        rows.append((state.k, state.problem.q, state.eps,
                     state.info.logdet, len(removed)))
        if observer is not None:
            observer(state)
        if stop:
            break
        state = multiplicative_step(state)
    return rows, state, k_star


def reference_optimum(problem, delta=1e-12, max_iters=2_000_000):
    """High-precision unpruned optimum used as ground truth."""
    cfg = SolverConfig(bound=BoundKind.NONE, delta=delta,
                       max_iters=max_iters, record_trace=False)
    solution, trace = solve(problem, cfg=cfg)
    assert solution.status == "converged", "reference run did not converge"
    return solution


def shadow_new_removable(d, m, eps, tol):
    """Indices the sharper test could remove at this state."""
    return set(np.flatnonzero(d < lower_bound_new(m, eps) - tol))
