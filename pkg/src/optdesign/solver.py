"""Multiplicative weight updates with safe support-point pruning.

One iteration multiplies every active weight by d(xi, x_i)/m; the update
is monotone in det M and leaves the simplex invariant up to roundoff
(sum_i w_i d_i = m exactly in real arithmetic). Between updates, points
whose variance value falls below the selected pruning threshold are
deactivated and their weight is redistributed over the survivors, either
proportionally or with an opt-in boost of the survivors that currently
look like support points (d >= m).

The solver stops at the first iteration whose excess drops below the
target precision delta; by concavity of log det, that excess is a
certified upper bound on the log-determinant gap to the optimum.

``multiplicative_step`` / ``prune_step`` expose single transitions on
explicit state objects; ``solve`` runs the whole loop through a compiled
kernel with identical semantics.
"""

import time
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import _kernels
from .bounds import BoundKind, lower_bound_new, lower_bound_old
from .core import (DesignMeasure, DesignProblem, InfoMatrix, excess,
                   information_matrix, variance_profile)
from .exceptions import (DegenerateWeights, DomainError, OverPruned,
                         SingularDesign)

__all__ = [
    "Realloc",
    "SolverConfig",
    "SolverState",
    "TraceRow",
    "SolverTrace",
    "Solution",
    "multiplicative_step",
    "prune_step",
    "reallocate_proportional",
    "reallocate_boost",
    "solve",
    "optimality_certificate",
]


class Realloc:
    """Weight-reallocation rules for pruning events."""

    PROPORTIONAL = "proportional"
    BOOST = "boost"


@dataclass
class SolverConfig:
    """Run parameters.

    prune_tol defaults to 1e-9 * dim when left as None; the pruning test
    is exact in real arithmetic, so the tolerance only guards against an
    optimum support point being cut by floating-point error. With BOOST
    reallocation, weights of survivors with d >= m are multiplied by
    boost_factor at iterations where points were removed; between removal
    events the pure recursion runs.

    With record_trace the per-iteration trace is kept in memory
    (~32 bytes per iteration, preallocated from max_iters).
    """

    bound: BoundKind = BoundKind.NEW
    delta: float = 1e-3
    prune_every: int = 1
    prune_tol: Optional[float] = None
    realloc: str = Realloc.PROPORTIONAL
    boost_factor: float = 2.0
    max_iters: int = 100_000
    record_trace: bool = True

    def __post_init__(self):
        if not isinstance(self.bound, BoundKind):
            self.bound = BoundKind.from_string(str(self.bound))
        if not self.delta > 0:
            raise DomainError(f"delta must be positive, got {self.delta!r}")
        if self.prune_every < 1:
            raise DomainError("prune_every must be >= 1")
        if self.prune_tol is not None and self.prune_tol < 0:
            raise DomainError("prune_tol must be nonnegative")
        if self.realloc not in (Realloc.PROPORTIONAL, Realloc.BOOST):
            raise DomainError(f"unknown realloc rule {self.realloc!r}")
        if not self.boost_factor >= 1.0:
            raise DomainError("boost_factor must be >= 1")
        if self.max_iters < 1:
            raise DomainError("max_iters must be >= 1")

    def resolved_prune_tol(self, dim):
        return 1e-9 * dim if self.prune_tol is None else self.prune_tol


@dataclass
class SolverState:
    """One consistent point of the trajectory: xi^k and its derived data."""

    k: int
    problem: DesignProblem
    xi: DesignMeasure
    info: InfoMatrix
    eps: float

    @classmethod
    def initial(cls, problem, xi=None):
        """State at k = 0; uniform weights over the active points by default."""
        prob = problem.copy()
        if xi is None:
            xi = DesignMeasure.uniform(prob.q)
        elif not isinstance(xi, DesignMeasure):
            xi = DesignMeasure(xi)
        if len(xi) != prob.q:
            raise DomainError(
                f"initial measure has {len(xi)} weights for {prob.q} "
                "active points")
        info = information_matrix(prob, xi)
        return cls(k=0, problem=prob, xi=xi, info=info,
                   eps=excess(prob, info))


class TraceRow(NamedTuple):
    k: int
    q: int
    eps: float
    logdet: float
    removed: int


@dataclass
class SolverTrace:
    """Per-iteration record of a run.

    rows[i] describes iteration k = i after any pruning at that iteration
    and before the weight update. k_10 is the first iteration with at most
    10 active points (None if never reached); k_star the first iteration
    with excess below delta (None if not reached). wall_time covers the
    solver loop only.
    """

    rows: list = field(default_factory=list)
    k_10: Optional[int] = None
    k_star: Optional[int] = None
    wall_time: float = 0.0


@dataclass
class Solution:
    """Final design and its optimality certificate."""

    xi_final: DesignMeasure
    info_final: InfoMatrix
    eps_final: float
    support: np.ndarray
    support_weights: np.ndarray
    certificate: float
    status: str  # "converged" | "max_iters"
    k_star: Optional[int]
    active_indices: np.ndarray


def multiplicative_step(state):
    """One weight update: w_i <- w_i * d(xi, x_i) / m, renormalized.

    The unnormalized weights already sum to 1 up to roundoff;
    renormalization only removes that roundoff. Returns the state at
    k + 1 with the moment matrix and excess rebuilt from scratch.
    """
    prob = state.problem
    m = prob.dim
    d = variance_profile(prob, state.info)
    w = state.xi.weights * d / m
    np.maximum(w, _kernels.WEIGHT_FLOOR, out=w)
    w /= w.sum()
    xi = DesignMeasure(w)
    info = information_matrix(prob, xi)
    return SolverState(k=state.k + 1, problem=prob, xi=xi, info=info,
                       eps=excess(prob, info))


def reallocate_proportional(weights, freed_mass):
    """Scale surviving weights by 1 / (1 - freed_mass) so they sum to 1."""
    w = np.asarray(weights, dtype=float)
    if w.size and freed_mass == 0.0:
        return w.copy()
    total = 1.0 - freed_mass
    if not w.size or w.max() <= 0.0 or total <= 0.0:
        raise DegenerateWeights("no positive weight left to scale")
    return w / total


def reallocate_boost(weights, d_values, m, boost_factor):
    """Boost survivors that look like support points, then normalize.

    z_t = boost_factor * w_t where d_t >= m, else w_t; returns z / sum(z).
    d_values must come from the pre-removal moment matrix. With
    boost_factor = 1 this reduces to proportional reallocation.
    """
    w = np.asarray(weights, dtype=float)
    d = np.asarray(d_values, dtype=float)
    if w.shape != d.shape:
        raise DomainError("weights and d_values must align")
    if not boost_factor >= 1.0:
        raise DomainError("boost_factor must be >= 1")
    z = np.where(d >= m, boost_factor * w, w)
    total = z.sum()
    if not total > 0.0:
        raise DegenerateWeights("no positive weight left to scale")
    return z / total


def prune_step(state, cfg):
    """Deactivate every active point failing the configured test.

    Uses the variance values and excess of the current state; freed weight
    is redistributed per cfg.realloc. Returns (new_state, removed) where
    removed lists original point indices; the state is unchanged (and the
    list empty) when nothing fails the test or pruning is disabled.

    Raises OverPruned, leaving the input state untouched, if fewer than
    dim points would survive or the survivors' moment matrix is singular.
    """
    if cfg.bound is BoundKind.NONE:
        return state, []
    prob = state.problem
    m = prob.dim
    tol = cfg.resolved_prune_tol(m)
    d = variance_profile(prob, state.info)
    if cfg.bound is BoundKind.NEW:
        thr = lower_bound_new(m, state.eps) - tol
    else:
        thr = lower_bound_old(m, state.eps) - tol
    cut = d < thr
    if not cut.any():
        return state, []
    keep = ~cut
    if int(keep.sum()) < m:
        raise OverPruned(
            f"test would leave {int(keep.sum())} < dim={m} points; "
            "check prune_tol and problem feasibility")
    act = prob.active_indices()
    removed = act[cut]
    w_old = state.xi.weights
    if cfg.realloc == Realloc.BOOST:
        w_new = reallocate_boost(w_old[keep], d[keep], m, cfg.boost_factor)
    else:
        w_new = reallocate_proportional(w_old[keep],
                                        float(w_old[cut].sum()))
    w_new = w_new / w_new.sum()
    survivors = prob.copy()
    survivors.deactivate(removed)
    xi = DesignMeasure(w_new)
    try:
        info = information_matrix(survivors, xi)
    except SingularDesign as err:
        raise OverPruned(
            f"survivors' moment matrix is singular: {err}") from err
    new_state = SolverState(k=state.k, problem=survivors, xi=xi, info=info,
                            eps=excess(survivors, info))
    return new_state, list(map(int, removed))


def optimality_certificate(eps_final):
    """Certified upper bound on log det M* - log det M(final).

    The bound is the final excess itself, by concavity of log det along
    the segment from the final design toward the optimum.
    """
    if eps_final < 0.0:
        raise DomainError(f"excess must be nonnegative, got {eps_final!r}")
    return float(eps_final)


_BOUND_CODES = {
    BoundKind.NONE: _kernels.BOUND_NONE,
    BoundKind.NEW: _kernels.BOUND_NEW,
    BoundKind.OLD: _kernels.BOUND_OLD,
}

_REALLOC_CODES = {
    Realloc.PROPORTIONAL: _kernels.REALLOC_PROPORTIONAL,
    Realloc.BOOST: _kernels.REALLOC_BOOST,
}

_STATUS_NAMES = {
    _kernels.STATUS_CONVERGED: "converged",
    _kernels.STATUS_MAX_ITERS: "max_iters",
}


def solve(problem, init=None, cfg=None):
    """Run the full loop; returns (Solution, SolverTrace).

    init may be None (uniform over the active points), a DesignMeasure, or
    a positive weight array of matching length. The caller's problem is
    never mutated. Raises SingularDesign when the initial (or any
    intermediate) moment matrix fails factorization and OverPruned when a
    pruning step would leave fewer than dim usable points; reaching
    max_iters is reported via Solution.status, not an exception.
    """
    if cfg is None:
        cfg = SolverConfig()
    prob = problem.copy()
    if init is None:
        w0 = np.full(prob.q, 1.0 / prob.q)
    elif isinstance(init, DesignMeasure):
        w0 = init.weights.copy()
    else:
        w0 = DesignMeasure(init).weights.copy()
    if w0.shape != (prob.q,):
        raise DomainError(
            f"initial measure has {w0.shape[0]} weights for {prob.q} "
            "active points")

    act0 = prob.active_indices()
    X = np.ascontiguousarray(prob.points[act0])

    _kernels.ensure_compiled()
    t0 = time.perf_counter()
    (status, k, k_star, k_10, q, act, w,
     tr_q, tr_eps, tr_ld, tr_rm, nrows) = _kernels.solve_loop(
        X, w0, _BOUND_CODES[cfg.bound], cfg.delta, cfg.prune_every,
        cfg.resolved_prune_tol(prob.dim), _REALLOC_CODES[cfg.realloc],
        cfg.boost_factor, cfg.max_iters, cfg.record_trace)
    wall = time.perf_counter() - t0

    if status == _kernels.STATUS_SINGULAR:
        raise SingularDesign(
            "moment matrix failed factorization during the run "
            f"(iteration {k}); check that the active points span the space")
    if status == _kernels.STATUS_OVERPRUNED:
        raise OverPruned(
            f"pruning at iteration {k} left fewer than dim={prob.dim} "
            "usable points; check prune_tol")

    surviving = act0[act]
    removed_mask = np.ones(prob.n_points, dtype=bool)
    removed_mask[surviving] = False
    if removed_mask.any():
        prob.deactivate(np.flatnonzero(removed_mask))

    xi_final = DesignMeasure(w / w.sum())
    info_final = information_matrix(prob, xi_final)
    eps_final = excess(prob, info_final)

    threshold = cfg.delta / 10.0
    sup = w > threshold
    support = surviving[sup]
    support_weights = xi_final.weights[sup]

    trace = SolverTrace(
        rows=[TraceRow(i, int(tr_q[i]), float(tr_eps[i]), float(tr_ld[i]),
                       int(tr_rm[i])) for i in range(nrows)],
        k_10=None if k_10 < 0 else int(k_10),
        k_star=None if k_star < 0 else int(k_star),
        wall_time=wall,
    )
    solution = Solution(
        xi_final=xi_final,
        info_final=info_final,
        eps_final=float(eps_final),
        support=support,
        support_weights=support_weights,
        certificate=optimality_certificate(eps_final),
        status=_STATUS_NAMES[status],
        k_star=trace.k_star,
        active_indices=surviving,
    )
    return solution, trace
