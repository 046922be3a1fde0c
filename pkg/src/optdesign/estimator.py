"""scikit-learn style front end.

``DOptimalDesign`` treats the rows of X as the candidate points of a
design problem and fits the weight vector of a D-optimum approximate
design over them, so the algorithm drops into sklearn pipelines and
model-selection tooling via the usual get_params/set_params protocol.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .bounds import BoundKind
from .core import DesignProblem, variance_function
from .solver import Realloc, SolverConfig, solve

__all__ = ["DOptimalDesign"]


class DOptimalDesign(BaseEstimator):
    """Fit D-optimum design weights over a finite candidate set.

    Parameters
    ----------
    bound : {"new", "old", "none"}, default="new"
        Pruning test used to drop provably non-optimal candidates during
        the run. "none" disables pruning.
    delta : float, default=1e-3
        Target precision: the run stops once the excess of the current
        design drops below delta, which certifies the log-determinant gap
        to the optimum is below delta.
    realloc : {"proportional", "boost"}, default="proportional"
        How the weight freed by pruned points is redistributed.
    boost_factor : float, default=2.0
        Multiplier applied to apparent support points under "boost".
    prune_every : int, default=1
        Apply the pruning test every this many iterations.
    prune_tol : float or None, default=None
        Safety margin subtracted from the pruning threshold;
        None means 1e-9 times the dimension.
    max_iters : int, default=100000
    lift : bool, default=False
        Append a constant-1 coordinate to every row of X (turns a planar
        cloud into the minimum-covering-ellipse design problem).

    Attributes
    ----------
    weights_ : ndarray of shape (n_samples,)
        Fitted design weights; exactly zero for pruned candidates.
    support_ : ndarray
        Indices with weight above delta / 10.
    info_matrix_ : ndarray of shape (m, m)
        Moment matrix of the fitted design.
    eps_ : float
        Final excess; certified bound on the log-determinant gap.
    k_star_ : int or None
        First iteration with excess below delta.
    n_iter_ : int
        Iterations performed.
    """

    def __init__(self, bound="new", delta=1e-3, realloc="proportional",
                 boost_factor=2.0, prune_every=1, prune_tol=None,
                 max_iters=100_000, lift=False):
        self.bound = bound
        self.delta = delta
        self.realloc = realloc
        self.boost_factor = boost_factor
        self.prune_every = prune_every
        self.prune_tol = prune_tol
        self.max_iters = max_iters
        self.lift = lift

    def _config(self):
        return SolverConfig(
            bound=BoundKind.from_string(self.bound),
            delta=self.delta,
            prune_every=self.prune_every,
            prune_tol=self.prune_tol,
            realloc=Realloc.BOOST if self.realloc == "boost"
            else Realloc.PROPORTIONAL,
            boost_factor=self.boost_factor,
            max_iters=self.max_iters,
            record_trace=True,
        )

    def _prepare(self, X):
        X = check_array(X, dtype=np.float64, ensure_min_samples=1)
        if self.lift:
            X = np.hstack([X, np.ones((X.shape[0], 1))])
        return X

    def fit(self, X, y=None):
        """Compute the design weights for the candidate rows of X."""
        X = self._prepare(X)
        self.n_features_in_ = X.shape[1] - (1 if self.lift else 0)
        problem = DesignProblem(X)
        solution, trace = solve(problem, cfg=self._config())
        weights = np.zeros(problem.n_points)
        weights[solution.active_indices] = solution.xi_final.weights
        self.weights_ = weights
        self.support_ = solution.support
        self.support_weights_ = solution.support_weights
        self.info_matrix_ = np.asarray(solution.info_final.m_mat)
        self.logdet_ = solution.info_final.logdet
        self.eps_ = solution.eps_final
        self.certificate_ = solution.certificate
        self.status_ = solution.status
        self.k_star_ = solution.k_star
        self.n_iter_ = len(trace.rows) - 1 if trace.rows else 0
        self.trace_ = trace
        self._info = solution.info_final
        return self

    def predict(self, X):
        """Variance-function value d(xi, x) for each row of X.

        Values at or below the dimension m indicate points the fitted
        design already covers; the maximum over the candidates exceeds m
        by at most delta after a converged fit.
        """
        check_is_fitted(self, "weights_")
        X = self._prepare(X)
        return np.array([variance_function(x, self._info) for x in X])

    def score(self, X=None, y=None):
        """Log-determinant of the fitted moment matrix (the D-criterion)."""
        check_is_fitted(self, "weights_")
        return float(self.logdet_)
