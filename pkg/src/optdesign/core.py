"""Finite design spaces, design measures, and the moment-matrix kernel.

A candidate point is a plain length-m float vector; the point IS the
regressor. A design problem is an immutable (n, m) array of candidates plus
a boolean activity mask; a design measure is a strictly positive weight
vector over the active points. The weighted moment matrix

    M(w) = sum_i w_i x_i x_i^T

drives everything: its inverse gives the variance function d(w, x) =
x^T M^{-1} x, whose maximum over the active set exceeds the dimension m by
the "excess" that certifies distance from D-optimality.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _kernels
from .exceptions import DimensionMismatch, OverPruned, SingularDesign

__all__ = [
    "DesignProblem",
    "DesignMeasure",
    "InfoMatrix",
    "information_matrix",
    "variance_function",
    "variance_profile",
    "excess",
    "smallest_relative_eigenvalue",
    "log_det",
]


class DesignProblem:
    """A finite candidate set in R^m with an activity mask.

    The coordinate array is frozen at construction; only the mask may
    change. Deactivated points keep their storage so that post-hoc audits
    can still evaluate the variance function on removed points.
    """

    def __init__(self, points, active=None):
        pts = np.array(points, dtype=float, order="C")
        if pts.ndim != 2:
            raise DimensionMismatch(
                f"points must be a 2-D array, got ndim={pts.ndim}")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DimensionMismatch(
                f"need at least one point and one coordinate, got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points contain non-finite coordinates")
        pts.setflags(write=False)
        self._points = pts
        if active is None:
            mask = np.ones(pts.shape[0], dtype=bool)
        else:
            mask = np.array(active, dtype=bool)
            if mask.shape != (pts.shape[0],):
                raise DimensionMismatch(
                    "active mask length does not match point count")
        if int(mask.sum()) < self.dim:
            raise OverPruned(
                f"need at least dim={self.dim} active points, "
                f"got {int(mask.sum())}")
        self._active = mask

    @property
    def points(self):
        return self._points

    @property
    def dim(self):
        return self._points.shape[1]

    @property
    def n_points(self):
        return self._points.shape[0]

    @property
    def q(self):
        """Number of currently active points."""
        return int(self._active.sum())

    @property
    def active(self):
        """Read-only view of the activity mask."""
        view = self._active.view()
        view.setflags(write=False)
        return view

    def active_indices(self):
        return np.flatnonzero(self._active)

    def active_points(self):
        return self._points[self._active]

    def is_active(self, index):
        return bool(self._active[index])

    def deactivate(self, indices):
        """Remove points (by original index) from the design space."""
        idx = np.atleast_1d(np.asarray(indices, dtype=int))
        mask = self._active.copy()
        mask[idx] = False
        if int(mask.sum()) < self.dim:
            raise OverPruned(
                f"deactivation would leave {int(mask.sum())} < dim={self.dim}"
                " active points")
        self._active = mask

    def copy(self):
        """Fresh mask over the same (immutable) point array."""
        dup = DesignProblem.__new__(DesignProblem)
        dup._points = self._points
        dup._active = self._active.copy()
        return dup

    def __repr__(self):
        return (f"DesignProblem(n={self.n_points}, dim={self.dim}, "
                f"q={self.q})")


class DesignMeasure:
    """Strictly positive probability weights over the active points.

    Zero-weight points are represented by deactivating them in the
    problem, never by storing a zero weight.
    """

    SUM_TOL = 1e-12

    def __init__(self, weights):
        w = np.array(weights, dtype=float)
        if w.ndim != 1 or w.size < 1:
            raise DimensionMismatch("weights must be a nonempty 1-D array")
        if not np.all(w > 0.0):
            raise ValueError("weights must be strictly positive")
        total = w.sum()
        if abs(total - 1.0) > self.SUM_TOL:
            raise ValueError(f"weights sum to {total!r}, expected 1")
        w.setflags(write=False)
        self._w = w

    @classmethod
    def uniform(cls, q):
        return cls(np.full(q, 1.0 / q))

    @property
    def weights(self):
        return self._w

    def __len__(self):
        return self._w.size

    def __repr__(self):
        return f"DesignMeasure(q={self._w.size})"


@dataclass(frozen=True)
class InfoMatrix:
    """Moment matrix with its cached inverse and log-determinant."""

    m_mat: np.ndarray
    inv: np.ndarray
    logdet: float

    @property
    def dim(self):
        return self.m_mat.shape[0]

    @classmethod
    def from_matrix(cls, mat):
        """Factor a symmetric positive-definite matrix.

        Raises SingularDesign when the pivoted triangular factorization
        fails (any pivot below 1e-14 times the largest diagonal entry).
        """
        M = np.array(mat, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got {M.shape}")
        scale = np.abs(M).max()
        if scale > 0 and np.abs(M - M.T).max() > 1e-10 * scale:
            raise ValueError("matrix is not symmetric")
        m = M.shape[0]
        L = np.empty((m, m))
        if not _kernels.spd_factor(M, L):
            raise SingularDesign(
                "matrix is not positive definite to working precision")
        inv = np.empty((m, m))
        _kernels.inv_from_factor(L, inv)
        logdet = _kernels.logdet_from_factor(L)
        M.setflags(write=False)
        inv.setflags(write=False)
        return cls(m_mat=M, inv=inv, logdet=float(logdet))


def information_matrix(problem, xi):
    """Moment matrix of the design ``xi`` over the active points.

    ``xi`` must carry one weight per active point, in active-index order.
    """
    w = xi.weights if isinstance(xi, DesignMeasure) else np.asarray(xi, float)
    if w.shape != (problem.q,):
        raise DimensionMismatch(
            f"measure has {w.shape[0]} weights for {problem.q} active points")
    idx = problem.active_indices()
    m = problem.dim
    M = np.empty((m, m))
    _kernels.info_into(problem.points, idx, idx.size, w, M)
    return InfoMatrix.from_matrix(M)


def variance_function(point, info):
    """d(xi, x) = x^T M^{-1} x for a single candidate point."""
    x = np.asarray(point, dtype=float).reshape(-1)
    if x.size != info.dim:
        raise DimensionMismatch(
            f"point has length {x.size}, matrix is {info.dim}x{info.dim}")
    return max(float(x @ info.inv @ x), 0.0)


def variance_profile(problem, info):
    """Variance-function values over the active points, in index order."""
    if info.dim != problem.dim:
        raise DimensionMismatch(
            f"matrix dim {info.dim} != problem dim {problem.dim}")
    idx = problem.active_indices()
    d = np.empty(idx.size)
    _kernels.variance_into(problem.points, idx, idx.size, info.inv, d)
    return d


def excess(problem, info):
    """max over active x of d(xi, x) - m, clamped at zero.

    Zero exactly at D-optimality; doubles as an upper bound on the
    log-determinant gap to the optimum.
    """
    d = variance_profile(problem, info)
    return max(float(d.max()) - problem.dim, 0.0)


def smallest_relative_eigenvalue(m_current, m_star):
    """Smallest eigenvalue of M^{-1/2} M* M^{-1/2}.

    Computed as the smallest generalized eigenvalue of the pencil
    (M*, M). Diagnostic for the eigenvalue floor behind the pruning test.
    """
    if m_current.dim != m_star.dim:
        raise DimensionMismatch("matrices have different dimensions")
    try:
        vals = scipy.linalg.eigh(m_star.m_mat, m_current.m_mat,
                                 eigvals_only=True)
    except (scipy.linalg.LinAlgError, np.linalg.LinAlgError) as err:
        raise SingularDesign(str(err)) from err
    return float(vals[0])


def log_det(info):
    """Log-determinant of the moment matrix (the criterion value)."""
    return float(info.logdet)
