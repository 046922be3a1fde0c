"""Problem generators and the covering-ellipse extraction.

Two families: random planar clouds lifted to R^3, whose D-optimum design
is dual to the minimum covering ellipse of the cloud, and a worst-case
construction showing the pruning threshold h_m(eps) is as large as any
safe threshold depending only on (m, eps) can be: it builds an instance
whose distinguished point x* supports the optimum yet has d(xi, x*)
arbitrarily close to h_m(eps) from above.
"""

from dataclasses import dataclass

import numpy as np

from .bounds import lower_bound_new
from .core import DesignProblem, InfoMatrix
from .exceptions import DimensionMismatch, DomainError
from .rng import normal_cloud

__all__ = [
    "TightInstance",
    "EllipseParams",
    "gen_gaussian_ellipse",
    "gen_tightness",
    "covering_ellipse",
]


@dataclass(frozen=True)
class TightInstance:
    """Worst-case instance with its analytically known certificates.

    The candidate set holds 2^(m-1) x-points (uniform design xi lives
    there), 2^(m-1) y-points (the optimum of the x*-free problem), and the
    distinguished point x* last. h = h_m(eps_target); the admissible range
    of b is 1 < b < min((eps_target + m)/h, (h + delta_target)/h).
    """

    problem: DesignProblem
    h: float
    eps_target: float
    delta_target: float
    b: float
    x_star_index: int
    x_block: range
    y_block: range

    @property
    def dim(self):
        return self.problem.dim


def gen_gaussian_ellipse(n, seed):
    """n standard-normal points in the plane, lifted to (z1, z2, 1).

    The D-optimum design of the lifted problem encodes the minimum
    covering ellipse of the planar cloud. Deterministic given seed.
    """
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    z = normal_cloud(n, 2, seed)
    return DesignProblem(np.hstack([z, np.ones((n, 1))]))


def _signed_block(first_coord, tail_coord, m):
    """2^(m-1) vectors (first_coord, +-tail_coord, ...), signs in
    binary-counting order: pattern j flips tail coordinate i when bit i
    of j is set."""
    k = 2 ** (m - 1)
    pts = np.empty((k, m))
    pts[:, 0] = first_coord
    for j in range(k):
        for i in range(m - 1):
            sign = -1.0 if (j >> i) & 1 else 1.0
            pts[j, 1 + i] = sign * tail_coord
    return pts


def gen_tightness(m, eps, delta, b=None):
    """Build the worst-case instance for dimension m >= 2.

    With h = h_m(eps) and k = 2^(m-1): the x-points are
    (sqrt(1/h), +-sqrt((h-1)/(h(m-1))), ...), the y-points
    (sqrt(1/m), +-sqrt(1/m), ...), and x* = (sqrt(b), 0, ..., 0).
    The uniform design on the x-points has excess exactly eps while
    d(xi, x*) = b*h < h + delta, yet x* supports the D-optimum design.

    b defaults to the geometric midpoint of its admissible interval;
    an explicit b outside the open interval raises DomainError.
    """
    if int(m) != m or m < 2:
        raise DomainError(f"need integer m >= 2, got {m!r}")
    m = int(m)
    if not eps > 0 or not delta > 0:
        raise DomainError("eps and delta must be positive")
    h = lower_bound_new(m, eps)
    b_max = min((eps + m) / h, (h + delta) / h)
    if b is None:
        b = float(np.sqrt(b_max))
    elif not (1.0 < b < b_max):
        raise DomainError(
            f"b = {b!r} outside the admissible interval (1, {b_max!r})")
    k = 2 ** (m - 1)
    x_pts = _signed_block(np.sqrt(1.0 / h),
                          np.sqrt((h - 1.0) / (h * (m - 1))), m)
    y_pts = _signed_block(np.sqrt(1.0 / m), np.sqrt(1.0 / m), m)
    x_star = np.zeros((1, m))
    x_star[0, 0] = np.sqrt(b)
    problem = DesignProblem(np.vstack([x_pts, y_pts, x_star]))
    return TightInstance(
        problem=problem,
        h=float(h),
        eps_target=float(eps),
        delta_target=float(delta),
        b=float(b),
        x_star_index=2 * k,
        x_block=range(0, k),
        y_block=range(k, 2 * k),
    )


@dataclass(frozen=True)
class EllipseParams:
    """The set {z : (z - center)^T matrix (z - center) <= 1} in the plane."""

    matrix: np.ndarray
    center: np.ndarray

    def mahalanobis(self, z):
        """(z - center)^T matrix (z - center), rowwise for (n, 2) input."""
        dz = np.atleast_2d(np.asarray(z, dtype=float)) - self.center
        vals = np.einsum("ij,jk,ik->i", dz, self.matrix, dz)
        return vals if np.asarray(z).ndim == 2 else float(vals[0])


def covering_ellipse(m_star):
    """Ellipse {z : (z,1)^T M*^{-1} (z,1) <= 3} of a solved lifted problem.

    At optimality this set contains every candidate's planar preimage and
    is the minimum covering ellipse of the cloud. Writing M*^{-1} in
    blocks [[A, g], [g^T, c]], the quadratic z^T A z + 2 g^T z + c <= 3
    recenters to (z - z0)^T A (z - z0) <= r with z0 = -A^{-1} g and
    r = 3 - c + g^T A^{-1} g.
    """
    if m_star.dim != 3:
        raise DimensionMismatch(
            f"covering-ellipse extraction needs a 3x3 matrix from a lifted "
            f"planar problem, got dim {m_star.dim}")
    Minv = m_star.inv
    A = Minv[:2, :2]
    g = Minv[:2, 2]
    c = Minv[2, 2]
    # A is SPD as a principal block of an SPD matrix; factor via InfoMatrix
    # to reuse the package's single SPD primitive.
    A_info = InfoMatrix.from_matrix(A)
    z0 = -A_info.inv @ g
    r = 3.0 - c + g @ A_info.inv @ g
    if not r > 0.0:
        raise DomainError(f"degenerate ellipse: radius term {r!r}")
    return EllipseParams(matrix=A / r, center=z0)
