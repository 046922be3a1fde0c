"""Support-point pruning bounds.

For a design with excess eps = max_x d(xi, x) - m, any candidate whose
variance value falls below the threshold returned here provably supports
no D-optimum design and can be struck from the candidate set. Two
thresholds are provided: the sharper one derived from both trace
constraints on the relative eigenvalues (``lower_bound_new``) and the
earlier one using only the sum constraint (``lower_bound_old``). The new
threshold tends to m as eps -> 0 (like the old one) but to 1 instead of 0
as eps -> infinity, so it keeps cutting points even far from the optimum.
"""

import enum
import math

from . import _kernels
from .exceptions import DomainError

__all__ = [
    "BoundKind",
    "lambda1_star",
    "lower_bound_new",
    "lower_bound_old",
    "prunable",
]

# Negative excess beyond this magnitude is a caller bug, not roundoff.
EPS_ROUNDOFF = 1e-12


class BoundKind(enum.Enum):
    """Which pruning test to apply."""

    NEW = "new"
    OLD = "old"
    NONE = "none"

    @classmethod
    def from_string(cls, name):
        try:
            return cls(name.lower())
        except ValueError:
            raise DomainError(
                f"unknown bound kind {name!r}; expected new, old or none"
            ) from None


def _check_args(m, eps):
    try:
        mf = float(m)
    except (TypeError, ValueError):
        raise DomainError(f"m must be a positive integer, got {m!r}") from None
    if not mf.is_integer() or mf < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    m = int(mf)
    eps = float(eps)
    if math.isnan(eps):
        raise DomainError("eps is NaN")
    if eps < 0.0:
        if eps < -EPS_ROUNDOFF:
            raise DomainError(
                f"eps = {eps!r} is negative beyond roundoff tolerance")
        eps = 0.0
    return m, eps


def lambda1_star(m, eps):
    """Floor on the smallest relative eigenvalue, given excess eps.

    Minimizes the smallest eigenvalue lambda_1 over spectra constrained by
    sum(1/lambda_i) <= m and sum(lambda_i) <= m + eps. Equals 1 at eps = 0
    and identically 1 for m = 1; strictly decreasing in eps for m >= 2.
    """
    m, eps = _check_args(m, eps)
    if m == 1 or eps == 0.0:
        return 1.0
    return _kernels.h_new(float(m), eps) / m


def lower_bound_new(m, eps):
    """Sharper pruning threshold: m times ``lambda1_star``.

    Decreases from m at eps = 0 toward 1 as eps grows.
    """
    m, eps = _check_args(m, eps)
    return float(_kernels.h_new(float(m), eps))


def lower_bound_old(m, eps):
    """Earlier pruning threshold; decreases from m toward 0."""
    m, eps = _check_args(m, eps)
    return float(_kernels.h_old(float(m), eps))


def prunable(d_value, m, eps, kind, tol=0.0):
    """True when a point with variance value d_value can be removed.

    ``eps`` must be the excess of the same design that produced
    ``d_value``. The comparison is strict: a value exactly at the
    threshold is kept. ``tol`` is subtracted from the threshold to absorb
    floating-point error in d and eps.
    """
    if kind is BoundKind.NONE:
        return False
    if tol < 0.0:
        raise DomainError(f"tol must be nonnegative, got {tol!r}")
    if kind is BoundKind.NEW:
        bound = lower_bound_new(m, eps)
    elif kind is BoundKind.OLD:
        bound = lower_bound_old(m, eps)
    else:
        raise DomainError(f"unknown bound kind {kind!r}")
    return d_value < bound - tol
