"""Exception types shared across the package."""


class OptDesignError(Exception):
    """Base class for all optdesign errors."""


class SingularDesign(OptDesignError):
    """The weighted moment matrix failed the SPD factorization.

    Raised when a pivot of the symmetric triangular factorization falls
    below 1e-14 times the largest diagonal entry, i.e. the current design
    does not span the full space to working precision.
    """


class DimensionMismatch(OptDesignError):
    """Vector or matrix dimensions are inconsistent with the problem."""


class DomainError(OptDesignError):
    """A scalar argument is outside its mathematical domain."""


class OverPruned(OptDesignError):
    """A pruning step would leave fewer than ``dim`` usable points.

    Signals a misconfigured pruning tolerance or an infeasible problem;
    the solver state is left untouched.
    """


class DegenerateWeights(OptDesignError):
    """All surviving weights are zero or negative; cannot renormalize."""
