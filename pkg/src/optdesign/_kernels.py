"""Compiled numerical kernels.

Everything here operates on plain float64 arrays so that the same code is
used by the object-level operations in :mod:`optdesign.core` /
:mod:`optdesign.solver` and by the fused solver loop. The loop is the hot
path of the benchmark harness: per-iteration cost must stay proportional
to the number of active points, which rules out a Python-level loop built
from numpy calls (their fixed call overhead dwarfs the O(q*m^2) work once
the active set shrinks to a handful of points).

If numba is unavailable the kernels still run as plain Python, only slowly.
"""

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


# Pivot threshold of the SPD factorization, relative to the largest
# diagonal entry of the input matrix.
PIVOT_RTOL = 1e-14

# Weights must remain strictly positive for the multiplicative recursion;
# this floor only prevents denormal underflow to exact zero and is far
# below any weight that can influence a result.
WEIGHT_FLOOR = 1e-300

# Solver status codes returned by solve_loop.
STATUS_CONVERGED = 0
STATUS_MAX_ITERS = 1
STATUS_SINGULAR = 2
STATUS_OVERPRUNED = 3

# Pruning-test codes.
BOUND_NONE = 0
BOUND_NEW = 1
BOUND_OLD = 2

# Weight-reallocation codes.
REALLOC_PROPORTIONAL = 0
REALLOC_BOOST = 1


@njit(cache=True, nogil=True)
def spd_factor(M, L):
    """Lower-triangular factorization M = L L^T.

    Returns False (leaving L unspecified) when any pivot drops below
    PIVOT_RTOL times the largest diagonal of M. This is the single
    singularity test of the package.
    """
    m = M.shape[0]
    maxdiag = 0.0
    for i in range(m):
        if M[i, i] > maxdiag:
            maxdiag = M[i, i]
    thresh = PIVOT_RTOL * maxdiag
    for i in range(m):
        for j in range(m):
            L[i, j] = 0.0
    for j in range(m):
        s = M[j, j]
        for t in range(j):
            s -= L[j, t] * L[j, t]
        if not (s > thresh):
            return False
        L[j, j] = np.sqrt(s)
        for i in range(j + 1, m):
            r = M[i, j]
            for t in range(j):
                r -= L[i, t] * L[j, t]
            L[i, j] = r / L[j, j]
    return True


@njit(cache=True, nogil=True)
def inv_from_factor(L, out):
    """Invert L L^T by forward/back substitution on the identity."""
    m = L.shape[0]
    for col in range(m):
        for i in range(m):
            s = 1.0 if i == col else 0.0
            for t in range(i):
                s -= L[i, t] * out[t, col]
            out[i, col] = s / L[i, i]
    for col in range(m):
        for i in range(m - 1, -1, -1):
            s = out[i, col]
            for t in range(i + 1, m):
                s -= L[t, i] * out[t, col]
            out[i, col] = s / L[i, i]


@njit(cache=True, nogil=True)
def logdet_from_factor(L):
    m = L.shape[0]
    s = 0.0
    for i in range(m):
        s += np.log(L[i, i])
    return 2.0 * s


@njit(cache=True, nogil=True)
def info_into(X, idx, q, w, M):
    """M = sum_i w[i] * x_i x_i^T over the first q positions of idx."""
    m = X.shape[1]
    for a in range(m):
        for b in range(m):
            M[a, b] = 0.0
    for i in range(q):
        xi = idx[i]
        wi = w[i]
        for a in range(m):
            va = wi * X[xi, a]
            for b in range(m):
                M[a, b] += va * X[xi, b]


@njit(cache=True, nogil=True)
def variance_into(X, idx, q, Minv, d):
    """d[i] = x_i^T Minv x_i over the first q positions of idx; returns max."""
    m = X.shape[1]
    dmax = -np.inf
    for i in range(q):
        xi = idx[i]
        s = 0.0
        for a in range(m):
            row = 0.0
            for b in range(m):
                row += Minv[a, b] * X[xi, b]
            s += X[xi, a] * row
        d[i] = s
        if s > dmax:
            dmax = s
    return dmax


@njit(cache=True, nogil=True)
def h_new(m, eps):
    """Pruning threshold of the sharper test.

    Algebraically m*(1 + eps/2 - sqrt(eps*(4 + eps - 4/m))/2); evaluated in
    the rationalized form m*(1 + eps/m) / (1 + eps/2 + sqrt(...)/2) which is
    free of cancellation for large eps (the naive form loses all digits once
    eps exceeds ~1e15 and dips below 1 on the way).
    """
    if m <= 1.0:
        return 1.0
    if eps <= 0.0:
        return m
    root = np.sqrt(eps) * np.sqrt(4.0 + eps - 4.0 / m)
    return m * (1.0 + eps / m) / (1.0 + 0.5 * eps + 0.5 * root)


@njit(cache=True, nogil=True)
def h_old(m, eps):
    """Pruning threshold of the earlier test, rationalized like h_new."""
    if eps <= 0.0:
        return m
    root = np.sqrt(eps) * np.sqrt(4.0 + eps)
    return m / (1.0 + 0.5 * eps + 0.5 * root)


@njit(cache=True, nogil=True)
def solve_loop(X, w0, bound_code, delta, prune_every, prune_tol,
               realloc_code, boost_a, max_iters, record_trace):
    """Multiplicative-update loop with optional per-iteration pruning.

    X holds the currently active candidate points, one per row; w0 the
    initial weights over those rows. Rows are deactivated in place by
    compacting the position array ``act``; relative order is preserved.

    Each trace row describes iteration k after any pruning at k and before
    the k -> k+1 weight update; ``removed`` counts points cut at that k.
    Pruning tests run for k >= 1 at multiples of prune_every, using the
    variance values and excess of the current design. Boost reallocation
    applies only at iterations where points were actually removed, using
    the pre-removal variance values.

    Returns (status, k, k_star, k_10, q, act, w,
             trace_q, trace_eps, trace_logdet, trace_removed, nrows).
    """
    n = X.shape[0]
    m = X.shape[1]
    mf = float(m)
    act = np.arange(n)
    w = w0.copy()
    q = n

    M = np.empty((m, m))
    L = np.empty((m, m))
    Minv = np.empty((m, m))
    d = np.empty(n)

    cap = max_iters + 2 if record_trace else 1
    tr_q = np.empty(cap, dtype=np.int64)
    tr_eps = np.empty(cap)
    tr_ld = np.empty(cap)
    tr_rm = np.empty(cap, dtype=np.int64)

    k = 0
    nrows = 0
    status = STATUS_MAX_ITERS
    k_star = -1
    k_10 = -1
    eps = np.inf
    ld = -np.inf

    while True:
        info_into(X, act, q, w, M)
        if not spd_factor(M, L):
            status = STATUS_SINGULAR
            break
        ld = logdet_from_factor(L)
        inv_from_factor(L, Minv)
        dmax = variance_into(X, act, q, Minv, d)
        eps = dmax - mf
        if eps < 0.0:
            eps = 0.0

        removed = 0
        stop = False
        if eps < delta:
            k_star = k
            status = STATUS_CONVERGED
            stop = True
        elif k >= max_iters:
            status = STATUS_MAX_ITERS
            stop = True
        elif bound_code != BOUND_NONE and k >= 1 and k % prune_every == 0:
            if bound_code == BOUND_NEW:
                thr = h_new(mf, eps) - prune_tol
            else:
                thr = h_old(mf, eps) - prune_tol
            nkeep = 0
            for i in range(q):
                if not (d[i] < thr):
                    nkeep += 1
            if nkeep < q:
                if nkeep < m:
                    status = STATUS_OVERPRUNED
                    break
                j = 0
                for i in range(q):
                    if not (d[i] < thr):
                        act[j] = act[i]
                        w[j] = w[i]
                        d[j] = d[i]
                        j += 1
                removed = q - nkeep
                q = nkeep
                if realloc_code == REALLOC_BOOST:
                    for i in range(q):
                        if d[i] >= mf:
                            w[i] *= boost_a
                ssum = 0.0
                for i in range(q):
                    ssum += w[i]
                for i in range(q):
                    w[i] /= ssum
                # refresh the state so the recorded row and the next
                # update both see the post-reallocation design
                info_into(X, act, q, w, M)
                if not spd_factor(M, L):
                    status = STATUS_OVERPRUNED
                    break
                ld = logdet_from_factor(L)
                inv_from_factor(L, Minv)
                dmax = variance_into(X, act, q, Minv, d)
                eps = dmax - mf
                if eps < 0.0:
                    eps = 0.0
                if eps < delta:
                    k_star = k
                    status = STATUS_CONVERGED
                    stop = True

        if k_10 < 0 and q <= 10:
            k_10 = k
        if record_trace:
            tr_q[nrows] = q
            tr_eps[nrows] = eps
            tr_ld[nrows] = ld
            tr_rm[nrows] = removed
        nrows += 1
        if stop:
            break

        ssum = 0.0
        for i in range(q):
            wi = w[i] * d[i] / mf
            if wi < WEIGHT_FLOOR:
                wi = WEIGHT_FLOOR
            w[i] = wi
            ssum += wi
        for i in range(q):
            w[i] /= ssum
        k += 1

    if not record_trace:
        nrows = 0
    return (status, k, k_star, k_10, q, act[:q].copy(), w[:q].copy(),
            tr_q[:nrows].copy(), tr_eps[:nrows].copy(),
            tr_ld[:nrows].copy(), tr_rm[:nrows].copy(), nrows)


_compiled = False


def ensure_compiled():
    """Force JIT compilation of the solver loop on a toy problem.

    Called before timed runs so wall-clock measurements never include
    compilation. No-op after the first call (and cheap even then).
    """
    global _compiled
    if _compiled:
        return
    X = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    w0 = np.full(3, 1.0 / 3.0)
    solve_loop(X, w0, BOUND_NEW, 1e-2, 1, 1e-9, REALLOC_BOOST, 2.0, 50, True)
    _compiled = True
