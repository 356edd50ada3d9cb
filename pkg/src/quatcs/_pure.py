"""Pure numpy implementations of the hot kernels.

Same contracts as the compiled ``_kernels`` module; used when the extension
is unavailable or when ``QUATCS_PURE_PYTHON`` is set.
"""
import math

import numpy as np

NAME = "python"
BLOCK = 64


def _qmul(p, q):
    p0, p1, p2, p3 = np.moveaxis(p, -1, 0)
    q0, q1, q2, q3 = np.moveaxis(q, -1, 0)
    return np.stack([
        p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
        p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2,
        p0 * q2 - p1 * q3 + p2 * q0 + p3 * q1,
        p0 * q3 + p1 * q2 - p2 * q1 + p3 * q0,
    ], axis=-1)


def sandwich_series(L, X, R, log_scale, tol, max_terms):
    """Sum ``L^n X R^n / n!`` row-wise.

    With ``tol > 0`` a row stops after term ``n`` once ``n + 1 > x`` and
    ``exp(log_scale) * x^(n+1) / (n+1)! < tol`` where ``x = |L||R|``;
    otherwise exactly ``max_terms`` terms are summed.
    Returns ``(sums, terms_used)``.
    """
    L = np.ascontiguousarray(L, dtype=float)
    X = np.ascontiguousarray(X, dtype=float)
    R = np.ascontiguousarray(R, dtype=float)
    log_scale = np.asarray(log_scale, dtype=float)
    m = L.shape[0]
    x = np.sqrt((L ** 2).sum(-1)) * np.sqrt((R ** 2).sum(-1))
    with np.errstate(divide="ignore"):
        logx = np.log(x)
    logtol = math.log(tol) if tol > 0 else -np.inf
    term = X.copy()
    total = np.zeros((m, 4))
    terms = np.zeros(m, dtype=np.int64)
    active = np.ones(m, dtype=bool)
    for n in range(max_terms):
        total[active] += term[active]
        terms[active] = n + 1
        if tol > 0:
            nxt = n + 1
            bound = log_scale + nxt * logx - math.lgamma(nxt + 1)
            active &= ~((nxt > x) & (bound < logtol))
        if not active.any():
            break
        term = _qmul(_qmul(L, term), R) / (n + 1)
    return total, terms


def monomials(Q, n):
    """``Q[p]^k / sqrt(k!)`` for ``k < n``; shape ``(P, n, 4)``."""
    Q = np.ascontiguousarray(Q, dtype=float)
    out = np.empty((Q.shape[0], n, 4))
    cur = np.zeros((Q.shape[0], 4))
    cur[:, 0] = 1.0
    for k in range(n):
        out[:, k] = cur
        cur = _qmul(cur, Q) / math.sqrt(k + 1)
    return out


def _block_outer(V, w):
    Vw = V * w[:, None, None]
    conjV = V.copy()
    conjV[..., 1:] *= -1.0
    prod = _qmul(Vw[:, :, None, :], conjV[:, None, :, :])
    return prod.sum(axis=0)


def accumulate_outer(V, w):
    """Weighted sum of rank-one quaternion outer products ``w_p v_p v_p^dagger``.

    Points are processed in fixed blocks of ``BLOCK``; block sums are then
    combined by a pairwise tree, so the result is independent of threading.
    """
    V = np.ascontiguousarray(V, dtype=float)
    w = np.ascontiguousarray(w, dtype=float)
    P, N = V.shape[0], V.shape[1]
    parts = [_block_outer(V[s:s + BLOCK], w[s:s + BLOCK]) for s in range(0, P, BLOCK)]
    if not parts:
        return np.zeros((N, N, 4))
    while len(parts) > 1:
        nxt = [parts[i] + parts[i + 1] for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0]
