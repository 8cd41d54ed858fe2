"""Gaussian elimination over a FieldCtx on numpy matrices of element codes."""
from __future__ import annotations

import numpy as np


def rref(ctx, matrix):
    """Reduced row echelon form.  Returns (R, pivot_columns); R has rank rows."""
    m = np.array(matrix, dtype=np.int64, copy=True)
    if m.ndim != 2 or m.size == 0:
        return m.reshape(0, m.shape[1] if m.ndim == 2 else 0), []
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        lead = int(m[r, c])
        if lead != 1:
            m[r] = ctx.mul(m[r], ctx.inv(lead))
        others = np.nonzero(m[:, c])[0]
        others = others[others != r]
        if others.size:
            factors = m[others, c][:, None]
            m[others] = ctx.sub(m[others], ctx.mul(factors, m[r][None, :]))
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(ctx, matrix) -> int:
    m = np.asarray(matrix, dtype=np.int64)
    if m.size == 0:
        return 0
    # eliminate on the smaller orientation
    if m.shape[0] > m.shape[1]:
        m = m.T
    return _forward_rank(ctx, m)


def _forward_rank_prime(p, matrix) -> int:
    # fused multiply-subtract-reduce; int32 suffices while p^2 < 2^31
    dtype = np.int32 if p * p < 2**31 else np.int64
    m = np.array(matrix, dtype=dtype, copy=True)
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        below = r + 1 + np.nonzero(m[r + 1:, c])[0]
        if below.size:
            inv = pow(int(m[r, c]), -1, p)
            factors = (m[below, c] * inv % p)[:, None]
            m[below, c:] = (m[below, c:] - factors * m[r, c:][None, :]) % p
        r += 1
    return r


def _forward_rank(ctx, matrix) -> int:
    if ctx.e == 1:
        return _forward_rank_prime(ctx.p, matrix)
    m = np.array(matrix, dtype=np.int64, copy=True)
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        below = r + 1 + np.nonzero(m[r + 1:, c])[0]
        if below.size:
            factors = ctx.mul(m[below, c], ctx.inv(int(m[r, c])))[:, None]
            m[below, c:] = ctx.sub(m[below, c:], ctx.mul(factors, m[r, c:][None, :]))
        r += 1
    return r


def nullspace(ctx, matrix):
    """Basis (as rows) of {v : matrix @ v = 0}."""
    m = np.asarray(matrix, dtype=np.int64)
    cols = m.shape[1]
    red, pivots = rref(ctx, m) if m.shape[0] else (np.zeros((0, cols), dtype=np.int64), [])
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = ctx.neg(int(red[row, f]))
    return basis


def matmul(ctx, a, b):
    """Matrix product over the field."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(a.shape[1]):
        out = ctx.add(out, ctx.mul(a[:, k][:, None], b[k][None, :]))
    return out


def inverse(ctx, a):
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[0]
    aug = np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1)
    red, pivots = rref(ctx, aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular")
    return red[:n, n:]
