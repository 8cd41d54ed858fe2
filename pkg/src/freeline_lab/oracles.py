"""Slow, independent cross-checks for the fast pipelines.

``syzygy_splitting`` recomputes a kernel splitting type from minimal graded
generators of the syzygy module, with its own scalar elimination over
FieldElement values; ``find_base_point`` searches rational points directly.
Neither shares code with the rank-scan or Macaulay routines they check.
"""
from __future__ import annotations

import numpy as np

from .errors import InternalInconsistency
from .galois import FieldElement, make_field
from .polyalg import evaluate_batch


def _span_rank(vectors, zero):
    """Rank of a list of FieldElement vectors by plain Gaussian elimination."""
    rows = [list(v) for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != zero), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col].inv()
        rows[rank] = [x * inv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != zero:
                c = rows[i][col]
                rows[i] = [x - c * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank, rows[:rank]


def _kernel_basis(mat, ncols, zero, one):
    """Null space basis of a FieldElement matrix given as a list of rows."""
    _, red = _span_rank(mat, zero) if mat else (0, [])
    pivots = []
    for row in red:
        pivots.append(next(i for i, x in enumerate(row) if x != zero))
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [zero] * ncols
        v[free] = one
        for row, pc in zip(red, pivots):
            v[pc] = -row[free]
        basis.append(v)
    return basis


def syzygy_splitting(tmap) -> tuple:
    """Kernel splitting of O(a_1)+...+O(a_m) -> O(b) from minimal syzygy generators.

    A minimal generator of the syzygy module in twist j contributes a summand
    O(-j).  Generators in twist j are counted as dim K_j minus the dimension of
    s*K_{j-1} + t*K_{j-1}.
    """
    ctx = tmap.ctx
    zero, one = FieldElement(ctx, 0), FieldElement(ctx, 1)
    src = list(tmap.source)
    b = tmap.target[0]
    forms = [[FieldElement(ctx, int(c)) for c in f.coeffs] for f in tmap.entries[0]]
    m = len(src)
    want = m - 1
    parts = []
    prev = []           # basis of K_{j-1}, each vector a list of blocks
    j = -max(src) - 1
    cap = sum(abs(a) for a in src) + abs(b) + m + 2
    while len(parts) < want:
        j += 1
        if j > cap:
            raise InternalInconsistency("syzygy scan passed its cap")
        sizes = [max(0, a + j + 1) for a in src]
        out_len = max(0, b + j + 1)
        # columns: coefficients of u_i (degree a_i + j); rows: coefficients of sum u_i f_i
        mat = [[zero] * sum(sizes) for _ in range(out_len)]
        col = 0
        for i, size in enumerate(sizes):
            f = forms[i]
            for u in range(size):
                for r, c in enumerate(f):
                    if c != zero:
                        mat[u + r][col] = c
                col += 1
        kernel = _kernel_basis(mat, sum(sizes), zero, one)
        # products s*v and t*v of the previous generators' span
        shifted = []
        for v in prev:
            pos = 0
            s_part, t_part = [], []
            for i, size in enumerate(sizes):
                old = max(0, size - 1)
                block = v[pos:pos + old]
                pos += old
                if size:
                    s_part += block + [zero]
                    t_part += [zero] + block
            shifted += [s_part, t_part]
        old_rank = _span_rank(shifted, zero)[0] if shifted else 0
        parts += [-j] * (len(kernel) - old_rank)
        prev = kernel
    return tuple(sorted(parts))


def find_base_point(gens, max_ext: int, chunk: int = 1 << 16):
    """First common projective zero of gens over F_{q^e}, e = 1..max_ext, or None.

    Returns (e, point codes over F_{q^e}).
    """
    base = gens[0].ctx
    n = gens[0].n
    for e in range(1, max_ext + 1):
        ctx = make_field(base.p, base.e * e)
        forms = [g.base_change(ctx) for g in gens if not g.is_zero()]
        q = ctx.q
        for chart in range(n + 1):
            free = n - chart
            size = q ** free
            for start in range(0, size, chunk):
                idx = np.arange(start, min(size, start + chunk), dtype=np.int64)
                pts = np.zeros((idx.size, n + 1), dtype=np.int64)
                pts[:, chart] = 1
                for i in range(free):
                    pts[:, chart + 1 + i] = (idx // q ** i) % q
                for g in forms:
                    pts = pts[evaluate_batch(g, pts) == 0]
                    if not pts.size:
                        break
                if pts.shape[0]:
                    return e, pts[0]
    return None
