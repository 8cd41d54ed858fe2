"""Exhaustive enumeration of k-planes of P^n(F_q) and point-count statistics.

Planes are enumerated cell by cell: a cell is the set of reduced row echelon
matrices with a fixed pivot set, and its free entries run over F_q.  Every
dimension estimate produced here is a heuristic and is reported under a
``"heuristic"`` key.
"""
from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

from .errors import BudgetExceeded
from .galois import FieldCtx, make_field
from .linegeom import Hypersurface, contains_batch
from .polyalg import LinearSubspace, evaluate_batch, gradient

DEFAULT_BUDGET = 2_000_000
CHUNK = 1 << 15


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """[n choose k]_q: the number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@dataclass(frozen=True)
class GrassCell:
    pivots: tuple
    free: tuple          # (row, column) positions of the free entries
    n: int

    @property
    def k(self):
        return len(self.pivots) - 1

    def size(self, q: int) -> int:
        return q ** len(self.free)

    def rows(self, q: int, start: int, stop: int) -> np.ndarray:
        """Echelon matrices for cell indices start..stop-1 (mixed radix in base q)."""
        idx = np.arange(start, stop, dtype=np.int64)
        out = np.zeros((idx.size, self.k + 1, self.n + 1), dtype=np.int64)
        for r, c in enumerate(self.pivots):
            out[:, r, c] = 1
        for pos, (r, c) in enumerate(self.free):
            out[:, r, c] = (idx // q ** pos) % q
        return out


def grass_cells(n: int, k: int) -> list:
    cells = []
    for piv in combinations(range(n + 1), k + 1):
        free = tuple((r, c) for r, p in enumerate(piv)
                     for c in range(p + 1, n + 1) if c not in piv)
        cells.append(GrassCell(piv, free, n))
    return cells


def enumerate_planes(n: int, k: int, ctx: FieldCtx, budget: int = DEFAULT_BUDGET):
    """Yield every k-plane of P^n(F_q) once, as a LinearSubspace in echelon form."""
    _check_budget(n, k, ctx.q, budget)
    for cell in grass_cells(n, k):
        size = cell.size(ctx.q)
        for start in range(0, size, CHUNK):
            for rows in cell.rows(ctx.q, start, min(size, start + CHUNK)):
                yield LinearSubspace(ctx, rows, _trusted=True)


def _check_budget(n, k, q, budget):
    total = gaussian_binomial(n + 1, k + 1, q)
    if total > budget:
        raise BudgetExceeded(f"{total} planes of P^{n}(F_{q}) exceed the budget {budget}")
    return total


def _scan_cell(args):
    X, cell, q, collect = args
    size = cell.size(q)
    count = 0
    found = []
    for start in range(0, size, CHUNK):
        rows = cell.rows(q, start, min(size, start + CHUNK))
        mask = contains_batch(X, rows)
        count += int(mask.sum())
        if collect and mask.any():
            found.extend(rows[mask])
    return count, found


@dataclass
class CensusResult:
    n: int
    k: int
    field: str
    total_planes: int
    cell_counts: list      # [(pivots, count)]
    count: int
    planes: list           # contained LinearSubspaces, when collected

    def to_json(self):
        return {"n": self.n, "k": self.k, "field": self.field,
                "total_planes": self.total_planes, "count": self.count,
                "cells": [{"pivots": list(p), "count": c} for p, c in self.cell_counts if c]}


def run_census(X: Hypersurface, k: int = 1, ext: int = 1, *, collect: bool = False,
               jobs: int | None = None, checkpoint: str | os.PathLike | None = None,
               budget: int = DEFAULT_BUDGET) -> CensusResult:
    """Count (and optionally collect) the k-planes over F_{q^ext} contained in X.

    With ``checkpoint`` set, per-cell counts are appended to a JSON file and a
    rerun skips finished cells (only when planes are not being collected).
    """
    ctx = make_field(X.ctx.p, X.ctx.e * ext)
    Xb = X.base_change(ctx)
    total = _check_budget(X.n, k, ctx.q, budget)
    cells = grass_cells(X.n, k)
    jobs = jobs or int(os.environ.get("FREELINE_LAB_JOBS", "1"))
    done = {}
    ck_path = Path(checkpoint) if checkpoint else None
    key = json.dumps({"f": Xb.to_json(), "k": k}, sort_keys=True)
    if ck_path and ck_path.exists() and not collect:
        saved = json.loads(ck_path.read_text())
        if saved.get("key") == key:
            done = {int(i): c for i, c in saved["cells"].items()}
    todo = [i for i in range(len(cells)) if i not in done]
    results = {}
    args = [(Xb, cells[i], ctx.q, collect) for i in todo]
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outs = list(pool.map(_scan_cell, args))
    else:
        outs = []
        for i, a in zip(todo, args):
            outs.append(_scan_cell(a))
            if ck_path:
                done[i] = outs[-1][0]
                ck_path.write_text(json.dumps({"key": key, "cells": done}, sort_keys=True))
    for i, out in zip(todo, outs):
        results[i] = out
        done[i] = out[0]
    if ck_path and jobs > 1:
        ck_path.write_text(json.dumps({"key": key, "cells": done}, sort_keys=True))
    planes = []
    if collect:
        for i in range(len(cells)):
            planes.extend(LinearSubspace(ctx, r, _trusted=True) for r in results[i][1])
    cell_counts = [(cells[i].pivots, done[i]) for i in range(len(cells))]
    return CensusResult(X.n, k, repr(ctx), total, cell_counts,
                        sum(c for _, c in cell_counts), planes)


def fano_point_count(X: Hypersurface, k: int = 1, ext: int = 1, **kw) -> int:
    return run_census(X, k, ext, **kw).count


def _log_fit(counts: dict, q: int, max_dim: int) -> dict:
    """Fit c_e ~ q^(e*m) through the origin in log space (one geometric component).

    Counts that repeat between the last two levels are read as a finite set
    defined over the base field, giving m = 0.  With tiny q the Lang-Weil error
    terms are large, so the estimate is rough.
    """
    levels = sorted(counts)
    if not counts or counts[levels[-1]] == 0:
        return {"slope": None, "log_count": None, "fit": None}
    logq = math.log(q)
    last = levels[-1]
    log_count = math.log(counts[last]) / (last * logq)
    slope = None
    if len(levels) >= 2 and counts[levels[-2]] > 0:
        slope = (math.log(counts[last]) - math.log(counts[levels[-2]])) / logq
    if len(levels) >= 2 and counts[levels[-2]] == counts[last]:
        return {"slope": slope, "log_count": log_count, "fit": 0}
    pos = [e for e in levels if counts[e] > 0]
    m = sum(e * math.log(counts[e]) for e in pos) / (sum(e * e for e in pos) * logq)
    return {"slope": slope, "log_count": log_count,
            "fit": min(max_dim, max(0, int(math.floor(m + 0.5))))}


def dimension_estimate(X: Hypersurface, k: int = 1, e_max: int = 2,
                       budget: int = DEFAULT_BUDGET) -> dict:
    """Plane counts over F_{q^e}, e = 1..e_max, with a HEURISTIC dimension estimate."""
    counts = {e: fano_point_count(X, k, e, budget=budget) for e in range(1, e_max + 1)}
    max_dim = (k + 1) * (X.n - k)
    fit = _log_fit(counts, X.ctx.q, max_dim)
    estimate = float("-inf") if fit["fit"] is None else fit["fit"]
    return {"counts": {str(e): c for e, c in counts.items()},
            "heuristic": {"label": "HEURISTIC", "estimate": estimate, **fit}}


def projective_points(n: int, ctx: FieldCtx, start_chart: int = 0):
    """Yield chunks (N, n+1) of all points of P^n(F_q), normalized."""
    q = ctx.q
    for chart in range(start_chart, n + 1):
        free = n - chart
        size = q ** free
        for start in range(0, size, CHUNK):
            idx = np.arange(start, min(size, start + CHUNK), dtype=np.int64)
            pts = np.zeros((idx.size, n + 1), dtype=np.int64)
            pts[:, chart] = 1
            for j in range(free):
                pts[:, chart + 1 + j] = (idx // q ** j) % q
            yield pts


def singular_point_sample(g, e_max: int = 2, cap: int = 1_000_000, samples: int = 200_000,
                          seed: int = 0) -> dict:
    """Projective singular points of V(g) over F_{q^e}, e = 1..e_max.

    Exhaustive when |P^n(F_{q^e})| <= cap, otherwise a uniform sample scaled
    to the full point count (marked "sampled").  The dimension estimate of the
    singular locus is HEURISTIC; -1 means no singular point was seen.
    """
    from .rng import make_rng
    counts, modes = {}, {}
    for e in range(1, e_max + 1):
        ctx = make_field(g.ctx.p, g.ctx.e * e)
        gb = g.base_change(ctx)
        forms = [gb] + [h for h in gradient(gb) if not h.is_zero()]
        n_points = (ctx.q ** (g.n + 1) - 1) // (ctx.q - 1)
        if n_points <= cap:
            hits = 0
            for pts in projective_points(g.n, ctx):
                mask = np.ones(pts.shape[0], dtype=bool)
                for h in forms:
                    mask = _eval_mask(h, pts, mask)
                hits += int(mask.sum())
            counts[e], modes[e] = hits, "exhaustive"
        else:
            rng = make_rng(seed, 4, e)
            vecs = ctx.random(rng, (samples, g.n + 1))
            vecs = vecs[vecs.any(axis=1)]
            mask = np.ones(vecs.shape[0], dtype=bool)
            for h in forms:
                mask = _eval_mask(h, vecs, mask)
            counts[e] = int(round(mask.mean() * n_points))
            modes[e] = "sampled"
    fit = _log_fit(counts, g.ctx.q, g.n)
    estimate = -1 if fit["fit"] is None else fit["fit"]
    return {"counts": {str(e): c for e, c in counts.items()},
            "modes": {str(e): m for e, m in modes.items()},
            "heuristic": {"label": "HEURISTIC", "singular_locus_dim": estimate, **fit}}


def _eval_mask(h, pts, mask):
    out = mask.copy()
    idx = np.nonzero(mask)[0]
    if idx.size:
        out[idx] = evaluate_batch(h, pts[idx]) == 0
    return out
