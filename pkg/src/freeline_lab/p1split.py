"""Splitting types of kernels of maps between sums of line bundles on P^1.

A :class:`TwistedMap` is a matrix of binary forms

    O(a_1) + ... + O(a_m)  -->  O(b_1) + ... + O(b_r)

with entry (j, i) of degree b_j - a_i.  When the map is surjective as a map of
sheaves its kernel K is a vector bundle of rank m - r, hence a sum of line
bundles O(e_1) + ... + O(e_{m-r}).  The e_i are recovered from
h^0(K(m)) = sum_i max(0, e_i + m + 1), which is the nullity of the
multiplication matrix between graded pieces.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from . import linalg
from .errors import (ContextMismatch, InternalInconsistency, NotSurjective,
                     TwistTooNegative, ValidationError, ZeroMap)
from .galois import FieldCtx
from .polyalg import BinaryForm, binary_gcd


@dataclass(frozen=True)
class SplittingType:
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(sorted(int(e) for e in self.parts)))

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __eq__(self, other):
        if isinstance(other, SplittingType):
            return self.parts == other.parts
        if isinstance(other, (tuple, list)):
            return self.parts == tuple(sorted(other))
        return NotImplemented

    def __hash__(self):
        return hash(self.parts)

    @property
    def degree(self) -> int:
        return sum(self.parts)

    def h0(self, twist: int = 0) -> int:
        return sum(max(0, e + twist + 1) for e in self.parts)

    def h1(self, twist: int = 0) -> int:
        return sum(max(0, -e - twist - 1) for e in self.parts)

    @property
    def min(self):
        return self.parts[0] if self.parts else None

    def __repr__(self):
        return "(" + ", ".join(str(e) for e in self.parts) + ")"


@dataclass
class TwistedMap:
    source: tuple
    target: tuple
    entries: list                 # r lists of m BinaryForms
    ctx: FieldCtx = field(default=None)

    def __post_init__(self):
        self.source = tuple(int(a) for a in self.source)
        self.target = tuple(int(b) for b in self.target)
        if len(self.entries) != len(self.target):
            raise ValidationError("need one row of entries per target twist")
        if self.ctx is None:
            self.ctx = self.entries[0][0].ctx
        for j, row in enumerate(self.entries):
            if len(row) != len(self.source):
                raise ValidationError("need one entry per source twist in every row")
            for i, form in enumerate(row):
                if form.ctx != self.ctx:
                    raise ContextMismatch(f"entry ({j},{i}) lives in {form.ctx}")
                want = self.target[j] - self.source[i]
                if form.degree != want and not (form.is_zero() and want < 0):
                    raise ValidationError(
                        f"entry ({j},{i}) has degree {form.degree}, expected {want}")

    @classmethod
    def row(cls, source, target_twist, forms):
        """A single-target map O(a_1)+...+O(a_m) -> O(b)."""
        forms = list(forms)
        return cls(tuple(source), (target_twist,), [forms], forms[0].ctx)

    @property
    def rank(self) -> int:
        return len(self.source) - len(self.target)

    def substitute(self, matrix) -> "TwistedMap":
        """Reparametrize P^1 by an invertible substitution of (s, t)."""
        rows = [[f.substitute(matrix) if f.degree >= 0 else f for f in row]
                for row in self.entries]
        return TwistedMap(self.source, self.target, rows, self.ctx)

    def to_json(self):
        return {"field": self.ctx.to_json(), "source": list(self.source),
                "target": list(self.target),
                "entries": [[[self.ctx.to_coeffs(c) for c in f.coeffs] for f in row]
                            for row in self.entries]}


def graded_matrix(tmap: TwistedMap, m: int) -> np.ndarray:
    """Matrix of H^0(sum O(a_i + m)) -> H^0(sum O(b_j + m)) in monomial bases."""
    src = [max(0, a + m + 1) for a in tmap.source]
    tgt = [max(0, b + m + 1) for b in tmap.target]
    mat = np.zeros((sum(tgt), sum(src)), dtype=np.int64)
    col0 = 0
    for i, ncols in enumerate(src):
        row0 = 0
        for j, nrows in enumerate(tgt):
            form = tmap.entries[j][i]
            if ncols and nrows and form.degree >= 0 and not form.is_zero():
                for u in range(ncols):
                    mat[row0 + u: row0 + u + form.degree + 1, col0 + u] = form.coeffs
            row0 += nrows
        col0 += ncols
    return mat


def graded_kernel_dim(tmap: TwistedMap, m: int) -> int:
    """h^0(K(m)) as the nullity of the graded multiplication matrix."""
    mat = graded_matrix(tmap, m)
    if mat.shape[1] == 0:
        return 0
    return mat.shape[1] - linalg.rank(tmap.ctx, mat)


def h1_via_cokernel(tmap: TwistedMap, m: int) -> int:
    """h^1(K(m)), valid once every source twist a_i + m >= -1."""
    if m < -min(tmap.source) - 1:
        raise TwistTooNegative(f"twist {m} below {-min(tmap.source) - 1}")
    mat = graded_matrix(tmap, m)
    if mat.shape[0] == 0:
        return 0
    return mat.shape[0] - (linalg.rank(tmap.ctx, mat) if mat.shape[1] else 0)


def kernel_h1(tmap: TwistedMap, m: int) -> int:
    """h^1(K(m)) at any twist, for a sheaf-surjective map E -> F.

    From 0 -> K -> E -> F -> 0, h^1(K(m)) is the cokernel of H^0(E(m)) -> H^0(F(m))
    plus the kernel of H^1(E(m)) -> H^1(F(m)); by Serre duality the latter map
    is dual to H^0(F^v(-m-2)) -> H^0(E^v(-m-2)), multiplication by the transpose.
    """
    mat = graded_matrix(tmap, m)
    rank0 = linalg.rank(tmap.ctx, mat) if mat.size else 0
    coker = mat.shape[0] - rank0
    dual = TwistedMap(tuple(-b for b in tmap.target), tuple(-a for a in tmap.source),
                      [[tmap.entries[j][i] for j in range(len(tmap.target))]
                       for i in range(len(tmap.source))], tmap.ctx)
    dmat = graded_matrix(dual, -m - 2)
    rank1 = linalg.rank(tmap.ctx, dmat) if dmat.size else 0
    h1_source = sum(max(0, -a - m - 1) for a in tmap.source)
    return coker + h1_source - rank1


def _determinant(ctx, block):
    """Laplace expansion of a square matrix of binary forms."""
    size = len(block)
    total = None
    for perm in permutations(range(size)):
        sign = 1
        seen = list(perm)
        for i in range(size):
            for j in range(i + 1, size):
                if seen[i] > seen[j]:
                    sign = -sign
        term = None
        for row, col in enumerate(perm):
            f = block[row][col]
            term = f if term is None else term * f
        if sign < 0:
            term = -term
        total = term if total is None else total + term
    return total


def maximal_minors(tmap: TwistedMap) -> list:
    from itertools import combinations
    r = len(tmap.target)
    minors = []
    for cols in combinations(range(len(tmap.source)), r):
        block = [[tmap.entries[j][i] for i in cols] for j in range(r)]
        minors.append(_determinant(tmap.ctx, block))
    return minors


def is_sheaf_surjective(tmap: TwistedMap) -> bool:
    """True iff the maximal minors have no common zero on P^1 over the closure."""
    if all(f.is_zero() for row in tmap.entries for f in row):
        raise ZeroMap("all entries vanish")
    if tmap.rank < 0:
        return False
    if len(tmap.target) == 1:
        minors = tmap.entries[0]
    else:
        minors = maximal_minors(tmap)
    minors = [f for f in minors if f.degree >= 0 and not f.is_zero()]
    if not minors:
        return False
    return binary_gcd(minors).degree == 0


def splitting_type(tmap: TwistedMap, table: dict | None = None) -> SplittingType:
    """Kernel splitting type of a sheaf-surjective twisted map.

    If ``table`` is given it is filled with {m: h^0(K(m))} for every scanned twist.
    """
    if not is_sheaf_surjective(tmap):
        raise NotSurjective("the map is not surjective on P^1")
    k = tmap.rank
    degree = sum(tmap.source) - sum(tmap.target)
    if k == 0:
        return SplittingType(())
    top = max(tmap.source)
    start = -top - 1
    cap = sum(abs(a) for a in tmap.source) + sum(abs(b) for b in tmap.target) + k + 2
    prev_h0 = 0
    prev_count = 0
    if graded_kernel_dim(tmap, start) != 0:
        raise InternalInconsistency("kernel has sections below the subsheaf bound")
    if table is not None:
        table[start] = 0
    parts = []
    m = start
    while prev_count < k:
        m += 1
        if m > cap:
            raise InternalInconsistency(f"splitting scan passed twist cap {cap}")
        h0 = graded_kernel_dim(tmap, m)
        if table is not None:
            table[m] = h0
        count = h0 - prev_h0           # number of e_i >= -m
        if count < prev_count or count > k:
            raise InternalInconsistency(f"non-monotone section counts at twist {m}")
        parts.extend([-m] * (count - prev_count))
        prev_h0, prev_count = h0, count
    result = SplittingType(parts)
    if result.degree != degree:
        raise InternalInconsistency(
            f"degree identity failed: sum {result.degree} != {degree}")
    return result


def scan_table(tmap: TwistedMap, split: SplittingType | None = None) -> list:
    """h^0 / h^1 rows over the scan window, for reports."""
    split = split or splitting_type(tmap)
    lo = -max(tmap.source) - 1
    hi = max(-split.min if split.parts else 0, lo + 1)
    rows = []
    for m in range(lo, hi + 1):
        row = {"twist": m, "h0": graded_kernel_dim(tmap, m)}
        if m >= -min(tmap.source) - 1:
            row["h1"] = h1_via_cokernel(tmap, m)
        rows.append(row)
    return rows
