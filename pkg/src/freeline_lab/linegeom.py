"""Lines and k-planes on a hypersurface X = V(f) in P^n.

The normal bundle of a line l in X is the kernel of

    O_l(1)^{n-1} --(df/dx_j |_l)--> O_l(d),

where j runs over the non-pivot columns of the echelon basis of l (these give
a basis of the normal directions).  Its splitting type is computed with
:mod:`freeline_lab.p1split`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import linalg, macaulay
from .errors import (DegenerateInput, InclusionViolated, LineNotOnHypersurface,
                     PipelineDisagreement, PlaneNotOnHypersurface,
                     SingularAlongLine, ValidationError)
from .galois import FieldCtx
from .p1split import SplittingType, TwistedMap, splitting_type
from .polyalg import (BinaryForm, LinearSubspace, MultiPoly, binary_gcd,
                      expand_around_point, expand_around_subspace, gradient,
                      monomials, multisets, restrict_batch, restrict_to_subspace)


class Hypersurface:
    """X = V(f) for a nonzero homogeneous f of degree d on P^n."""

    def __init__(self, f: MultiPoly):
        if f.is_zero():
            raise DegenerateInput("the zero polynomial does not define a hypersurface")
        self.f = f
        self._grad = None

    @property
    def n(self):
        return self.f.n

    @property
    def d(self):
        return self.f.degree

    @property
    def ctx(self) -> FieldCtx:
        return self.f.ctx

    @property
    def grad(self) -> list:
        if self._grad is None:
            self._grad = gradient(self.f)
        return self._grad

    def base_change(self, big: FieldCtx) -> "Hypersurface":
        return self if big == self.ctx else Hypersurface(self.f.base_change(big))

    def to_json(self):
        return {"field": self.ctx.to_json(), **self.f.to_json()}

    def __repr__(self):
        return f"Hypersurface(n={self.n}, d={self.d}, {self.ctx})"


def contains(X: Hypersurface, plane: LinearSubspace) -> bool:
    return restrict_to_subspace(X.f, plane).is_zero()


def contains_batch(X: Hypersurface, rows) -> np.ndarray:
    """Boolean mask over N parametrized subspaces (rows of shape (N, k+1, n+1))."""
    return ~restrict_batch(X.f, rows).any(axis=1)


def smoothness_certificate(X: Hypersurface) -> bool:
    """True iff V(f, df/dx_0, ..., df/dx_n) is empty over the algebraic closure.

    When p does not divide d, Euler's relation puts f in the ideal of the
    partials and the partials alone are tested.
    """
    if X.d == 1:
        return True
    forms = list(X.grad)
    if X.d % X.ctx.p == 0:
        forms = [X.f] + forms
    return macaulay.has_no_common_zero(forms)


def _restricted_partials(X: Hypersurface, line: LinearSubspace) -> list:
    coeffs = [restrict_batch(g, line.rows[None, :, :])[0] if not g.is_zero()
              else np.zeros(X.d, dtype=np.int64) for g in X.grad]
    return [BinaryForm.from_codes(X.ctx, c) for c in coeffs]


@dataclass
class NormalBundleReport:
    splitting: SplittingType
    n: int
    d: int
    tangent_map: TwistedMap = field(repr=False, default=None)

    @property
    def h0(self) -> int:
        return self.splitting.h0()

    @property
    def h1_minus1(self) -> int:
        """a = h^1(N_{l/X}(-1))."""
        return sum(max(0, -e) for e in self.splitting)

    @property
    def h0_minus1(self) -> int:
        return sum(max(0, e) for e in self.splitting)

    @property
    def free(self) -> bool:
        return not self.splitting.parts or self.splitting.min >= 0

    @property
    def tangent_dim(self) -> int:
        return self.h0

    @property
    def expected_dim(self) -> int:
        return 2 * self.n - self.d - 3

    def to_json(self):
        return {"splitting": list(self.splitting.parts), "h0": self.h0,
                "h1_minus1": self.h1_minus1, "free": self.free,
                "tangent_dim": self.tangent_dim, "expected_dim": self.expected_dim}


def _normal_report(X, line, partials) -> NormalBundleReport:
    if all(p.is_zero() for p in partials) or binary_gcd(partials).degree > 0:
        raise SingularAlongLine("X has a singular point on the line")
    entries = [partials[j] for j in line.nonpivots]
    tmap = TwistedMap.row((1,) * len(entries), X.d, entries)
    split = splitting_type(tmap)
    if split.degree != X.n - 1 - X.d:
        raise PipelineDisagreement("normal bundle degree differs from n-1-d")
    return NormalBundleReport(split, X.n, X.d, tmap)


def normal_bundle_line(X: Hypersurface, line: LinearSubspace) -> NormalBundleReport:
    if line.k != 1:
        raise ValidationError("expected a line")
    if not contains(X, line):
        raise LineNotOnHypersurface("the line is not contained in X")
    return _normal_report(X, line, _restricted_partials(X, line))


def normal_bundle_lines(X: Hypersurface, lines: list) -> list:
    """Reports for many contained lines, restricting the gradient in one batch."""
    if not lines:
        return []
    rows = np.stack([l.rows for l in lines])
    restricted = [restrict_batch(g, rows) if not g.is_zero()
                  else np.zeros((len(lines), X.d), dtype=np.int64) for g in X.grad]
    out = []
    for idx, line in enumerate(lines):
        partials = [BinaryForm.from_codes(X.ctx, r[idx]) for r in restricted]
        out.append(_normal_report(X, line, partials))
    return out


def kernel_bundle_on_line(X: Hypersurface, line: LinearSubspace) -> SplittingType:
    """Splitting of M|_l, M = ker(O(1)^{n+1} -> O(d)) given by the full gradient."""
    partials = _restricted_partials(X, line)
    return splitting_type(TwistedMap.row((1,) * (X.n + 1), X.d, partials))


def line_is_free(X: Hypersurface, line: LinearSubspace) -> bool:
    """Freeness of l, computed from N_{l/X} and cross-checked on M|_l.

    On a line in X the gradient kills the two tangential directions, so
    M|_l = O(1)^2 + N_{l/X}; both verdicts must agree.
    """
    report = normal_bundle_line(X, line)
    kernel = kernel_bundle_on_line(X, line)
    expected = SplittingType(report.splitting.parts + (1, 1))
    if kernel != expected:
        raise PipelineDisagreement(f"M|_l = {kernel} but N_l/X = {report.splitting}")
    if (kernel.min >= 0) != report.free:
        raise PipelineDisagreement("freeness verdicts differ")
    return report.free


@dataclass
class LinearPartProfile:
    linear_parts: np.ndarray   # row i-1 holds L_i in the coordinates x_1..x_n
    span_rank: int             # codimension of V(L_1..L_d) in the hyperplane
    prefix_r: int              # largest r with L_1..L_r independent
    m: int                     # min(d, p)
    prefix_property: bool      # L_1..L_r spans L_1..L_m for r = prefix_r
    n: int

    @property
    def tangent_dim(self) -> int:
        """Dimension of V(L_1..L_d) inside V(x_0) = P^{n-1}."""
        return self.n - 1 - self.span_rank


def linear_part_profile(X: Hypersurface, line: LinearSubspace, q) -> LinearPartProfile:
    exp = expand_around_point(X.f, q, line)
    L = exp.linear_parts
    ctx = X.ctx
    span = linalg.rank(ctx, L)
    r = 0
    while r < L.shape[0] and linalg.rank(ctx, L[:r + 1]) == r + 1:
        r += 1
    m = min(X.d, ctx.p)
    prefix_ok = r >= 1 and linalg.rank(ctx, L[:m]) == min(r, m)
    return LinearPartProfile(L, span, r, m, bool(prefix_ok), X.n)


def expected_fano_dim(n: int, d: int, k: int) -> int:
    return (k + 1) * (n - k) - comb(d + k, k)


def fano_tangent_dim(X: Hypersurface, plane: LinearSubspace) -> tuple:
    """(h^0(N_{plane/X}), expected dimension of F_k(X)).

    h^0 is the nullity of (lambda_j) -> sum_j lambda_j * df/dx_j |_plane on
    linear forms lambda_j over the normal directions j.
    """
    k = plane.k
    if not contains(X, plane):
        raise PlaneNotOnHypersurface("the plane is not contained in X")
    restricted = [restrict_batch(g, plane.rows[None, :, :])[0] if not g.is_zero()
                  else np.zeros(comb(X.d - 1 + k, k), dtype=np.int64) for g in X.grad]
    gens = [MultiPoly.from_dense(X.ctx, k, X.d - 1, r) for r in restricted]
    if not macaulay.has_no_common_zero(gens):
        raise SingularAlongLine("X is singular somewhere on the plane")
    target = {mon: i for i, mon in enumerate(monomials(k + 1, X.d))}
    cols = []
    for j in plane.nonpivots:
        g = gens[j]
        for a in range(k + 1):
            col = np.zeros(len(target), dtype=np.int64)
            for e, c in g.terms.items():
                e2 = list(e)
                e2[a] += 1
                col[target[tuple(e2)]] = c
            cols.append(col)
    mat = np.stack(cols, axis=1)
    h0 = mat.shape[1] - linalg.rank(X.ctx, mat)
    return h0, expected_fano_dim(X.n, X.d, k)


def is_downward(subset, k: int, d: int) -> bool:
    """Closed under adding any index, within multisets of size <= d-1."""
    members = set(subset)
    for I in members:
        if len(I) < d - 1:
            for j in range(k):
                if tuple(sorted(I + (j,))) not in members:
                    return False
    return True


@dataclass
class FLambdaTangent:
    span_rank: int
    witness: list | None        # a downward T' indexing a basis, if greedy found one
    greedy_success: bool
    expected_dim: int           # n - k - C(d+k-1, k)
    tangent_dim: int            # dim of the tangent space to F^Lambda(X) at the plane


def tangent_F_lambda(X: Hypersurface, small: LinearSubspace, big: LinearSubspace
                     ) -> FLambdaTangent:
    """Span of the linear parts L(c_I), I nonempty, and a downward basis witness.

    Greedy: visit multisets from largest size down; keep I when all its
    one-index enlargements are already kept and L(c_I) is independent.
    """
    exp = expand_around_subspace(X.f, small, big)
    k, d = big.k, X.d
    ctx = X.ctx
    nonempty = [I for I in multisets(k, d - 1) if I]
    vecs = np.array([exp.linear_parts[I] for I in nonempty], dtype=np.int64)
    span = linalg.rank(ctx, vecs) if vecs.size else 0
    kept, basis = [], []
    kept_set = set()
    for I in sorted(nonempty, key=lambda I: (-len(I), I)):
        if len(I) < d - 1 and any(tuple(sorted(I + (j,))) not in kept_set for j in range(k)):
            continue
        cand = basis + [exp.linear_parts[I]]
        if linalg.rank(ctx, np.array(cand)) == len(cand):
            basis = cand
            kept.append(I)
            kept_set.add(I)
    success = len(kept) == span
    all_vecs = np.array([exp.linear_parts[I] for I in multisets(k, d - 1)], dtype=np.int64)
    full_rank = linalg.rank(ctx, all_vecs)
    return FLambdaTangent(span, kept if success else None, success,
                          X.n - k - comb(d + k - 1, k), X.n - k - full_rank)


def planted_hypersurface(ctx, n: int, d: int, plane: LinearSubspace, rng) -> Hypersurface:
    """A uniformly random degree-d hypersurface containing the given plane.

    Forms vanishing on the plane are exactly sum_j l_j g_j with l_j a basis of
    the linear forms killing it; (g_j) -> sum l_j g_j is linear and onto, so
    uniform g_j give a uniform form.
    """
    f = MultiPoly(ctx, n, d)
    for v in linalg.nullspace(ctx, plane.rows):
        ell = MultiPoly(ctx, n, 1, {tuple(1 if j == i else 0 for j in range(n + 1)): int(c)
                                    for i, c in enumerate(v) if c})
        f = f + ell * MultiPoly.random(ctx, n, d - 1, rng)
    if f.is_zero():
        return planted_hypersurface(ctx, n, d, plane, rng)
    return Hypersurface(f)
