"""Kernel bundles of base-point-free linear systems restricted to rational curves.

For forms g_0..g_k of degree r on P^k without common zeros, M is the kernel of
O(1)^{k+1} -> O(r+1).  Along a degree-e curve C this becomes the twisted map
O(e)^{k+1} -> O(e(r+1)) with entries g_i(C(s, t)).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import linalg, macaulay
from .errors import (BudgetExhausted, DegreeMismatch, NotAMorphism,
                     NotBasepointFree, ValidationError)
from .galois import FieldCtx, make_field
from .linegeom import Hypersurface, contains
from .p1split import SplittingType, TwistedMap, splitting_type
from .polyalg import (BinaryForm, LinearSubspace, MultiPoly, binary_gcd,
                      compose_with_curve, restrict_batch)
from .rng import make_rng

CASE_LABELS = {(-2, 1, 1): "case1", (0, 0, 0): "case2", (-1, 0, 1): "case3"}


class LinearSystem:
    """k+1 forms of common degree r on P^k."""

    def __init__(self, gens):
        gens = list(gens)
        if not gens:
            raise ValidationError("empty linear system")
        k = gens[0].n
        if len(gens) != k + 1:
            raise ValidationError(f"need k+1 = {k + 1} generators on P^{k}, got {len(gens)}")
        r = gens[0].degree
        for g in gens:
            if g.n != k or g.ctx != gens[0].ctx:
                raise ValidationError("generators must share ambient space and field")
            if g.degree != r and not g.is_zero():
                raise DegreeMismatch("generators must all have the same degree")
        if all(g.is_zero() for g in gens):
            raise ValidationError("all generators vanish")
        self.gens = gens
        self.k = k
        self.r = r
        self._bpf = None

    @property
    def ctx(self) -> FieldCtx:
        return self.gens[0].ctx

    def base_change(self, big: FieldCtx) -> "LinearSystem":
        if big == self.ctx:
            return self
        out = LinearSystem([g.base_change(big) for g in self.gens])
        out._bpf = self._bpf
        return out

    def to_json(self):
        return {"field": self.ctx.to_json(), "k": self.k, "r": self.r,
                "gens": [g.to_json() for g in self.gens]}


def powers_system(ctx, k: int, r: int) -> LinearSystem:
    """(x_0^r, ..., x_k^r)."""
    return LinearSystem([MultiPoly(ctx, k, r, {tuple(r if j == i else 0 for j in range(k + 1)): 1})
                         for i in range(k + 1)])


class RationalCurve:
    """A morphism P^1 -> P^k given by k+1 binary forms of degree e without common factor."""

    def __init__(self, components, check=True):
        components = list(components)
        e = components[0].degree
        if any(c.degree != e for c in components):
            raise NotAMorphism("components must share one degree")
        if check:
            g = binary_gcd(components)
            if g is None or g.degree > 0:
                raise NotAMorphism("components have a common zero on P^1")
        self.components = components
        self.e = e

    @property
    def k(self):
        return len(self.components) - 1

    @property
    def ctx(self):
        return self.components[0].ctx

    def span_rank(self) -> int:
        return linalg.rank(self.ctx, np.stack([c.coeffs for c in self.components]))

    def to_json(self):
        return {"field": self.ctx.to_json(), "e": self.e,
                "components": [[self.ctx.to_coeffs(c) for c in f.coeffs] for f in self.components]}


def twisted_cubic(ctx, k: int = 3) -> RationalCurve:
    """[s^3 : t s^2 : t^2 s : t^3 : 0 : ... : 0]."""
    comps = [BinaryForm.monomial(ctx, 3, i) for i in range(4)]
    comps += [BinaryForm(ctx, 3) for _ in range(k - 3)]
    return RationalCurve(comps)


def line_curve(plane: LinearSubspace) -> RationalCurve:
    """The line through the two echelon rows, as a degree-1 curve."""
    comps = [BinaryForm.from_codes(plane.ctx, plane.rows[:, i]) for i in range(plane.n + 1)]
    return RationalCurve(comps, check=False)


def is_basepoint_free(V: LinearSystem) -> bool:
    """Certified emptiness of V(g_0..g_k) by a Macaulay rank in degree (k+1)(r-1)+1."""
    if V._bpf is None:
        V._bpf = macaulay.has_no_common_zero(V.gens)
    return V._bpf


def _align(V: LinearSystem, C: RationalCurve) -> LinearSystem:
    if C.ctx != V.ctx:
        V = V.base_change(C.ctx)
    if C.k != V.k:
        raise ValidationError(f"curve in P^{C.k}, system on P^{V.k}")
    return V


def restrict_kernel(V: LinearSystem, C: RationalCurve) -> TwistedMap:
    if not is_basepoint_free(V):
        raise NotBasepointFree("the linear system has base points")
    V = _align(V, C)
    entries = [compose_with_curve(g, C.components) if not g.is_zero()
               else BinaryForm(C.ctx, C.e * V.r) for g in V.gens]
    return TwistedMap.row((C.e,) * (V.k + 1), C.e * (V.r + 1), entries)


def restricted_splitting(V: LinearSystem, C: RationalCurve) -> SplittingType:
    split = splitting_type(restrict_kernel(V, C))
    if split.degree != C.e * (V.k - V.r):
        raise AssertionError("kernel degree differs from e(k - r)")
    return split


def globally_generated(V: LinearSystem, C: RationalCurve) -> bool:
    split = restricted_splitting(V, C)
    return split.min >= 0


def random_line(ctx, k: int, rng) -> LinearSubspace:
    while True:
        rows = ctx.random(rng, (2, k + 1))
        if linalg.rank(ctx, rows) == 2:
            return LinearSubspace(ctx, rows)


def random_curve(ctx, k: int, e: int, rng, *, full_span: bool = False) -> RationalCurve:
    """Random morphism of degree e; with full_span, its image spans a P^e."""
    while True:
        coeffs = ctx.random(rng, (k + 1, e + 1))
        if full_span and linalg.rank(ctx, coeffs) < e + 1:
            continue
        comps = [BinaryForm.from_codes(ctx, row) for row in coeffs]
        g = binary_gcd(comps)
        if g is not None and g.degree == 0:
            return RationalCurve(comps, check=False)


def case_label(split: SplittingType) -> str:
    return CASE_LABELS.get(split.parts, "other")


@dataclass
class LineCaseHistogram:
    counts: dict
    samples: int
    ext: int
    field: str
    majority: str


def classify_line_case(V: LinearSystem, samples: int, seed: int, ext: int = 3
                       ) -> LineCaseHistogram:
    """Histogram of M|_l over seeded random lines defined over F_{q^ext}.

    For k = r = 3 lines are binned into the three possible cases; otherwise
    the raw splitting types are counted.
    """
    if not is_basepoint_free(V):
        raise NotBasepointFree("the linear system has base points")
    big = make_field(V.ctx.p, V.ctx.e * ext)
    Vb = V.base_change(big)
    rng = make_rng(seed, 1, ext)
    counts = Counter()
    for _ in range(samples):
        split = restricted_splitting(Vb, line_curve(random_line(big, V.k, rng)))
        key = case_label(split) if (V.k, V.r) == (3, 3) else repr(split)
        counts[key] += 1
    majority = max(sorted(counts), key=lambda c: counts[c]) if counts else None
    return LineCaseHistogram(dict(sorted(counts.items())), samples, ext, repr(big), majority)


@dataclass
class FreeCurveWitness:
    curve: RationalCurve
    splitting: SplittingType
    stage: str
    index: int
    ext: int


SEARCH_STAGES = ("line", "conic", "twisted_cubic", "cubic")


def search_free_curve(V: LinearSystem, budget: int, seed: int, ext: int = 3):
    """First curve C with M|_C globally generated, or None when the budget runs out.

    Stages, in order: random lines, random smooth conics, the standard twisted
    cubic, random cubics; each random stage draws up to ``budget`` samples over
    F_{q^ext}.  A None result is not a proof of nonexistence.
    """
    if not is_basepoint_free(V):
        raise NotBasepointFree("the linear system has base points")
    big = make_field(V.ctx.p, V.ctx.e * ext)
    Vb = V.base_change(big)
    for stage_no, stage in enumerate(SEARCH_STAGES):
        rng = make_rng(seed, 2, stage_no, ext)
        tries = 1 if stage == "twisted_cubic" else budget
        if stage == "twisted_cubic" and V.k < 3:
            continue
        for idx in range(tries):
            if stage == "line":
                C = line_curve(random_line(big, V.k, rng))
            elif stage == "conic":
                C = random_curve(big, V.k, 2, rng, full_span=True)
            elif stage == "twisted_cubic":
                C = twisted_cubic(big, V.k)
            else:
                C = random_curve(big, V.k, 3, rng)
            split = restricted_splitting(Vb, C)
            if split.min >= 0:
                return FreeCurveWitness(C, split, stage, idx, ext)
    return None


def restricted_gradient(X: Hypersurface, plane: LinearSubspace) -> list:
    """The n+1 partials of f restricted to the plane, as forms on P^k."""
    k = plane.k
    out = []
    for g in X.grad:
        coeffs = restrict_batch(g, plane.rows[None, :, :])[0] if not g.is_zero() else None
        out.append(MultiPoly.from_dense(X.ctx, k, X.d - 1, coeffs) if coeffs is not None
                   else MultiPoly(X.ctx, k, X.d - 1))
    return out


def system_from_plane(X: Hypersurface, plane: LinearSubspace, seed: int, budget: int = 50
                      ) -> LinearSystem:
    """k+1 random combinations of the partials of f, restricted to the plane and bpf."""
    if plane.k >= X.n:
        raise ValidationError("a plane inside X must have dimension below n")
    if not contains(X, plane):
        raise ValidationError("the plane is not contained in X")
    parts = restricted_gradient(X, plane)
    ctx = X.ctx
    rng = make_rng(seed, 3)
    for _ in range(budget):
        weights = ctx.random(rng, (plane.k + 1, X.n + 1))
        gens = []
        for row in weights:
            g = MultiPoly(ctx, plane.k, X.d - 1)
            for w, part in zip(row, parts):
                if w and not part.is_zero():
                    g = g + part.scale(int(w))
            gens.append(g)
        if all(g.is_zero() for g in gens):
            continue
        V = LinearSystem(gens)
        if is_basepoint_free(V):
            return V
    raise BudgetExhausted(f"no base-point-free combination in {budget} samples")
