"""Fermat hypersurfaces: an explicit free rational normal curve, and the
absence of free lines when the degree is p + 1.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .census import DEFAULT_BUDGET, run_census
from .errors import (CharacteristicDividesDegree, DimensionTooSmall,
                     NoRootOfMinusOne)
from .galois import FieldCtx, FieldElement, make_field, root_of_minus_one
from .kersys import RationalCurve
from .linegeom import Hypersurface, normal_bundle_lines
from .p1split import TwistedMap, splitting_type
from .polyalg import BinaryForm, MultiPoly, compose_with_curve


@dataclass
class FermatSpec:
    n: int
    d: int
    ctx: FieldCtx
    mu: FieldElement | None = None

    @property
    def smooth(self) -> bool:
        return self.d % self.ctx.p != 0

    def hypersurface(self) -> Hypersurface:
        return fermat(self.n, self.d, self.ctx)


def fermat(n: int, d: int, ctx: FieldCtx) -> Hypersurface:
    """V(x_0^d + ... + x_n^d).  Smooth exactly when p does not divide d."""
    terms = {tuple(d if j == i else 0 for j in range(n + 1)): 1 for i in range(n + 1)}
    return Hypersurface(MultiPoly(ctx, n, d, terms))


def _find_mu(d: int, ctx: FieldCtx, auto_extend: bool):
    mu = root_of_minus_one(ctx, d)
    if mu is not None:
        return mu
    if not auto_extend:
        raise NoRootOfMinusOne(f"no {d}-th root of -1 in {ctx}")
    # mu has order dividing 2d, so some extension of degree <= 2d contains it
    for ext in range(2, 2 * d + 1):
        if ctx.q ** ext > 2 ** 24:
            break
        mu = root_of_minus_one(make_field(ctx.p, ctx.e * ext), d)
        if mu is not None:
            return mu
    raise NoRootOfMinusOne(f"no {d}-th root of -1 in a small extension of {ctx}")


def standard_free_curve(d: int, k: int, ctx: FieldCtx, auto_extend: bool = True
                        ) -> RationalCurve:
    """(mu t^d : t^d : mu t^(d-1) s : t^(d-1) s : ... : mu s^d : s^d : 0 : ... : 0).

    The result lives over the smallest extension of ctx containing mu.
    """
    if d % ctx.p == 0:
        raise CharacteristicDividesDegree(f"p = {ctx.p} divides d = {d}")
    if k < 2 * d + 1:
        raise DimensionTooSmall(f"need k >= 2d+1 = {2 * d + 1}, got {k}")
    mu = _find_mu(d, ctx, auto_extend)
    big = mu.ctx
    comps = []
    for j in range(d + 1):
        mono = BinaryForm.monomial(big, d, d - j)      # s^j t^(d-j)
        comps.append(mono * mu)
        comps.append(mono)
    comps += [BinaryForm(big, d) for _ in range(k + 1 - len(comps))]
    return RationalCurve(comps)


@dataclass
class FreeCurveAudit:
    d: int
    k: int
    field: str
    contained: bool
    tangent_map: TwistedMap
    splitting: object

    @property
    def free(self) -> bool:
        return self.contained and self.splitting.min >= 0

    def to_json(self):
        return {"d": self.d, "k": self.k, "field": self.field,
                "contained": self.contained, "splitting": list(self.splitting.parts),
                "verdict": "free" if self.free else "not free"}


def audit_free_curve(d: int, k: int, ctx: FieldCtx) -> FreeCurveAudit:
    """Containment and the splitting of M|_C for the standard curve C.

    M is the kernel of O(1)^(k+1) -> O(d) given by the partials of the Fermat;
    along C this is O(d)^(k+1) -> O(d^2).  C is free iff no part is negative.
    """
    curve = standard_free_curve(d, k, ctx)
    X = fermat(k, d, curve.ctx)
    contained = compose_with_curve(X.f, curve.components).is_zero()
    entries = [compose_with_curve(g, curve.components) if not g.is_zero()
               else BinaryForm(curve.ctx, d * (d - 1)) for g in X.grad]
    tmap = TwistedMap.row((d,) * (k + 1), d * d, entries)
    split = splitting_type(tmap)
    return FreeCurveAudit(d, k, repr(curve.ctx), contained, tmap, split)


@dataclass
class NoFreeLinesAudit:
    p: int
    n: int
    field: str
    candidates: int
    contained: int
    free: int
    splittings: dict
    h0_values: dict
    bound: int

    @property
    def h0_at_least_bound(self) -> bool:
        return all(h >= self.bound for h in self.h0_values)

    @property
    def passed(self) -> bool:
        return self.contained > 0 and self.free == 0 and self.h0_at_least_bound

    def to_json(self):
        return {"p": self.p, "n": self.n, "field": self.field,
                "scope": f"lines defined over {self.field} only",
                "candidates": self.candidates, "contained": self.contained,
                "free": self.free,
                "splittings": {str(k): v for k, v in sorted(self.splittings.items())},
                "h0_histogram": {str(k): v for k, v in sorted(self.h0_values.items())},
                "h0_bound": self.bound, "h0_at_least_bound": self.h0_at_least_bound,
                "passed": self.passed}


def audit_no_free_lines(p: int, n: int, *, budget: int = DEFAULT_BUDGET,
                        jobs: int | None = None) -> NoFreeLinesAudit:
    """All lines of P^n(F_{p^2}) on the degree-(p+1) Fermat, with their normal bundles."""
    ctx = make_field(p, 2)
    X = fermat(n, p + 1, ctx)
    census = run_census(X, 1, collect=True, budget=budget, jobs=jobs)
    reports = normal_bundle_lines(X, census.planes)
    splits = Counter(tuple(r.splitting.parts) for r in reports)
    h0s = Counter(r.h0 for r in reports)
    free = sum(1 for r in reports if r.free)
    return NoFreeLinesAudit(p, n, repr(ctx), census.total_planes, len(reports), free,
                            dict(splits), dict(h0s), 2 * n - 6)
