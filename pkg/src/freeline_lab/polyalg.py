"""Homogeneous polynomials, binary forms, linear subspaces and the local
expansions of a hypersurface around a point or a linear subspace."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from . import linalg
from .errors import (ContextMismatch, DegreeMismatch, IndexOutOfRange,
                     InclusionViolated, PointNotOnHypersurface, PointNotOnLine,
                     ValidationError)
from .galois import FieldCtx, FieldElement, embed_codes


def monomials(nvars: int, d: int) -> list:
    """Exponent vectors of degree d in nvars variables, lexicographically descending."""
    if nvars == 0:
        return [()] if d == 0 else []
    if nvars == 1:
        return [(d,)]
    out = []
    for a in range(d, -1, -1):
        for rest in monomials(nvars - 1, d - a):
            out.append((a,) + rest)
    return out


def multisets(k: int, max_size: int) -> list:
    """All sorted multisets of {0..k-1} of size <= max_size, by size then lex."""
    out = []
    for size in range(max_size + 1):
        out.extend(itertools.combinations_with_replacement(range(k), size))
    return out


def _coerce(ctx, c) -> int:
    """Code of c in ctx.

    Integers in [0, q) are element codes.  Over a prime field codes and
    residues agree, so any integer is reduced mod p; over an extension an
    integer outside [0, q) is rejected.  Lists are coefficient vectors.
    """
    if isinstance(c, FieldElement):
        if c.ctx != ctx:
            raise ContextMismatch(f"coefficient in {c.ctx}, expected {ctx}")
        return c.code
    if isinstance(c, (list, tuple)):
        return ctx.from_coeffs(c)
    c = int(c)
    if 0 <= c < ctx.q:
        return c
    if ctx.e == 1:
        return c % ctx.p
    raise ValidationError(f"code {c} outside {ctx}")


# -- batched substitution engine -------------------------------------------
# A "batch polynomial" is a dict {exponent tuple: int64 array of shape (N,)},
# i.e. N polynomials over the same monomial support evaluated side by side.

def _bmul(ctx, a: dict, b: dict) -> dict:
    out = {}
    for ea, va in a.items():
        for eb, vb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            prod = ctx.mul(va, vb)
            out[key] = ctx.add(out[key], prod) if key in out else prod
    return out


def _compose(ctx, terms: dict, images: list, n_out: int, size: int) -> dict:
    """Substitute x_i -> images[i] into a polynomial given by ``terms``."""
    one = {(0,) * n_out: np.ones(size, dtype=np.int64)}
    cache = [[one] for _ in images]

    def power(i, a):
        powers = cache[i]
        while len(powers) <= a:
            powers.append(_bmul(ctx, powers[-1], images[i]))
        return powers[a]

    out = {}
    for exps, c in terms.items():
        prod = None
        for i, a in enumerate(exps):
            if a:
                prod = power(i, a) if prod is None else _bmul(ctx, prod, power(i, a))
        if prod is None:
            prod = one
        for key, val in prod.items():
            val = ctx.mul(val, c)
            out[key] = ctx.add(out[key], val) if key in out else val
    return out


def _linear_images(rows):
    """images of x_i under x = sum_j u_j * rows[:, j, :] for batched rows (N, m, n+1)."""
    rows = np.asarray(rows, dtype=np.int64)
    m = rows.shape[1]
    unit = [tuple(1 if j == i else 0 for j in range(m)) for i in range(m)]
    return [{unit[j]: rows[:, j, i] for j in range(m)} for i in range(rows.shape[2])]


def restrict_batch(f: "MultiPoly", rows) -> np.ndarray:
    """Restrict f to N parametrized subspaces at once.

    ``rows`` has shape (N, k+1, n+1).  Returns an array (N, M) of coefficient
    codes over ``monomials(k+1, d)``.
    """
    rows = np.asarray(rows, dtype=np.int64)
    size, m = rows.shape[0], rows.shape[1]
    out = _compose(f.ctx, f.terms, _linear_images(rows), m, size)
    mons = monomials(m, f.degree)
    res = np.zeros((size, len(mons)), dtype=np.int64)
    for idx, mon in enumerate(mons):
        if mon in out:
            res[:, idx] = out[mon]
    return res


# -- MultiPoly ---------------------------------------------------------------
class MultiPoly:
    """Homogeneous polynomial of degree ``degree`` in x_0..x_n over ``ctx``.

    ``terms`` maps exponent tuples to nonzero element codes.
    """

    __slots__ = ("ctx", "n", "degree", "terms")

    def __init__(self, ctx: FieldCtx, n: int, degree: int, terms=None):
        self.ctx = ctx
        self.n = n
        self.degree = degree
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(a) for a in exps)
            if len(exps) != n + 1:
                raise ValidationError(f"exponent vector {exps} has length != n+1 = {n + 1}")
            if sum(exps) != degree or min(exps) < 0:
                raise ValidationError(f"exponent sum != d for {exps} (d = {degree})")
            code = _coerce(ctx, c)
            if code:
                clean[exps] = int(ctx.add(clean.get(exps, 0), code))
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean

    @classmethod
    def from_dense(cls, ctx, n, degree, coeffs):
        mons = monomials(n + 1, degree)
        return cls(ctx, n, degree, {m: int(c) for m, c in zip(mons, coeffs) if c})

    @classmethod
    def random(cls, ctx, n, degree, rng):
        mons = monomials(n + 1, degree)
        return cls.from_dense(ctx, n, degree, ctx.random(rng, len(mons)))

    @classmethod
    def variable(cls, ctx, n, i):
        return cls(ctx, n, 1, {tuple(1 if j == i else 0 for j in range(n + 1)): 1})

    def dense(self) -> np.ndarray:
        return np.array([self.terms.get(m, 0) for m in monomials(self.n + 1, self.degree)],
                        dtype=np.int64)

    def coefficient(self, exps) -> FieldElement:
        return FieldElement(self.ctx, self.terms.get(tuple(exps), 0))

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other):
        if other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
        if other.n != self.n:
            raise ContextMismatch(f"ambient P^{self.n} vs P^{other.n}")

    def __add__(self, other):
        self._check(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if other.degree != self.degree:
            raise DegreeMismatch("adding forms of different degrees")
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = int(self.ctx.add(terms.get(e, 0), c))
        return MultiPoly(self.ctx, self.n, self.degree, terms)

    def __neg__(self):
        return MultiPoly(self.ctx, self.n, self.degree,
                         {e: int(self.ctx.neg(c)) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "MultiPoly":
        c = _coerce(self.ctx, c)
        return MultiPoly(self.ctx, self.n, self.degree,
                         {e: int(self.ctx.mul(v, c)) for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        terms = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                terms[key] = int(self.ctx.add(terms.get(key, 0), self.ctx.mul(ca, cb)))
        return MultiPoly(self.ctx, self.n, self.degree + other.degree, terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self.ctx == other.ctx and self.n == other.n and self.terms == other.terms
                and (self.degree == other.degree or not self.terms))

    def __hash__(self):
        return hash((self.n, self.degree, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"x{i}^{a}" if a > 1 else f"x{i}" for i, a in enumerate(e) if a)
            coef = str(self.ctx.to_coeffs(c)) if self.ctx.e > 1 else str(c)
            parts.append(f"{coef}*{mono}" if mono else coef)
        return " + ".join(parts)

    def evaluate(self, point) -> FieldElement:
        pt = np.array([[_coerce(self.ctx, c)] for c in point], dtype=np.int64).T
        return FieldElement(self.ctx, int(evaluate_batch(self, pt)[0]))

    def base_change(self, big: FieldCtx) -> "MultiPoly":
        """The same polynomial viewed over an extension field."""
        if big == self.ctx:
            return self
        return MultiPoly(big, self.n, self.degree,
                         {e: int(embed_codes(c, self.ctx, big)) for e, c in self.terms.items()})

    def substitute_linear(self, matrix) -> "MultiPoly":
        """f(A y): the pullback under x = A y for an (n+1) x (m) matrix A."""
        a = np.asarray(matrix, dtype=np.int64)
        rows = a.T[None, :, :]                     # (1, m, n+1)
        out = _compose(self.ctx, self.terms, _linear_images(rows), a.shape[1], 1)
        return MultiPoly(self.ctx, a.shape[1] - 1, self.degree,
                         {e: int(v[0]) for e, v in out.items()})

    def to_json(self):
        return {"n": self.n, "d": self.degree,
                "terms": [{"exps": list(e), "c": self.ctx.to_coeffs(c)}
                          for e, c in sorted(self.terms.items(), reverse=True)]}


def evaluate_batch(f: MultiPoly, points) -> np.ndarray:
    """Values of f at N points given as an (N, n+1) code array."""
    points = np.asarray(points, dtype=np.int64)
    ctx = f.ctx
    size = points.shape[0]
    out = np.zeros(size, dtype=np.int64)
    powers = [[np.ones(size, dtype=np.int64)] for _ in range(f.n + 1)]
    for exps, c in f.terms.items():
        val = np.full(size, c, dtype=np.int64)
        for i, a in enumerate(exps):
            if a:
                pw = powers[i]
                while len(pw) <= a:
                    pw.append(ctx.mul(pw[-1], points[:, i]))
                val = ctx.mul(val, pw[a])
        out = ctx.add(out, val)
    return out


def partial_derivative(f: MultiPoly, i: int) -> MultiPoly:
    """Formal partial derivative; coefficients are reduced mod p."""
    if not 0 <= i <= f.n:
        raise IndexOutOfRange(f"variable index {i} outside 0..{f.n}")
    terms = {}
    for exps, c in f.terms.items():
        a = exps[i]
        if a % f.ctx.p:
            new = list(exps)
            new[i] -= 1
            terms[tuple(new)] = int(f.ctx.mul(c, a % f.ctx.p))
    return MultiPoly(f.ctx, f.n, max(f.degree - 1, 0), terms)


def gradient(f: MultiPoly) -> list:
    return [partial_derivative(f, i) for i in range(f.n + 1)]


# -- binary forms -------------------------------------------------------------
class BinaryForm:
    """A form of given degree in (s, t); ``coeffs[i]`` multiplies s^(d-i) t^i."""

    __slots__ = ("ctx", "degree", "coeffs")

    def __init__(self, ctx: FieldCtx, degree: int, coeffs=None):
        self.ctx = ctx
        self.degree = int(degree)
        if coeffs is None:
            arr = np.zeros(max(self.degree + 1, 0), dtype=np.int64)
        else:
            arr = np.array([_coerce(ctx, c) for c in coeffs], dtype=np.int64)
        if self.degree < 0:
            if arr.any():
                raise ValidationError("a nonzero form cannot have negative degree")
            arr = np.zeros(0, dtype=np.int64)
        elif arr.size != self.degree + 1:
            raise ValidationError(f"binary form of degree {degree} needs {degree + 1} coefficients")
        self.coeffs = arr

    @classmethod
    def from_codes(cls, ctx, codes):
        bf = cls.__new__(cls)
        bf.ctx = ctx
        bf.coeffs = np.asarray(codes, dtype=np.int64)
        bf.degree = bf.coeffs.size - 1
        return bf

    @classmethod
    def monomial(cls, ctx, degree, i):
        """s^(degree-i) t^i."""
        c = np.zeros(degree + 1, dtype=np.int64)
        c[i] = 1
        return cls.from_codes(ctx, c)

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def __add__(self, other):
        if other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
        if other.degree != self.degree:
            raise DegreeMismatch("adding binary forms of different degrees")
        return BinaryForm.from_codes(self.ctx, self.ctx.add(self.coeffs, other.coeffs))

    def __neg__(self):
        return BinaryForm.from_codes(self.ctx, self.ctx.neg(self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, BinaryForm):
            return BinaryForm.from_codes(self.ctx, self.ctx.mul(self.coeffs, _coerce(self.ctx, other)))
        if other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
        if self.degree < 0 or other.degree < 0:
            return BinaryForm(self.ctx, self.degree + other.degree)
        out = np.zeros(self.degree + other.degree + 1, dtype=np.int64)
        for i, c in enumerate(self.coeffs):
            if c:
                seg = out[i:i + other.degree + 1]
                out[i:i + other.degree + 1] = self.ctx.add(seg, self.ctx.mul(other.coeffs, int(c)))
        return BinaryForm.from_codes(self.ctx, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BinaryForm):
            return NotImplemented
        return (self.ctx == other.ctx and self.degree == other.degree
                and np.array_equal(self.coeffs, other.coeffs))

    def __repr__(self):
        d = self.degree
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "*".join(x for x in (f"s^{d - i}" if d - i > 1 else "s" if d - i else "",
                                            f"t^{i}" if i > 1 else "t" if i else "") if x)
                coef = str(self.ctx.to_coeffs(c)) if self.ctx.e > 1 else str(int(c))
                parts.append(f"{coef}*{mono}" if mono else coef)
        return " + ".join(parts) if parts else f"0 (deg {d})"

    def evaluate(self, s, t) -> FieldElement:
        ctx = self.ctx
        s, t = _coerce(ctx, s), _coerce(ctx, t)
        acc = 0
        for i, c in enumerate(self.coeffs):
            term = ctx.mul(ctx.mul(int(c), ctx.pow(s, self.degree - i)), ctx.pow(t, i))
            acc = ctx.add(acc, term)
        return FieldElement(ctx, int(acc))

    def substitute(self, matrix) -> "BinaryForm":
        """F(a s + b t, c s + d t) for matrix [[a, b], [c, d]]."""
        (a, b), (c, d) = [[_coerce(self.ctx, x) for x in row] for row in matrix]
        ls = BinaryForm.from_codes(self.ctx, [a, b])
        lt = BinaryForm.from_codes(self.ctx, [c, d])
        return compose_binary_forms(self, [ls, lt])

    def to_json(self):
        return {"degree": self.degree, "coeffs": [self.ctx.to_coeffs(c) for c in self.coeffs]}


def compose_binary_forms(form: BinaryForm, images: list) -> BinaryForm:
    """F(G, H) for a binary form F and two binary forms G, H of equal degree."""
    ctx = form.ctx
    e = images[0].degree
    out = BinaryForm(ctx, form.degree * e)
    for i, c in enumerate(form.coeffs):
        if c:
            term = BinaryForm.from_codes(ctx, [int(c)])
            for _ in range(form.degree - i):
                term = term * images[0]
            for _ in range(i):
                term = term * images[1]
            out = out + term
    return out


def compose_with_curve(f: MultiPoly, components: list) -> BinaryForm:
    """Pull back f along a parametrized curve x_i = components[i](s, t)."""
    e = components[0].degree
    images = []
    for comp in components:
        if comp.ctx != f.ctx:
            raise ContextMismatch(f"{comp.ctx} vs {f.ctx}")
        images.append({(e - i, i): np.array([c], dtype=np.int64)
                       for i, c in enumerate(comp.coeffs) if c})
    out = _compose(f.ctx, f.terms, images, 2, 1)
    deg = f.degree * e
    return BinaryForm.from_codes(f.ctx, [int(out[(deg - i, i)][0]) if (deg - i, i) in out else 0
                                         for i in range(deg + 1)])


# univariate helpers (coefficient lists, low degree first) used for gcds
def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _upoly_mod(ctx, a, b):
    a = _trim(a)
    b = _trim(b)
    inv_lead = ctx.inv(b[-1])
    while len(a) >= len(b):
        factor = int(ctx.mul(a[-1], inv_lead))
        shift = len(a) - len(b)
        for j, c in enumerate(b):
            a[shift + j] = int(ctx.sub(a[shift + j], ctx.mul(factor, c)))
        a = _trim(a)
    return a


def _upoly_gcd(ctx, a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _upoly_mod(ctx, a, b)
    if a:
        inv_lead = ctx.inv(a[-1])
        a = [int(ctx.mul(c, inv_lead)) for c in a]
    return a


def binary_gcd(forms) -> BinaryForm:
    """Monic-normalized gcd of nonzero binary forms (None if all are zero)."""
    forms = [f for f in forms if not f.is_zero()]
    if not forms:
        return None
    ctx = forms[0].ctx
    # power of s dividing every form: trailing zero coefficients
    s_mult = min(f.degree - len(_trim(f.coeffs)) + 1 for f in forms)
    g = None
    for f in forms:
        c = [int(x) for x in f.coeffs]
        g = _upoly_gcd(ctx, c, []) if g is None else _upoly_gcd(ctx, g, c)
    # homogenize g(t) = sum g_i t^i as sum g_i s^(m-i) t^i
    return BinaryForm.from_codes(ctx, g) * BinaryForm.monomial(ctx, s_mult, 0)


# -- linear subspaces -----------------------------------------------------------
class LinearSubspace:
    """A k-plane in P^n stored as its reduced row echelon basis."""

    __slots__ = ("ctx", "n", "rows", "pivots")

    def __init__(self, ctx: FieldCtx, rows, _trusted=False):
        rows = np.array([[_coerce(ctx, c) for c in r] for r in rows], dtype=np.int64) \
            if not isinstance(rows, np.ndarray) else rows.astype(np.int64)
        if _trusted:
            red, piv = rows, _pivots_of(rows)
        else:
            red, piv = linalg.rref(ctx, rows)
            if len(piv) != rows.shape[0]:
                raise ValidationError("rows of a linear subspace must be independent")
        self.ctx = ctx
        self.n = rows.shape[1] - 1
        self.rows = red
        self.pivots = tuple(piv)

    @property
    def k(self) -> int:
        return self.rows.shape[0] - 1

    @property
    def nonpivots(self) -> tuple:
        return tuple(c for c in range(self.n + 1) if c not in self.pivots)

    def contains_point(self, point) -> bool:
        pt = np.array([_coerce(self.ctx, c) for c in point], dtype=np.int64)
        return linalg.rank(self.ctx, np.vstack([self.rows, pt])) == self.k + 1

    def contains_subspace(self, other: "LinearSubspace") -> bool:
        return linalg.rank(self.ctx, np.vstack([self.rows, other.rows])) == self.k + 1

    def point(self, params) -> np.ndarray:
        """The point sum_j params[j] * rows[j], normalized (first nonzero = 1)."""
        pt = np.zeros(self.n + 1, dtype=np.int64)
        for c, row in zip(params, self.rows):
            pt = self.ctx.add(pt, self.ctx.mul(row, _coerce(self.ctx, c)))
        return normalize_point(self.ctx, pt)

    def base_change(self, big: FieldCtx) -> "LinearSubspace":
        if big == self.ctx:
            return self
        return LinearSubspace(big, embed_codes(self.rows, self.ctx, big), _trusted=True)

    def complement_basis(self) -> np.ndarray:
        """Standard basis vectors at the non-pivot columns."""
        eye = np.eye(self.n + 1, dtype=np.int64)
        return eye[list(self.nonpivots)]

    def __eq__(self, other):
        return (isinstance(other, LinearSubspace) and self.ctx == other.ctx
                and np.array_equal(self.rows, other.rows))

    def __hash__(self):
        return hash(self.rows.tobytes())

    def __repr__(self):
        return f"LinearSubspace(k={self.k}, n={self.n}, rows={self.rows.tolist()})"

    def to_json(self):
        return [[self.ctx.to_coeffs(c) for c in row] for row in self.rows]


def _pivots_of(rows):
    return [int(np.nonzero(r)[0][0]) for r in rows]


def normalize_point(ctx, point) -> np.ndarray:
    pt = np.asarray(point, dtype=np.int64)
    nz = np.nonzero(pt)[0]
    if nz.size == 0:
        raise ValidationError("the zero vector is not a projective point")
    lead = int(pt[nz[0]])
    return pt if lead == 1 else ctx.mul(pt, ctx.inv(lead))


def coordinate_subspace(ctx, n, indices) -> LinearSubspace:
    """Span of the coordinate points e_i, i in indices."""
    eye = np.eye(n + 1, dtype=np.int64)
    return LinearSubspace(ctx, eye[sorted(indices)], _trusted=True)


def restrict_to_subspace(f: MultiPoly, plane: LinearSubspace):
    """Pullback of f along the parametrization u -> sum u_j rows_j.

    Returns a BinaryForm for lines and a MultiPoly in k+1 variables otherwise.
    """
    if f.ctx != plane.ctx:
        raise ContextMismatch(f"{f.ctx} vs {plane.ctx}")
    if f.n != plane.n:
        raise ContextMismatch(f"polynomial on P^{f.n}, subspace in P^{plane.n}")
    coeffs = restrict_batch(f, plane.rows[None, :, :])[0]
    if plane.k == 1:
        return BinaryForm.from_codes(f.ctx, coeffs)
    return MultiPoly.from_dense(f.ctx, plane.k, f.degree, coeffs)


# -- expansions -------------------------------------------------------------------
def linear_part(g: MultiPoly, point, variables=None) -> np.ndarray:
    """Codes of sum_i (dg/dx_i)(a) x_i, restricted to the listed variables."""
    variables = range(g.n + 1) if variables is None else variables
    return np.array([partial_derivative(g, i).evaluate(point).code if g.degree > 0 else 0
                     for i in variables], dtype=np.int64)


@dataclass
class PointExpansion:
    pieces: list            # f_1..f_d as MultiPoly in y_0..y_n (only y_1..y_n occur)
    linear_parts: np.ndarray  # (d, n) codes: L_i in the coordinates y_1..y_n
    change: np.ndarray      # A with x = A y
    transformed: MultiPoly  # f(A y)


def _completion(ctx, first_rows, plane: LinearSubspace) -> np.ndarray:
    """Columns: first_rows, then the complement of ``plane``; an invertible matrix."""
    cols = np.vstack([first_rows, plane.complement_basis()])
    return cols.T.copy()


def expand_around_point(f: MultiPoly, q, line: LinearSubspace) -> PointExpansion:
    """Move q to (1:0:...:0) and the line to V(y_2..y_n), then split f by powers of y_0."""
    ctx = f.ctx
    qv = normalize_point(ctx, np.array([_coerce(ctx, c) for c in q], dtype=np.int64))
    if f.evaluate(qv).code:
        raise PointNotOnHypersurface("q is not on V(f)")
    if not line.contains_point(qv):
        raise PointNotOnLine("q is not on the line")
    second = next(r for r in line.rows if linalg.rank(ctx, np.vstack([qv, r])) == 2)
    a = _completion(ctx, np.vstack([qv, second]), line)
    g = f.substitute_linear(a)
    d = f.degree
    pieces = []
    for i in range(1, d + 1):
        pieces.append(MultiPoly(ctx, f.n, i, {tuple([0] + list(e[1:])): c
                                              for e, c in g.terms.items() if e[0] == d - i}))
    if any(e[0] == d for e in g.terms):
        raise PointNotOnHypersurface("q is not on V(f)")
    # L_i = sum_j (df_i/dy_j)(0:1:0..0) y_j; the y_1 slot is i times the y_1^i coefficient
    lin = np.zeros((d, f.n), dtype=np.int64)
    for i in range(1, d + 1):
        pure = [0] * (f.n + 1)
        pure[0], pure[1] = d - i, i
        lin[i - 1, 0] = int(ctx.mul(g.terms.get(tuple(pure), 0), i % ctx.p))
        for j in range(2, f.n + 1):
            exps = [0] * (f.n + 1)
            exps[0] = d - i
            exps[1] = i - 1
            exps[j] += 1
            lin[i - 1, j - 1] = g.terms.get(tuple(exps), 0)
    return PointExpansion(pieces, lin, a, g)


@dataclass
class SubspaceExpansion:
    coefficients: dict      # multiset I -> c_I as MultiPoly in y_k..y_n (embedded in n+1 vars)
    linear_parts: dict      # multiset I -> codes of L(c_I) in the coordinates y_{k+1}..y_n
    change: np.ndarray
    transformed: MultiPoly


def expand_around_subspace(f: MultiPoly, small: LinearSubspace, big: LinearSubspace
                           ) -> SubspaceExpansion:
    """Expansion f = sum_{I in T} c_I y^I around a (k-1)-plane inside a k-plane.

    Coordinates are chosen so that small = V(y_k..y_n) and big = V(y_{k+1}..y_n):
    the basis starts with the rows of ``small``, then a row of ``big`` outside
    it, then the complement of ``big``.
    """
    ctx = f.ctx
    k = big.k
    if small.k != k - 1 or not big.contains_subspace(small):
        raise InclusionViolated("expected a (k-1)-plane inside the k-plane")
    if not restrict_to_subspace(f, big).is_zero():
        raise InclusionViolated("the k-plane is not contained in V(f)")
    extra = next(r for r in big.rows
                 if linalg.rank(ctx, np.vstack([small.rows, r])) == k + 1)
    a = _completion(ctx, np.vstack([small.rows, extra]), big)
    g = f.substitute_linear(a)
    d = f.degree
    coeffs, lin = {}, {}
    for I in multisets(k, d - 1):
        target = [0] * k
        for idx in I:
            target[idx] += 1
        terms = {tuple([0] * k + list(e[k:])): c for e, c in g.terms.items()
                 if list(e[:k]) == target}
        coeffs[I] = MultiPoly(ctx, f.n, d - len(I), terms)
        row = np.zeros(f.n - k, dtype=np.int64)
        for j in range(k + 1, f.n + 1):
            exps = target + [0] * (f.n + 1 - k)
            exps[k] = d - 1 - len(I)
            exps[j] += 1
            row[j - k - 1] = g.terms.get(tuple(exps), 0)
        lin[I] = row
    if any(sum(e[:k]) == d for e in g.terms):
        raise InclusionViolated("the (k-1)-plane is not contained in V(f)")
    return SubspaceExpansion(coeffs, lin, a, g)


def multiset_count(k: int, d: int) -> int:
    """|T|: multisets of {0..k-1} of size at most d-1."""
    return sum(comb(j + k - 1, j) for j in range(d))
