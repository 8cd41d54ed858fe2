"""Exact arithmetic in finite fields F_{p^e}.

Elements are encoded as integers ``c_0 + c_1 p + ... + c_{e-1} p^{e-1}``
where ``(c_0, ..., c_{e-1})`` are the coordinates in the power basis of the
modulus.  Codes below ``p`` are therefore exactly the prime-field elements,
and the serialized coefficient vector of an element is its base-p digits.

All heavy algorithms work on numpy arrays of codes through the vectorized
methods of :class:`FieldCtx`; :class:`FieldElement` is the user-facing
scalar wrapper.
"""
from __future__ import annotations

import functools

import numpy as np
from sympy import ZZ, factorint, isprime
from sympy.polys.galoistools import gf_irreducible_p

from .errors import (BadExtension, CompositeCharacteristic, ContextMismatch,
                     DivisionByZero)

MAX_ORDER = 2**31
_TABLE_ORDER = 1024      # full q x q add/mul tables up to this size
_LOG_ORDER = 2**20       # log/antilog tables up to this size


def _poly_mulmod(a, b, modulus, p):
    """Product of two coefficient lists (low degree first) modulo a monic modulus."""
    e = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for i in range(len(prod) - 1, e - 1, -1):
        c = prod[i]
        if c:
            for j in range(e + 1):
                prod[i - e + j] = (prod[i - e + j] - c * modulus[j]) % p
    return (prod + [0] * e)[:e]


def _smallest_irreducible(p, e):
    if e == 1:
        return (0, 1)
    # enumerate (c_0, ..., c_{e-1}) lexicographically, c_0 most significant
    for idx in range(p**e):
        low = []
        rest = idx
        for _ in range(e):
            low.append(rest % p)
            rest //= p
        low.reverse()
        coeffs = low + [1]
        if coeffs[0] == 0:
            continue
        if gf_irreducible_p([ZZ(c) for c in reversed(coeffs)], p, ZZ):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FieldCtx:
    """The field F_{p^e} with a fixed modulus.  Build it with :func:`make_field`."""

    def __init__(self, p: int, e: int, modulus: tuple):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = modulus
        self._powers = np.array([p**i for i in range(e)], dtype=np.int64)
        self._log = None
        self._exp = None
        self._add_t = None
        self._mul_t = None
        self._sub_t = None
        if e > 1 and self.q <= _LOG_ORDER:
            self._build_log_tables()
        if e > 1 and self.q <= _TABLE_ORDER:
            codes = np.arange(self.q, dtype=np.int64)
            a, b = np.meshgrid(codes, codes, indexing="ij")
            self._add_t = self._add_digits(a, b)
            self._sub_t = self._add_digits(a, self._neg_digits(b))
            self._mul_t = self._mul_log(a, b)

    # -- construction helpers -------------------------------------------
    def _build_log_tables(self):
        q = self.q
        order_factors = list(factorint(q - 1))
        for g in range(2, q):
            gc = self.to_coeffs(g)
            if all(self._pow_scalar(gc, (q - 1) // r) != [1] + [0] * (self.e - 1)
                   for r in order_factors):
                break
        else:  # pragma: no cover
            raise AssertionError("no primitive element")
        gc = self.to_coeffs(g)
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        cur = [1] + [0] * (self.e - 1)
        for i in range(q - 1):
            exp[i] = self.from_coeffs(cur)
            cur = _poly_mulmod(cur, gc, self.modulus, self.p)
        exp[q - 1:] = exp[:q - 1]
        log = np.zeros(q, dtype=np.int64)
        log[exp[:q - 1]] = np.arange(q - 1)
        self._exp, self._log = exp, log
        self.generator = g

    def _pow_scalar(self, coeffs, k):
        result = [1] + [0] * (self.e - 1)
        base = list(coeffs)
        while k:
            if k & 1:
                result = _poly_mulmod(result, base, self.modulus, self.p)
            base = _poly_mulmod(base, base, self.modulus, self.p)
            k >>= 1
        return result

    # -- encoding --------------------------------------------------------
    def to_coeffs(self, code: int) -> list:
        code = int(code)
        out = []
        for _ in range(self.e):
            out.append(code % self.p)
            code //= self.p
        return out

    def from_coeffs(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.e:
            if any(int(c) % self.p for c in coeffs[self.e:]):
                raise ValueError(f"coefficient vector longer than extension degree {self.e}")
            coeffs = coeffs[:self.e]
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs))

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> F_q."""
        return int(n) % self.p

    # -- vectorized arithmetic on codes -----------------------------------
    def _digits(self, a):
        return [(a // int(w)) % self.p for w in self._powers]

    def _add_digits(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self._powers:
            w = int(w)
            out += ((a // w + b // w) % self.p) * w
        return out

    def _neg_digits(self, a):
        if self.p == 2:
            return a
        out = np.zeros(np.shape(a), dtype=np.int64)
        for w in self._powers:
            w = int(w)
            out += ((-(a // w)) % self.p) * w
        return out

    def _mul_log(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        res = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, res)

    def add(self, a, b):
        if self.e == 1:
            return (np.asarray(a, dtype=np.int64) + b) % self.p
        if self._add_t is not None:
            return self._add_t[a, b]
        if self._log is not None:
            return self._add_digits(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        return _vec(self._add_scalar)(a, b)

    def sub(self, a, b):
        if self.e == 1:
            return (np.asarray(a, dtype=np.int64) - b) % self.p
        if self._sub_t is not None:
            return self._sub_t[a, b]
        return self.add(a, self.neg(b))

    def neg(self, a):
        if self.e == 1:
            return (-np.asarray(a, dtype=np.int64)) % self.p
        if self._log is not None:
            return self._neg_digits(np.asarray(a, dtype=np.int64))
        return _vec(self._neg_scalar)(a)

    def mul(self, a, b):
        if self.e == 1:
            return (np.asarray(a, dtype=np.int64) * b) % self.p
        if self._mul_t is not None:
            return self._mul_t[a, b]
        if self._log is not None:
            return self._mul_log(a, b)
        return _vec(self._mul_scalar)(a, b)

    def inv(self, a):
        """Inverse of a scalar code."""
        a = int(a)
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        if self._log is not None:
            return int(self._exp[(-self._log[a]) % (self.q - 1)])
        return self.pow(a, self.q - 2)

    def pow(self, a, k: int):
        """a**k for a scalar code a and integer k >= 0."""
        a = int(a)
        if k < 0:
            return self.pow(self.inv(a), -k)
        if self.e == 1:
            return pow(a, k, self.p)
        if a == 0:
            return 1 if k == 0 else 0
        if self._log is not None:
            return int(self._exp[(int(self._log[a]) * k) % (self.q - 1)])
        return self.from_coeffs(self._pow_scalar(self.to_coeffs(a), k))

    def pow_array(self, a, k: int):
        a = np.asarray(a, dtype=np.int64)
        result = np.ones(a.shape, dtype=np.int64)
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def _add_scalar(self, a, b):
        ca, cb = self.to_coeffs(a), self.to_coeffs(b)
        return self.from_coeffs([(x + y) % self.p for x, y in zip(ca, cb)])

    def _neg_scalar(self, a):
        return self.from_coeffs([(-x) % self.p for x in self.to_coeffs(a)])

    def _mul_scalar(self, a, b):
        return self.from_coeffs(_poly_mulmod(self.to_coeffs(a), self.to_coeffs(b),
                                             self.modulus, self.p))

    def random(self, rng, size=None, nonzero=False):
        low = 1 if nonzero else 0
        return rng.integers(low, self.q, size=size, dtype=np.int64)

    # -- user-facing helpers ----------------------------------------------
    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.ctx != self:
                raise ContextMismatch("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self.from_coeffs(value))
        return FieldElement(self, self.from_int(value))

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)

    @property
    def x(self):
        """The class of the indeterminate (a generator of F_q over F_p when e > 1)."""
        return FieldElement(self, self.p % self.q if self.e > 1 else 0)

    def elements(self):
        return [FieldElement(self, c) for c in range(self.q)]

    def to_json(self):
        return {"p": self.p, "e": self.e}

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self):
        return hash((self.p, self.e))

    def __repr__(self):
        if self.e == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.e})"

    def __reduce__(self):
        return (make_field, (self.p, self.e))


def _vec(fn):
    return np.frompyfunc(fn, 2 if fn.__code__.co_argcount == 3 else 1, 1)


@functools.lru_cache(maxsize=None)
def make_field(p: int, e: int = 1) -> FieldCtx:
    """Return the field with p**e elements.

    The modulus is the lexicographically smallest monic irreducible of degree
    e, comparing coefficient vectors from the constant term upward, so equal
    (p, e) always give identical encodings.
    """
    if not isinstance(p, (int, np.integer)) or p < 2 or not isprime(int(p)):
        raise CompositeCharacteristic(f"characteristic {p} is not prime")
    if not isinstance(e, (int, np.integer)) or e < 1:
        raise BadExtension(f"extension degree must be >= 1, got {e}")
    p, e = int(p), int(e)
    if p**e > MAX_ORDER:
        raise BadExtension(f"field of order {p}^{e} exceeds the 2^31 cap")
    return FieldCtx(p, e, _smallest_irreducible(p, e))


class FieldElement:
    """An element of a finite field; arithmetic requires matching contexts."""

    __slots__ = ("ctx", "code")

    def __init__(self, ctx: FieldCtx, code: int):
        self.ctx = ctx
        self.code = int(code)

    @property
    def coeffs(self) -> list:
        return self.ctx.to_coeffs(self.code)

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise ContextMismatch(f"cannot mix {self.ctx} and {other.ctx}")
            return other.code
        if isinstance(other, (int, np.integer)):
            return self.ctx.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx.add(self.code, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx.sub(self.code, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx.sub(o, self.code))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx.mul(self.code, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx.mul(self.code, self.ctx.inv(o)))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.code))

    def __pow__(self, k: int):
        return FieldElement(self.ctx, self.ctx.pow(self.code, int(k)))

    def inv(self):
        return inv(self)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx == other.ctx and self.code == other.code
        if isinstance(other, (int, np.integer)):
            return self.code == self.ctx.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.e, self.code))

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        if self.ctx.e != 1 and self.code >= self.ctx.p:
            raise ValueError("element is not in the prime field")
        return self.code

    def __repr__(self):
        if self.ctx.e == 1:
            return f"{self.code} (mod {self.ctx.p})"
        return f"{self.coeffs} in {self.ctx}"


def inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse; raises DivisionByZero for a = 0."""
    return FieldElement(a.ctx, a.ctx.inv(a.code))


def frobenius(a: FieldElement) -> FieldElement:
    return a ** a.ctx.p


def root_of_minus_one(ctx: FieldCtx, d: int):
    """Smallest-code mu with mu**d == -1, or None if F_q has no such element.

    Exhaustive scan of the multiplicative group, in vectorized chunks.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    minus_one = int(ctx.neg(1))
    chunk = 1 << 16
    for start in range(1, ctx.q, chunk):
        codes = np.arange(start, min(start + chunk, ctx.q), dtype=np.int64)
        hits = np.nonzero(ctx.pow_array(codes, d) == minus_one)[0]
        if hits.size:
            return FieldElement(ctx, int(codes[hits[0]]))
    return None


@functools.lru_cache(maxsize=None)
def _embedding_table(small: FieldCtx, big: FieldCtx):
    if small.p != big.p or big.e % small.e:
        raise ContextMismatch(f"{small} does not embed in {big}")
    if small.e == 1:
        return np.arange(small.q, dtype=np.int64)
    # image of the indeterminate: the smallest root of the small modulus in big
    codes = np.arange(big.q, dtype=np.int64)
    val = np.zeros(big.q, dtype=np.int64)
    for c in reversed(small.modulus):
        val = big.add(big.mul(val, codes), c)
    root = int(codes[np.nonzero(val == 0)[0][0]])
    powers = [1]
    for _ in range(small.e - 1):
        powers.append(int(big.mul(powers[-1], root)))
    table = np.zeros(small.q, dtype=np.int64)
    for code in range(small.q):
        acc = 0
        for c, w in zip(small.to_coeffs(code), powers):
            if c:
                acc = int(big.add(acc, big.mul(c, w)))
        table[code] = acc
    table.setflags(write=False)
    return table


def embed_codes(codes, small: FieldCtx, big: FieldCtx):
    """Map codes of ``small`` into ``big`` (an extension of it)."""
    if small == big:
        return np.asarray(codes, dtype=np.int64)
    return _embedding_table(small, big)[np.asarray(codes, dtype=np.int64)]


def embed(a: FieldElement, big: FieldCtx) -> FieldElement:
    return FieldElement(big, int(embed_codes(a.code, a.ctx, big)))
