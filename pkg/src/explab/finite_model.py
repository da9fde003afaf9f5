"""Finite trace-function model of exponential objects.

An ``ExpObject`` is an exact Q(zeta_p)-valued table on X x F_p for a finite
set X.  Its class modulo functions pulled back from X (the t-independent
ones) is an ``ExpClass``; two tables define the same class exactly when
their mean-zero normal forms agree.  All the structure maps - pullback and
pushforward along maps of finite sets, additive convolution in the t
direction, the diagonal kernel, the Fourier transform on trivial bundles
S x F_p^r, and the character realizations - act on tables and descend to
classes.  Everything is a pure function on immutable data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cyclotomic import Cyclo, _check_prime, psi


@dataclass(frozen=True)
class FiniteSet:
    """A finite set; its elements are the indices 0..size-1."""

    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("finite set must be nonempty")

    def __iter__(self):
        return iter(range(self.size))


@dataclass(frozen=True)
class FiniteMap:
    """A map of finite sets, given by its value table."""

    source: FiniteSet
    target: FiniteSet
    table: tuple

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(self.table))
        if len(self.table) != self.source.size:
            raise ValueError("table length must equal source size")
        if any(not (0 <= v < self.target.size) for v in self.table):
            raise ValueError("table entry out of range")

    def __call__(self, x: int) -> int:
        return self.table[x]

    @classmethod
    def identity(cls, X: FiniteSet) -> "FiniteMap":
        return cls(X, X, tuple(range(X.size)))

    @classmethod
    def constant(cls, X: FiniteSet, Y: FiniteSet, y0: int) -> "FiniteMap":
        return cls(X, Y, (y0,) * X.size)


class ExpObject:
    """An exact function X x F_p -> Q(zeta_p), stored as a table."""

    __slots__ = ("base", "prime", "values")

    def __init__(self, base: FiniteSet, prime: int, values):
        _check_prime(prime)
        values = tuple(tuple(row) for row in values)
        if len(values) != base.size or any(len(r) != prime for r in values):
            raise ValueError("value table must have shape |X| x p")
        for row in values:
            for v in row:
                if not isinstance(v, Cyclo) or v.prime != prime:
                    raise ValueError("prime mismatch")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "prime", prime)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError("ExpObject values are immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_function(cls, base: FiniteSet, p: int, fn) -> "ExpObject":
        return cls(base, p, [[fn(x, t) for t in range(p)] for x in base])

    @classmethod
    def delta(cls, base: FiniteSet, p: int, x0: int, t0: int) -> "ExpObject":
        z, o = Cyclo.zero(p), Cyclo.one(p)
        return cls(base, p, [[o if (x == x0 and t == t0 % p) else z for t in range(p)] for x in base])

    @classmethod
    def zeros(cls, base: FiniteSet, p: int) -> "ExpObject":
        z = Cyclo.zero(p)
        return cls(base, p, [[z] * p for _ in base])

    # -- table arithmetic ----------------------------------------------------

    def _match(self, other: "ExpObject") -> None:
        if self.prime != other.prime:
            raise ValueError("prime mismatch")
        if self.base != other.base:
            raise ValueError("base mismatch")

    def __add__(self, other: "ExpObject") -> "ExpObject":
        self._match(other)
        return ExpObject(
            self.base,
            self.prime,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.values, other.values)],
        )

    def __sub__(self, other: "ExpObject") -> "ExpObject":
        self._match(other)
        return ExpObject(
            self.base,
            self.prime,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.values, other.values)],
        )

    def scale(self, q) -> "ExpObject":
        q = Fraction(q)
        return ExpObject(self.base, self.prime, [[v.scale(q) for v in row] for row in self.values])

    def __eq__(self, other):
        if not isinstance(other, ExpObject):
            return NotImplemented
        return self.base == other.base and self.prime == other.prime and self.values == other.values

    def __hash__(self):
        return hash((self.base, self.prime, self.values))

    def class_eq(self, other: "ExpObject") -> bool:
        """Equality of the classes modulo pullbacks from the base."""
        self._match(other)
        return canonical_rep(self) == canonical_rep(other)

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "base": self.base.size,
            "prime": self.prime,
            "values": [[[str(c) for c in v.coeffs] for v in row] for row in self.values],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ExpObject":
        p = obj["prime"]
        vals = [
            [Cyclo(p, [Fraction(c) for c in cell]) for cell in row]
            for row in obj["values"]
        ]
        return cls(FiniteSet(obj["base"]), p, vals)

    def __repr__(self):
        return f"ExpObject(base={self.base.size}, prime={self.prime})"


class ExpClass:
    """The class of a table modulo t-independent functions."""

    __slots__ = ("rep",)

    def __init__(self, rep: ExpObject):
        object.__setattr__(self, "rep", rep)

    def __setattr__(self, name, value):
        raise AttributeError("ExpClass values are immutable")

    def __eq__(self, other):
        if isinstance(other, ExpClass):
            return self.rep.class_eq(other.rep)
        return NotImplemented

    def __hash__(self):
        return hash(canonical_rep(self.rep))

    def canonical(self) -> ExpObject:
        return canonical_rep(self.rep)

    def __repr__(self):
        return f"ExpClass({self.rep!r})"


def _rep(h) -> ExpObject:
    return h.rep if isinstance(h, ExpClass) else h


# -- the operations ----------------------------------------------------------


def canonical_rep(h) -> ExpObject:
    """Mean-zero section of the quotient: subtract the t-average at each x.

    Idempotent; h and canonical_rep(h) define the same class, and two
    tables define the same class iff their canonical forms are equal.
    """
    h = _rep(h)
    p = h.prime
    inv_p = Fraction(1, p)
    rows = []
    for row in h.values:
        mean = row[0]
        for v in row[1:]:
            mean = mean + v
        mean = mean.scale(inv_p)
        rows.append([v - mean for v in row])
    return ExpObject(h.base, p, rows)


def pullback(f: FiniteMap, h) -> ExpObject:
    """Precompose with f x id: (x, t) -> h(f(x), t)."""
    h = _rep(h)
    if f.target != h.base:
        raise ValueError("base mismatch")
    return ExpObject(f.source, h.prime, [h.values[f(x)] for x in f.source])


def pushforward(f: FiniteMap, h) -> ExpObject:
    """Sum over fibers of f x id; on finite sets the proper and ordinary
    pushforwards coincide, so this single operation models both."""
    h = _rep(h)
    if f.source != h.base:
        raise ValueError("base mismatch")
    p = h.prime
    z = Cyclo.zero(p)
    rows = [[z] * p for _ in f.target]
    for x in f.source:
        row = h.values[x]
        out = rows[f(x)]
        for t, v in enumerate(row):
            if v:
                out[t] = out[t] + v
    return ExpObject(f.target, p, rows)


def conv(h1, h2) -> ExpObject:
    """Additive convolution in the t-direction over the shared base."""
    h1, h2 = _rep(h1), _rep(h2)
    h1._match(h2)
    p = h1.prime
    z = Cyclo.zero(p)
    rows = []
    for r1, r2 in zip(h1.values, h2.values):
        out = [z] * p
        for u, a in enumerate(r1):
            if a:
                for v, b in enumerate(r2):
                    if b:
                        t = (u + v) % p
                        out[t] = out[t] + a * b
        rows.append(out)
    return ExpObject(h1.base, p, rows)


def kernel_E(p: int) -> ExpObject:
    """The diagonal kernel on the affine line: (s, t) -> [s == t]."""
    _check_prime(p)
    z, o = Cyclo.zero(p), Cyclo.one(p)
    return ExpObject(FiniteSet(p), p, [[o if s == t else z for t in range(p)] for s in range(p)])


def unit_1(X: FiniteSet, p: int) -> ExpObject:
    """Convolution unit: (x, t) -> [t == 0]."""
    _check_prime(p)
    z, o = Cyclo.zero(p), Cyclo.one(p)
    return ExpObject(X, p, [[o if t == 0 else z for t in range(p)] for _ in X])


@lru_cache(maxsize=None)
def pairing_table(p: int, r: int):
    """m(x, y) = sum of x_i * y_i mod p, on little-endian digit encodings."""
    q = p**r

    def digits(v):
        out = []
        for _ in range(r):
            out.append(v % p)
            v //= p
        return out

    vecs = [digits(v) for v in range(q)]
    return tuple(
        tuple(sum(a * b for a, b in zip(vecs[x], vecs[y])) % p for y in range(q))
        for x in range(q)
    )


def _split_pair_base(h: ExpObject, r: int) -> int:
    q = h.prime**r
    s, rem = divmod(h.base.size, q * q)
    if rem or s < 1:
        raise ValueError("base does not factor as S x F_p^r x F_p^r")
    return s


def _split_vec_base(h: ExpObject, r: int) -> int:
    q = h.prime**r
    s, rem = divmod(h.base.size, q)
    if rem or s < 1:
        raise ValueError("base does not factor as S x F_p^r")
    return s


def shear(h, r: int, inverse: bool = False) -> ExpObject:
    """Reparametrize t by the pairing: (x, y, t) -> value at (x, y, t - m(x, y)).

    The base must factor as S x F_p^r x F_p^r (pairs encoded as
    (s * p^r + x) * p^r + y).  Exactly equal, as a table, to convolving
    with the pullback of the diagonal kernel along the pairing.
    """
    h = _rep(h)
    p = h.prime
    s_count = _split_pair_base(h, r)
    q = p**r
    m = pairing_table(p, r)
    sign = -1 if inverse else 1
    rows = []
    idx = 0
    for _s in range(s_count):
        for x in range(q):
            for y in range(q):
                row = h.values[idx]
                shift = (sign * m[x][y]) % p
                rows.append([row[(t - shift) % p] for t in range(p)])
                idx += 1
    return ExpObject(h.base, p, rows)


def ft(h, r: int) -> ExpObject:
    """Fourier transform on the trivial bundle S x F_p^r.

    Computed exactly as the composite pushforward(shear(pullback(h))) with
    the sign (-1)^r applied last; the closed summation formula is kept in
    the tests as an independent oracle, not used here.
    """
    h = _rep(h)
    p = h.prime
    s_count = _split_vec_base(h, r)
    q = p**r
    paired = FiniteSet(s_count * q * q)
    vec = FiniteSet(s_count * q)
    proj_x = FiniteMap(paired, vec, tuple(i // q for i in range(paired.size)))
    proj_y = FiniteMap(
        paired, vec, tuple((i // (q * q)) * q + (i % q) for i in range(paired.size))
    )
    out = pushforward(proj_y, shear(pullback(proj_x, h), r))
    return twist_scale(out, shift=r, twist=0)


def real_psi(h, lam: int):
    """Character realization: x -> sum over t of h(x, t) * psi(t, lam).

    Independent of the representative, since the full character sum
    vanishes; multiplicative for convolution.
    """
    h = _rep(h)
    p = h.prime
    if lam % p == 0:
        raise ValueError("not a realization kernel")
    chars = [psi(t, lam, p) for t in range(p)]
    out = []
    for row in h.values:
        acc = Cyclo.zero(p)
        for t, v in enumerate(row):
            if v:
                acc = acc + v * chars[t]
        out.append(acc)
    return tuple(out)


def classical_ft(g, lam: int, r: int):
    """Finite Fourier transform of a function F_p^r -> Q(zeta_p):
    y -> (-1)^r sum over x of g(x) * psi(m(x, y), lam)."""
    g = tuple(g)
    if not g:
        raise ValueError("empty function")
    p = g[0].prime
    if lam % p == 0:
        raise ValueError("not a realization kernel")
    q = p**r
    if len(g) != q:
        raise ValueError("function must be defined on F_p^r")
    m = pairing_table(p, r)
    chars = [psi(t, lam, p) for t in range(p)]
    sign = Fraction(-1) ** r
    out = []
    for y in range(q):
        acc = Cyclo.zero(p)
        for x in range(q):
            if g[x]:
                acc = acc + g[x] * chars[m[x][y]]
        out.append(acc.scale(sign))
    return tuple(out)


def twist_scale(h, shift: int, twist: int) -> ExpObject:
    """Scalar bookkeeping for shifts and twists: multiply the whole table
    by (-1)^shift * p^(-twist), an exact rational."""
    h = _rep(h)
    factor = Fraction(-1) ** (shift % 2) * Fraction(1, h.prime) ** twist
    if factor == 1:
        return h
    return h.scale(factor)
