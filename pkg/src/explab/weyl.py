"""Normal-ordered arithmetic in the Weyl algebra A_n over the rationals.

Elements are stored as sparse maps from monomials x^alpha d^beta (all x's
to the left of all d's) to nonzero rational coefficients.  The product is
determined by d_i x_i = x_i d_i + 1; per variable,

    d^b x^a = sum over k of C(a,k) C(b,k) k! x^(a-k) d^(b-k).

Values are immutable and all operations are pure, so they can be shared
freely between threads.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import NamedTuple


class WeylMonomial(NamedTuple):
    """Exponents of a normal-ordered monomial x^alpha d^beta."""

    alpha: tuple
    beta: tuple

    @property
    def degree(self) -> int:
        return sum(self.alpha) + sum(self.beta)


def degrevlex_key(mono: WeylMonomial):
    """Sort key realizing degree-reverse-lexicographic order on the 2n
    commuting symbols x_1..x_n, d_1..d_n (bigger key = bigger monomial)."""
    vec = mono.alpha + mono.beta
    return (sum(vec), tuple(-e for e in reversed(vec)))


@lru_cache(maxsize=None)
def _commute(b: int, a: int):
    """Expansion of d^b x^a in normal order, as ((k, coefficient), ...)."""
    return tuple((k, Fraction(comb(a, k) * comb(b, k) * factorial(k))) for k in range(min(a, b) + 1))


class WeylElt:
    """A normal-ordered element of A_n with exact rational coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        if n < 1:
            raise ValueError("need at least one variable")
        clean = {}
        for mono, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff:
                if not isinstance(mono, WeylMonomial):
                    mono = WeylMonomial(tuple(mono[0]), tuple(mono[1]))
                if len(mono.alpha) != n or len(mono.beta) != n:
                    raise ValueError("exponent vector length must equal n")
                clean[mono] = coeff
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("WeylElt values are immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "WeylElt":
        return cls(n, {})

    @classmethod
    def const(cls, q, n: int) -> "WeylElt":
        zeros = (0,) * n
        return cls(n, {WeylMonomial(zeros, zeros): Fraction(q)})

    @classmethod
    def x(cls, i: int, n: int) -> "WeylElt":
        return cls.monomial(tuple(1 if j == i - 1 else 0 for j in range(n)), (0,) * n, 1, n)

    @classmethod
    def d(cls, i: int, n: int) -> "WeylElt":
        return cls.monomial((0,) * n, tuple(1 if j == i - 1 else 0 for j in range(n)), 1, n)

    @classmethod
    def monomial(cls, alpha, beta, coeff, n: int) -> "WeylElt":
        return cls(n, {WeylMonomial(tuple(alpha), tuple(beta)): Fraction(coeff)})

    # -- ring operations -------------------------------------------------------

    def _match(self, other: "WeylElt") -> None:
        if self.n != other.n:
            raise ValueError("variable count mismatch")

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._match(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            s = terms.get(mono, 0) + c
            if s:
                terms[mono] = s
            else:
                terms.pop(mono, None)
        return WeylElt(self.n, terms)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __neg__(self):
        return WeylElt(self.n, {m: -c for m, c in self.terms.items()})

    def _coerce(self, other):
        if isinstance(other, WeylElt):
            return other
        if isinstance(other, (int, Fraction)):
            return WeylElt.const(other, self.n)
        return None

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, WeylElt):
            return NotImplemented
        self._match(other)
        n = self.n
        acc: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                base = c1 * c2
                # expand d^beta1 x^alpha2 variable by variable
                parts = [_commute(m1.beta[i], m2.alpha[i]) for i in range(n)]
                stack = [((), base)]
                for i in range(n):
                    nxt = []
                    for ks, coeff in stack:
                        for k, c in parts[i]:
                            nxt.append((ks + (k,), coeff * c))
                    stack = nxt
                for ks, coeff in stack:
                    mono = WeylMonomial(
                        tuple(m1.alpha[i] + m2.alpha[i] - ks[i] for i in range(n)),
                        tuple(m1.beta[i] + m2.beta[i] - ks[i] for i in range(n)),
                    )
                    s = acc.get(mono, 0) + coeff
                    if s:
                        acc[mono] = s
                    else:
                        acc.pop(mono, None)
        return WeylElt(n, acc)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, q) -> "WeylElt":
        q = Fraction(q)
        if not q:
            return WeylElt.zero(self.n)
        return WeylElt(self.n, {m: q * c for m, c in self.terms.items()})

    def __pow__(self, k: int) -> "WeylElt":
        if k < 0:
            raise ValueError("negative powers are not defined")
        out = WeylElt.const(1, self.n)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, WeylElt):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # -- inspection -------------------------------------------------------------

    def sorted_terms(self):
        """Terms in descending degrevlex order."""
        return sorted(self.terms.items(), key=lambda kv: degrevlex_key(kv[0]), reverse=True)

    def lead_monomial(self) -> WeylMonomial:
        if not self.terms:
            raise ValueError("zero element")
        return max(self.terms, key=degrevlex_key)

    def lead_coeff(self) -> Fraction:
        return self.terms[self.lead_monomial()]

    def monic(self) -> "WeylElt":
        return self.scale(1 / self.lead_coeff())

    def __repr__(self):
        return f"WeylElt({self.n}, {str(self)!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for mono, coeff in self.sorted_terms():
            factors = []
            for i, e in enumerate(mono.alpha):
                if e:
                    name = "x" if self.n == 1 else f"x{i + 1}"
                    factors.append(name if e == 1 else f"{name}^{e}")
            for i, e in enumerate(mono.beta):
                if e:
                    name = "d" if self.n == 1 else f"d{i + 1}"
                    factors.append(name if e == 1 else f"{name}^{e}")
            body = "*".join(factors)
            mag = abs(coeff)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            if not chunks:
                chunks.append(text if coeff > 0 else f"-{text}")
            else:
                chunks.append(f"+ {text}" if coeff > 0 else f"- {text}")
        return " ".join(chunks)


def normal_mul(P: WeylElt, Q: WeylElt) -> WeylElt:
    """Normal-ordered product (same as P * Q)."""
    return P * Q


def bernstein_degree(P: WeylElt) -> int:
    """Total degree in the x's and d's jointly."""
    if not P:
        raise ValueError("zero element")
    return max(m.degree for m in P.terms)


def substitute(P: WeylElt, x_images, d_images) -> WeylElt:
    """Evaluate P under x_i -> x_images[i], d_i -> d_images[i].

    The images must satisfy the Weyl relations for the result to be an
    algebra map; each monomial is evaluated left to right in normal order.
    """
    n = P.n
    out = WeylElt.zero(n)
    for mono, coeff in P.terms.items():
        term = WeylElt.const(coeff, n)
        for i, e in enumerate(mono.alpha):
            for _ in range(e):
                term = term * x_images[i]
        for i, e in enumerate(mono.beta):
            for _ in range(e):
                term = term * d_images[i]
        out = out + term
    return out


def adjoint(P: WeylElt) -> WeylElt:
    """Formal adjoint: the anti-automorphism fixing x_i and negating d_i."""
    n = P.n
    out = WeylElt.zero(n)
    for mono, coeff in P.terms.items():
        sign = -1 if sum(mono.beta) % 2 else 1
        # reversed monomial d^beta x^alpha, then normal ordered
        reordered = WeylElt.monomial((0,) * n, mono.beta, 1, n) * WeylElt.monomial(
            mono.alpha, (0,) * n, 1, n
        )
        out = out + reordered.scale(coeff * sign)
    return out


def fourier_auto(P: WeylElt, variables=None) -> WeylElt:
    """Algebra automorphism x_i -> d_i, d_i -> -x_i on the selected
    variables (1-based; default all), identity elsewhere."""
    n = P.n
    sel = set(range(1, n + 1)) if variables is None else set(variables)
    xs = [WeylElt.d(i, n) if i in sel else WeylElt.x(i, n) for i in range(1, n + 1)]
    ds = [-WeylElt.x(i, n) if i in sel else WeylElt.d(i, n) for i in range(1, n + 1)]
    return substitute(P, xs, ds)


def exp_twist(P: WeylElt, lam, var: int = 1) -> WeylElt:
    """Automorphism d_var -> d_var - lam (conjugation by the exponential
    solution with rate lam); inverse is the twist by -lam."""
    n = P.n
    xs = [WeylElt.x(i, n) for i in range(1, n + 1)]
    ds = [
        WeylElt.d(i, n) - WeylElt.const(lam, n) if i == var else WeylElt.d(i, n)
        for i in range(1, n + 1)
    ]
    return substitute(P, xs, ds)
