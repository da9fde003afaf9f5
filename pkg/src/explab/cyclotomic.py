"""Exact arithmetic in the cyclotomic field Q(zeta_p) for an odd prime p.

Elements are stored on the power basis 1, z, ..., z^(p-2) of
Q[z]/(1 + z + ... + z^(p-1)), with exact rational coordinates.  The top
power z^(p-1) is always rewritten as -(1 + z + ... + z^(p-2)), so equality
is plain coordinatewise comparison and every operation is exact.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


def is_prime(n: int) -> bool:
    """Trial-division primality test; fine at the scale used here."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _check_prime(p: int) -> None:
    if not is_prime(p) or p < 3:
        raise ValueError(f"{p} is not an odd prime")


class Cyclo:
    """An element of Q(zeta_p), p an odd prime.

    ``coeffs`` has length exactly p-1: the coordinates on the basis
    1, z, ..., z^(p-2).  Instances are immutable; all arithmetic returns
    fresh values, so they are safe to share across threads.
    """

    __slots__ = ("prime", "coeffs")

    def __init__(self, prime: int, coeffs):
        _check_prime(prime)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != prime - 1:
            raise ValueError("coefficient vector must have length p - 1")
        object.__setattr__(self, "prime", prime)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("Cyclo values are immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> "Cyclo":
        return _zero(p)

    @classmethod
    def one(cls, p: int) -> "Cyclo":
        return _one(p)

    @classmethod
    def from_rational(cls, q, p: int) -> "Cyclo":
        q = Fraction(q)
        return cls(p, (q,) + (Fraction(0),) * (p - 2))

    @classmethod
    def zeta_power(cls, k: int, p: int) -> "Cyclo":
        """zeta^k in canonical form (k taken mod p)."""
        _check_prime(p)
        k %= p
        if k < p - 1:
            coeffs = [Fraction(0)] * (p - 1)
            coeffs[k] = Fraction(1)
            return cls(p, coeffs)
        return cls(p, (Fraction(-1),) * (p - 1))

    # -- arithmetic --------------------------------------------------------

    def _match(self, other: "Cyclo") -> None:
        if self.prime != other.prime:
            raise ValueError("prime mismatch")

    def __add__(self, other):
        if not isinstance(other, Cyclo):
            return NotImplemented
        self._match(other)
        return Cyclo(self.prime, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        if not isinstance(other, Cyclo):
            return NotImplemented
        self._match(other)
        return Cyclo(self.prime, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return Cyclo(self.prime, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Cyclo):
            return NotImplemented
        self._match(other)
        p = self.prime
        # Convolve exponents mod p (zeta^p = 1), then eliminate z^(p-1).
        acc = [Fraction(0)] * p
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    acc[(i + j) % p] += a * b
        top = acc[p - 1]
        if top:
            return Cyclo(p, tuple(acc[i] - top for i in range(p - 1)))
        return Cyclo(p, tuple(acc[: p - 1]))

    __rmul__ = __mul__

    def scale(self, q) -> "Cyclo":
        q = Fraction(q)
        return Cyclo(self.prime, tuple(q * a for a in self.coeffs))

    def inverse(self) -> "Cyclo":
        """Multiplicative inverse, by the extended Euclidean algorithm
        against 1 + z + ... + z^(p-1)."""
        if not self:
            raise ZeroDivisionError("zero element of Q(zeta_p) has no inverse")
        p = self.prime
        modulus = [Fraction(1)] * p
        inv = _poly_invert(list(self.coeffs), modulus)
        inv += [Fraction(0)] * (p - 1 - len(inv))
        return Cyclo(p, tuple(inv[: p - 1]))

    def __eq__(self, other):
        if not isinstance(other, Cyclo):
            return NotImplemented
        return self.prime == other.prime and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.prime, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not self

    # -- rendering / serialization ----------------------------------------

    def __repr__(self):
        return f"Cyclo({self.prime}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                body = str(c)
            else:
                mono = "z" if k == 1 else f"z^{k}"
                body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
                if c < 0 and parts:
                    parts.append(f"- {body}")
                    continue
                if c < 0:
                    body = f"-{body}"
            parts.append(body if not parts else f"+ {body}")
        return " ".join(parts) if parts else "0"

    def approx(self) -> complex:
        """Floating-point image under zeta -> exp(2*pi*i/p).  Debugging
        aid only; never used in any assertion."""
        import cmath

        z = cmath.exp(2j * cmath.pi / self.prime)
        return sum(complex(c) * z**k for k, c in enumerate(self.coeffs))

    def to_json(self) -> dict:
        return {"prime": self.prime, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "Cyclo":
        return cls(obj["prime"], [Fraction(c) for c in obj["coeffs"]])


@lru_cache(maxsize=None)
def _zero(p: int) -> Cyclo:
    return Cyclo(p, (Fraction(0),) * (p - 1))


@lru_cache(maxsize=None)
def _one(p: int) -> Cyclo:
    return Cyclo(p, (Fraction(1),) + (Fraction(0),) * (p - 2))


def embed_rational(q, p: int) -> Cyclo:
    """Constant-term embedding of an exact rational into Q(zeta_p)."""
    return Cyclo.from_rational(q, p)


def zeta(p: int) -> Cyclo:
    return Cyclo.zeta_power(1, p)


def psi(a: int, lam: int, p: int) -> Cyclo:
    """Additive character value zeta^(lam*a mod p).

    Satisfies psi(a)*psi(b) = psi(a+b); lam must be nonzero mod p.
    """
    _check_prime(p)
    if lam % p == 0:
        raise ValueError("degenerate character")
    return Cyclo.zeta_power((lam * a) % p, p)


# -- polynomial helpers for inversion (dense, over Fraction) ---------------


def _poly_trim(f):
    while f and not f[-1]:
        f.pop()
    return f


def _poly_divmod(f, g):
    f = list(f)
    q = [Fraction(0)] * max(1, len(f) - len(g) + 1)
    inv_lead = 1 / g[-1]
    while len(f) >= len(g) and _poly_trim(f):
        shift = len(f) - len(g)
        c = f[-1] * inv_lead
        q[shift] = c
        for i, gc in enumerate(g):
            f[shift + i] -= c * gc
        _poly_trim(f)
    return _poly_trim(q), f


def _poly_invert(f, modulus):
    """Inverse of f modulo the (squarefree, f-coprime) polynomial modulus."""
    r0, r1 = list(modulus), _poly_trim(list(f))
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while len(r1) > 1 or (r1 and r1 != [Fraction(0)] and len(r1) > 1):
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        qs1 = _poly_mul(q, s1)
        s0, s1 = s1, _poly_trim([a - b for a, b in _zip_pad(s0, qs1)])
        if len(r1) <= 1:
            break
    if not r1:
        raise ZeroDivisionError("element not invertible")
    c = r1[0]
    return [a / c for a in s1]


def _poly_mul(f, g):
    out = [Fraction(0)] * (len(f) + len(g) - 1 or 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] += a * b
    return _poly_trim(out)


def _zip_pad(f, g):
    n = max(len(f), len(g))
    f = f + [Fraction(0)] * (n - len(f))
    g = g + [Fraction(0)] * (n - len(g))
    return zip(f, g)
