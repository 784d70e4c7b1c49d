"""Twisted polynomials L{tau} with tau*a = a^q*tau over exact coefficient rings.

A coefficient ring is any object offering ``zero/one/add/sub/neg/mul``,
``frob(a, i)`` (the q^i-power map), ``is_zero`` and ``from_A`` (the structure
map A = F_q[T] -> ring).  Four rings are provided:

* :class:`FieldRing` -- a level of a finite field tower;
* :class:`PolyRing` -- F_q[T] or F_{q^r}[T];
* :class:`QuotientRing` -- A/(pi), for reduction at a prime;
* :class:`LocalRing` -- k[theta]/(theta^N) with T = theta^e.
"""
from __future__ import annotations

from typing import Sequence

from .ffield import FieldElem, FieldTower, Level
from .polyring import Poly, PrimeIdeal, format_poly, mul_codes


class FieldRing:
    def __init__(self, tower: FieldTower, level: Level = Level.FQR, t_image: FieldElem | None = None):
        self.tower = tower
        self.level = Level(level)
        self.q = tower.q
        self.t_image = t_image

    def zero(self):
        return FieldElem(self.tower, 0, self.level)

    def one(self):
        return FieldElem(self.tower, 1, self.level)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def frob(self, a, i):
        return a.frobenius(i)

    def is_zero(self, a):
        return a.code == 0

    def from_A(self, a: Poly):
        if self.t_image is None:
            if a.degree > 0:
                raise ValueError("this field ring has no image of T")
            return a.coeff(0)
        return a(self.t_image)

    def __eq__(self, other):
        return isinstance(other, FieldRing) and (self.tower, self.level) == (other.tower, other.level)

    def __hash__(self):
        return hash(("field", id(self.tower), self.level))


class PolyRing:
    """F_q[T] (``level=FQ``) or O_H = F_{q^r}[T] (``level=FQR``)."""

    def __init__(self, tower: FieldTower, level: Level = Level.FQ):
        self.tower = tower
        self.level = Level(level)
        self.q = tower.q

    def zero(self):
        return Poly(self.tower, (), self.level)

    def one(self):
        return Poly(self.tower, (1,), self.level)

    def T(self):
        return Poly(self.tower, (0, 1), self.level)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def frob(self, a: Poly, i: int) -> Poly:
        # (sum c_k T^k)^(q^i) = sum c_k^(q^i) T^(k q^i)
        if i == 0 or not a.coeffs:
            return a
        step = self.q**i
        out = [0] * (step * (len(a.coeffs) - 1) + 1)
        for k, c in enumerate(a.coeffs):
            out[k * step] = self.tower.frob(c, i)
        return Poly(self.tower, out, a.level, a.var)

    def is_zero(self, a):
        return a.is_zero()

    def from_A(self, a: Poly) -> Poly:
        return Poly(self.tower, a.coeffs, max(self.level, a.level))

    def __eq__(self, other):
        return isinstance(other, PolyRing) and (self.tower, self.level) == (other.tower, other.level)

    def __hash__(self):
        return hash(("poly", id(self.tower), self.level))


class QuotientRing:
    """A/(pi) for a prime pi of A; elements are remainders mod pi."""

    def __init__(self, prime: PrimeIdeal):
        self.prime = prime
        self.pi = prime.pi
        self.tower = self.pi.tower
        self.q = self.tower.q

    def _red(self, a: Poly) -> Poly:
        return Poly(self.tower, (a % self.pi).coeffs, Level.FQ)

    def zero(self):
        return Poly(self.tower, (), Level.FQ)

    def one(self):
        return Poly(self.tower, (1,), Level.FQ)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return self._red(a * b)

    def frob(self, a, i):
        return self._red(a.pow_mod(self.q**i, self.pi))

    def is_zero(self, a):
        return a.is_zero()

    def from_A(self, a: Poly) -> Poly:
        return self._red(a)

    def __eq__(self, other):
        return isinstance(other, QuotientRing) and self.prime == other.prime

    def __hash__(self):
        return hash(("quot", self.prime))


class LocalRing:
    """k[theta]/(theta^N) with k a tower level and T = theta^e.

    Stands in for W/mu^N W: ``theta`` plays the uniformizer and ``k`` must be
    large enough to hold every scalar the computation looks for.
    """

    def __init__(self, tower: FieldTower, N: int, e: int = 1, level: Level = Level.FQR):
        if N < 1 or e < 1:
            raise ValueError("truncation N and ramification e must be positive")
        self.tower = tower
        self.N = N
        self.e = e
        self.level = Level(level)
        self.q = tower.q

    def elem(self, coeffs: Sequence[int]) -> Poly:
        return Poly(self.tower, list(coeffs)[: self.N], self.level, "θ")

    def zero(self):
        return self.elem(())

    def one(self):
        return self.elem((1,))

    def theta(self, k: int = 1) -> Poly:
        return self.elem([0] * k + [1]) if k < self.N else self.zero()

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a: Poly, b: Poly) -> Poly:
        return self.elem(mul_codes(self.tower, a.coeffs, b.coeffs, trunc=self.N))

    def pow(self, a: Poly, k: int) -> Poly:
        result, base = self.one(), a
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def frob(self, a: Poly, i: int) -> Poly:
        if i == 0 or not a.coeffs:
            return a
        step = self.q**i
        out = [0] * self.N
        for k, c in enumerate(a.coeffs):
            if c and k * step < self.N:
                out[k * step] = self.tower.frob(c, i)
        return self.elem(out)

    def is_zero(self, a):
        return a.is_zero()

    def from_A(self, a: Poly) -> Poly:
        out = [0] * self.N
        for k, c in enumerate(a.coeffs):
            if c and k * self.e < self.N:
                out[k * self.e] = c
        return self.elem(out)

    def order(self, a: Poly) -> int | None:
        """theta-adic order, or None when ``a`` vanishes in the truncation."""
        return a.valuation()

    def is_unit(self, a: Poly) -> bool:
        return bool(a.coeffs) and a.coeffs[0] != 0

    def inv(self, a: Poly) -> Poly:
        """Inverse of a unit by Newton iteration."""
        if not self.is_unit(a):
            raise ZeroDivisionError("inverse of a non-unit in the local ring")
        T = self.tower
        x = self.elem((T.inv(a.coeffs[0]),))
        prec = 1
        two = self.elem((T.from_int(2),))
        while prec < self.N:
            prec = min(2 * prec, self.N)
            x = self.mul(x, self.sub(two, self.mul(a, x)))
        return x

    def reduce(self, a: Poly, n: int) -> Poly:
        """``a mod theta^n``."""
        return self.elem(a.coeffs[:n])

    def truncated(self, n: int) -> "LocalRing":
        return LocalRing(self.tower, n, self.e, self.level)

    def __eq__(self, other):
        return isinstance(other, LocalRing) and (self.tower, self.N, self.e, self.level) == (
            other.tower, other.N, other.e, other.level)

    def __hash__(self):
        return hash(("local", id(self.tower), self.N, self.e, self.level))

    def __repr__(self):
        return f"LocalRing(q={self.q}, N={self.N}, e={self.e})"


class TwistedPoly:
    """Element ``sum c_i tau^i`` of ring{tau}; ``coeffs[i]`` multiplies tau^i."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs: Sequence):
        self.ring = ring
        cs = list(coeffs)
        while cs and ring.is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def tau(cls, ring, k: int = 1) -> "TwistedPoly":
        return cls(ring, [ring.zero()] * k + [ring.one()])

    @classmethod
    def scalar(cls, ring, a) -> "TwistedPoly":
        return cls(ring, [a])

    @property
    def degree(self) -> int:
        """tau-degree; -1 for zero."""
        return len(self.coeffs) - 1

    def coeff(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ring.zero()

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "TwistedPoly") -> "TwistedPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return TwistedPoly(self.ring, [self.ring.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __sub__(self, other: "TwistedPoly") -> "TwistedPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return TwistedPoly(self.ring, [self.ring.sub(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self):
        return TwistedPoly(self.ring, [self.ring.neg(c) for c in self.coeffs])

    def __mul__(self, other: "TwistedPoly") -> "TwistedPoly":
        return tmul(self, other)

    def __pow__(self, k: int) -> "TwistedPoly":
        result = TwistedPoly(self.ring, [self.ring.one()])
        for _ in range(k):
            result = tmul(result, self)
        return result

    def __eq__(self, other):
        if not isinstance(other, TwistedPoly):
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(self.ring.is_zero(self.ring.sub(a, b)) for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def __repr__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if self.ring.is_zero(c):
                continue
            cs = format_poly(c) if isinstance(c, Poly) else repr(c)
            parts.append(cs if i == 0 else f"({cs})τ^{i}")
        return "TwistedPoly(" + (" + ".join(parts) or "0") + ")"


def tmul(u: TwistedPoly, v: TwistedPoly) -> TwistedPoly:
    """Product in ring{tau}: (a tau^n)(b tau^m) = a b^(q^n) tau^(n+m)."""
    R = u.ring
    if u.is_zero() or v.is_zero():
        return TwistedPoly(R, [])
    out = [R.zero() for _ in range(len(u.coeffs) + len(v.coeffs) - 1)]
    for n, a in enumerate(u.coeffs):
        if R.is_zero(a):
            continue
        for m, b in enumerate(v.coeffs):
            if R.is_zero(b):
                continue
            out[n + m] = R.add(out[n + m], R.mul(a, R.frob(b, n)))
    return TwistedPoly(R, out)


def tau_valuation(u: TwistedPoly) -> int:
    """Smallest i with a nonzero tau^i coefficient."""
    for i, c in enumerate(u.coeffs):
        if not u.ring.is_zero(c):
            return i
    raise ValueError("tau-valuation of zero")


def reduce_coeffs(u: TwistedPoly, modulus) -> TwistedPoly:
    """Reduce every coefficient.

    ``modulus`` is a :class:`PrimeIdeal` (or its generator) for polynomial
    coefficient rings -- the result lives over A/(pi) -- or an integer ``n``
    for a :class:`LocalRing`, giving coefficients mod theta^n.
    """
    R = u.ring
    if isinstance(R, LocalRing):
        if not isinstance(modulus, int) or modulus < 0:
            raise TypeError("local rings reduce modulo theta^n for an integer n")
        if modulus > R.N:
            raise ValueError(f"cannot reduce mod theta^{modulus} inside theta^{R.N}")
        S = R.truncated(max(modulus, 1))
        if modulus == 0:
            return TwistedPoly(S, [])
        return TwistedPoly(S, [S.elem(c.coeffs) for c in u.coeffs])
    if isinstance(R, PolyRing):
        prime = modulus if isinstance(modulus, PrimeIdeal) else PrimeIdeal(modulus)
        if R.level > Level.FQ:
            raise TypeError("reduction modulo a prime is defined here for A-coefficients only")
        S = QuotientRing(prime)
        return TwistedPoly(S, [S.from_A(c) for c in u.coeffs])
    raise TypeError(f"no reduction defined for {type(R).__name__}")
