"""Dense univariate polynomials over the levels of a :class:`FieldTower`.

One class covers A = F_q[T], O_H = F_{q^r}[T], residue rings A/(pi) and the
theta-polynomials used by truncated local rings (only the variable name
differs).  Coefficients are stored low to high as tower codes.
"""
from __future__ import annotations

import itertools
import re
from typing import Iterable, Iterator, Sequence

import numpy as np

from .ffield import FieldElem, FieldTower, Level

# products with more coefficient pairs than this go through numpy
_NUMPY_MUL_THRESHOLD = 400


def _trim(coeffs: list[int]) -> tuple[int, ...]:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


def mul_codes(tower: FieldTower, a: Sequence[int], b: Sequence[int],
              trunc: int | None = None) -> list[int]:
    """Coefficient list of ``a*b``, optionally truncated to ``trunc`` terms."""
    if not a or not b:
        return []
    length = len(a) + len(b) - 1
    if trunc is not None:
        length = min(length, trunc)
    if length <= 0:
        return []
    nza = [(i, x) for i, x in enumerate(a) if x and i < length]
    nzb = [(j, y) for j, y in enumerate(b) if y and j < length]
    if len(nza) * len(nzb) <= _NUMPY_MUL_THRESHOLD:
        out = [0] * length
        add, mul = tower.add, tower.mul
        for i, x in nza:
            for j, y in nzb:
                if i + j >= length:
                    break
                out[i + j] = add(out[i + j], mul(x, y))
        return out
    ia = np.array([i for i, _ in nza], dtype=np.int64)
    ca = np.array([x for _, x in nza], dtype=np.int64)
    jb = np.array([j for j, _ in nzb], dtype=np.int64)
    cb = np.array([y for _, y in nzb], dtype=np.int64)
    prods = tower.mul_v(ca[:, None], cb[None, :])
    pos = ia[:, None] + jb[None, :]
    keep = pos < length
    acc = np.zeros((length, tower.degree), dtype=np.int64)
    np.add.at(acc, pos[keep], tower.digits[prods[keep]])
    return tower.encode(acc).tolist()


class Poly:
    """Immutable polynomial with coefficients in one level of a tower."""

    __slots__ = ("tower", "coeffs", "level", "var")

    def __init__(self, tower: FieldTower, coeffs: Iterable[int] = (),
                 level: Level = Level.FQR, var: str = "T"):
        self.tower = tower
        self.coeffs = _trim([int(c) for c in coeffs])
        self.level = Level(level)
        self.var = var

    # -- constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, tower, level=Level.FQ, var="T") -> "Poly":
        return cls(tower, (), level, var)

    @classmethod
    def one(cls, tower, level=Level.FQ, var="T") -> "Poly":
        return cls(tower, (1,), level, var)

    @classmethod
    def gen(cls, tower, level=Level.FQ, var="T") -> "Poly":
        return cls(tower, (0, 1), level, var)

    @classmethod
    def constant(cls, tower, c, level=None, var="T") -> "Poly":
        if isinstance(c, FieldElem):
            code, lvl = c.code, c.level
        else:
            code = tower.from_int(int(c))
            lvl = Level.FP
        return cls(tower, (code,), lvl if level is None else level, var)

    @classmethod
    def from_elems(cls, elems: Sequence[FieldElem], level=None, var="T") -> "Poly":
        tower = elems[0].tower
        lvl = max(e.level for e in elems) if level is None else level
        return cls(tower, [e.code for e in elems], lvl, var)

    @classmethod
    def monomial(cls, tower, k: int, c: int = 1, level=Level.FQ, var="T") -> "Poly":
        return cls(tower, [0] * k + [c], level, var)

    def _like(self, coeffs, level=None) -> "Poly":
        return Poly(self.tower, coeffs, self.level if level is None else level, self.var)

    # -- basic queries ----------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def coeff(self, i: int) -> FieldElem:
        c = self.coeffs[i] if 0 <= i < len(self.coeffs) else 0
        return FieldElem(self.tower, c, self.level)

    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return self.leading() == 1

    def valuation(self) -> int | None:
        """Order of vanishing at 0; None for the zero polynomial."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def min_level(self) -> Level:
        return max((self.tower.level_of(c) for c in self.coeffs), default=Level.FP)

    # -- arithmetic ---------------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.tower is not self.tower:
                raise TypeError("polynomials over different towers")
            return other
        if isinstance(other, FieldElem):
            return Poly(self.tower, (other.code,), other.level, self.var)
        if isinstance(other, (int, np.integer)):
            return Poly(self.tower, (self.tower.from_int(int(other)),), Level.FP, self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        add = self.tower.add
        out = [add(x, y) for x, y in itertools.zip_longest(a, b, fillvalue=0)]
        return self._like(out, max(self.level, other.level))

    __radd__ = __add__

    def __neg__(self):
        neg = self.tower.neg
        return self._like([neg(c) for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._like(mul_codes(self.tower, self.coeffs, other.coeffs),
                          max(self.level, other.level))

    __rmul__ = __mul__

    def scale(self, c: int) -> "Poly":
        mul = self.tower.mul
        return self._like([mul(c, x) for x in self.coeffs])

    def shift(self, k: int) -> "Poly":
        """Multiply by ``var**k``."""
        if not self.coeffs:
            return self
        return self._like([0] * k + list(self.coeffs))

    def truncate(self, n: int) -> "Poly":
        return self._like(self.coeffs[:n])

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = self._like((1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other) -> tuple["Poly", "Poly"]:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        T = self.tower
        rem = list(self.coeffs)
        d = other.degree
        inv_lead = T.inv(other.leading())
        quot = [0] * max(0, len(rem) - d)
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            f = T.mul(c, inv_lead)
            quot[k - d] = f
            nf = T.neg(f)
            for t, g in enumerate(other.coeffs):
                if g:
                    rem[k - d + t] = T.add(rem[k - d + t], T.mul(nf, g))
        level = max(self.level, other.level)
        return self._like(quot, level), self._like(rem[:d], level)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.tower is other.tower and self.coeffs == other.coeffs
        if isinstance(other, (int, np.integer, FieldElem)):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.tower), self.coeffs))

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self.scale(self.tower.inv(self.leading()))

    def __call__(self, x):
        """Evaluate at a field element (Horner)."""
        T = self.tower
        code = x.code if isinstance(x, FieldElem) else T.from_int(int(x))
        acc = 0
        for c in reversed(self.coeffs):
            acc = T.add(T.mul(acc, code), c)
        level = max(self.level, x.level) if isinstance(x, FieldElem) else self.level
        return FieldElem(T, acc, level)

    def compose(self, other: "Poly") -> "Poly":
        acc = self._like(())
        for c in reversed(self.coeffs):
            acc = acc * other + self._like((c,))
        return acc

    def pow_mod(self, k: int, modulus: "Poly") -> "Poly":
        result = self._like((1,)) % modulus
        base = self % modulus
        while k:
            if k & 1:
                result = (result * base) % modulus
            k >>= 1
            if k:
                base = (base * base) % modulus
        return result

    def __repr__(self):
        return f"Poly({format_poly(self)})"

    def to_json(self) -> list[list[int]]:
        """Coefficients low to high, each as its coordinate vector over F_p."""
        return [self.coeff(i).coords for i in range(len(self.coeffs))]

    @classmethod
    def from_json(cls, tower, data, level=Level.FQR, var="T") -> "Poly":
        return cls(tower, [tower.elem(c).code for c in data], level, var)


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor (zero if both inputs are zero)."""
    while b:
        a, b = b, a % b
    return a.monic()


def frobenius_poly(f: Poly, i: int = 1) -> Poly:
    """Apply sigma^i (the q^i-power map) to every coefficient of ``f``."""
    T = f.tower
    return f._like([T.frob(c, i) for c in f.coeffs])


def poly_trace(f: Poly) -> Poly:
    """f + sigma(f) + ... + sigma^(r-1)(f); lands in F_q[T]."""
    acc = f
    for i in range(1, f.tower.r):
        acc = acc + frobenius_poly(f, i)
    assert all(c < f.tower.q for c in acc.coeffs), "trace left F_q[T]"
    return acc._like(acc.coeffs, Level.FQ)


def poly_norm(f: Poly) -> Poly:
    """f * sigma(f) * ... * sigma^(r-1)(f); lands in F_q[T]."""
    acc = f
    for i in range(1, f.tower.r):
        acc = acc * frobenius_poly(f, i)
    assert all(c < f.tower.q for c in acc.coeffs), "norm left F_q[T]"
    return acc._like(acc.coeffs, Level.FQ)


def is_irreducible(f: Poly) -> bool:
    """Ben-Or test: no factor of degree <= deg/2 divides x^(s^i) - x."""
    if f.is_zero():
        raise ValueError("irreducibility of the zero polynomial")
    d = f.degree
    if d < 1:
        return False
    s = f.tower.level_size(f.level)
    x = f._like((0, 1))
    power = x
    for _ in range(1, d // 2 + 1):
        power = power.pow_mod(s, f)
        if gcd(f, power - x).degree > 0:
            return False
    return True


def monic_polys(tower: FieldTower, degree: int, level: Level = Level.FQ,
                var: str = "T") -> Iterator[Poly]:
    """All monic polynomials of ``degree`` over ``level`` in lexicographic order."""
    s = tower.level_size(level)
    for tail in itertools.product(range(s), repeat=degree):
        yield Poly(tower, tuple(reversed(tail)) + (1,), level, var)


def monic_irreducibles(tower: FieldTower, degree: int, level: Level = Level.FQ) -> list[Poly]:
    return [f for f in monic_polys(tower, degree, level) if is_irreducible(f)]


class PrimeIdeal:
    """The prime (pi) of A = F_q[T] given by its monic irreducible generator."""

    __slots__ = ("pi",)

    def __init__(self, pi: Poly):
        if not pi.is_monic() or pi.min_level() > Level.FQ:
            raise ValueError("a prime of A needs a monic generator with F_q coefficients")
        if not is_irreducible(Poly(pi.tower, pi.coeffs, Level.FQ)):
            raise ValueError(f"{format_poly(pi)} is not irreducible over F_q")
        self.pi = Poly(pi.tower, pi.coeffs, Level.FQ, pi.var)

    @property
    def degree(self) -> int:
        return self.pi.degree

    def __eq__(self, other):
        return isinstance(other, PrimeIdeal) and self.pi == other.pi

    def __hash__(self):
        return hash(self.pi)

    def __repr__(self):
        return f"PrimeIdeal({format_poly(self.pi)})"


# -- text form ---------------------------------------------------------------------

def format_poly(f: Poly) -> str:
    if not f.coeffs:
        return "0"
    terms = []
    for k in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[k]
        if c == 0:
            continue
        cs = "" if (c == 1 and k > 0) else (str(c) if c < f.tower.p else f"[{c}]")
        if k == 0:
            terms.append(cs or "1")
        elif k == 1:
            terms.append(f"{cs}{'*' if cs else ''}{f.var}")
        else:
            terms.append(f"{cs}{'*' if cs else ''}{f.var}^{k}")
    return " + ".join(terms)


_TERM = re.compile(r"^(?P<c>\d+)?\*?(?:(?P<var>[A-Za-z])(?:\^(?P<k>\d+))?)?$")


def parse_poly(text: str, tower: FieldTower, level: Level = Level.FQ, var: str = "T") -> Poly:
    """Parse ``"T^2+T"``, ``"2*T+1"`` or a comma list of codes ``"0,1,1"``.

    Integer coefficients in expressions are read in the prime field; the
    comma form gives tower codes low to high.
    """
    text = text.replace(" ", "")
    if not text:
        raise ValueError("empty polynomial")
    if "," in text:
        codes = [int(c) for c in text.split(",")]
        for c in codes:
            if c >= tower.level_size(level):
                raise ValueError(f"coefficient code {c} outside {level.name}")
        return Poly(tower, codes, level, var)
    acc = Poly.zero(tower, level, var)
    for sign, term in re.findall(r"([+-]?)([^+-]+)", text):
        m = _TERM.match(term)
        if not m or (m.group("var") and m.group("var") != var):
            raise ValueError(f"cannot parse term {term!r}")
        c = int(m.group("c")) if m.group("c") else 1
        k = 0
        if m.group("var"):
            k = int(m.group("k")) if m.group("k") else 1
        code = tower.from_int(-c if sign == "-" else c)
        acc = acc + Poly.monomial(tower, k, code, level, var)
    return Poly(tower, acc.coeffs, level, var)
