"""Finite field towers F_p < F_q < F_{q^r}.

Every element of the tower is stored as one integer *code*: the coordinate
vector over F_p in the nested basis ``a^i b^j`` (``a`` generates F_q over
F_p, ``b`` generates F_{q^r} over F_q) read as base-p digits, coordinate
``i + e*j`` being the digit of weight ``p**(i + e*j)``.  With this basis the
embeddings F_p -> F_q -> F_{q^r} are the identity on codes: an element lies in
F_q exactly when its code is below ``q``.

Defining polynomials are the smallest monic irreducibles in the order of the
integer ``sum(code(c_i) * s**i)`` over the coefficients below the leading
one (``s`` the size of the base field).  They are not Conway polynomials.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator

import numpy as np

from .errors import CapExceededError

DEFAULT_CAP = 10**7
# full Q x Q add/mul tables are only materialised below this size
TABLE_LIMIT = 1024


class Level(IntEnum):
    FP = 0
    FQ = 1
    FQR = 2


def is_prime(n: int) -> bool:
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


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``; raise ValueError otherwise."""
    if q < 2:
        raise ValueError(f"q={q} is not a prime power")
    factors = prime_factors(q)
    if len(factors) != 1:
        raise ValueError(f"q={q} is not a prime power")
    p = factors[0]
    e = round(math.log(q, p))
    if p**e != q:
        raise ValueError(f"q={q} is not a prime power")
    return p, e


@dataclass(frozen=True)
class FieldSpec:
    p: int
    e: int = 1
    r: int = 1

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def order(self) -> int:
        return self.q**self.r


# -- small-field helpers used only while the tower is being built ----------

class _SmallField:
    """Table arithmetic for a field of size ``s`` given by its codes 0..s-1."""

    def __init__(self, s, add, mul):
        self.s = s
        self.add = add
        self.mul = mul
        self.neg = [next(b for b in range(s) if add[a][b] == 0) for a in range(s)]


def _prime_field(p: int) -> _SmallField:
    add = [[(a + b) % p for b in range(p)] for a in range(p)]
    mul = [[(a * b) % p for b in range(p)] for a in range(p)]
    return _SmallField(p, add, mul)


def _polymulmod(a, b, f, F: _SmallField):
    """Product of coefficient lists ``a*b`` reduced modulo monic ``f``."""
    d = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            prod[i + j] = F.add[prod[i + j]][F.mul[x][y]]
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k]
        if c == 0:
            continue
        # x^k = x^(k-d) * x^d and x^d = -(f_0 + ... + f_{d-1} x^{d-1})
        for t in range(d):
            prod[k - d + t] = F.add[prod[k - d + t]][F.mul[F.neg[c]][f[t]]]
        prod[k] = 0
    prod = prod[:d] + [0] * max(0, d - len(prod))
    return prod


def _divides(g, f, F: _SmallField) -> bool:
    """True iff monic ``g`` divides ``f`` (coefficient lists, low to high)."""
    rem = list(f)
    dg = len(g) - 1
    for k in range(len(rem) - 1, dg - 1, -1):
        c = rem[k]
        if c == 0:
            continue
        for t in range(dg + 1):
            rem[k - dg + t] = F.add[rem[k - dg + t]][F.mul[F.neg[c]][g[t]]]
    return all(c == 0 for c in rem[:dg])


def _monic(deg: int, idx: int, s: int) -> list[int]:
    coeffs = []
    for _ in range(deg):
        coeffs.append(idx % s)
        idx //= s
    return coeffs + [1]


def _smallest_irreducible(deg: int, F: _SmallField) -> list[int]:
    """Smallest monic irreducible of degree ``deg`` by exhaustive trial division."""
    s = F.s
    for idx in range(s**deg):
        f = _monic(deg, idx, s)
        if f[0] == 0 and deg > 1:
            continue
        if all(
            not _divides(_monic(dg, j, s), f, F)
            for dg in range(1, deg // 2 + 1)
            for j in range(s**dg)
        ):
            return f
    raise RuntimeError(f"no irreducible polynomial of degree {deg}")  # pragma: no cover


def _extension(F: _SmallField, f) -> _SmallField:
    """Tables for F[x]/(f) with codes ``sum(c_j * s**j)``."""
    s, d = F.s, len(f) - 1
    size = s**d
    vecs = [[(c // s**j) % s for j in range(d)] for c in range(size)]
    weights = [s**j for j in range(d)]

    def enc(v):
        return sum(x * w for x, w in zip(v, weights))

    add = [[enc([F.add[x][y] for x, y in zip(vecs[a], vecs[b])]) for b in range(size)]
           for a in range(size)]
    mul = [[enc(_polymulmod(vecs[a], vecs[b], f, F)) for b in range(size)] for a in range(size)]
    return _SmallField(size, add, mul)


class FieldTower:
    """The tower F_p < F_q < F_{q^r} attached to a :class:`FieldSpec`.

    Scalar operations act on integer codes; ``*_v`` variants act elementwise
    on integer arrays.  Towers are immutable once built.
    """

    def __init__(self, spec: FieldSpec, cap: int = DEFAULT_CAP):
        p, e, r = spec.p, spec.e, spec.r
        if not is_prime(p):
            raise ValueError(f"p={p} is not prime")
        if e < 1 or r < 1:
            raise ValueError("e and r must be positive")
        if spec.order > cap:
            raise CapExceededError(f"field of size {spec.order} exceeds the cap {cap}")
        self.spec = spec
        self.p, self.e, self.r = p, e, r
        self.q = spec.q
        self.order = spec.order
        self.degree = e * r
        self.cap = cap

        Fp = _prime_field(p)
        self.base_poly = _smallest_irreducible(e, Fp) if e > 1 else [0, 1]
        Fq = _extension(Fp, self.base_poly) if e > 1 else Fp
        self.top_poly = _smallest_irreducible(r, Fq) if r > 1 else [0, 1]
        self._Fq = Fq

        k = self.degree
        Q = self.order
        self.weights = np.array([p**t for t in range(k)], dtype=np.int64)
        codes = np.arange(Q, dtype=np.int64)
        self.digits = (codes[:, None] // self.weights[None, :]) % p

        self._build_log_tables()
        self._build_frobenius()
        if Q <= TABLE_LIMIT:
            self.add_table = self.add_v(codes[:, None], codes[None, :])
            self.mul_table = self.mul_v(codes[:, None], codes[None, :])
        else:
            self.add_table = self.mul_table = None

    # -- construction -------------------------------------------------------

    def _slow_mul(self, a: int, b: int) -> int:
        """Multiply through the defining polynomials; used before tables exist."""
        if self.r == 1:
            return self._Fq.mul[a][b]
        q = self.q
        va = [(a // q**j) % q for j in range(self.r)]
        vb = [(b // q**j) % q for j in range(self.r)]
        prod = _polymulmod(va, vb, self.top_poly, self._Fq)
        return sum(c * q**j for j, c in enumerate(prod))

    def _slow_pow(self, a: int, n: int) -> int:
        result, base = 1, a
        while n:
            if n & 1:
                result = self._slow_mul(result, base)
            base = self._slow_mul(base, base)
            n >>= 1
        return result

    def _build_log_tables(self):
        Q = self.order
        n = Q - 1
        if Q == 2:
            gen = 1
        else:
            ells = prime_factors(n)
            gen = next(
                g for g in range(2, Q)
                if all(self._slow_pow(g, n // ell) != 1 for ell in ells)
            )
        self.generator = gen
        k = self.degree
        # multiplication by the generator as an F_p-linear map on coordinates
        cols = [self.digits[self._slow_mul(gen, int(self.weights[t]))] for t in range(k)]
        mat = np.array(cols, dtype=np.int64).T
        exp = np.empty(n, dtype=np.int64)
        v = self.digits[1].copy()
        for t in range(n):
            exp[t] = int(v @ self.weights)
            v = (mat @ v) % self.p
        log = np.full(Q, -1, dtype=np.int64)
        log[exp] = np.arange(n, dtype=np.int64)
        self.exp = exp
        self.log = log
        self._exp_list = exp.tolist()
        self._log_list = log.tolist()
        # Zech logarithms: zech[t] = log(1 + g^t), or -1 when 1 + g^t = 0
        one_plus = self._add_one_v(exp)
        self._zech_list = log[one_plus].tolist()
        self.neg_one = self.p - 1

    def _build_frobenius(self):
        """Tables of x -> x^(q^i) for 0 <= i < r."""
        Q, n = self.order, self.order - 1
        frob = np.zeros((self.r, Q), dtype=np.int64)
        nz = np.arange(1, Q)
        for i in range(self.r):
            frob[i, nz] = self.exp[(self.log[nz] * pow(self.q, i, n if n else 1)) % max(n, 1)]
        self.frob_table = frob
        self._frob_lists = [row.tolist() for row in frob]

    def _add_one_v(self, codes):
        d0 = codes % self.p
        return codes - d0 + (d0 + 1) % self.p

    # -- scalar arithmetic on codes -------------------------------------------

    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        la, lb = self._log_list[a], self._log_list[b]
        n = self.order - 1
        z = self._zech_list[(lb - la) % n]
        if z < 0:
            return 0
        return self._exp_list[(la + z) % n]

    def neg(self, a: int) -> int:
        return self.mul(self.neg_one, a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp_list[(self._log_list[a] + self._log_list[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        n = self.order - 1
        return self._exp_list[(-self._log_list[a]) % n]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if k == 0:
            return 1
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 0
        n = self.order - 1
        return self._exp_list[(self._log_list[a] * k) % n]

    def frob(self, a: int, i: int = 1) -> int:
        """``a ** (q ** i)``."""
        return self._frob_lists[i % self.r][a]

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` in the prime field."""
        return n % self.p

    # -- vectorised arithmetic --------------------------------------------------

    def encode(self, digits):
        return (np.asarray(digits) % self.p) @ self.weights

    def add_v(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        return ((self.digits[a] + self.digits[b]) % self.p) @ self.weights

    def neg_v(self, a):
        return ((-self.digits[np.asarray(a)]) % self.p) @ self.weights

    def mul_v(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        out = np.zeros(a.shape, dtype=np.int64)
        nz = (a != 0) & (b != 0)
        out[nz] = self.exp[(self.log[a[nz]] + self.log[b[nz]]) % (self.order - 1)]
        return out

    def frob_v(self, a, i: int = 1):
        return self.frob_table[i % self.r][np.asarray(a)]

    # -- levels -----------------------------------------------------------------

    def level_degree(self, level: Level) -> int:
        """Absolute degree over F_p of a level."""
        return (1, self.e, self.degree)[level]

    def level_size(self, level: Level) -> int:
        return self.p ** self.level_degree(level)

    def level_of(self, code: int) -> Level:
        """Smallest level containing ``code``."""
        if code < self.p:
            return Level.FP
        if code < self.q:
            return Level.FQ
        return Level.FQR

    def in_level(self, code: int, level: Level) -> bool:
        return code < self.level_size(level)

    def elem(self, value, level: Level | None = None) -> "FieldElem":
        """Wrap a code (int) or an F_p coordinate vector as a :class:`FieldElem`."""
        if isinstance(value, FieldElem):
            code = value.code
        elif isinstance(value, (int, np.integer)):
            code = int(value)
        else:
            coords = list(value)
            if len(coords) > self.degree:
                raise ValueError("too many coordinates for this tower")
            code = int(sum((int(c) % self.p) * self.p**t for t, c in enumerate(coords)))
        if not 0 <= code < self.order:
            raise ValueError(f"code {code} outside the field of size {self.order}")
        minimal = self.level_of(code)
        if level is None:
            level = minimal
        elif minimal > level:
            raise ValueError(f"element {code} does not lie in level {Level(level).name}")
        return FieldElem(self, code, Level(level))

    def zero(self, level: Level = Level.FP) -> "FieldElem":
        return FieldElem(self, 0, level)

    def one(self, level: Level = Level.FP) -> "FieldElem":
        return FieldElem(self, 1, level)

    def enumerate(self, level: Level = Level.FQR) -> Iterator["FieldElem"]:
        """Every element of ``level`` exactly once, in increasing code order."""
        size = self.level_size(level)
        if size > self.cap:
            raise CapExceededError(f"level of size {size} exceeds the cap {self.cap}")
        for code in range(size):
            yield FieldElem(self, code, level)

    def codes(self, level: Level = Level.FQR) -> np.ndarray:
        size = self.level_size(level)
        if size > self.cap:
            raise CapExceededError(f"level of size {size} exceeds the cap {self.cap}")
        return np.arange(size, dtype=np.int64)

    # -- relative trace and norm to F_q ----------------------------------------------

    def trace_code(self, a: int) -> int:
        acc = 0
        for i in range(self.r):
            acc = self.add(acc, self.frob(a, i))
        return acc

    def norm_code(self, a: int) -> int:
        if a == 0:
            return 0
        n = self.order - 1
        # N(x) = x^(1 + q + ... + q^(r-1))
        e = (self.order - 1) // (self.q - 1) if self.q > 1 else 1
        return self._exp_list[(self._log_list[a] * e) % n]

    def trace_v(self, a):
        a = np.asarray(a)
        acc = np.zeros(a.shape, dtype=np.int64)
        for i in range(self.r):
            acc = self.add_v(acc, self.frob_v(a, i))
        return acc

    def norm_v(self, a):
        a = np.asarray(a)
        out = np.zeros(a.shape, dtype=np.int64)
        nz = a != 0
        e = (self.order - 1) // (self.q - 1)
        out[nz] = self.exp[(self.log[a[nz]] * e) % (self.order - 1)]
        return out

    def subfield_codes(self, degree: int) -> np.ndarray:
        """Codes of the subfield F_{q^degree} (``degree`` must divide ``r``)."""
        if self.r % degree:
            raise ValueError(f"F_q^{degree} is not a subfield of F_q^{self.r}")
        step = (self.order - 1) // (self.q**degree - 1)
        nonzero = self.exp[np.arange(0, self.order - 1, step)]
        return np.sort(np.concatenate([[0], nonzero]))

    def describe(self) -> dict:
        """Defining data for report headers."""
        return {
            "p": self.p,
            "e": self.e,
            "r": self.r,
            "base_poly": list(self.base_poly),
            "top_poly": list(self.top_poly),
            "convention": "smallest monic irreducible (integer order of coefficient codes)",
        }

    def __repr__(self):
        return f"FieldTower(p={self.p}, e={self.e}, r={self.r})"


@functools.lru_cache(maxsize=None)
def build_tower(spec: FieldSpec, cap: int = DEFAULT_CAP) -> FieldTower:
    """Construct (or fetch the cached) tower for ``spec``."""
    return FieldTower(spec, cap)


def tower_for(q: int, r: int, cap: int = DEFAULT_CAP) -> FieldTower:
    p, e = prime_power(q)
    return build_tower(FieldSpec(p, e, r), cap)


class FieldElem:
    """An element of a :class:`FieldTower` tagged with the level it lives in."""

    __slots__ = ("tower", "code", "level")

    def __init__(self, tower: FieldTower, code: int, level: Level = Level.FQR):
        self.tower = tower
        self.code = code
        self.level = level

    @property
    def coords(self) -> list[int]:
        k = self.tower.level_degree(self.level)
        return [int(d) for d in self.tower.digits[self.code][:k]]

    def _coerce(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.tower is not self.tower:
                raise TypeError("elements of different towers")
            return other
        if isinstance(other, (int, np.integer)):
            return FieldElem(self.tower, self.tower.from_int(int(other)), Level.FP)
        return NotImplemented

    def _new(self, code, other=None):
        level = self.level if other is None else max(self.level, other.level)
        return FieldElem(self.tower, code, Level(level))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(self.tower.add(self.code, other.code), other)

    __radd__ = __add__

    def __neg__(self):
        return self._new(self.tower.neg(self.code))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(self.tower.sub(self.code, other.code), other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(self.tower.mul(self.code, other.code), other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(self.tower.div(self.code, other.code), other)

    def __pow__(self, k: int):
        return self._new(self.tower.pow(self.code, k))

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.code == self.tower.from_int(int(other))
        if isinstance(other, FieldElem):
            return self.tower is other.tower and self.code == other.code
        return NotImplemented

    def __hash__(self):
        return hash((id(self.tower), self.code))

    def __bool__(self):
        return self.code != 0

    def inverse(self) -> "FieldElem":
        return self._new(self.tower.inv(self.code))

    def frobenius(self, i: int = 1) -> "FieldElem":
        return frobenius(self, i)

    def __repr__(self):
        return f"FieldElem({self.code}, {self.level.name})"


def frobenius(x: FieldElem, i: int = 1) -> FieldElem:
    """``x ** (q ** i)``; the identity on F_q and of order ``r`` on F_{q^r}."""
    return FieldElem(x.tower, x.tower.frob(x.code, i), x.level)


def trace(x: FieldElem) -> FieldElem:
    """Relative trace F_{q^r} -> F_q."""
    code = x.tower.trace_code(x.code)
    assert code < x.tower.q, "trace left F_q"
    return FieldElem(x.tower, code, Level.FQ)


def norm(x: FieldElem) -> FieldElem:
    """Relative norm F_{q^r} -> F_q."""
    code = x.tower.norm_code(x.code)
    assert code < x.tower.q, "norm left F_q"
    return FieldElem(x.tower, code, Level.FQ)
