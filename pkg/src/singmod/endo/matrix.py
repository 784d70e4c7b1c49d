"""Matrices of left multiplication in the cyclic algebra H[tau]/(tau^r - pi).

An element x_1 + x_2 tau + ... + x_r tau^(r-1) with x_i in F_{q^r}[T] acts on
the basis 1, tau, ..., tau^(r-1) by a matrix whose row i (0-based) is sigma^i
applied to x cyclically shifted right by i, with every entry strictly below the
diagonal multiplied by pi.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from ..errors import ClosureError
from ..ffield import Level
from ..polyring import Poly, PrimeIdeal, format_poly, frobenius_poly

MAX_CHARPOLY_RANK = 4


def _fqr(p: Poly) -> Poly:
    return Poly(p.tower, p.coeffs, Level.FQR, p.var)


@dataclass(frozen=True)
class EndoMatrix:
    """The matrix attached to (x_1, ..., x_r) and the prime pi."""

    x: tuple
    pi: PrimeIdeal

    @property
    def r(self) -> int:
        return len(self.x)

    @property
    def tower(self):
        return self.pi.pi.tower

    def entry(self, i: int, j: int) -> Poly:
        e = frobenius_poly(self.x[(j - i) % self.r], i)
        return _fqr(self.pi.pi) * e if j < i else e

    def rows(self) -> list[list[Poly]]:
        return [[self.entry(i, j) for j in range(self.r)] for i in range(self.r)]

    def __eq__(self, other):
        return isinstance(other, EndoMatrix) and self.pi == other.pi and self.x == other.x

    def __hash__(self):
        return hash((self.x, self.pi))

    def __repr__(self):
        return f"EndoMatrix({', '.join(format_poly(v) for v in self.x)}; pi={format_poly(self.pi.pi)})"


def build_matrix(x: Sequence[Poly], pi: PrimeIdeal) -> EndoMatrix:
    tower = pi.pi.tower
    if len(x) != tower.r:
        raise ValueError(f"expected {tower.r} entries, got {len(x)}")
    if len(x) < 1:
        raise ValueError("empty vector")
    return EndoMatrix(tuple(_fqr(v) for v in x), pi)


def skew_product(a: Sequence[Poly], b: Sequence[Poly], pi: PrimeIdeal) -> tuple:
    """(sum a_i tau^i)(sum b_j tau^j) with tau c = sigma(c) tau and tau^r = pi."""
    r = len(a)
    tower = pi.pi.tower
    out = [Poly.zero(tower, Level.FQR) for _ in range(r)]
    P = _fqr(pi.pi)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            term = ai * frobenius_poly(bj, i)
            k = i + j
            if k >= r:
                term = term * P
                k -= r
            out[k] = out[k] + term
    return tuple(_fqr(v) for v in out)


def raw_mul(A: list[list[Poly]], B: list[list[Poly]]) -> list[list[Poly]]:
    n = len(A)
    tower = A[0][0].tower
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = Poly.zero(tower, Level.FQR)
            for k in range(n):
                acc = acc + A[i][k] * B[k][j]
            row.append(_fqr(acc))
        out.append(row)
    return out


def mat_mul(a: EndoMatrix, b: EndoMatrix) -> EndoMatrix:
    """Matrix product, read back as an EndoMatrix from its first row."""
    if a.pi != b.pi or a.r != b.r:
        raise ValueError("matrices over different primes or ranks")
    prod = raw_mul(a.rows(), b.rows())
    c = build_matrix(prod[0], a.pi)
    if any(prod[i][j] != c.entry(i, j) for i in range(a.r) for j in range(a.r)):
        raise ClosureError("the product is not a matrix of the cyclic algebra")
    return c


def identity(pi: PrimeIdeal) -> EndoMatrix:
    tower = pi.pi.tower
    return build_matrix([Poly.one(tower, Level.FQR)] + [Poly.zero(tower, Level.FQR)] * (tower.r - 1), pi)


def tau(pi: PrimeIdeal) -> EndoMatrix:
    tower = pi.pi.tower
    x = [Poly.zero(tower, Level.FQR)] * tower.r
    if tower.r > 1:
        x[1] = Poly.one(tower, Level.FQR)
    else:
        x[0] = _fqr(pi.pi)
    return build_matrix(x, pi)


@dataclass(frozen=True)
class CharPoly:
    """X^r + c_{r-1} X^(r-1) + ... + c_0 with c_k in F_q[T], stored low to high."""

    coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self):
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            mono = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            cs = format_poly(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts) or "0"


def principal_minor_sums(rows: list[list[Poly]]) -> list[Poly]:
    """e_k = sum of the k x k principal minors, by permutation expansion."""
    n = len(rows)
    tower = rows[0][0].tower
    out = []
    for k in range(1, n + 1):
        acc = Poly.zero(tower, Level.FQR)
        for subset in itertools.combinations(range(n), k):
            for perm in itertools.permutations(range(k)):
                inv = sum(1 for s in range(k) for t in range(s + 1, k) if perm[s] > perm[t])
                term = Poly.one(tower, Level.FQR)
                for s in range(k):
                    term = term * rows[subset[s]][subset[perm[s]]]
                acc = acc - term if inv % 2 else acc + term
        out.append(_fqr(acc))
    return out


def char_poly(a: EndoMatrix) -> CharPoly:
    """det(X - M) for r <= 4; the coefficients are checked to be sigma-invariant."""
    if a.r > MAX_CHARPOLY_RANK:
        raise ValueError(f"char_poly uses cofactor expansion and supports r <= {MAX_CHARPOLY_RANK}")
    e = principal_minor_sums(a.rows())
    q = a.tower.q
    coeffs = [None] * (a.r + 1)
    coeffs[a.r] = Poly.one(a.tower, Level.FQ)
    for k, ek in enumerate(e, start=1):
        c = -ek if k % 2 else ek
        if any(v >= q for v in c.coeffs):
            raise AssertionError("characteristic polynomial coefficient outside F_q[T]")
        coeffs[a.r - k] = Poly(a.tower, c.coeffs, Level.FQ)
    return CharPoly(tuple(coeffs))


def binomial_target(radicand: Poly, r: int) -> CharPoly:
    """X^r - radicand."""
    tower = radicand.tower
    coeffs = [Poly.zero(tower, Level.FQ)] * (r + 1)
    coeffs[0] = Poly(tower, (-radicand).coeffs, Level.FQ)
    coeffs[r] = Poly.one(tower, Level.FQ)
    return CharPoly(tuple(coeffs))
