"""Basic J-invariants: exponent tuples, evaluation and valuation checks."""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .drinfeld import DrinfeldModule, iso_scalars
from .errors import CapExceededError, TruncationError
from .ffield import DEFAULT_CAP
from .polyring import Poly
from .twisted import FieldRing, LocalRing, PolyRing


@dataclass(frozen=True)
class DeltaTuple:
    """Exponents (delta_1, ..., delta_{r-1}; delta_r) of a basic J-invariant."""

    deltas: tuple[int, ...]
    delta_r: int

    @property
    def r(self) -> int:
        return len(self.deltas) + 1

    @property
    def total(self) -> int:
        return sum(self.deltas)

    def satisfies(self, q: int) -> bool:
        """Re-check the weight condition and the range/gcd condition from scratch."""
        r = self.r
        weight = sum(d * (q**i - 1) for i, d in enumerate(self.deltas, start=1))
        if weight != self.delta_r * (q**r - 1):
            return False
        for i, d in enumerate(self.deltas, start=1):
            if not 0 <= d <= (q**r - 1) // (q ** math.gcd(i, r) - 1):
                return False
        return self.delta_r > 0 and math.gcd(*self.deltas, self.delta_r) == 1

    def to_json(self) -> dict:
        return {"deltas": list(self.deltas), "delta_r": self.delta_r}

    def __str__(self):
        return f"({', '.join(map(str, self.deltas))}; {self.delta_r})"


def delta_tuple(q: int, deltas: Sequence[int]) -> DeltaTuple:
    """Complete (delta_1..delta_{r-1}) with the delta_r forced by the weight condition."""
    r = len(deltas) + 1
    weight = sum(d * (q**i - 1) for i, d in enumerate(deltas, start=1))
    if weight % (q**r - 1):
        raise ValueError(f"{tuple(deltas)} has weight not divisible by q^{r}-1")
    d = DeltaTuple(tuple(int(x) for x in deltas), weight // (q**r - 1))
    if not d.satisfies(q):
        raise ValueError(f"{d} is not a basic J-invariant for q={q}")
    return d


def delta_bounds(q: int, r: int) -> list[int]:
    return [(q**r - 1) // (q ** math.gcd(i, r) - 1) for i in range(1, r)]


@functools.lru_cache(maxsize=64)
def enumerate_delta_tuples(q: int, r: int, cap: int = DEFAULT_CAP) -> tuple[DeltaTuple, ...]:
    """Every basic tuple for (q, r), lexicographic in (delta_1, ..., delta_{r-1})."""
    if q < 2 or r < 2:
        raise ValueError("need q >= 2 and r >= 2")
    bounds = delta_bounds(q, r)
    space = math.prod(b + 1 for b in bounds)
    if space > cap:
        raise CapExceededError(f"delta search space {space} exceeds the cap {cap}")
    modulus = q**r - 1
    weights = np.array([q**i - 1 for i in range(1, r)], dtype=np.int64)
    rest_shape = tuple(b + 1 for b in bounds[1:])
    rest = np.indices(rest_shape).reshape(len(rest_shape), -1).T if rest_shape else np.zeros((1, 0), np.int64)
    rest_weight = rest @ weights[1:]
    out = []
    for d1 in range(bounds[0] + 1):
        w = rest_weight + d1 * weights[0]
        keep = (w % modulus == 0) & (w > 0)
        if not keep.any():
            continue
        rows = rest[keep]
        dr = w[keep] // modulus
        g = np.gcd.reduce(np.column_stack([np.full(len(rows), d1), rows, dr]), axis=1)
        for row, d_r in zip(rows[g == 1], dr[g == 1]):
            out.append(DeltaTuple((d1, *map(int, row)), int(d_r)))
    return tuple(out)


@dataclass(frozen=True, order=False)
class ValuationQ:
    """Exact rational valuation; ``infinite`` marks the valuation of zero."""

    num: int = 0
    den: int = 1
    infinite: bool = False

    def __post_init__(self):
        if self.infinite:
            object.__setattr__(self, "num", 0)
            object.__setattr__(self, "den", 1)
            return
        if self.den == 0:
            raise ValueError("zero denominator")
        f = Fraction(self.num, self.den)
        object.__setattr__(self, "num", f.numerator)
        object.__setattr__(self, "den", f.denominator)

    @classmethod
    def inf(cls) -> "ValuationQ":
        return cls(infinite=True)

    @classmethod
    def of(cls, value) -> "ValuationQ":
        f = Fraction(value)
        return cls(f.numerator, f.denominator)

    @property
    def fraction(self) -> Fraction:
        if self.infinite:
            raise ValueError("infinite valuation has no finite value")
        return Fraction(self.num, self.den)

    def _key(self, other):
        if isinstance(other, ValuationQ):
            return other
        return ValuationQ.of(other)

    def __ge__(self, other):
        other = self._key(other)
        if self.infinite:
            return True
        if other.infinite:
            return False
        return self.fraction >= other.fraction

    def __gt__(self, other):
        other = self._key(other)
        if other.infinite:
            return False
        if self.infinite:
            return True
        return self.fraction > other.fraction

    def __le__(self, other):
        return not self > other

    def __lt__(self, other):
        return not self >= other

    def __eq__(self, other):
        if not isinstance(other, (ValuationQ, int, Fraction)):
            return NotImplemented
        other = self._key(other)
        return (self.infinite, self.num, self.den) == (other.infinite, other.num, other.den)

    def __hash__(self):
        return hash((self.infinite, self.num, self.den))

    def to_json(self):
        return {"inf": True} if self.infinite else {"num": self.num, "den": self.den}

    def __str__(self):
        if self.infinite:
            return "+inf"
        return str(self.num) if self.den == 1 else f"{self.num}/{self.den}"


def _rpow(ring, a, k: int):
    if hasattr(ring, "pow"):
        return ring.pow(a, k)
    result, base = ring.one(), a
    while k:
        if k & 1:
            result = ring.mul(result, base)
        k >>= 1
        if k:
            base = ring.mul(base, base)
    return result


@dataclass
class JValue:
    """A J-value kept as numerator/denominator over the module's ring."""

    ring: object
    num: object
    den: object

    def value(self):
        R = self.ring
        if isinstance(R, LocalRing):
            return R.mul(self.num, R.inv(self.den))
        if isinstance(R, FieldRing):
            return self.num / self.den
        if isinstance(R, PolyRing):
            quot, rem = divmod(self.num, self.den)
            if rem:
                raise ValueError("J-value is not a polynomial; use num/den")
            return quot
        raise TypeError(f"cannot divide in {type(R).__name__}")

    def __eq__(self, other):
        if not isinstance(other, JValue):
            return NotImplemented
        R = self.ring
        return R.is_zero(R.sub(R.mul(self.num, other.den), R.mul(other.num, self.den)))

    __hash__ = None


def eval_J(phi: DrinfeldModule, d: DeltaTuple) -> JValue:
    """g_1^d_1 ... g_{r-1}^d_{r-1} / Delta^d_r as a numerator/denominator pair."""
    if d.r != phi.rank:
        raise ValueError(f"tuple for rank {d.r} applied to a rank-{phi.rank} module")
    R = phi.ring
    if R.is_zero(phi.delta):
        raise ValueError("Delta = 0")
    num = R.one()
    for gi, di in zip(phi.g, d.deltas):
        if di:
            num = R.mul(num, _rpow(R, gi, di))
    return JValue(R, num, _rpow(R, phi.delta, d.delta_r))


def check_relation_r3(phi: DrinfeldModule) -> bool:
    """J^(q^2+q+1, 0) * (J^(0, q^2+q+1))^q == (J^(1, q))^(q^2+q+1), exactly."""
    if phi.rank != 3:
        raise ValueError("the relation is stated for rank 3")
    R = phi.ring
    q = R.tower.q
    s = q * q + q + 1
    a = eval_J(phi, DeltaTuple((s, 0), 1))
    b = eval_J(phi, DeltaTuple((0, s), q + 1))
    c = eval_J(phi, DeltaTuple((1, q), 1))
    lhs = JValue(R, R.mul(a.num, _rpow(R, b.num, q)), R.mul(a.den, _rpow(R, b.den, q)))
    rhs = JValue(R, _rpow(R, c.num, s), _rpow(R, c.den, s))
    return lhs == rhs


def theta_valuation(x: Poly, e: int) -> ValuationQ:
    """ord_p(x) = (theta-adic order of x) / e, with T = theta^e."""
    v = x.valuation()
    if v is None:
        return ValuationQ.inf()
    return ValuationQ(v, e)


def default_truncation(e: int, d: DeltaTuple) -> int:
    return 4 * e * max(*d.deltas, d.delta_r) + 1


@dataclass
class JestReport:
    """Both sides of the J-difference valuation estimates at one truncation.

    ``lhs_is_lower_bound`` marks a J-difference that vanishes modulo theta^N
    after the iso counts have already dropped to zero: the valuation is then
    only known to be at least N.
    """

    lhs: ValuationQ
    iso_counts: list[int]
    rhs_general: Fraction
    rhs_lemma: Fraction | None = None
    rhs_sparse: Fraction | None = None
    sparse_j: int | None = None
    sparse_constant: Fraction | None = None
    N: int = 0
    lhs_is_lower_bound: bool = False
    holds: bool = field(init=False)

    def __post_init__(self):
        self.holds = all(self.lhs >= s for s in self.sides())

    def sides(self) -> list[Fraction]:
        return [s for s in (self.rhs_general, self.rhs_lemma, self.rhs_sparse) if s is not None]

    def to_json(self) -> dict:
        def frac(f):
            return None if f is None else {"num": f.numerator, "den": f.denominator}
        return {
            "lhs": self.lhs.to_json(),
            "lhs_is_lower_bound": self.lhs_is_lower_bound,
            "iso_counts": self.iso_counts,
            "rhs_general": frac(self.rhs_general),
            "rhs_lemma": frac(self.rhs_lemma),
            "rhs_sparse": frac(self.rhs_sparse),
            "sparse_j": self.sparse_j,
            "N": self.N,
            "holds": self.holds,
        }


def _sparse_index(mod: DrinfeldModule) -> int | None:
    """j if phi_T = T + tau^j + tau^r exactly, else None."""
    R = mod.ring
    nonzero = [j for j, g in enumerate(mod.g, start=1) if not R.is_zero(g)]
    if len(nonzero) == 1 and R.is_zero(R.sub(mod.g[nonzero[0] - 1], R.one())):
        return nonzero[0]
    return None


def _is_plain(mod: DrinfeldModule) -> bool:
    return all(mod.ring.is_zero(g) for g in mod.g)


def check_jest_bound(phi: DrinfeldModule, psi: DrinfeldModule, d: DeltaTuple,
                     N: int | None = None) -> JestReport:
    """Compare nu(J(phi) - J(psi)) with the isomorphism-count lower bounds.

    The iso counts are summed over levels 1..N.  A pair still isomorphic at
    the full precision of the ring is isomorphic as given, so the
    J-difference must vanish and is reported as +inf.  A pair still
    isomorphic at a level N below the precision raises TruncationError,
    because the sum may not have stabilized.  Once the counts reach zero the
    sum is final; a J-difference vanishing modulo theta^N then certifies
    nu >= N, and TruncationError is raised only when that is not enough to
    decide the inequality.
    """
    R = phi.ring
    if not isinstance(R, LocalRing):
        raise TypeError("check_jest_bound works over a LocalRing")
    N = R.N if N is None else N
    if not 1 <= N <= R.N:
        raise ValueError(f"truncation {N} outside 1..{R.N}")
    q, r = R.q, phi.rank
    counts = []
    for n in range(1, N + 1):
        c = len(iso_scalars(phi, psi, n))
        counts.append(c)
        if c == 0:
            counts.extend([0] * (N - n))
            break
    total = sum(counts)
    modulus = q**r - 1
    report = dict(iso_counts=counts, rhs_general=Fraction(total, modulus), N=N)
    if _is_plain(psi) or _is_plain(phi):
        report["rhs_lemma"] = Fraction(d.total * total, modulus)
    for mod in (phi, psi):
        j = _sparse_index(mod)
        if j is not None:
            const = Fraction(d.total - d.deltas[j - 1], math.gcd(modulus, q**j - 1))
            report.update(sparse_j=j, sparse_constant=const, rhs_sparse=const * total)
            break
    diff = R.reduce(R.sub(eval_J(phi, d).value(), eval_J(psi, d).value()), N)
    if counts[-1] > 0:
        if N < R.N:
            raise TruncationError(f"still isomorphic at level {N}; the iso-count sum has not stabilized")
        if not diff.is_zero():
            raise AssertionError("isomorphic modules with different J-values")
        return JestReport(lhs=ValuationQ.inf(), **report)
    if diff.is_zero():
        rep = JestReport(lhs=ValuationQ(N), lhs_is_lower_bound=True, **report)
        if not rep.holds:
            raise TruncationError(f"J-difference vanishes modulo theta^{N}; raise the truncation")
        return rep
    return JestReport(lhs=ValuationQ(diff.valuation()), **report)
