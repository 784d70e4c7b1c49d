"""Exhaustive counts of level-n embeddings for O_K = A[s], s^r = radicand.

A candidate is x = (x_1, ..., x_r) in F_{q^r}[T]^r with x_k = pi^m x_k' for
k >= 2.  It is counted when the cyclic-algebra matrix of x has characteristic
polynomial X^r - radicand.

Degree window.  When gcd(deg pi, r) = 1 the algebra is a division algebra at
infinity and w(tau) = -deg(pi)/r, so the summands x_i tau^(i-1) have pairwise
distinct valuations mod Z and w(x) = min_i(-deg x_i - (i-1) deg(pi)/r).
From x^r = radicand, r w(x) = -deg(radicand), hence

    deg x_i <= floor((deg radicand - (i-1) deg pi) / r).

A negative bound empties the slot.  ``degree_audit`` widens the window and
checks that no new solutions appear.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import CapExceededError, DegreeAuditError
from ..ffield import DEFAULT_CAP, FieldTower, Level
from ..kernels import SearchPlan, run_search
from ..polyring import Poly, PrimeIdeal, format_poly, frobenius_poly, poly_norm, poly_trace
from .matrix import build_matrix, char_poly, principal_minor_sums

CROSS_EXPONENTS = ("derived", "printed")


@dataclass(frozen=True)
class MnFilter:
    """x_k = 0 mod pi^m for k >= 2, with m read off from the level n and ramification e."""

    n: int
    e: int = 1

    def __post_init__(self):
        if self.n < 1 or self.e < 1:
            raise ValueError("level n and ramification e must be positive")

    @property
    def m(self) -> int:
        if self.e == 1:
            return self.n - 1
        z = (self.n + self.e - 1) // self.e
        return z - 1


@dataclass(frozen=True)
class DegreeBounds:
    """Upper bounds on deg x_k (before removing the pi^m factor); -1 means x_k = 0."""

    degs: tuple[int, ...]

    def widened(self, k: int | None = None, by: int = 1) -> "DegreeBounds":
        if k is None:
            return DegreeBounds(tuple(d + by for d in self.degs))
        return DegreeBounds(tuple(d + by if i == k else d for i, d in enumerate(self.degs)))

    def window(self, m: int, deg_pi: int) -> tuple[int, ...]:
        """Bounds on deg x_k' where x_k = pi^m x_k' for k >= 2."""
        return tuple(d if k == 0 else d - m * deg_pi for k, d in enumerate(self.degs))


def is_supersingular_prime(pi: PrimeIdeal, r: int) -> bool:
    return math.gcd(pi.degree, r) == 1


def derive_degree_bounds(radicand: Poly, pi: PrimeIdeal, r: int) -> DegreeBounds:
    if not is_supersingular_prime(pi, r):
        raise ValueError(f"gcd(deg pi, r) = {math.gcd(pi.degree, r)}; the window needs a supersingular prime")
    d = radicand.degree
    return DegreeBounds(tuple((d - i * pi.degree) // r for i in range(r)))


def _is_power(f: Poly, ell: int, scale: int = 1, cap: int = DEFAULT_CAP) -> bool:
    """Is f = scale * a^ell for some a in F_q[T]?  Brute force over a."""
    if f.degree % ell:
        return False
    tower = f.tower
    k = f.degree // ell
    if tower.q ** (k + 1) > cap:
        raise CapExceededError("power test search exceeds the cap")
    target = Poly(tower, f.coeffs, Level.FQ)
    for coeffs in itertools.product(range(tower.q), repeat=k + 1):
        if coeffs[-1] == 0:
            continue
        a = Poly(tower, coeffs, Level.FQ)
        if (a**ell).scale(tower.from_int(scale)) == target:
            return True
    return False


def binomial_is_irreducible(radicand: Poly, r: int, cap: int = DEFAULT_CAP) -> bool:
    """X^r - radicand over F_q(T), by Capelli's criterion.

    Irreducible iff radicand is not an ell-th power for every prime ell | r,
    and radicand is not in -4 F^4 when 4 | r.  For a polynomial radicand both
    conditions reduce to F_q[T] because F_q[T] is integrally closed.
    """
    if radicand.is_zero():
        return False
    primes = [p for p in range(2, r + 1) if r % p == 0 and all(p % d for d in range(2, p))]
    for ell in primes:
        if _is_power(radicand, ell, 1, cap):
            return False
    if r % 4 == 0 and _is_power(radicand, 4, -4, cap):
        return False
    return True


# ---------------------------------------------------------------- search plans

def _arr(p: Poly, L: int) -> np.ndarray:
    out = np.zeros(L, np.int64)
    if p.degree >= L:
        raise ValueError("polynomial does not fit the buffer")
    out[: len(p.coeffs)] = p.coeffs
    return out


def _tables(tower: FieldTower):
    if tower.add_table is None:
        raise CapExceededError(f"F_{tower.order} is too large for table-driven search")
    codes = np.arange(tower.order, dtype=np.int64)
    return (tower.add_table.astype(np.int64), tower.mul_table.astype(np.int64),
            tower.neg_v(codes).astype(np.int64), tower.frob_table.astype(np.int64))


def _slots(tower: FieldTower, window: Sequence[int], prune: bool):
    Q = tower.order
    all_codes = np.arange(Q, dtype=np.int64)
    tr0 = all_codes[tower.trace_v(all_codes) == 0] if prune else all_codes
    sizes, owner, pos, vals = [], [], [], []
    for k, w in enumerate(window):
        for c in range(w + 1):
            v = tr0 if k == 0 else all_codes
            sizes.append(len(v))
            owner.append(k)
            pos.append(c)
            vals.append(v)
    values = np.zeros((len(vals), Q), np.int64)
    for s, v in enumerate(vals):
        values[s, : len(v)] = v
    if not vals:
        values = np.zeros((0, 1), np.int64)
    return (np.array(sizes, np.int64), values, np.array(owner, np.int64), np.array(pos, np.int64))


def window_size(tower: FieldTower, window: Sequence[int], prune: bool = True) -> int:
    first = tower.order // tower.q if prune else tower.order
    total = 1
    for k, w in enumerate(window):
        if w >= 0:
            total *= (first if k == 0 else tower.order) ** (w + 1)
    return total


def _charpoly_plan(radicand, pi, mf: MnFilter, bounds: DegreeBounds, prune: bool) -> SearchPlan:
    tower = pi.pi.tower
    r = tower.r
    window = bounds.window(mf.m, pi.degree)
    D = max([max(w, -1) + (mf.m * pi.degree if k else 0) for k, w in enumerate(window)] + [0])
    L = max(r * (D + pi.degree), radicand.degree) + 1
    add, mul, neg, frob = _tables(tower)
    pim = Poly(tower, pi.pi.coeffs, Level.FQR) ** mf.m
    pref = np.zeros((r, L), np.int64)
    pref[0, 0] = 1
    for k in range(1, r):
        pref[k] = _arr(pim, L)
    target = np.zeros((r, L), np.int64)
    delta = radicand if r % 2 else -radicand
    target[r - 1] = _arr(delta, L)
    sizes, values, owner, pos = _slots(tower, window, prune)
    return SearchPlan("charpoly", r, tower.q, L, sizes, values, owner, pos, add, mul, neg, frob,
                      pref=pref, pi=_arr(pi.pi, L), target=target)


def cross_exponent(m: int, exponent: str) -> int:
    """pi-exponent in the second coefficient equation, written with m = n - 1."""
    if exponent == "derived":
        return 2 * m + 1
    if exponent == "printed":
        return 2 * m + 3
    raise ValueError(f"exponent must be one of {CROSS_EXPONENTS}")


def _cubic_plan(radicand, pi, mf: MnFilter, bounds: DegreeBounds, prune: bool, exponent: str) -> SearchPlan:
    tower = pi.pi.tower
    m, dp = mf.m, pi.degree
    window = bounds.window(m, dp)
    w = [max(v, 0) for v in window]
    ex2 = cross_exponent(m, exponent)
    exps = (ex2, 3 * m + 1, 3 * m + 2, 2 * m + 1)
    L = max(2 * w[0], ex2 * dp + w[1] + w[2], 3 * w[0], exps[1] * dp + 3 * w[1],
            exps[2] * dp + 3 * w[2], exps[3] * dp + sum(w), radicand.degree) + 1
    P = Poly(tower, pi.pi.coeffs, Level.FQR)
    pows = np.stack([_arr(P**x, L) for x in exps])
    add, mul, neg, frob = _tables(tower)
    sizes, values, owner, pos = _slots(tower, window, prune)
    return SearchPlan("cubic", 3, tower.q, L, sizes, values, owner, pos, add, mul, neg, frob,
                      pows=pows, delta=_arr(radicand, L))


# ---------------------------------------------------------------- counting

@dataclass
class MnCount:
    count: int
    n: int
    e: int
    m: int
    bounds: DegreeBounds
    window: tuple[int, ...]
    candidates: int
    backend: str
    workers: int
    method: str
    hits: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "count": self.count, "n": self.n, "e": self.e, "m": self.m,
            "bounds": list(self.bounds.degs), "window": list(self.window),
            "candidates": self.candidates, "method": self.method,
        }


def _validate(radicand: Poly, pi: PrimeIdeal, check_irreducible: bool = True):
    tower = pi.pi.tower
    if radicand.tower is not tower:
        raise ValueError("radicand and pi live over different towers")
    if radicand.is_zero() or any(c >= tower.q for c in radicand.coeffs):
        raise ValueError("radicand must be a nonzero element of F_q[T]")
    if check_irreducible and not binomial_is_irreducible(radicand, tower.r):
        raise ValueError(f"X^{tower.r} - ({format_poly(radicand)}) is reducible")


def _prepare(radicand, pi, n, e, bounds, prune, cap):
    _validate(radicand, pi)
    tower = pi.pi.tower
    mf = MnFilter(n, e)
    bounds = bounds or derive_degree_bounds(radicand, pi, tower.r)
    window = bounds.window(mf.m, pi.degree)
    size = window_size(tower, window, prune)
    if size > cap:
        raise CapExceededError(f"search window of {size} candidates exceeds the cap {cap}")
    return tower, mf, bounds, window


def _decode_hits(plan: SearchPlan, hits, tower, pi, m) -> list[tuple[Poly, ...]]:
    out = []
    pim = Poly(tower, pi.pi.coeffs, Level.FQR) ** m
    for h in hits:
        xs = [Poly(tower, c, Level.FQR) for c in plan.decode(h)]
        out.append(tuple(x if k == 0 else x * pim for k, x in enumerate(xs)))
    return out


def search_mn(radicand: Poly, pi: PrimeIdeal, n: int, bounds: DegreeBounds | None = None,
              e: int = 1, prune: bool = True, backend: str | None = None, workers: int = 1,
              max_hits: int = 0, cap: int = DEFAULT_CAP) -> MnCount:
    """Matrix-oracle count with full bookkeeping; ``hits`` holds decoded solutions."""
    tower, mf, bounds, window = _prepare(radicand, pi, n, e, bounds, prune, cap)
    plan = _charpoly_plan(radicand, pi, mf, bounds, prune)
    res = run_search(plan, backend, workers, max_hits)
    if res.errors:
        raise AssertionError(f"{res.errors} characteristic polynomials left F_q[T]")
    return MnCount(res.count, n, e, mf.m, bounds, window, res.candidates, res.backend,
                   res.workers, "charpoly", _decode_hits(plan, res.hits, tower, pi, mf.m))


def count_mn(radicand: Poly, pi: PrimeIdeal, n: int, bounds: DegreeBounds | None = None,
             e: int = 1, **kw) -> int:
    return search_mn(radicand, pi, n, bounds, e, **kw).count


def search_mn_r3(radicand: Poly, pi: PrimeIdeal, n: int, bounds: DegreeBounds | None = None,
                 e: int = 1, exponent: str = "derived", prune: bool = True, backend: str | None = None,
                 workers: int = 1, max_hits: int = 0, cap: int = DEFAULT_CAP) -> MnCount:
    if pi.pi.tower.r != 3:
        raise ValueError("the coefficient equations are written for r = 3")
    tower, mf, bounds, window = _prepare(radicand, pi, n, e, bounds, prune, cap)
    plan = _cubic_plan(radicand, pi, mf, bounds, prune, exponent)
    res = run_search(plan, backend, workers, max_hits)
    return MnCount(res.count, n, e, mf.m, bounds, window, res.candidates, res.backend,
                   res.workers, f"equations[{exponent}]", _decode_hits(plan, res.hits, tower, pi, mf.m))


def count_mn_r3(radicand: Poly, pi: PrimeIdeal, n: int, bounds: DegreeBounds | None = None,
                e: int = 1, exponent: str = "derived", **kw) -> int:
    return search_mn_r3(radicand, pi, n, bounds, e, exponent, **kw).count


def in_mn(x: Sequence[Poly], radicand: Poly, pi: PrimeIdeal, n: int, e: int = 1) -> bool:
    """Direct membership test (slow path used by the property tests)."""
    m = MnFilter(n, e).m
    P = Poly(pi.pi.tower, pi.pi.coeffs, Level.FQR) ** m
    if any(not (xk % P).is_zero() for xk in x[1:]):
        return False
    cp = char_poly(build_matrix(x, pi))
    r = len(x)
    return cp.coeffs[0] == -radicand and all(c.is_zero() for c in cp.coeffs[1:r])


# ---------------------------------------------------------------- audits

@dataclass
class AuditEntry:
    label: str
    bounds: tuple[int, ...]
    candidates: int
    count: int | None  # None when skipped over the cap

    @property
    def skipped(self) -> bool:
        return self.count is None


@dataclass
class DegreeAudit:
    base: MnCount
    entries: list[AuditEntry]

    @property
    def passed(self) -> bool:
        return all(e.skipped or e.count == self.base.count for e in self.entries)

    def to_json(self) -> dict:
        return {
            "base_count": self.base.count,
            "base_bounds": list(self.base.bounds.degs),
            "passed": self.passed,
            "entries": [{"label": e.label, "bounds": list(e.bounds), "candidates": e.candidates,
                         "count": e.count, "skipped": e.skipped} for e in self.entries],
        }


def degree_audit(radicand: Poly, pi: PrimeIdeal, n: int, e: int = 1, backend: str | None = None,
                 workers: int = 1, cap: int = DEFAULT_CAP, full: bool = True,
                 base: MnCount | None = None, strict: bool = True) -> DegreeAudit:
    """Widen each slot's bound by one (and all of them together) and recount.

    Windows larger than ``cap`` are recorded as skipped.  With ``strict``
    a widened window that finds more solutions raises DegreeAuditError;
    otherwise the failure is only reported through ``passed``.
    """
    tower = pi.pi.tower
    bounds = derive_degree_bounds(radicand, pi, tower.r)
    if base is None:
        base = search_mn(radicand, pi, n, bounds, e, backend=backend, workers=workers, cap=cap)
    m = MnFilter(n, e).m
    trials = [(f"x{k + 1}+1", bounds.widened(k)) for k in range(tower.r)]
    if full:
        trials.append(("all+1", bounds.widened()))
    entries = []
    for label, b in trials:
        size = window_size(tower, b.window(m, pi.degree))
        if size > cap:
            entries.append(AuditEntry(label, b.degs, size, None))
            continue
        c = count_mn(radicand, pi, n, b, e, backend=backend, workers=workers, cap=cap)
        entries.append(AuditEntry(label, b.degs, size, c))
    audit = DegreeAudit(base, entries)
    if strict and not audit.passed:
        bad = [e.label for e in entries if not e.skipped and e.count != base.count]
        raise DegreeAuditError(f"widened windows {bad} found extra solutions")
    return audit


def _random_poly(rng: random.Random, tower: FieldTower, deg: int) -> Poly:
    return Poly(tower, [rng.randrange(tower.order) for _ in range(deg + 1)], Level.FQR)


@dataclass
class ExponentAudit:
    samples: int
    derived_matches: int
    printed_matches: int
    full_matches: int

    @property
    def supported(self) -> str | None:
        if self.derived_matches == self.samples and self.printed_matches < self.samples:
            return "derived"
        if self.printed_matches == self.samples and self.derived_matches < self.samples:
            return "printed"
        return None

    def to_json(self) -> dict:
        return {"samples": self.samples, "derived_matches": self.derived_matches,
                "printed_matches": self.printed_matches, "full_matches": self.full_matches,
                "supported": self.supported,
                "exponents": {"derived": "2n-1", "printed": "2n+1"}}


def audit_cross_exponent(pi: PrimeIdeal, n: int, samples: int = 50, seed: int = 0, deg: int = 2,
              e: int = 1) -> ExponentAudit:
    """Compare the matrix coefficients with the closed-form r = 3 expressions on random x.

    With x_k = pi^m x_k' (k = 2, 3) the matrix gives
      e_1 = Tr(x_1),
      e_2 = Tr(x_1 s(x_1)) - pi^(2m+1) Tr(x_2' s(x_3')),
      e_3 = N(x_1) + pi^(3m+1) N(x_2') + pi^(3m+2) N(x_3') - pi^(2m+1) Tr(x_1 s(x_2') s^2(x_3')).
    The printed second equation carries pi^(2m+3) instead.
    """
    tower = pi.pi.tower
    if tower.r != 3:
        raise ValueError("the exponent audit is for r = 3")
    rng = random.Random(seed)
    m = MnFilter(n, e).m
    P = Poly(tower, pi.pi.coeffs, Level.FQR)
    Pm = P**m
    s = frobenius_poly
    d_ok = p_ok = full = 0
    for _ in range(samples):
        x1, y, z = (_random_poly(rng, tower, deg) for _ in range(3))
        e1, e2, e3 = principal_minor_sums(build_matrix((x1, y * Pm, z * Pm), pi).rows())
        base = poly_trace(x1 * s(x1))
        t23 = poly_trace(y * s(z))
        d_ok += e2 == base - P ** (2 * m + 1) * t23
        p_ok += e2 == base - P ** (2 * m + 3) * t23
        det = (poly_norm(x1) + P ** (3 * m + 1) * poly_norm(y) + P ** (3 * m + 2) * poly_norm(z)
               - P ** (2 * m + 1) * poly_trace(x1 * s(y) * s(z, 2)))
        full += (e1 == poly_trace(x1)) and (e2 == base - P ** (2 * m + 1) * t23) and (e3 == det)
    return ExponentAudit(samples, d_ok, p_ok, full)


@dataclass
class CountComparison:
    n: int
    matrix: int
    derived: int
    printed: int
    audit: ExponentAudit

    @property
    def agree(self) -> bool:
        return self.matrix == self.derived == self.printed

    @property
    def discrepancy(self) -> bool:
        """The printed exponent disagrees with the matrix oracle somewhere."""
        return self.audit.supported != "printed" or self.printed != self.matrix

    def to_json(self) -> dict:
        return {"n": self.n, "matrix": self.matrix, "equations_derived": self.derived,
                "equations_printed": self.printed, "agree": self.agree,
                "exponent_discrepancy": self.discrepancy, "exponent_audit": self.audit.to_json()}


def compare_counts(radicand: Poly, pi: PrimeIdeal, n: int, e: int = 1, backend: str | None = None,
                   workers: int = 1, cap: int = DEFAULT_CAP, samples: int = 30,
                   seed: int = 0) -> CountComparison:
    kw = dict(backend=backend, workers=workers, cap=cap)
    return CountComparison(
        n,
        count_mn(radicand, pi, n, None, e, **kw),
        count_mn_r3(radicand, pi, n, None, e, "derived", **kw),
        count_mn_r3(radicand, pi, n, None, e, "printed", **kw),
        audit_cross_exponent(pi, n, samples, seed, e=e),
    )
