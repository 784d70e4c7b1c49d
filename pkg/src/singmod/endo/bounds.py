"""Katz counts and lower-bound reports for singular moduli valuations."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..drinfeld import DrinfeldModule, cm_from_rank1
from ..errors import CapExceededError
from ..ffield import DEFAULT_CAP, Level, prime_power, tower_for
from ..jinv import DeltaTuple, ValuationQ, delta_tuple, eval_J
from ..polyring import Poly, PrimeIdeal, format_poly, parse_poly
from ..twisted import LocalRing, TwistedPoly
from .count import count_mn, is_supersingular_prime


def ge_a_minus_g_sqrt_q(x: Fraction, a: Fraction, g: int, q: int) -> bool:
    """Exact test of x >= a - g*sqrt(q) by squaring."""
    t = Fraction(a) - Fraction(x)  # need t <= g sqrt(q)
    return t <= 0 or t * t <= g * g * q


@dataclass
class KatzResult:
    q: int
    count: int
    g: int
    holds: bool
    lower_bound_holds: bool

    def to_json(self) -> dict:
        return {"q": self.q, "N3_0_1": self.count, "center": self.q + 1, "gcd": self.g,
                "bound": f"|N - {self.q + 1}| <= {self.g}*sqrt({self.q})",
                "holds": self.holds, "lower_bound": f"N >= {self.q + 1} - {self.g}*sqrt({self.q})",
                "lower_bound_holds": self.lower_bound_holds}


def katz_count(q: int, cap: int = DEFAULT_CAP) -> KatzResult:
    """N_3(0,1) = #{x in F_{q^3}: Norm(x) = 1, Tr(x) = 0} by enumeration."""
    prime_power(q)
    if q**3 > cap:
        raise CapExceededError(f"F_{q}^3 has {q**3} elements, over the cap {cap}")
    tower = tower_for(q, 3, cap)
    codes = tower.codes(Level.FQR)
    n = int(np.count_nonzero((tower.norm_v(codes) == 1) & (tower.trace_v(codes) == 0)))
    g = math.gcd(3, q - 1)
    dev = n - (q + 1)
    return KatzResult(q, n, g, dev * dev <= g * g * q, ge_a_minus_g_sqrt_q(Fraction(n), q + 1, g, q))


# ---------------------------------------------------------------- bound reports

@dataclass
class BoundReport:
    q: int
    r: int
    r_sep: int
    e: int
    delta: DeltaTuple
    counts: list[int]
    levels: list[int]
    rhs: Fraction
    lhs: ValuationQ | None = None
    radicand: str = ""
    pi: str = ""
    preset: str | None = None
    notes: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def equality(self) -> bool | None:
        return None if self.lhs is None else self.lhs == self.rhs

    @property
    def holds(self) -> bool | None:
        return None if self.lhs is None else self.lhs >= self.rhs

    def to_json(self) -> dict:
        return {
            "q": self.q, "r": self.r, "r_sep": self.r_sep, "e": self.e,
            "delta": list(self.delta.deltas), "delta_r": self.delta.delta_r,
            "counts": self.counts, "levels": self.levels,
            "rhs": {"num": self.rhs.numerator, "den": self.rhs.denominator},
            "lhs": None if self.lhs is None else self.lhs.to_json(),
            "equality": self.equality, "holds": self.holds,
            "radicand": self.radicand, "pi": self.pi, "preset": self.preset,
            "notes": self.notes, **self.extra,
        }


def cm_module(q: int, e: int, N: int) -> DrinfeldModule:
    """phi_T = (theta + tau)^e over F_{q^e}[theta]/(theta^N) with T = theta^e."""
    tower = tower_for(q, e)
    R = LocalRing(tower, N, e)
    return cm_from_rank1(TwistedPoly(R, [R.theta(1), R.one()]), e)


def lhs_valuation(phi: DrinfeldModule, d: DeltaTuple) -> ValuationQ:
    """ord of J(phi) at the prime over T, from the theta-adic order."""
    R = phi.ring
    J = eval_J(phi, d).value()
    v = J.valuation()
    if v is None:
        return ValuationQ.inf()
    assert v < R.N, "valuation truncated away"
    return ValuationQ(v, R.e)


def bound_report(q: int, r: int, r_sep: int, e: int, delta: DeltaTuple, radicand: Poly,
                 pi: PrimeIdeal, max_m: int | None = None, lhs_module: DrinfeldModule | None = None,
                 backend: str | None = None, workers: int = 1, cap: int = DEFAULT_CAP) -> BoundReport:
    """rhs = (sum delta)(q-1) / (r_sep (q^r-1) e) * sum_m #M_{m e + 1}.

    With ``max_m`` unset the sum stops at the first empty level; the sets
    shrink with the level, so every later term vanishes too.
    """
    if r_sep < 1 or r % r_sep:
        raise ValueError(f"r_sep = {r_sep} must divide r = {r}")
    if e < 1 or r % e:
        raise ValueError(f"e = {e} must divide r = {r}")
    if delta.r != r:
        raise ValueError("delta tuple has the wrong rank")
    if not delta.satisfies(q):
        raise ValueError(f"{delta} is not basic for q = {q}")
    if pi.pi.tower.q != q or pi.pi.tower.r != r:
        raise ValueError("pi must live in the F_q / F_q^r tower")
    if not is_supersingular_prime(pi, r):
        raise ValueError(f"pi = {format_poly(pi.pi)} is not supersingular for r = {r}")
    counts, levels = [], []
    m = 0
    while max_m is None or m <= max_m:
        n = m * e + 1
        c = count_mn(radicand, pi, n, None, e, backend=backend, workers=workers, cap=cap)
        counts.append(c)
        levels.append(n)
        if c == 0 and max_m is None:
            break
        m += 1
    rhs = Fraction(delta.total * (q - 1), r_sep * (q**r - 1) * e) * sum(counts)
    lhs = lhs_valuation(lhs_module, delta) if lhs_module is not None else None
    rep = BoundReport(q, r, r_sep, e, delta, counts, levels, rhs, lhs,
                      format_poly(radicand), format_poly(pi.pi))
    if lhs is not None and not lhs >= rhs:
        rep.notes.append("VIOLATION: lhs < rhs")
    return rep


PRESETS = ("sec5-sep", "sec5-insep", "sec5-tt1")


def preset_report(name: str, q: int | None = None, delta: tuple[int, ...] | None = None,
                  backend: str | None = None, workers: int = 1, cap: int = DEFAULT_CAP) -> BoundReport:
    """The worked rank-3 examples: radicand T or T^2+T at pi = T."""
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {PRESETS}")
    defaults = {"sec5-sep": 7, "sec5-insep": 3, "sec5-tt1": 7}
    q = q or defaults[name]
    p, _ = prime_power(q)
    r = e = 3
    s = q * q + q + 1
    if name == "sec5-sep" and (p == 3 or p == 2):
        raise ValueError("the separable preset needs an odd q prime to 3")
    if name == "sec5-insep" and p != 3:
        raise ValueError("the inseparable preset needs q a power of 3")
    # X^3 - radicand is purely inseparable in characteristic 3
    r_sep = 1 if p == 3 else 3
    if delta is None:
        delta = (1, q) if name == "sec5-tt1" else (0, s)
    d = delta_tuple(q, delta)
    tower = tower_for(q, r, cap)
    rad = parse_poly("T^2+T" if name == "sec5-tt1" else "T", tower)
    pi = PrimeIdeal(parse_poly("T", tower))
    lhs_mod = None
    if name != "sec5-tt1":
        lhs_mod = cm_module(q, e, 4 * e * max(*d.deltas, d.delta_r) + 1)
    rep = bound_report(q, r, r_sep, e, d, rad, pi, None, lhs_mod, backend, workers, cap)
    rep.preset = name
    if name == "sec5-tt1":
        katz = katz_count(q, cap)
        g = katz.g
        coef = Fraction(2 * (q + 1), 9 * s)
        # rhs >= coef * (q+1 - g sqrt q)  <=>  rhs/coef >= q+1 - g sqrt q
        sym_ok = ge_a_minus_g_sqrt_q(rep.rhs / coef, q + 1, g, q)
        rep.extra["symbolic_rhs"] = {
            "text": f"rhs >= 2*{q + 1}*({q + 1} - {g}*sqrt({q}))/(9*{s})",
            "holds": sym_ok,
        }
        rep.extra["katz"] = katz.to_json()
        rep.extra["count_vs_2N"] = {"count_n1": rep.counts[0], "two_N": 2 * katz.count,
                                    "holds": rep.counts[0] >= 2 * katz.count}
        if not sym_ok or rep.counts[0] < 2 * katz.count:
            rep.notes.append("VIOLATION: symbolic lower bound")
    return rep
