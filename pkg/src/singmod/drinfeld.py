"""Drinfeld F_q[T]-modules of rank r given by the image of T."""
from __future__ import annotations

import math
from typing import Sequence

from .errors import ReductionError
from .ffield import FieldElem, FieldTower, Level
from .polyring import Poly, PrimeIdeal
from .twisted import LocalRing, PolyRing, QuotientRing, TwistedPoly, tau_valuation, tmul


class DrinfeldModule:
    """phi_T = T + g_1 tau + ... + g_{r-1} tau^{r-1} + Delta tau^r over ``ring``."""

    def __init__(self, ring, g: Sequence, delta):
        self.ring = ring
        if ring.is_zero(delta):
            raise ValueError("leading coefficient Delta must be nonzero")
        T = Poly(ring.tower, (0, 1), Level.FQ)
        self.phi_T = TwistedPoly(ring, [ring.from_A(T), *g, delta])
        self.rank = len(g) + 1

    @classmethod
    def from_twisted(cls, phi_T: TwistedPoly) -> "DrinfeldModule":
        R = phi_T.ring
        T = Poly(R.tower, (0, 1), Level.FQ)
        if phi_T.degree < 1:
            raise ValueError("phi_T must have positive tau-degree")
        if not R.is_zero(R.sub(phi_T.coeff(0), R.from_A(T))):
            raise ValueError("constant term of phi_T must be the image of T")
        return cls(R, [phi_T.coeff(i) for i in range(1, phi_T.degree)], phi_T.coeff(phi_T.degree))

    @classmethod
    def carlitz_like(cls, ring, r: int, j: int | None = None) -> "DrinfeldModule":
        """phi_T = T + tau^r, or the sparse T + tau^j + tau^r when ``j`` is given."""
        g = [ring.zero() for _ in range(r - 1)]
        if j is not None:
            if not 1 <= j <= r - 1:
                raise ValueError("sparse index j must satisfy 1 <= j <= r-1")
            g[j - 1] = ring.one()
        return cls(ring, g, ring.one())

    @property
    def g(self) -> list:
        return [self.phi_T.coeff(i) for i in range(1, self.rank)]

    @property
    def delta(self):
        return self.phi_T.coeff(self.rank)

    def is_normalized(self) -> bool:
        R = self.ring
        return R.is_zero(R.sub(self.delta, R.one()))

    def __eq__(self, other):
        return isinstance(other, DrinfeldModule) and self.phi_T == other.phi_T

    __hash__ = None

    def __repr__(self):
        return f"DrinfeldModule(rank={self.rank}, {self.phi_T!r})"

    def to_json(self) -> dict:
        def enc(c):
            if isinstance(c, Poly):
                return c.to_json()
            if isinstance(c, FieldElem):
                return [c.coords]
            raise TypeError(type(c))
        return {
            "rank": self.rank,
            "ring": type(self.ring).__name__,
            "g": [enc(c) for c in self.g],
            "delta": enc(self.delta),
        }


def phi_a(phi: DrinfeldModule, a: Poly) -> TwistedPoly:
    """phi_a by Horner's rule over tmul."""
    R = phi.ring
    acc = TwistedPoly(R, [])
    for c in reversed(a.coeffs):
        const = TwistedPoly(R, [R.from_A(Poly(a.tower, (c,), Level.FQ))])
        acc = tmul(acc, phi.phi_T) + const
    return acc


def is_morphism(u: TwistedPoly, phi: DrinfeldModule, psi: DrinfeldModule) -> bool:
    """u phi_a = psi_a u for all a; A is generated by T so a = T suffices."""
    return tmul(u, phi.phi_T) == tmul(psi.phi_T, u)


def reduce_module(phi: DrinfeldModule, prime: PrimeIdeal) -> DrinfeldModule:
    """phi mod (pi) over A/(pi); raises on bad reduction."""
    if not isinstance(phi.ring, PolyRing) or phi.ring.level != Level.FQ:
        raise TypeError("reduction at a prime needs coefficients in A = F_q[T]")
    S = QuotientRing(prime)
    delta = S.from_A(phi.delta)
    if S.is_zero(delta):
        raise ReductionError(f"Delta vanishes modulo {prime}")
    return DrinfeldModule(S, [S.from_A(c) for c in phi.g], delta)


def height(phi: DrinfeldModule, prime: PrimeIdeal) -> int:
    """tau-valuation of phi_pi mod pi.

    Reduction is a ring homomorphism, so phi_pi is evaluated directly over
    A/(pi) instead of over A; over A the coefficients have T-degree q^(r deg pi).
    """
    return tau_valuation(phi_a(reduce_module(phi, prime), prime.pi))


def is_supersingular(phi: DrinfeldModule, prime: PrimeIdeal) -> bool:
    return height(phi, prime) == phi.rank * prime.degree


def cm_from_rank1(theta_image: TwistedPoly, e: int) -> DrinfeldModule:
    """The rank-e A-module with phi_T = (phi'_theta)^e for a rank-1 action of theta."""
    R = theta_image.ring
    if theta_image.degree != 1:
        raise ValueError("theta_image must have tau-degree 1")
    theta = theta_image.coeff(0)
    T = R.from_A(Poly(R.tower, (0, 1), Level.FQ))
    power = R.one()
    for _ in range(e):
        power = R.mul(power, theta)
    if not R.is_zero(R.sub(power, T)):
        raise ValueError("the constant term of theta_image raised to e is not T")
    phi_T = theta_image ** e
    assert R.is_zero(R.sub(phi_T.coeff(0), T))
    if R.is_zero(R.sub(theta_image.coeff(1), R.one())):
        assert R.is_zero(R.sub(phi_T.coeff(e), R.one())), "leading coefficient is not 1"
    return DrinfeldModule.from_twisted(phi_T)


def iso_scalars(phi: DrinfeldModule, psi: DrinfeldModule, n: int) -> frozenset[FieldElem]:
    """All c in F_{q^r}^* with c^(q^i - 1) g_i = g'_i mod theta^n for 1 <= i < r.

    Both modules must be normalized (Delta = 1) over the same LocalRing.
    """
    R = phi.ring
    if not isinstance(R, LocalRing) or psi.ring != R:
        raise TypeError("iso_scalars needs both modules over one LocalRing")
    if phi.rank != psi.rank:
        raise ValueError("modules of different rank are never isomorphic")
    if not (phi.is_normalized() and psi.is_normalized()):
        raise ValueError("iso_scalars needs normalized modules (Delta = 1)")
    if n < 1:
        raise ValueError("level n must be at least 1")
    if n > R.N:
        raise ValueError(f"level {n} exceeds the truncation theta^{R.N}")
    tower = R.tower
    r = phi.rank
    g = [R.reduce(x, n).coeffs for x in phi.g]
    h = [R.reduce(x, n).coeffs for x in psi.g]
    found = []
    for c in rank_units(tower, r):
        ok = True
        for i in range(1, r):
            s = tower.pow(c, tower.q**i - 1)
            gi, hi = g[i - 1], h[i - 1]
            if len(gi) != len(hi) or any(tower.mul(s, x) != y for x, y in zip(gi, hi)):
                ok = False
                break
        if ok:
            found.append(FieldElem(tower, c, tower.level_of(c)))
    return frozenset(found)


def rank_units(tower: FieldTower, r: int) -> list[int]:
    """Codes of F_{q^r}^* inside the tower (which may be larger than F_{q^r})."""
    if tower.r % r:
        raise ValueError(f"the tower F_q^{tower.r} does not contain F_q^{r}")
    return [int(c) for c in tower.subfield_codes(r) if c]


def iso_count_mod(phi: DrinfeldModule, psi: DrinfeldModule, n: int) -> int:
    return len(iso_scalars(phi, psi, n))


def aut_count_formula(phi: DrinfeldModule, n: int) -> int:
    """gcd(q^r - 1, q^j - 1 : g_j != 0 mod theta^n), the intended Aut size."""
    R = phi.ring
    q, r = R.q, phi.rank
    out = q**r - 1
    for j, gj in enumerate(phi.g, start=1):
        if R.reduce(gj, n).coeffs:
            out = math.gcd(out, q**j - 1)
    return out
