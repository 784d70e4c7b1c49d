"""One test per acceptance criterion; each prints a PASS/FAIL line.

The lines are collected by conftest.py and repeated in the terminal summary.
"""
import math
import random
import time
from fractions import Fraction


from singmod.drinfeld import DrinfeldModule, cm_from_rank1, is_supersingular, iso_scalars, rank_units
from singmod.endo.bounds import bound_report, katz_count, preset_report
from singmod.endo.count import compare_counts, count_mn, count_mn_r3, search_mn
from singmod.endo.matrix import build_matrix, char_poly, identity, mat_mul, skew_product, tau
from singmod.errors import TruncationError
from singmod.ffield import Level, tower_for
from singmod.jinv import DeltaTuple, check_jest_bound, delta_tuple, enumerate_delta_tuples
from singmod.polyring import Poly, PrimeIdeal, monic_irreducibles, parse_poly, poly_norm, poly_trace
from singmod.twisted import LocalRing, PolyRing, TwistedPoly

from conftest import record_acceptance


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def report(item, checks: dict[str, bool], elapsed: float, budget: float, extra: str = ""):
    failed = [k for k, v in checks.items() if not v]
    in_time = elapsed < budget
    passed = not failed and in_time
    detail = f"{len(checks) - len(failed)}/{len(checks)} checks, {elapsed:.2f}s (budget {budget:g}s)"
    if failed:
        detail += f"; failed: {', '.join(failed)}"
    if not in_time:
        detail += "; over budget"
    if extra:
        detail += f"; {extra}"
    record_acceptance(item, passed, detail)
    assert passed, detail


# 1 ---------------------------------------------------------------------------------

def test_item1_cm_construction_exact():
    checks = {}
    with Timer() as t:
        for q in (3, 7):
            R = LocalRing(tower_for(q, 3), 4 * q * q, 3)
            phi = cm_from_rank1(TwistedPoly(R, [R.theta(1), R.one()]), 3)

            def mono(*ks):
                acc = R.zero()
                for k in ks:
                    acc = R.add(acc, R.theta(k))
                return acc

            checks[f"q={q} g1"] = phi.g[0] == mono(2, q + 1, 2 * q)
            checks[f"q={q} g2"] = phi.g[1] == mono(1, q, q * q)
            checks[f"q={q} Delta"] = phi.delta == R.one()
            checks[f"q={q} phi_T(0)"] = phi.phi_T.coeff(0) == R.theta(3)
    report(1, checks, t.elapsed, 1.0)


# 2 ---------------------------------------------------------------------------------

def test_item2_basic_tuples():
    checks, worst = {}, 0.0
    for q in (3, 5, 7):
        with Timer() as t:
            enumerate_delta_tuples.cache_clear()
            r2 = enumerate_delta_tuples(q, 2)
            r3 = enumerate_delta_tuples(q, 3)
            s = q * q + q + 1
            checks[f"q={q} r=2 single"] = r2 == (DeltaTuple((q + 1,), 1),)
            for d in ((s, 0), (1, q), (0, s)):
                checks[f"q={q} contains {d}"] = delta_tuple(q, d) in r3
            checks[f"q={q} reverified"] = all(_reverify(q, d) for d in r2 + r3)
        worst = max(worst, t.elapsed)
    report(2, checks, worst, 10.0, "time is the slowest q")


def _reverify(q, d):
    """Both defining conditions recomputed without the library."""
    r = len(d.deltas) + 1
    weight = sum(x * (q**i - 1) for i, x in enumerate(d.deltas, start=1))
    if weight != d.delta_r * (q**r - 1):
        return False
    return all(0 <= x <= (q**r - 1) // (q ** math.gcd(i, r) - 1) for i, x in enumerate(d.deltas, start=1)) \
        and math.gcd(*d.deltas, d.delta_r) == 1


# 3 ---------------------------------------------------------------------------------

def test_item3_supersingularity():
    checks = {}
    with Timer() as t:
        for q in (3, 7):
            tower = tower_for(q, 1)
            A = PolyRing(tower)
            for r in (2, 3):
                phi = DrinfeldModule.carlitz_like(A, r)
                ok = True
                for deg in (1, 2, 3):
                    for f in monic_irreducibles(tower, deg):
                        ok &= is_supersingular(phi, PrimeIdeal(f)) == (math.gcd(deg, r) == 1)
                checks[f"q={q} r={r}"] = ok
    report(3, checks, t.elapsed, 30.0)


# 4 ---------------------------------------------------------------------------------

def test_item4_matrix_ring():
    rng = random.Random(4)
    checks = {}
    with Timer() as t:
        tower = tower_for(3, 3)
        P = PrimeIdeal(parse_poly("T^2+1", tower))

        def rp(deg):
            return Poly(tower, [rng.randrange(27) for _ in range(deg + 1)], Level.FQR)

        closed = True
        for _ in range(1000):
            a = [rp(rng.randrange(2)) for _ in range(3)]
            b = [rp(rng.randrange(2)) for _ in range(3)]
            closed &= mat_mul(build_matrix(a, P), build_matrix(b, P)) == build_matrix(skew_product(a, b, P), P)
        checks["closure on 1000 pairs"] = closed
        acc = identity(P)
        for _ in range(3):
            acc = mat_mul(acc, tau(P))
        zero = Poly.zero(tower, Level.FQR)
        checks["tau^r = pi"] = acc == build_matrix([Poly(tower, P.pi.coeffs, Level.FQR), zero, zero], P)
        in_fq = diag = True
        for _ in range(100):
            cp = char_poly(build_matrix([rp(2) for _ in range(3)], P))  # raises if outside F_q[T]
            in_fq &= all(all(v < 3 for v in c.coeffs) for c in cp.coeffs)
            x = rp(2)
            cp = char_poly(build_matrix([x, zero, zero], P))
            diag &= cp.coeffs[2] == -poly_trace(x) and cp.coeffs[0] == -poly_norm(x)
        checks["char poly in F_q[T]"] = in_fq
        checks["diagonal formula"] = diag
    report(4, checks, t.elapsed, 30.0)


# 5 ---------------------------------------------------------------------------------

def test_item5_counts():
    checks, notes = {}, []
    with Timer() as t:
        for q in (3, 7):
            tower = tower_for(q, 3)
            T = parse_poly("T", tower)
            P = PrimeIdeal(T)
            checks[f"q={q} n=1"] = count_mn(T, P, 1) == q * q + q + 1
            checks[f"q={q} n=2"] = count_mn(T, P, 2) == 0
            for n in (1, 2):
                cmp = compare_counts(T, P, n)
                # the equation count must agree with the matrix count, or the audit must fire
                checks[f"q={q} n={n} equations"] = cmp.matrix == cmp.derived and (
                    cmp.matrix == cmp.printed or cmp.discrepancy)
                notes.append(str(cmp.audit.supported))
    report(5, checks, t.elapsed, 300.0, f"exponent audit supports {'/'.join(sorted(set(notes)))}")


# 6 ---------------------------------------------------------------------------------

def test_item6_bound_reports():
    checks = {}
    with Timer() as t:
        eq = preset_report("sec5-insep", q=3, delta=(0, 13))
        checks["(0,13;4) lhs = rhs = 13/3"] = (eq.lhs == Fraction(13, 3) and eq.rhs == Fraction(13, 3)
                                               and eq.delta.delta_r == 4 and eq.r_sep == 1 and eq.e == 3)
        st = preset_report("sec5-insep", q=3, delta=(13, 0))
        checks["(13,0;1) lhs = 26/3 > 13/3"] = st.lhs == Fraction(26, 3) and st.rhs == Fraction(13, 3)
        sep = preset_report("sec5-sep", q=7)
        checks["q=7 lhs 19 >= 19/3"] = sep.lhs == 19 and sep.rhs == Fraction(19, 3) and sep.r_sep == 3
    report(6, checks, t.elapsed, 300.0)


# 7 ---------------------------------------------------------------------------------

def test_item7_katz():
    checks = {}
    with Timer() as t:
        for q in (3, 5, 7, 9):
            res = katz_count(q)
            tower = tower_for(q, 3)
            brute = sum(1 for c in range(tower.order)
                        if tower.norm_code(c) == 1 and tower.trace_code(c) == 0)
            g = math.gcd(3, q - 1)
            dev = brute - (q * q - 1) // (q - 1)
            checks[f"q={q} N={brute}"] = res.count == brute and dev * dev <= g * g * q and res.holds
    report(7, checks, t.elapsed, 5.0)


# 8 ---------------------------------------------------------------------------------

CONFIGS = [(3, 2), (3, 3), (2, 3), (2, 4)]


def _module(R, g):
    return DrinfeldModule(R, [R.elem(c) for c in g], R.one())


def _constructed_sum(q, r, k, rng):
    """g_i = theta^k u_i against g'_i = theta^k u'_i; u_1(0) != 0 = u'_1(0) blocks level k+1."""
    tower = tower_for(q, r)
    Q = tower.order
    R = LocalRing(tower, k + 3)
    u = [[0] * k + [rng.randrange(1, Q) if i == 0 else rng.randrange(Q), rng.randrange(Q)]
         for i in range(r - 1)]
    v = [[0] * k + [0 if i == 0 else rng.randrange(Q), rng.randrange(Q)] for i in range(r - 1)]
    phi, psi = _module(R, u), _module(R, v)
    return sum(len(iso_scalars(phi, psi, n)) for n in range(1, R.N + 1))


def _random_pair(rng, tower, q, r, units):
    Q = tower.order

    def rc(deg=3):
        return [rng.randrange(Q) for _ in range(deg)]

    kind = rng.randrange(4)
    g = [rc() if rng.random() > 0.25 else [] for _ in range(r - 1)]
    if kind == 0:  # unrelated
        return g, [rc() for _ in range(r - 1)]
    c = rng.choice(units)
    k = rng.randrange(1, 5)
    if kind == 1:  # conjugate, then perturb one coefficient at order k
        h = [[tower.mul(tower.pow(c, q**i - 1), x) for x in gi] for i, gi in enumerate(g, start=1)]
        j = rng.randrange(r - 1)
        h[j] = (h[j] + [0] * (k + 1))[:k + 1]
        h[j][k] = tower.add(h[j][k], rng.randrange(1, Q))
        return g, h
    if kind == 2:  # against T + tau^r
        return [[] for _ in range(r - 1)], [[0] * k + [rng.randrange(1, Q)] for _ in range(r - 1)]
    s = rng.randrange(r - 1)  # against a sparse module T + tau^j + tau^r
    g = [[1] if i == s else [] for i in range(r - 1)]
    h = [[tower.pow(c, q ** (i + 1) - 1)] if i == s else [0] * k + [rng.randrange(Q)] for i in range(r - 1)]
    return g, h


def test_item8_iso_counts_and_jest_bound():
    checks, stats = {}, []
    with Timer() as t:
        rng = random.Random(8)
        for q, r in CONFIGS:
            ok = all(_constructed_sum(q, r, k, rng) == k * (q**r - 1) for k in (1, 2, 3) for _ in range(5))
            checks[f"q={q} r={r} constructed sums"] = ok
        for q, r in CONFIGS:
            tower = tower_for(q, r)
            units = rank_units(tower, r)
            tuples = enumerate_delta_tuples(q, r)
            violations = widened = 0
            for _ in range(1000):
                g, h = _random_pair(rng, tower, q, r, units)
                d = rng.choice(tuples)
                N = 8
                while True:
                    R = LocalRing(tower, N)
                    try:
                        rep = check_jest_bound(_module(R, g), _module(R, h), d)
                        break
                    except TruncationError:
                        widened += 1
                        N *= 2
                        assert N <= 1 << 12, "truncation keeps growing"
                violations += not rep.holds
            checks[f"q={q} r={r} 1000 random pairs"] = violations == 0
            stats.append(f"q={q},r={r}: {violations} violations, {widened} truncation doublings")
    report(8, checks, t.elapsed, 120.0, "; ".join(stats))


# 9 ---------------------------------------------------------------------------------

def test_item9_determinism():
    checks = {}
    with Timer() as t:
        for q, rad in ((3, "T"), (3, "T^2+T"), (3, "T^4+T"), (7, "T"), (5, "T^2+T")):
            tower = tower_for(q, 3)
            f = parse_poly(rad, tower)
            P = PrimeIdeal(parse_poly("T", tower))
            runs = []
            for w in (1, 4, 8):
                res = search_mn(f, P, 1, workers=w, max_hits=10**5)
                runs.append((res.count, tuple(tuple(x.coeffs for x in h) for h in res.hits),
                             count_mn_r3(f, P, 1, workers=w), count_mn(f, P, 2, workers=w)))
            checks[f"q={q} {rad}"] = len(set(runs)) == 1
        tower = tower_for(3, 3)
        reps = [bound_report(3, 3, 1, 3, delta_tuple(3, (0, 13)), parse_poly("T", tower),
                             PrimeIdeal(parse_poly("T", tower)), workers=w).counts for w in (1, 4, 8)]
        checks["bound_report counts"] = reps[0] == reps[1] == reps[2]
    report(9, checks, t.elapsed, 600.0)
