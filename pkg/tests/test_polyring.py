import numpy as np
import pytest
from hypothesis import given, strategies as st

from singmod.ffield import Level, tower_for
from singmod.polyring import (Poly, PrimeIdeal, format_poly, frobenius_poly, gcd, is_irreducible,
                              monic_irreducibles, monic_polys, mul_codes, parse_poly, poly_norm,
                              poly_trace)

T3 = tower_for(3, 3)
T7 = tower_for(7, 3)


def dense_mul(tower, a, b):
    """Schoolbook product with scalar ops only."""
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = tower.add(out[i + j], tower.mul(x, y))
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


codes27 = st.lists(st.integers(0, 26), max_size=8)


@given(codes27, codes27)
def test_mul_matches_schoolbook(a, b):
    assert Poly(T3, mul_codes(T3, a, b)).coeffs == dense_mul(T3, a, b)


def test_large_products_use_vector_path_consistently():
    rng = np.random.default_rng(1)
    a = [int(v) for v in rng.integers(0, 343, 60)]
    b = [int(v) for v in rng.integers(0, 343, 45)]
    assert Poly(T7, mul_codes(T7, a, b)).coeffs == dense_mul(T7, a, b)
    assert Poly(T7, mul_codes(T7, a, b, trunc=20)).coeffs == dense_mul(T7, a, b)[:20]


@given(codes27, codes27.filter(lambda c: any(c)))
def test_division_identity(a, b):
    A, B = Poly(T3, a), Poly(T3, b)
    q, r = divmod(A, B)
    assert q * B + r == A
    assert r.degree < B.degree


@given(codes27, codes27)
def test_gcd_divides_both(a, b):
    A, B = Poly(T3, a), Poly(T3, b)
    g = gcd(A, B)
    if A.is_zero() and B.is_zero():
        assert g.is_zero()
        return
    assert g.is_monic()
    assert (A % g).is_zero() and (B % g).is_zero()


def _brute_irreducible(f: Poly) -> bool:
    d = f.degree
    for k in range(1, d // 2 + 1):
        for g in monic_polys(f.tower, k):
            if (f % g).is_zero():
                return False
    return d >= 1


@pytest.mark.parametrize("q,d", [(2, 1), (2, 4), (3, 2), (3, 3), (4, 2), (5, 2), (7, 2)])
def test_irreducible_counts(q, d):
    tower = tower_for(q, 1)
    irr = monic_irreducibles(tower, d)
    # [DERIVED] brute force trial division agrees with the Ben-Or test
    for f in monic_polys(tower, d):
        assert is_irreducible(f) == _brute_irreducible(f)
    expected = {(2, 1): 2, (2, 4): 3, (3, 2): 3, (3, 3): 8, (4, 2): 6, (5, 2): 10, (7, 2): 21}
    assert len(irr) == expected[(q, d)]


def test_prime_ideal_validation():
    assert PrimeIdeal(parse_poly("T", T3)).degree == 1
    with pytest.raises(ValueError):
        PrimeIdeal(parse_poly("T^2+2*T+1", T3))  # (T+1)^2
    with pytest.raises(ValueError):
        PrimeIdeal(parse_poly("2*T", T3))  # not monic
    with pytest.raises(ValueError):
        PrimeIdeal(Poly(T3, (5, 1), Level.FQR))  # coefficient outside F_q


def test_parse_and_format_round_trip():
    for text in ("T", "T^2 + T", "2*T + 1", "T^3 + 2*T + 1", "1", "T^5 + 2"):
        f = parse_poly(text, T3)
        assert format_poly(f) == text
        assert parse_poly(format_poly(f), T3) == f
    assert parse_poly("0,1,1", T3) == parse_poly("T^2+T", T3)
    assert parse_poly("T - 1", T3) == parse_poly("T+2", T3)
    for bad in ("", "X^2", "T^", "0,99"):
        with pytest.raises(ValueError):
            parse_poly(bad, T3)


@given(codes27, st.integers(0, 5))
def test_pow_mod_matches_pow_then_mod(a, k):
    f = Poly(T3, a)
    m = parse_poly("T^3+2*T+1", T3)
    assert f.pow_mod(k, m) == (f**k) % m


@given(st.lists(st.integers(0, 342), max_size=5))
def test_trace_and_norm_of_polynomials(a):
    f = Poly(T7, a)
    tr, nm = poly_trace(f), poly_norm(f)
    assert all(c < 7 for c in tr.coeffs + nm.coeffs)
    assert nm == f * frobenius_poly(f, 1) * frobenius_poly(f, 2)
    assert frobenius_poly(f, 3) == f


def test_evaluation_and_compose():
    f = parse_poly("T^2+T", T7)
    assert f(T7.elem(3)).code == (9 + 3) % 7
    g = parse_poly("T+1", T7)
    assert f.compose(g) == parse_poly("T^2+3*T+2", T7)


def test_json_round_trip():
    f = Poly(T7, (5, 0, 100, 342), Level.FQR)
    assert Poly.from_json(T7, f.to_json(), Level.FQR) == f
