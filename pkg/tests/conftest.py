import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from singmod.drinfeld import DrinfeldModule
from singmod.ffield import FieldSpec, build_tower

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE: dict[int, str] = {}


def record_acceptance(item: int, passed: bool, detail: str) -> str:
    line = f"[acceptance {item}] {'PASS' if passed else 'FAIL'}: {detail}"
    ACCEPTANCE[item] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for item in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[item])


# -- naive field arithmetic used as an oracle ------------------------------------------

def _reduce(poly: list[int], modulus: list[int], p: int) -> list[int]:
    """poly mod a monic modulus over F_p (lists low to high)."""
    poly = [c % p for c in poly]
    d = len(modulus) - 1
    for k in range(len(poly) - 1, d - 1, -1):
        c = poly[k]
        if c:
            for t in range(d + 1):
                poly[k - d + t] = (poly[k - d + t] - c * modulus[t]) % p
    return (poly + [0] * d)[:d]


def naive_mul(tower, x: int, y: int) -> int:
    """Multiply two codes through explicit bivariate polynomials a^i b^j."""
    p, e, r = tower.p, tower.e, tower.r
    X = tower.digits[x].reshape(r, e)
    Y = tower.digits[y].reshape(r, e)
    prod = [[0] * (2 * e - 1) for _ in range(2 * r - 1)]
    for j1 in range(r):
        for i1 in range(e):
            if X[j1, i1]:
                for j2 in range(r):
                    for i2 in range(e):
                        prod[j1 + j2][i1 + i2] += int(X[j1, i1]) * int(Y[j2, i2])
    base = list(tower.base_poly)
    rows = [_reduce(row, base, p) for row in prod]
    top = [[int(v) for v in tower.digits[c][:e]] for c in tower.top_poly]
    for j in range(2 * r - 2, r - 1, -1):
        c = rows[j]
        rows[j] = [0] * e
        for k in range(r):
            t = top[k]
            conv = [0] * (2 * e - 1)
            for a in range(e):
                for b in range(e):
                    conv[a + b] += c[a] * t[b]
            conv = _reduce(conv, base, p)
            rows[j - r + k] = [(u - v) % p for u, v in zip(rows[j - r + k], conv)]
    coords = [rows[j][i] for j in range(r) for i in range(e)]
    return int(sum(c * p**t for t, c in enumerate(coords)))


@pytest.fixture(scope="session")
def small_towers():
    specs = [FieldSpec(2, 1, 3), FieldSpec(3, 1, 3), FieldSpec(3, 2, 3), FieldSpec(7, 1, 3),
             FieldSpec(2, 2, 2), FieldSpec(5, 1, 2), FieldSpec(3, 2, 1), FieldSpec(5, 1, 4)]
    return [build_tower(s) for s in specs]


def random_poly_codes(rng: np.random.Generator, size: int, deg: int) -> list[int]:
    return [int(v) for v in rng.integers(0, size, deg + 1)]


# -- module helpers shared by the Drinfeld and J-invariant tests ------------------------

def random_module(R, rng, r, deg=3, zero_prob=0.3):
    Q = R.tower.order
    g = []
    for _ in range(r - 1):
        if rng.random() < zero_prob:
            g.append(R.zero())
        else:
            g.append(R.elem([rng.randrange(Q) for _ in range(deg)]))
    return DrinfeldModule(R, g, R.one())


def conjugate(phi, c):
    """psi with psi_T = c^{-1} phi_T c, i.e. g'_i = c^(q^i - 1) g_i."""
    R = phi.ring
    T = R.tower
    g = [R.mul(R.elem([T.pow(c, R.q**i - 1)]), gi) for i, gi in enumerate(phi.g, start=1)]
    return DrinfeldModule(R, g, phi.delta)
