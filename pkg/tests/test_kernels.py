import math

import numpy as np
import pytest

from singmod.endo.count import (MnFilter, _charpoly_plan, _cubic_plan, count_mn, count_mn_r3,
                                derive_degree_bounds, search_mn)
from singmod.ffield import tower_for
from singmod.kernels import ENV_VAR, HAVE_NUMBA, resolve_backend, run_search
from singmod.kernels.search import chunk_bounds, minor_terms
from singmod.polyring import PrimeIdeal, parse_poly

CASES = [(3, "T", 1), (3, "T^2+T", 1), (3, "T^4+T", 1), (3, "T^4+T", 2), (7, "T", 1), (5, "T^2+T", 1)]


def plan_for(q, rad, n, mode="charpoly", exponent="derived"):
    tower = tower_for(q, 3)
    P = PrimeIdeal(parse_poly("T", tower))
    f = parse_poly(rad, tower)
    b = derive_degree_bounds(f, P, 3)
    if mode == "charpoly":
        return _charpoly_plan(f, P, MnFilter(n), b, True)
    return _cubic_plan(f, P, MnFilter(n), b, True, exponent)


def test_minor_terms_counts():
    # sum_k C(r,k) k! permutation terms
    for r in (1, 2, 3, 4):
        rows, cols, signs, off = minor_terms(r)
        sizes = np.diff(off)
        assert list(sizes) == [math.comb(r, k) * math.factorial(k) for k in range(1, r + 1)]
        if r > 1:  # even and odd permutations of the full minor cancel in number
            assert int(signs[off[-2]:].sum()) == 0


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba missing")
@pytest.mark.parametrize("mode", ["charpoly", "cubic"])
@pytest.mark.parametrize("case", CASES)
def test_numba_and_numpy_agree(mode, case):
    plan = plan_for(*case, mode=mode)
    a = run_search(plan, "numba", max_hits=5000)
    b = run_search(plan, "numpy", max_hits=5000)
    assert (a.count, a.errors, a.hits) == (b.count, b.errors, b.hits)
    assert a.backend == "numba" and b.backend == "numpy"


@pytest.mark.parametrize("backend", ["numba", "numpy"])
@pytest.mark.parametrize("case", CASES[:4])
def test_worker_counts_are_deterministic(backend, case):
    plan = plan_for(*case)
    results = [run_search(plan, backend, workers=w, max_hits=10**5) for w in (1, 4, 8)]
    assert len({(r.count, r.errors, tuple(r.hits)) for r in results}) == 1
    assert sorted(results[0].hits) == results[0].hits


def test_chunks_cover_the_index_range():
    plan = plan_for(3, "T^4+T", 1)
    for workers in (1, 2, 3, 8, 64):
        chunks = chunk_bounds(plan, workers)
        assert chunks[0][0] == 0 and chunks[-1][1] == plan.total
        assert all(a[1] == b[0] for a, b in zip(chunks, chunks[1:]))


def test_decode_round_trip():
    plan = plan_for(3, "T^2+T", 1)
    res = run_search(plan, max_hits=3)
    for h in res.hits:
        xs = plan.decode(h)
        assert len(xs) == 3 and all(len(x) == plan.L for x in xs)
    assert len(res.hits) == 3 and res.count == 52


def test_backend_selection(monkeypatch):
    monkeypatch.setenv(ENV_VAR, "numpy")
    assert resolve_backend() == "numpy"
    tower = tower_for(3, 3)
    res = search_mn(parse_poly("T", tower), PrimeIdeal(parse_poly("T", tower)), 1)
    assert res.backend == "numpy" and res.count == 13
    assert resolve_backend("NUMBA") == ("numba" if HAVE_NUMBA else "numpy")
    monkeypatch.setenv(ENV_VAR, "cuda")
    with pytest.raises(ValueError):
        resolve_backend()
    monkeypatch.delenv(ENV_VAR)
    assert resolve_backend() in ("numba", "numpy")


def test_bad_arguments():
    plan = plan_for(3, "T", 1)
    with pytest.raises(ValueError):
        run_search(plan, "fortran")
    with pytest.raises(ValueError):
        run_search(plan, workers=0)


@pytest.mark.parametrize("workers", [1, 4, 8])
def test_public_counts_ignore_workers(workers):
    tower = tower_for(3, 3)
    P = PrimeIdeal(parse_poly("T", tower))
    f = parse_poly("T^2+T", tower)
    assert count_mn(f, P, 1, workers=workers) == 52
    assert count_mn_r3(f, P, 1, workers=workers) == 52
