"""Mixed-radix exhaustive search over coefficient vectors.

A search point is a tuple of digits, one per *slot*; slot ``s`` writes
``values[s, digit]`` into coefficient ``pos[s]`` of the polynomial ``x_owner[s]``.
The last slot varies fastest, so the linear index order is lexicographic in
the slot order.  Polynomials live in fixed-length coefficient buffers of
length ``L`` (chosen by the caller large enough that no product overflows).

Two tests are available:

* ``charpoly``: the characteristic polynomial of the cyclic-algebra matrix of
  ``x`` (principal minors by permutation expansion) must equal a target;
* ``cubic``: the three rank-3 coefficient equations in (x_1, x_2', x_3').
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import HAVE_NUMBA, resolve_backend

if HAVE_NUMBA:
    from numba import njit

    def _jit(fn):
        return njit(cache=True, nogil=True)(fn)
else:  # pragma: no cover
    def _jit(fn):
        return fn


# ---------------------------------------------------------------- plan

def minor_terms(r: int):
    """Permutation expansion of all principal minors, grouped by size."""
    rows, cols, signs, offsets = [], [], [], [0]
    for k in range(1, r + 1):
        for subset in itertools.combinations(range(r), k):
            for perm in itertools.permutations(range(k)):
                inv = sum(1 for a in range(k) for b in range(a + 1, k) if perm[a] > perm[b])
                rows.append(list(subset) + [0] * (r - k))
                cols.append([subset[p] for p in perm] + [0] * (r - k))
                signs.append(-1 if inv % 2 else 1)
        offsets.append(len(signs))
    return (np.array(rows, np.int64), np.array(cols, np.int64),
            np.array(signs, np.int64), np.array(offsets, np.int64))


@dataclass
class SearchPlan:
    mode: str  # "charpoly" or "cubic"
    r: int
    q: int
    L: int
    sizes: np.ndarray
    values: np.ndarray
    owner: np.ndarray
    pos: np.ndarray
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    frob: np.ndarray
    # charpoly mode
    pref: np.ndarray | None = None
    pi: np.ndarray | None = None
    target: np.ndarray | None = None
    # cubic mode: rows P2, P3a, P3b, P3c
    pows: np.ndarray | None = None
    delta: np.ndarray | None = None
    terms: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if self.mode not in ("charpoly", "cubic"):
            raise ValueError(f"unknown search mode {self.mode!r}")
        if self.mode == "charpoly" and not self.terms:
            self.terms = minor_terms(self.r)
        if self.mode == "cubic" and self.r != 3:
            raise ValueError("the cubic equations are for rank 3")

    @property
    def total(self) -> int:
        return int(np.prod(self.sizes, dtype=object)) if len(self.sizes) else 1

    def decode(self, idx: int) -> list[list[int]]:
        """Coefficient lists of (x_1, ..., x_r) (before prefactors) at linear index ``idx``."""
        xs = [[0] * self.L for _ in range(self.r)]
        for s in range(len(self.sizes) - 1, -1, -1):
            idx, d = divmod(idx, int(self.sizes[s]))
            xs[self.owner[s]][self.pos[s]] = int(self.values[s, d])
        return xs


@dataclass
class SearchResult:
    count: int
    errors: int
    hits: list[int]
    candidates: int
    backend: str
    workers: int


# ---------------------------------------------------------------- numba kernels

def _pmul(out, a, b, add, mul):
    L = out.shape[0]
    for i in range(L):
        out[i] = 0
    for i in range(L):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(L - i):
            bj = b[j]
            if bj != 0:
                out[i + j] = add[out[i + j], mul[ai, bj]]


def _frobp(out, a, i, frob):
    for c in range(out.shape[0]):
        out[c] = frob[i, a[c]]


def _trace3(out, a, frob, add, tmp):
    L = out.shape[0]
    for c in range(L):
        out[c] = add[add[a[c], frob[1, a[c]]], frob[2, a[c]]]


def _decode(idx, sizes, values, owner, pos, xs):
    for k in range(xs.shape[0]):
        for c in range(xs.shape[1]):
            xs[k, c] = 0
    for s in range(sizes.shape[0] - 1, -1, -1):
        d = idx % sizes[s]
        idx //= sizes[s]
        xs[owner[s], pos[s]] = values[s, d]


def _charpoly_chunk(start, stop, sizes, values, owner, pos, pref, pi, target,
                    term_rows, term_cols, term_sign, k_off, q, add, mul, neg, frob, hits):
    r = pref.shape[0]
    L = pref.shape[1]
    xs = np.zeros((r, L), np.int64)
    X = np.zeros((r, L), np.int64)
    E = np.zeros((r, r, L), np.int64)
    tmp = np.zeros(L, np.int64)
    prod = np.zeros(L, np.int64)
    tmp2 = np.zeros(L, np.int64)
    acc = np.zeros(L, np.int64)
    count = 0
    err = 0
    nh = 0
    for idx in range(start, stop):
        _decode(idx, sizes, values, owner, pos, xs)
        for k in range(r):
            _pmul(X[k], xs[k], pref[k], add, mul)
        for i in range(r):
            for j in range(r):
                _frobp(tmp, X[(j - i) % r], i, frob)
                if j < i:
                    _pmul(E[i, j], tmp, pi, add, mul)
                else:
                    for c in range(L):
                        E[i, j, c] = tmp[c]
        ok = True
        for k in range(1, r + 1):
            for c in range(L):
                acc[c] = 0
            for t in range(k_off[k - 1], k_off[k]):
                for c in range(L):
                    prod[c] = E[term_rows[t, 0], term_cols[t, 0], c]
                for f in range(1, k):
                    _pmul(tmp2, prod, E[term_rows[t, f], term_cols[t, f]], add, mul)
                    for c in range(L):
                        prod[c] = tmp2[c]
                if term_sign[t] > 0:
                    for c in range(L):
                        acc[c] = add[acc[c], prod[c]]
                else:
                    for c in range(L):
                        acc[c] = add[acc[c], neg[prod[c]]]
            for c in range(L):
                if acc[c] >= q:
                    err += 1
                    break
            for c in range(L):
                if acc[c] != target[k - 1, c]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            count += 1
            if nh < hits.shape[0]:
                hits[nh] = idx
                nh += 1
    return count, err, nh


def _cubic_chunk(start, stop, sizes, values, owner, pos, pows, delta, q, add, mul, neg, frob, hits):
    L = delta.shape[0]
    xs = np.zeros((3, L), np.int64)
    s1 = np.zeros(L, np.int64)
    s2 = np.zeros(L, np.int64)
    u = np.zeros(L, np.int64)
    w = np.zeros(L, np.int64)
    lhs = np.zeros(L, np.int64)
    rhs = np.zeros(L, np.int64)
    count = 0
    nh = 0
    for idx in range(start, stop):
        _decode(idx, sizes, values, owner, pos, xs)
        x1 = xs[0]
        y = xs[1]
        z = xs[2]
        # Tr(x_1) = 0
        _trace3(u, x1, frob, add, w)
        bad = False
        for c in range(L):
            if u[c] != 0:
                bad = True
                break
        if bad:
            continue
        # Tr(x_1 s(x_1)) = P2 Tr(y s(z))
        _frobp(s1, x1, 1, frob)
        _pmul(u, x1, s1, add, mul)
        _trace3(lhs, u, frob, add, w)
        _frobp(s1, z, 1, frob)
        _pmul(u, y, s1, add, mul)
        _trace3(w, u, frob, add, s2)
        _pmul(rhs, pows[0], w, add, mul)
        for c in range(L):
            if lhs[c] != rhs[c]:
                bad = True
                break
        if bad:
            continue
        # N(x_1) + P3a N(y) + P3b N(z) - P3c Tr(x_1 s(y) s^2(z)) = Delta
        for c in range(L):
            lhs[c] = 0
        for k in range(3):
            src = xs[k]
            _frobp(s1, src, 1, frob)
            _pmul(u, src, s1, add, mul)
            _frobp(s2, src, 2, frob)
            _pmul(w, u, s2, add, mul)
            if k > 0:
                _pmul(u, pows[k], w, add, mul)
            else:
                for c in range(L):
                    u[c] = w[c]
            for c in range(L):
                lhs[c] = add[lhs[c], u[c]]
        _frobp(s1, y, 1, frob)
        _pmul(u, x1, s1, add, mul)
        _frobp(s2, z, 2, frob)
        _pmul(w, u, s2, add, mul)
        _trace3(u, w, frob, add, s1)
        _pmul(w, pows[3], u, add, mul)
        for c in range(L):
            lhs[c] = add[lhs[c], neg[w[c]]]
            if lhs[c] != delta[c]:
                bad = True
                break
        if bad:
            continue
        count += 1
        if nh < hits.shape[0]:
            hits[nh] = idx
            nh += 1
    return count, 0, nh


if HAVE_NUMBA:
    _pmul = _jit(_pmul)
    _frobp = _jit(_frobp)
    _trace3 = _jit(_trace3)
    _decode = _jit(_decode)
    _charpoly_numba = _jit(_charpoly_chunk)
    _cubic_numba = _jit(_cubic_chunk)


# ---------------------------------------------------------------- numpy fallback

def _np_decode(idx, plan: SearchPlan) -> np.ndarray:
    xs = np.zeros((len(idx), plan.r, plan.L), np.int64)
    rest = idx.copy()
    for s in range(len(plan.sizes) - 1, -1, -1):
        d = rest % plan.sizes[s]
        rest //= plan.sizes[s]
        xs[:, plan.owner[s], plan.pos[s]] = plan.values[s, d]
    return xs


def _np_pmul(a, b, add, mul):
    """Batched truncated product; ``b`` may be a single shared polynomial."""
    L = a.shape[1]
    out = np.zeros_like(a)
    b = np.broadcast_to(b, a.shape)
    live_a = a.any(axis=0)
    live_b = b.any(axis=0)
    for i in range(L):
        if not live_a[i]:
            continue
        ai = a[:, i]
        for j in range(L - i):
            if live_b[j]:
                out[:, i + j] = add[out[:, i + j], mul[ai, b[:, j]]]
    return out


def _np_trace3(a, frob, add):
    return add[add[a, frob[1][a]], frob[2][a]]


def _np_charpoly(idx, plan: SearchPlan):
    add, mul, neg, frob = plan.add, plan.mul, plan.neg, plan.frob
    r = plan.r
    rows, cols, signs, off = plan.terms
    xs = _np_decode(idx, plan)
    X = [_np_pmul(xs[:, k], plan.pref[k], add, mul) for k in range(r)]
    E = [[None] * r for _ in range(r)]
    for i in range(r):
        for j in range(r):
            t = frob[i][X[(j - i) % r]]
            E[i][j] = _np_pmul(t, plan.pi, add, mul) if j < i else t
    alive = np.ones(len(idx), bool)
    errors = 0
    for k in range(1, r + 1):
        sel = np.nonzero(alive)[0]
        if not len(sel):
            break
        acc = np.zeros((len(sel), plan.L), np.int64)
        for t in range(off[k - 1], off[k]):
            prod = E[rows[t, 0]][cols[t, 0]][sel]
            for f in range(1, k):
                prod = _np_pmul(prod, E[rows[t, f]][cols[t, f]][sel], add, mul)
            acc = add[acc, prod if signs[t] > 0 else neg[prod]]
        errors += int((acc >= plan.q).any(axis=1).sum())
        alive[sel] = (acc == plan.target[k - 1]).all(axis=1)
    return alive, errors


def _np_cubic(idx, plan: SearchPlan):
    add, mul, neg, frob = plan.add, plan.mul, plan.neg, plan.frob
    xs = _np_decode(idx, plan)
    x1, y, z = xs[:, 0], xs[:, 1], xs[:, 2]
    alive = ~_np_trace3(x1, frob, add).any(axis=1)
    lhs = _np_trace3(_np_pmul(x1, frob[1][x1], add, mul), frob, add)
    rhs = _np_pmul(_np_trace3(_np_pmul(y, frob[1][z], add, mul), frob, add), plan.pows[0], add, mul)
    alive &= (lhs == rhs).all(axis=1)
    total = np.zeros_like(x1)
    for k, src in enumerate((x1, y, z)):
        nrm = _np_pmul(_np_pmul(src, frob[1][src], add, mul), frob[2][src], add, mul)
        if k:
            nrm = _np_pmul(nrm, plan.pows[k], add, mul)
        total = add[total, nrm]
    mixed = _np_trace3(_np_pmul(_np_pmul(x1, frob[1][y], add, mul), frob[2][z], add, mul), frob, add)
    total = add[total, neg[_np_pmul(mixed, plan.pows[3], add, mul)]]
    alive &= (total == plan.delta).all(axis=1)
    return alive, 0


def _numpy_chunk(start, stop, plan: SearchPlan, hits, batch=1 << 14):
    fn = _np_charpoly if plan.mode == "charpoly" else _np_cubic
    count = err = nh = 0
    for b0 in range(start, stop, batch):
        idx = np.arange(b0, min(stop, b0 + batch), dtype=np.int64)
        alive, e = fn(idx, plan)
        err += e
        found = idx[alive]
        count += len(found)
        take = min(len(found), hits.shape[0] - nh)
        hits[nh:nh + take] = found[:take]
        nh += take
    return count, err, nh


# ---------------------------------------------------------------- driver

def _run_chunk(plan: SearchPlan, backend: str, start: int, stop: int, max_hits: int):
    hits = np.zeros(max_hits, np.int64)
    if backend == "numpy":
        count, err, nh = _numpy_chunk(start, stop, plan, hits)
    elif plan.mode == "charpoly":
        rows, cols, signs, off = plan.terms
        count, err, nh = _charpoly_numba(start, stop, plan.sizes, plan.values, plan.owner, plan.pos,
                                         plan.pref, plan.pi, plan.target, rows, cols, signs, off,
                                         plan.q, plan.add, plan.mul, plan.neg, plan.frob, hits)
    else:
        count, err, nh = _cubic_numba(start, stop, plan.sizes, plan.values, plan.owner, plan.pos,
                                      plan.pows, plan.delta, plan.q, plan.add, plan.mul, plan.neg,
                                      plan.frob, hits)
    return int(count), int(err), hits[:nh].tolist()


def chunk_bounds(plan: SearchPlan, workers: int) -> list[tuple[int, int]]:
    """Split along the outermost slot; each chunk is a contiguous index range."""
    total = plan.total
    if total == 0:
        return []
    outer = int(plan.sizes[0]) if len(plan.sizes) else 1
    inner = total // outer
    pieces = min(outer, max(1, 4 * workers))
    cuts = [round(i * outer / pieces) for i in range(pieces + 1)]
    return [(a * inner, b * inner) for a, b in zip(cuts, cuts[1:]) if b > a]


def run_search(plan: SearchPlan, backend: str | None = None, workers: int = 1,
               max_hits: int = 0) -> SearchResult:
    """Count the search points passing the plan's test; the sum is chunk-order deterministic."""
    backend = resolve_backend(backend)
    if workers < 1:
        raise ValueError("workers must be positive")
    chunks = chunk_bounds(plan, workers)
    if workers == 1 or len(chunks) <= 1:
        parts = [_run_chunk(plan, backend, a, b, max_hits) for a, b in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda ab: _run_chunk(plan, backend, ab[0], ab[1], max_hits), chunks))
    count = sum(p[0] for p in parts)
    errors = sum(p[1] for p in parts)
    hits = [h for p in parts for h in p[2]][:max_hits]
    return SearchResult(count, errors, hits, plan.total, backend, workers)
