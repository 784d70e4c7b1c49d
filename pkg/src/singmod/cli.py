"""Command-line frontend: ``singmod {deltas,ss,count,bound,katz}``.

Exit codes: 0 ok, 1 a bound or agreement check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources

from . import __version__
from .drinfeld import DrinfeldModule, height
from .endo.bounds import PRESETS, bound_report, katz_count, preset_report
from .endo.count import compare_counts, degree_audit, search_mn
from .errors import SingmodError
from .ffield import DEFAULT_CAP, prime_power, tower_for
from .jinv import delta_tuple, enumerate_delta_tuples
from .kernels import BACKENDS, resolve_backend
from .polyring import PrimeIdeal, format_poly, monic_irreducibles, parse_poly
from .twisted import PolyRing

OK, VIOLATION, BAD_INPUT = 0, 1, 2


@dataclass
class RunConfig:
    subcommand: str
    q: int | None = None
    r: int | None = None
    r_sep: int | None = None
    e: int | None = None
    radicand: str | None = None
    pi: str | None = None
    max_deg: int | None = None
    n: list[int] = field(default_factory=list)
    delta: list[int] | None = None
    preset: str | None = None
    max_m: int | None = None
    audit: bool = False
    format: str = "table"
    workers: int = 1
    backend: str = "numba"
    cap: int = DEFAULT_CAP
    seed: int = 0


class BadInput(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(";", ",").split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _levels(text: str) -> list[int]:
    """``"1"``, ``"1-3"`` or ``"1,2,4"``."""
    try:
        if "-" in text:
            a, b = text.split("-", 1)
            return list(range(int(a), int(b) + 1))
        return _int_list(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad level range {text!r}")


def _common(suppress: bool) -> argparse.ArgumentParser:
    """Shared flags.  Subcommands use SUPPRESS defaults so flags given before
    the subcommand are not overwritten."""
    def d(value):
        return argparse.SUPPRESS if suppress else value
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default=d("table"))
    common.add_argument("--workers", type=int, default=d(1))
    common.add_argument("--backend", choices=BACKENDS, default=d(None),
                        help="search backend (default: $SINGMOD_BACKEND or numba)")
    common.add_argument("--cap", type=int, default=d(DEFAULT_CAP), help="enumeration cap")
    common.add_argument("--seed", type=int, default=d(0), help="seed for the sampled audits")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common(True)
    p = argparse.ArgumentParser(prog="singmod", description=__doc__.splitlines()[0],
                                parents=[_common(False)])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("deltas", parents=[common], help="list basic J-invariant tuples")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--r", type=int, required=True)

    s = sub.add_parser("ss", parents=[common], help="supersingularity of T + tau^r at primes")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--pi", help='prime, e.g. "T" or "T^2+1"')
    g.add_argument("--max-deg", type=int, help="every monic irreducible up to this degree")

    s = sub.add_parser("count", parents=[common], help="count level-n embeddings")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--r", type=int, default=3)
    s.add_argument("--radicand", required=True)
    s.add_argument("--pi", default="T")
    s.add_argument("--n", type=_levels, default=[1], help='level, range "1-3" or list "1,2"')
    s.add_argument("--e", type=int, default=1, help="ramification index of the level filter")
    s.add_argument("--audit", action="store_true", help="also run the degree-window audit")

    s = sub.add_parser("bound", parents=[common], help="valuation lower-bound report")
    s.add_argument("--preset", choices=PRESETS)
    s.add_argument("--q", type=int)
    s.add_argument("--r", type=int, default=3)
    s.add_argument("--r-sep", type=int)
    s.add_argument("--e", type=int)
    s.add_argument("--delta", type=_int_list, help="delta_1..delta_{r-1}, e.g. 0,13")
    s.add_argument("--radicand")
    s.add_argument("--pi", default="T")
    s.add_argument("--max-m", type=int)

    s = sub.add_parser("katz", parents=[common], help="norm-1 trace-0 count in F_{q^3}")
    s.add_argument("--q", type=int, required=True)
    return p


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(subcommand=ns.subcommand)
    for k in asdict(cfg):
        if k != "subcommand" and hasattr(ns, k) and getattr(ns, k) is not None:
            setattr(cfg, k, getattr(ns, k))
    cfg.backend = resolve_backend(getattr(ns, "backend", None))
    if cfg.workers < 1:
        raise BadInput("--workers must be at least 1")
    if cfg.cap < 1:
        raise BadInput("--cap must be positive")
    if cfg.q is not None:
        try:
            prime_power(cfg.q)
        except ValueError:
            raise BadInput(f"q = {cfg.q} is not a prime power")
    if cfg.r is not None and cfg.r < 1:
        raise BadInput("r must be positive")
    if cfg.subcommand == "deltas" and cfg.r < 2:
        raise BadInput("basic J-invariants need r >= 2")
    if cfg.subcommand == "bound" and cfg.preset is None:
        missing = [k for k in ("q", "r_sep", "e", "delta", "radicand") if getattr(cfg, k) is None]
        if missing:
            raise BadInput(f"explicit bound needs --{', --'.join(m.replace('_', '-') for m in missing)}")
    if any(n < 1 for n in cfg.n):
        raise BadInput("levels must be positive")
    return cfg


def _prime(text: str, tower) -> PrimeIdeal:
    try:
        return PrimeIdeal(parse_poly(text, tower))
    except ValueError as exc:
        raise BadInput(f"pi = {text!r}: {exc}")


# ---------------------------------------------------------------- commands

def cmd_deltas(cfg: RunConfig):
    tuples = enumerate_delta_tuples(cfg.q, cfg.r, cfg.cap)
    result = {"q": cfg.q, "r": cfg.r, "count": len(tuples), "tuples": [d.to_json() for d in tuples]}
    ok = all(d.satisfies(cfg.q) for d in tuples)
    lines = [f"basic tuples for q={cfg.q}, r={cfg.r}: {len(tuples)}"] + [f"  {d}" for d in tuples]
    return result, ok, lines


def cmd_ss(cfg: RunConfig):
    tower = tower_for(cfg.q, 1, cfg.cap)
    if cfg.pi is not None:
        primes = [_prime(cfg.pi, tower)]
    else:
        primes = [PrimeIdeal(f) for d in range(1, cfg.max_deg + 1) for f in monic_irreducibles(tower, d)]
    ring = PolyRing(tower)
    phi = DrinfeldModule.carlitz_like(ring, cfg.r)
    rows, lines = [], [f"phi_T = T + tau^{cfg.r} over F_{cfg.q}[T]"]
    for P in primes:
        h = height(phi, P)
        ss = h == cfg.r * P.degree
        rule = math.gcd(P.degree, cfg.r) == 1
        rows.append({"pi": format_poly(P.pi), "degree": P.degree, "height": h,
                     "supersingular": ss, "gcd_rule": rule, "agree": ss == rule})
        lines.append(f"  pi = {format_poly(P.pi):<16} height {h:>3}  "
                     f"{'supersingular' if ss else 'ordinary':<13} gcd rule {'ok' if ss == rule else 'MISMATCH'}")
    return {"q": cfg.q, "r": cfg.r, "primes": rows}, all(r["agree"] for r in rows), lines


def cmd_count(cfg: RunConfig):
    tower = tower_for(cfg.q, cfg.r, cfg.cap)
    rad = parse_poly(cfg.radicand, tower)
    P = _prime(cfg.pi, tower)
    kw = dict(backend=cfg.backend, workers=cfg.workers, cap=cfg.cap)
    levels, ok = [], True
    lines = [f"X^{cfg.r} - ({format_poly(rad)}), pi = {format_poly(P.pi)}, q = {cfg.q}, e = {cfg.e}"]
    for n in cfg.n:
        if cfg.r == 3:
            cmp = compare_counts(rad, P, n, cfg.e, seed=cfg.seed, **kw)
            row = cmp.to_json()
            agree = cmp.matrix == cmp.derived == cmp.printed
            ok &= agree
            lines.append(f"  n = {n}: matrix {cmp.matrix}, equations {cmp.derived} (2n-1) / "
                         f"{cmp.printed} (2n+1)  {'agree' if agree else 'DISAGREE'}; "
                         f"exponent audit supports {cmp.audit.supported}")
        else:
            res = search_mn(rad, P, n, None, cfg.e, **kw)
            row = {"n": n, "matrix": res.count}
            lines.append(f"  n = {n}: matrix {res.count}")
        if cfg.audit:
            audit = degree_audit(rad, P, n, cfg.e, cfg.backend, cfg.workers, cfg.cap, strict=False)
            row["degree_audit"] = audit.to_json()
            ok &= audit.passed
            skipped = sum(e.skipped for e in audit.entries)
            lines.append(f"    degree audit {'passed' if audit.passed else 'FAILED'}"
                         f" ({len(audit.entries) - skipped} widened windows, {skipped} over the cap)")
        levels.append(row)
    result = {"q": cfg.q, "r": cfg.r, "radicand": format_poly(rad), "pi": format_poly(P.pi),
              "e": cfg.e, "levels": levels}
    if cfg.r == 3 and rad == parse_poly("T^2+T", tower) and P.pi == parse_poly("T", tower):
        katz = katz_count(cfg.q, cfg.cap)
        first = next((lv["matrix"] for lv in levels if lv["n"] == 1), None)
        result["katz_lower_bound"] = {"two_N3_0_1": 2 * katz.count, "count_n1": first,
                                      "holds": None if first is None else first >= 2 * katz.count}
        lines.append(f"  lower bound from (0,b,1), (0,1,c): 2 N_3(0,1) = {2 * katz.count}")
        if first is not None:
            ok &= first >= 2 * katz.count
    return result, ok, lines


def _frac(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def cmd_bound(cfg: RunConfig):
    kw = dict(backend=cfg.backend, workers=cfg.workers, cap=cfg.cap)
    if cfg.preset:
        rep = preset_report(cfg.preset, cfg.q, tuple(cfg.delta) if cfg.delta else None, **kw)
    else:
        tower = tower_for(cfg.q, cfg.r, cfg.cap)
        d = delta_tuple(cfg.q, cfg.delta)
        rep = bound_report(cfg.q, cfg.r, cfg.r_sep, cfg.e, d, parse_poly(cfg.radicand, tower),
                           _prime(cfg.pi, tower), cfg.max_m, None, **kw)
    out = rep.to_json()
    ok = not any(n.startswith("VIOLATION") for n in rep.notes)
    lines = [f"q = {rep.q}, r = {rep.r}, r_sep = {rep.r_sep}, e = {rep.e}, delta = {rep.delta}",
             f"  X^{rep.r} - ({rep.radicand}) at pi = {rep.pi}",
             f"  counts at levels {rep.levels}: {rep.counts}",
             f"  rhs = {_frac(rep.rhs)}"]
    if rep.lhs is not None:
        rel = "=" if rep.equality else (">" if rep.holds else "<")
        lines.append(f"  lhs = {rep.lhs}  ({rep.lhs} {rel} {_frac(rep.rhs)})")
    else:
        lines.append("  lhs = (no explicit CM module)")
    if "symbolic_rhs" in out:
        sym = out["symbolic_rhs"]
        lines.append(f"  {sym['text']}: {'holds' if sym['holds'] else 'FAILS'}")
    lines += [f"  {n}" for n in rep.notes]
    return out, ok, lines


def cmd_katz(cfg: RunConfig):
    res = katz_count(cfg.q, cfg.cap)
    out = res.to_json()
    lines = [f"q = {cfg.q}: N_3(0,1) = {res.count}",
             f"  {out['bound']}: {'holds' if res.holds else 'FAILS'}",
             f"  {out['lower_bound']}: {'holds' if res.lower_bound_holds else 'FAILS'}"]
    return out, res.holds and res.lower_bound_holds, lines


COMMANDS = {"deltas": cmd_deltas, "ss": cmd_ss, "count": cmd_count, "bound": cmd_bound, "katz": cmd_katz}


def load_schema(name: str) -> dict:
    return json.loads(resources.files("singmod.schemas").joinpath(f"{name}.schema.json").read_text())


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        cfg = resolve_config(ns)
        result, ok, lines = COMMANDS[cfg.subcommand](cfg)
    except (BadInput, ValueError, SingmodError) as exc:
        print(f"singmod: error: {exc}", file=sys.stderr)
        return BAD_INPUT
    if cfg.format == "json":
        doc = {"command": cfg.subcommand, "config": asdict(cfg), "ok": bool(ok), "result": result}
        print(json.dumps(doc, indent=2), file=stdout)
    else:
        print("\n".join(lines), file=stdout)
        if not ok:
            print("VIOLATION FOUND", file=stdout)
    return OK if ok else VIOLATION


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
