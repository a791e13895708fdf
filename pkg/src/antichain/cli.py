"""Command-line driver: reproducible verification runs with JSON reports.

Exit codes partition outcomes: 0 all checks pass, 1 mathematical failure
or implementation alarm, 2 usage or input error, 3 inconclusive (budget
exhausted).  Reports are byte-identical across identical invocations
except for the timing field, which the digest excludes.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from random import Random

from . import __version__
from .bounds import (
    applicable_bounds,
    binom,
    lym_statistic,
    setwise_bounds,
)
from .certificates import (
    BUILDERS,
    CertificateInternalError,
    PreconditionError,
)
from .randfam import (
    random_even_bounded_diameter,
    random_intersecting_uniform,
    random_intersection_spec,
    random_l_sperner,
    random_setwise_bounded,
)
from .search import (
    SizeCapError,
    VERDICT_COUNTEREXAMPLE,
    VERDICT_INCONCLUSIVE,
    VERDICT_TIGHT,
    dichotomy_audit,
    effective_workers,
    extremal_diameter,
    extremal_l_sperner,
    extremal_setwise,
    maximum_clique_families,
    build_graph,
    setwise_dichotomy_audit,
)
from .setfam import (
    Family,
    IntersectionSpec,
    is_l_intersecting,
    is_sperner,
    max_setwise_diff,
    symmetric_diameter,
    family_rank,
    common_core,
    canonical_key,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3

SUITE_MAX_N = 6
DEFAULT_SEED = 20240801


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _digest_bytes(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _emit(report: dict, started: float, pretty: bool) -> None:
    report["digest"] = _digest_bytes(_canonical_json(report).encode())
    report["timing_seconds"] = round(time.perf_counter() - started, 6)
    if pretty:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(_canonical_json(report))


def _check(name: str, source: str, outcome: str, detail) -> dict:
    return {"name": name, "source": source, "outcome": outcome, "detail": detail}


def _load_family(path: str):
    with open(path, "rb") as fh:
        raw = fh.read()
    return Family.from_obj(json.loads(raw.decode("utf-8"))), _digest_bytes(raw)


def _parse_l(text: str) -> IntersectionSpec:
    values = tuple(sorted(int(part) for part in text.split(",") if part.strip() != ""))
    return IntersectionSpec(values)


def _layer(n: int, s: int) -> Family:
    masks = sorted((m for m in range(1 << n) if m.bit_count() == s), key=canonical_key)
    return Family.from_masks(n, masks)


# --------------------------------------------------------------------------
# check
# --------------------------------------------------------------------------

def cmd_check(args) -> int:
    started = time.perf_counter()
    try:
        fam, digest = _load_family(args.family)
    except (OSError, ValueError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_USAGE

    checks = []
    if args.sperner:
        ok = is_sperner(fam)
        checks.append(_check("sperner", "sperner", "pass" if ok else "fail", None))
    if args.l_intersecting is not None:
        try:
            spec = _parse_l(args.l_intersecting)
        except ValueError as exc:
            print(json.dumps({"error": str(exc)}), file=sys.stderr)
            return EXIT_USAGE
        ok = is_l_intersecting(fam, spec)
        checks.append(
            _check("l-intersecting", "l-intersecting", "pass" if ok else "fail",
                   {"L": list(spec.values)})
        )
    if args.max_diameter is not None:
        diam = symmetric_diameter(fam) if len(fam) else 0
        ok = diam <= args.max_diameter
        checks.append(
            _check("max-diameter", "kleitman", "pass" if ok else "fail",
                   {"diameter": diam, "cap": args.max_diameter})
        )
    if args.max_setwise_diff is not None:
        diff = max_setwise_diff(fam) if len(fam) else 0
        ok = diff <= args.max_setwise_diff
        checks.append(
            _check("max-setwise-diff", "bounded-setwise-difference",
                   "pass" if ok else "fail", {"diff": diff, "cap": args.max_setwise_diff})
        )
    if args.lym:
        value = lym_statistic(fam)
        ok = value <= 1
        checks.append(_check("lym", "lym-inequality", "pass" if ok else "fail", str(value)))

    stats = {
        "size": len(fam),
        "n": fam.n,
        "sperner": is_sperner(fam),
        "lym": str(lym_statistic(fam)),
    }
    if len(fam):
        stats.update(
            {
                "rank": family_rank(fam),
                "symmetric_diameter": symmetric_diameter(fam),
                "max_setwise_diff": max_setwise_diff(fam),
                "common_core": list(common_core(fam).elements()),
            }
        )
    report = {
        "command": ["check"] + _echo(args),
        "version": __version__,
        "input_digest": digest,
        "checks": checks,
        "result": stats,
    }
    _emit(report, started, args.pretty)
    return EXIT_PASS if all(c["outcome"] == "pass" for c in checks) else EXIT_FAIL


# --------------------------------------------------------------------------
# certify
# --------------------------------------------------------------------------

_CERT_SOURCES = {
    "katona": "uniform-intersecting-shadow",
    "symmetric": "symmetric-difference-stability",
    "setwise": "setwise-difference-stability",
    "snevily": "sperner-intersection-bound",
}


def cmd_certify(args) -> int:
    started = time.perf_counter()
    try:
        fam, digest = _load_family(args.family)
    except (OSError, ValueError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_USAGE

    source = _CERT_SOURCES[args.system]
    try:
        if args.system == "snevily":
            if args.L is None:
                print(json.dumps({"error": "snevily needs --L"}), file=sys.stderr)
                return EXIT_USAGE
            report_obj = BUILDERS["snevily"](fam, _parse_l(args.L))
        else:
            if args.k is None:
                print(json.dumps({"error": f"{args.system} needs --k"}), file=sys.stderr)
                return EXIT_USAGE
            report_obj = BUILDERS[args.system](fam, args.k)
    except PreconditionError as exc:
        report = {
            "command": ["certify"] + _echo(args),
            "version": __version__,
            "input_digest": digest,
            "checks": [
                _check(args.system, source, "error",
                       {"violated_hypothesis": exc.hypothesis, "message": str(exc)})
            ],
            "result": None,
        }
        _emit(report, started, args.pretty)
        return EXIT_USAGE
    except CertificateInternalError as exc:
        partial = exc.report.to_obj(include_polys=args.dump_polys) if exc.report else None
        report = {
            "command": ["certify"] + _echo(args),
            "version": __version__,
            "input_digest": digest,
            "checks": [_check(args.system, source, "fail", str(exc))],
            "result": partial,
        }
        _emit(report, started, args.pretty)
        return EXIT_FAIL

    report = {
        "command": ["certify"] + _echo(args),
        "version": __version__,
        "input_digest": digest,
        "checks": [
            _check(args.system, source, "pass",
                   {"triangular_ok": report_obj.triangular_ok, "rank_ok": report_obj.rank_ok})
        ],
        "result": report_obj.to_obj(include_polys=args.dump_polys),
    }
    _emit(report, started, args.pretty)
    return EXIT_PASS


# --------------------------------------------------------------------------
# bounds
# --------------------------------------------------------------------------

def cmd_bounds(args) -> int:
    started = time.perf_counter()
    values = applicable_bounds(args.n, k=args.k, s=args.s, t=args.t, d=args.d)
    table = [b.to_obj() for b in values]
    if args.t is not None and args.k is not None:
        try:
            setwise_bounds(args.n, args.t, args.k)
            table.append(
                {
                    "name": "setwise-latter-case-reference",
                    "parameters": {"n": args.n, "t": args.t, "k": args.k},
                    "value": binom(args.n - (args.t - args.k), args.k),
                    "note": "large-n cap is (1 - c) times this for an unspecified "
                            "constant c > 0; informational only, never asserted",
                }
            )
        except ValueError:
            pass
    params = {"n": args.n, "k": args.k, "s": args.s, "t": args.t, "d": args.d}
    report = {
        "command": ["bounds"] + _echo(args),
        "version": __version__,
        "input_digest": _digest_bytes(_canonical_json(params).encode()),
        "checks": [],
        "result": table,
    }
    _emit(report, started, args.pretty)
    return EXIT_PASS


# --------------------------------------------------------------------------
# search
# --------------------------------------------------------------------------

def _search_outcome(res) -> str:
    if res.verdict == VERDICT_INCONCLUSIVE:
        return "inconclusive"
    if res.verdict == VERDICT_COUNTEREXAMPLE:
        return "fail"
    return "pass"


def cmd_search(args) -> int:
    started = time.perf_counter()
    workers = effective_workers(args.workers)
    params = {
        "n": args.n, "mode": args.mode, "d": args.d, "k": args.k, "L": args.L,
        "t_cap": args.t_cap, "sperner": args.sperner, "t": args.t,
        "node_cap": args.node_cap,
    }
    digest = _digest_bytes(_canonical_json(params).encode())
    checks = []
    try:
        if args.mode == "diameter":
            if args.d is None:
                raise ValueError("diameter mode needs --d")
            res = extremal_diameter(args.n, args.d, args.node_cap, workers)
            result = res.to_obj()
            checks.append(_check("diameter-extremum", "kleitman-tightness",
                                 _search_outcome(res), res.verdict))
        elif args.mode == "lsperner":
            if args.L is None:
                raise ValueError("lsperner mode needs --L")
            res = extremal_l_sperner(args.n, _parse_l(args.L), args.node_cap, workers)
            result = res.to_obj()
            checks.append(_check("l-sperner-extremum", "sperner-intersection-conjecture",
                                 _search_outcome(res), res.verdict))
        elif args.mode == "setwise":
            if args.k is None:
                raise ValueError("setwise mode needs --k")
            res = extremal_setwise(args.n, args.k, args.t_cap, args.sperner,
                                   args.node_cap, workers)
            result = res.to_obj()
            checks.append(_check("setwise-extremum", "bounded-setwise-difference",
                                 _search_outcome(res), res.verdict))
        elif args.mode == "audit":
            if args.k is None:
                raise ValueError("audit mode needs --k")
            if args.t is not None:
                audit = setwise_dichotomy_audit(args.n, args.k, args.t)
                source = "setwise-dichotomy"
            else:
                audit = dichotomy_audit(args.n, args.k)
                source = "symmetric-dichotomy"
            result = audit.to_obj()
            checks.append(_check("dichotomy-audit", source,
                                 "pass" if audit.zero_violations else "fail",
                                 {"violations": len(audit.violations)}))
        else:
            raise ValueError(f"unknown mode {args.mode}")
    except (ValueError, SizeCapError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_USAGE

    report = {
        "command": ["search"] + _echo(args),
        "version": __version__,
        "input_digest": digest,
        "checks": checks,
        "result": result,
    }
    _emit(report, started, args.pretty)
    if any(c["outcome"] == "fail" for c in checks):
        return EXIT_FAIL
    if any(c["outcome"] == "inconclusive" for c in checks):
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


# --------------------------------------------------------------------------
# verify-suite
# --------------------------------------------------------------------------

def _suite_kleitman(max_n, node_cap, workers, checks):
    for n in range(2, max_n + 1):
        for d in range(1, n):
            res = extremal_diameter(n, d, node_cap, workers)
            if not res.complete:
                checks.append(_check(f"kleitman n={n} d={d}", "kleitman-tightness",
                                     "inconclusive", res.explored_nodes))
                continue
            tight = res.verdict == VERDICT_TIGHT
            checks.append(
                _check(f"kleitman n={n} d={d}", "kleitman-tightness",
                       "pass" if tight else "fail",
                       {"optimum": res.optimum, "bound": res.compared_bound.value})
            )


def _suite_lsperner(max_n, node_cap, workers, checks):
    from itertools import combinations

    for n in range(1, max_n + 1):
        for s in (1, 2):
            if n < 2 * s - 1:
                continue
            for values in combinations(range(n), s):
                spec = IntersectionSpec(tuple(values))
                res = extremal_l_sperner(n, spec, node_cap, workers)
                name = f"lsperner n={n} L={list(values)}"
                if not res.complete:
                    checks.append(_check(name, "sperner-intersection-conjecture",
                                         "inconclusive", res.explored_nodes))
                    continue
                ok = res.verdict != VERDICT_COUNTEREXAMPLE
                ok = ok and res.optimum <= res.notes["general_bound"]
                detail = {"optimum": res.optimum, "bound": res.compared_bound.value}
                if values == tuple(range(s)):
                    layer = _layer(n, s)
                    attained = (
                        res.optimum == binom(n, s)
                        and is_sperner(layer)
                        and is_l_intersecting(layer, spec)
                    )
                    ok = ok and attained
                    detail["layer_attains"] = attained
                checks.append(_check(name, "sperner-intersection-conjecture",
                                     "pass" if ok else "fail", detail))


def _suite_audits(max_n, checks):
    for n in range(4, max_n + 1):
        audit = dichotomy_audit(n, 1)
        checks.append(
            _check(f"symmetric-audit n={n} k=1", "symmetric-dichotomy",
                   "pass" if audit.zero_violations else "fail",
                   {"families": audit.families_total, "violations": len(audit.violations)})
        )
    for n in range(3, max_n + 1):
        audit = setwise_dichotomy_audit(n, 1, 2)
        checks.append(
            _check(f"setwise-audit n={n} k=1 t=2", "setwise-dichotomy",
                   "pass" if audit.zero_violations else "fail",
                   {"families": audit.families_total, "violations": len(audit.violations)})
        )


def _suite_corollary(max_n, node_cap, workers, checks):
    for n in range(4, max_n + 1):
        res = extremal_setwise(n, 1, None, True, node_cap, workers)
        name = f"sperner-setwise n={n} k=1"
        if not res.complete:
            checks.append(_check(name, "sperner-setwise-layer", "inconclusive",
                                 res.explored_nodes))
            continue
        layer = _layer(n, 1)
        ok = res.optimum == binom(n, 1) and res.witness.same_sets(layer)
        detail = {"optimum": res.optimum, "target": binom(n, 1)}
        if n >= 5:
            graph = build_graph(
                n, None,
                lambda a, b: (a & ~b).bit_count() <= 1 and (b & ~a).bit_count() <= 1
                and a & ~b != 0 and b & ~a != 0,
                "sperner setwise-diff<=1",
            )
            optima = maximum_clique_families(graph, res.optimum)
            unique = len(optima) == 1 and optima[0].same_sets(layer)
            ok = ok and unique
            detail["unique_maximizer"] = unique
        checks.append(_check(name, "sperner-setwise-layer", "pass" if ok else "fail", detail))


def _suite_certificates(max_n, seed, checks):
    rng = Random(seed)
    failures = []
    for _ in range(20):
        n = rng.randint(3, max(3, max_n))
        k = rng.randint(1, 2)
        if k + 1 > n:
            k = n - 1
        fam = random_intersecting_uniform(rng, n, k + 1)
        try:
            BUILDERS["katona"](fam, k)
        except Exception as exc:  # noqa: BLE001 - recorded, not swallowed
            failures.append(f"katona: {exc}")
    for _ in range(20):
        n = rng.randint(3, max(3, max_n))
        k = rng.randint(1, 2)
        fam = random_even_bounded_diameter(rng, n, k)
        try:
            BUILDERS["symmetric"](fam, k)
        except Exception as exc:
            failures.append(f"symmetric: {exc}")
    for _ in range(20):
        n = rng.randint(3, max(3, max_n))
        k = rng.randint(1, 2)
        fam = random_setwise_bounded(rng, n, k)
        try:
            BUILDERS["setwise"](fam, k)
        except Exception as exc:
            failures.append(f"setwise: {exc}")
    for _ in range(20):
        n = rng.randint(2, max(2, max_n))
        spec = random_intersection_spec(rng, n)
        fam = random_l_sperner(rng, n, spec)
        try:
            BUILDERS["snevily"](fam, spec)
        except Exception as exc:
            failures.append(f"snevily: {exc}")
    checks.append(
        _check("randomized-certificates", "certificate-self-test",
               "pass" if not failures else "fail",
               {"seed": seed, "failures": failures})
    )


_SUITE_MODES = ("kleitman", "lsperner", "audits", "corollary", "certificates")


def cmd_verify_suite(args) -> int:
    started = time.perf_counter()
    if args.max_n > SUITE_MAX_N:
        print(json.dumps({"error": f"--max-n capped at {SUITE_MAX_N}"}), file=sys.stderr)
        return EXIT_USAGE
    modes = tuple(m.strip() for m in args.modes.split(",")) if args.modes else _SUITE_MODES
    bad = [m for m in modes if m not in _SUITE_MODES]
    if bad:
        print(json.dumps({"error": f"unknown modes {bad}"}), file=sys.stderr)
        return EXIT_USAGE

    workers = effective_workers(args.workers)
    checks: list[dict] = []
    if "kleitman" in modes:
        _suite_kleitman(args.max_n, args.node_cap, workers, checks)
    if "lsperner" in modes:
        _suite_lsperner(args.max_n, args.node_cap, workers, checks)
    if "audits" in modes:
        _suite_audits(args.max_n, checks)
    if "corollary" in modes:
        _suite_corollary(args.max_n, args.node_cap, workers, checks)
    if "certificates" in modes:
        _suite_certificates(args.max_n, args.seed, checks)

    params = {"max_n": args.max_n, "modes": list(modes), "node_cap": args.node_cap,
              "seed": args.seed}
    summary = {
        "pass": sum(c["outcome"] == "pass" for c in checks),
        "fail": sum(c["outcome"] == "fail" for c in checks),
        "inconclusive": sum(c["outcome"] == "inconclusive" for c in checks),
    }
    report = {
        "command": ["verify-suite"] + _echo(args),
        "version": __version__,
        "input_digest": _digest_bytes(_canonical_json(params).encode()),
        "checks": checks,
        "result": summary,
    }
    _emit(report, started, args.pretty)
    if summary["fail"]:
        return EXIT_FAIL
    if summary["inconclusive"]:
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


# --------------------------------------------------------------------------
# plumbing
# --------------------------------------------------------------------------

def _echo(args) -> list[str]:
    skip = {"func", "pretty"}
    out = []
    for key, value in sorted(vars(args).items()):
        if key in skip or value in (None, False):
            continue
        out.append(f"--{key.replace('_', '-')}={value}" if not isinstance(value, bool)
                   else f"--{key.replace('_', '-')}")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="antichain",
        description="Exact checkers, certificates, bounds, and extremal search "
                    "for set families over [n].",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("check", help="run predicates on a family file")
    p.add_argument("family", help="family JSON file")
    p.add_argument("--sperner", action="store_true")
    p.add_argument("--l-intersecting", metavar="L", help="comma list, e.g. 0,1")
    p.add_argument("--max-diameter", type=int)
    p.add_argument("--max-setwise-diff", type=int)
    p.add_argument("--lym", action="store_true", help="require the LYM sum <= 1")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("certify", help="build and verify an independence certificate")
    p.add_argument("family")
    p.add_argument("--system", required=True, choices=sorted(BUILDERS))
    p.add_argument("--k", type=int)
    p.add_argument("--L", metavar="L", help="comma list of allowed intersection sizes")
    p.add_argument("--dump-polys", action="store_true")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("bounds", help="print all applicable closed-form bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("search", help="exhaustive extremal search / audits")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", required=True, choices=("diameter", "setwise", "lsperner", "audit"))
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--L", metavar="L")
    p.add_argument("--t", type=int, help="audit mode: rank for the setwise dichotomy")
    p.add_argument("--t-cap", type=int)
    p.add_argument("--sperner", action="store_true")
    p.add_argument("--node-cap", type=int)
    p.add_argument("--workers", type=int, default=1,
                   help="overridden by ANTICHAIN_WORKERS when set")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify-suite", help="the full small-n verification matrix")
    p.add_argument("--max-n", type=int, default=5)
    p.add_argument("--modes", help=f"comma list from {','.join(_SUITE_MODES)}")
    p.add_argument("--node-cap", type=int)
    p.add_argument("--workers", type=int, default=1,
                   help="overridden by ANTICHAIN_WORKERS when set")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_verify_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
