"""Command-line front end.

    bianchi-modl h1 --d 2 --ell 11 --level G0:3+w --weight triv
    bianchi-modl eigensystems --d 2 --ell 11 --weight E:10,10,0,0 --primes-up-to 41
    bianchi-modl verify --suite exactness --d 2 --ell 3
    bianchi-modl weight-reduction --d 2 --ell 3

Exit codes: 0 when every check passes, 1 on a verification failure, 2 on a
usage error (bad flag, unparsable level or weight, unsupported field or prime).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

import numpy as np

from . import __version__
from ._accel import use_numba
from .cache import Cache, canonical_json, payload_hash
from .group_data import builtin_presentation, parse_level
from .hecke import DEFAULT_MAX_EXT, compute_space, hecke_primes, match_up_to_twist, weight_reduction_check
from .quad_arith import SplittingError, UnsupportedFieldError, format_quadint, make_field, split_prime
from .rep_modules import parse_weight
from .verify import DEFAULT_SEED, SUITES

log = logging.getLogger("bianchi_modl")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
PAPER_SUITES = ("exactness", "pairings", "invariants", "shapiro", "twist", "paper-example")


class UsageError(ValueError):
    pass


# --- argument parsing ----------------------------------------------------------------


def _common(p: argparse.ArgumentParser, *, level=True, weight=True, primes_default=30) -> None:
    p.add_argument("--d", type=int, default=2, help="K = Q(sqrt(-d)), d in {1,2,3,7,11} (default 2)")
    p.add_argument("--ell", type=int, required=True, help="split odd prime")
    if level:
        p.add_argument("--level", default="1", help='"1", "G0:11", "G1:1+w", "G0:3+w", ... (default 1)')
    if weight:
        p.add_argument("--weight", default="triv", help='"triv", "E:r,s,a,b", "I:r,s", "U:r,s", "V:r,s", "W:r,s", "char:r,s"')
    p.add_argument("--primes-up-to", type=int, default=primes_default, help="norm bound for Hecke primes")
    p.add_argument("--max-ext", type=int, default=DEFAULT_MAX_EXT, help="largest extension degree to split over")
    p.add_argument("--cache-dir", default=None, help="persistent cache directory")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomised checks")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON output (default)")
    fmt.add_argument("--table", dest="fmt", action="store_const", const="table", help="aligned text tables")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv", help="CSV of eigensystems / checks")
    p.add_argument("--output", "-o", default=None, help="write output here instead of stdout")
    p.add_argument("--threads", type=int, default=1, help="worker threads for independent Hecke operators")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(fmt="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bianchi-modl", description="Mod-ell cohomology of Bianchi groups with Hecke action.")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("h1", help="dimension and basis of H^1(level, weight)")
    _common(p, primes_default=0)

    p = sub.add_parser("eigensystems", help="Hecke eigensystems on H^1(level, weight)")
    _common(p)
    p.add_argument("--compare", action="append", default=[], metavar="LEVEL[@WEIGHT]",
                   help="match the systems against another space, at every determinant twist")
    p.add_argument("--check-cache", action="store_true", help="recompute on a cache hit and compare")

    p = sub.add_parser("verify", help="run verification suites")
    _common(p, level=False, weight=False, primes_default=0)
    p.add_argument("--suite", action="append", default=[], choices=sorted(SUITES) + ["all"],
                   help="suite to run (repeatable; default all of: %s)" % ", ".join(PAPER_SUITES))

    p = sub.add_parser("weight-reduction", help="every E^{a,b}_{r,s} system is a twist of an I_{r,s} system")
    _common(p, weight=False)
    p.add_argument("--weights", default=None, help='restrict to "r,s,a,b;r,s,a,b;..."')
    return parser


# --- helpers ------------------------------------------------------------------------


def resolve(args) -> dict:
    """Validate the arguments and return the resolved job spec (embedded in every report)."""
    try:
        F = make_field(args.d)
        sp = split_prime(F, args.ell)
    except (UnsupportedFieldError, SplittingError, ValueError) as e:
        raise UsageError(str(e)) from e
    spec = {
        "command": args.command,
        "d": args.d,
        "ell": args.ell,
        "lambda": format_quadint(sp.lam),
        "tau1_w": sp.root1,
        "primes_up_to": args.primes_up_to,
        "max_ext": args.max_ext,
        "seed": args.seed,
        "presentation": builtin_presentation(F).digest(),
        "version": __version__,
    }
    if hasattr(args, "level"):
        try:
            L = parse_level(args.level, F)
        except ValueError as e:
            raise UsageError(str(e)) from e
        spec["level"] = L.label() if not L.is_full else "1"
        args._level = None if L.is_full else L
        primes = hecke_primes(F, args.ell, args._level, args.primes_up_to) if args.primes_up_to > 1 else []
        spec["primes"] = [format_quadint(q) for q in primes]
        args._primes = primes
    if hasattr(args, "weight"):
        try:
            w = parse_weight(args.weight)
            w.validate(args.ell)
        except ValueError as e:
            raise UsageError(str(e)) from e
        spec["weight"] = str(w)
        args._weight = w
    args._field, args._sp = F, sp
    return spec


@contextmanager
def mapper(threads: int):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            yield ex.map
    else:
        yield map


def space_report(args, spec: dict) -> dict:
    with mapper(args.threads) as map_fn:
        R = compute_space(args._field, args._sp, args._level, args._weight, args._primes, args.max_ext, map_fn=map_fn)
    report = {
        "spec": spec,
        "field": args.d,
        "ell": args.ell,
        "level": spec["level"],
        "weight": spec["weight"],
        "h1_dim": R.space.dim,
        "operators": [{"alpha": op.label, "matrix_hash": op.matrix_hash()} for op in R.operators],
        "eigensystems": [s.as_dict() for s in R.systems] if args.command != "h1" else [],
        "matches": [],
    }
    report["basis_hash"] = _array_hash(R.space.basis)
    report["module_dim"] = R.space.module.dim
    report["generators"] = R.space.presentation.ngens
    return report, R


def _array_hash(A: np.ndarray) -> str:
    import hashlib

    A = np.ascontiguousarray(A, dtype=np.int64)
    return hashlib.sha256(("%dx%d:" % A.shape).encode() + A.tobytes()).hexdigest()[:16]


def _cached_space_report(args, spec: dict):
    cache = Cache(args.cache_dir)
    hit = cache.get("space", spec)
    if hit is not None and not getattr(args, "check_cache", False):
        log.info("cache hit")
        return hit, None, True
    report, R = space_report(args, spec)
    if hit is not None and canonical_json(hit) != canonical_json(report):
        raise CacheMismatch("cached report differs from a fresh computation")
    cache.put("space", spec, report)
    return report, R, False


class CacheMismatch(RuntimeError):
    pass


# --- commands ----------------------------------------------------------------------


def cmd_h1(args) -> tuple[dict, int]:
    spec = resolve(args)
    report, _, _ = _cached_space_report(args, spec)
    return report, EXIT_OK


def cmd_eigensystems(args) -> tuple[dict, int]:
    spec = resolve(args)
    spec["compare"] = list(args.compare)
    report, R, _ = _cached_space_report(args, spec)
    if args.compare:
        if R is None:
            report, R = space_report(args, spec)
        F, sp = args._field, args._sp
        for item in args.compare:
            lev, _, wt = item.partition("@")
            try:
                L = parse_level(lev, F)
                w = parse_weight(wt or "triv")
                w.validate(args.ell)
            except ValueError as e:
                raise UsageError(str(e)) from e
            L = None if L.is_full else L
            with mapper(args.threads) as map_fn:
                T = compute_space(F, sp, L, w, args._primes, args.max_ext, map_fn=map_fn)
            target = "%s@%s" % (L.label() if L else "1", w)
            for si, phi in enumerate(R.systems):
                if not phi.resolved:
                    continue
                for ci, a, b in match_up_to_twist(phi, T.systems, sp, min_support=len(args._primes)):
                    report["matches"].append({"source": si, "target": "%s#%d" % (target, ci), "twist": [a, b]})
    return report, EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    spec = resolve(args)
    names = args.suite or list(PAPER_SUITES)
    if "all" in names:
        names = list(PAPER_SUITES) + [n for n in sorted(SUITES) if n not in PAPER_SUITES]
    spec["suites"] = names
    results = []
    for name in names:
        fn = SUITES[name]
        kw = {"seed": args.seed}
        if name == "paper-example" and args.primes_up_to > 1:
            kw["prime_bound"] = args.primes_up_to
        if name in ("shapiro", "twist") and args.primes_up_to > 1:
            kw["prime_bound"] = args.primes_up_to
        if name == "injectivity":
            kw = {}
        try:
            res = fn(args.d, args.ell, **kw)
        except (SplittingError, UnsupportedFieldError) as e:
            raise UsageError(str(e)) from e
        results.append(res)
    report = {
        "spec": spec,
        "field": args.d,
        "ell": args.ell,
        "passed": all(r.passed for r in results),
        "suites": [r.as_dict() for r in results],
    }
    return report, EXIT_OK if report["passed"] else EXIT_FAIL


def _parse_weights(text: str | None):
    if not text:
        return None
    out = []
    for chunk in text.split(";"):
        vals = [int(x) for x in chunk.split(",")]
        if len(vals) != 4:
            raise UsageError("each weight needs r,s,a,b")
        out.append(tuple(vals))
    return out


def cmd_weight_reduction(args) -> tuple[dict, int]:
    spec = resolve(args)
    try:
        weights = _parse_weights(args.weights)
    except ValueError as e:
        raise UsageError(str(e)) from e
    spec["weights"] = args.weights or "all r+s even"
    progress = (lambda msg: log.info(msg)) if args.verbose else None
    with mapper(args.threads) as map_fn:
        rep = weight_reduction_check(
            args._field,
            args._sp,
            level=args._level,
            prime_norm_bound=args.primes_up_to,
            weights=weights,
            max_ext_degree=args.max_ext,
            progress=progress,
            map_fn=map_fn,
        )
    body = rep.as_dict()
    matches = [
        {"source": "%s#%d" % (row["weight"], m["source"]), "target": "I:%s#%d" % (row["weight"][2:].rsplit(",", 2)[0], m["target"]), "twist": m["twist"]}
        for row in body["weights"]
        for m in row["matches"]
    ]
    report = {"spec": spec, **body, "matches": matches}
    return report, EXIT_OK if rep.passed else EXIT_FAIL


COMMANDS = {
    "h1": cmd_h1,
    "eigensystems": cmd_eigensystems,
    "verify": cmd_verify,
    "weight-reduction": cmd_weight_reduction,
}


# --- rendering ---------------------------------------------------------------------


def _align(rows: list[list[str]]) -> str:
    if not rows:
        return ""
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


def _system_rows(systems: list[dict]) -> list[list[str]]:
    if not systems:
        return []
    labels = list(systems[0]["values"])
    rows = [["#"] + labels + ["k", "mult"]]
    for i, s in enumerate(systems):
        rows.append([str(i)] + [s["values"][q] for q in labels] + [str(s["ext_degree"]), str(s["multiplicity"])])
    return rows


def render_table(report: dict) -> str:
    spec = report["spec"]
    out = ["# " + " ".join("%s=%s" % (k, v) for k, v in spec.items() if k not in ("primes",))]
    cmd = spec["command"]
    if cmd in ("h1", "eigensystems"):
        out.append("H^1(%s, %s) over F_%d, d=%d: dim %d" % (report["level"], report["weight"], report["ell"], report["field"], report["h1_dim"]))
        if report["eigensystems"]:
            out.append(_align(_system_rows(report["eigensystems"])))
        for m in report["matches"]:
            out.append("system %d = twist%s of %s" % (m["source"], tuple(m["twist"]), m["target"]))
    elif cmd == "verify":
        for s in report["suites"]:
            out.append("[%s] %s" % ("PASS" if s["passed"] else "FAIL", s["suite"]))
            for c in s["checks"]:
                if not c["passed"]:
                    out.append("    FAIL %s %s" % (c["name"], c["detail"]))
            for name, t in s["tables"].items():
                out.append("  %s" % name)
                out.append(_indent(_render_any(t)))
        out.append("overall: %s" % ("PASS" if report["passed"] else "FAIL"))
    else:
        rows = [["weight", "dim H1", "dim target", "systems", "result"]]
        for r in report["weights"]:
            rows.append([r["weight"], str(r["h1_dim"]), str(r["target_h1_dim"]), str(r["systems"]), "ok" if r["passed"] else "FAIL"])
        out.append(_align(rows))
        out.append("overall: %s" % ("PASS" if report["passed"] else "FAIL"))
    return "\n".join(out) + "\n"


def _indent(text: str) -> str:
    return "\n".join("    " + line for line in text.splitlines())


def _render_any(t) -> str:
    if isinstance(t, list) and t and isinstance(t[0], list):
        n = len(t)
        rows = [["r\\s"] + [str(j) for j in range(len(t[0]))]] + [[str(i)] + [str(x) for x in row] for i, row in enumerate(t)]
        return _align(rows)
    if isinstance(t, dict) and "systems" in t and t["systems"] and isinstance(t["systems"][0], dict):
        head = "h1_dim %d" % t.get("h1_dim", -1)
        labels = t.get("primes") or list(t["systems"][0]["values"])
        rows = [["#"] + labels + ["mult"]]
        for i, s in enumerate(t["systems"]):
            vals = s["values"] if isinstance(s["values"], list) else [s["values"][q] for q in labels]
            rows.append([str(i)] + list(vals) + [str(s.get("multiplicity", ""))])
        return head + "\n" + _align(rows)
    if isinstance(t, dict) and all(not isinstance(v, (dict, list)) for v in t.values()):
        return _align([list(t.keys()), [str(v) for v in t.values()]])
    return json.dumps(t, sort_keys=True)


def render_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cmd = report["spec"]["command"]
    if cmd in ("h1", "eigensystems"):
        labels = [op["alpha"] for op in report["operators"]]
        w.writerow(["index"] + labels + ["ext_degree", "multiplicity"])
        for i, s in enumerate(report["eigensystems"]):
            w.writerow([i] + [s["values"][q] for q in labels] + [s["ext_degree"], s["multiplicity"]])
    elif cmd == "verify":
        w.writerow(["suite", "check", "passed", "detail"])
        for s in report["suites"]:
            for c in s["checks"]:
                w.writerow([s["suite"], c["name"], int(c["passed"]), c["detail"]])
    else:
        w.writerow(["weight", "h1_dim", "target_h1_dim", "systems", "passed"])
        for r in report["weights"]:
            w.writerow([r["weight"], r["h1_dim"], r["target_h1_dim"], r["systems"], int(r["passed"])])
    return buf.getvalue()


def render(report: dict, fmt: str) -> str:
    if fmt == "table":
        return render_table(report)
    if fmt == "csv":
        return render_csv(report)
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


# --- entry point ------------------------------------------------------------------


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:  # argparse exits 2 on usage errors, 0 on --help
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s", stream=sys.stderr)
    log.info("numba kernels %s", "enabled" if use_numba() else "disabled")
    try:
        report, code = COMMANDS[args.command](args)
    except UsageError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_USAGE
    except CacheMismatch as e:
        print("verification failure: %s" % e, file=sys.stderr)
        return EXIT_FAIL
    text = render(report, args.fmt)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
