"""Batch CLI: JSON jobs in, deterministic JSON reports out.

Exit codes: 0 success, 2 validation error, 3 chain-not-stabilized or
resource cap, 1 corpus mismatch.  Reports are byte-stable except for the
wall_time_ms field, which golden comparisons strip.
"""

from __future__ import annotations

import argparse
import difflib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .covers import (
    KummerCover,
    UnsupportedCoverError,
    frobenius_stable,
    trace_image,
    verify_containment_tau_in_image,
    verify_multiplier_transform,
    verify_tau_transform,
)
from .frobenius import CartierMap, IterationCapExceeded, cartier_apply
from .groebner import DEFAULT_SPAIR_CAP, Ideal, SPairCapExceeded, ideal_equal
from .multoracle import compare_tau_multiplier, multiplier_of_pair
from .polyring import (
    ExponentOverflowError,
    ParseError,
    Ring,
    RingMismatchError,
    format_rational,
    parse_polynomial,
    parse_rational,
)
from .testideal import (
    NotStabilizedError,
    PrincipalPair,
    cross_checked_tau,
    fpt_search,
    nu_value,
    polynomial_ambient,
    quotient_ambient,
    tau_polynomial,
    tau_quotient,
)

SCHEMA_VERSION = 1
ENV_SPAIR_CAP = "CARTIERLAB_SPAIR_CAP"

COMMANDS = (
    "tau",
    "fpt",
    "cartier",
    "nu",
    "verify-transform",
    "verify-multiplier-transform",
    "trace-image",
    "multiplier",
    "compare",
    "corpus",
)

_COMMON_FIELDS = {"command", "p", "vars", "spair_cap"}
_FIELDS = {
    "tau": _COMMON_FIELDS | {"w", "g", "t", "e_max", "window", "c", "N", "scheme"},
    "fpt": _COMMON_FIELDS | {"g", "e_max", "denominator_bound"},
    "cartier": _COMMON_FIELDS | {"e", "h", "f"},
    "nu": _COMMON_FIELDS | {"g", "e"},
    "verify-transform": _COMMON_FIELDS | {"cover", "g", "t", "e_max", "window", "assert_coprime"},
    "verify-multiplier-transform": _COMMON_FIELDS | {"cover", "g", "t"},
    "trace-image": _COMMON_FIELDS | {"w", "cover"},
    "multiplier": _COMMON_FIELDS | {"g", "t"},
    "compare": _COMMON_FIELDS | {"g", "t"},
    "corpus": {"command", "path", "jobs"},
}


class JobValidationError(ValueError):
    pass


def format_ideal(ideal: Ideal) -> str:
    gens = ideal.groebner_basis()
    if not gens:
        return "(0)"
    return "(" + ", ".join(str(g) for g in gens) + ")"


def parse_ideal_string(text: str, ring: Ring, spair_cap: int = DEFAULT_SPAIR_CAP) -> Ideal:
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"ideal text must be parenthesized, got {text!r}")
    inner = text[1:-1].strip()
    if inner in ("", "0"):
        return Ideal(ring, [], spair_cap=spair_cap)
    gens = [parse_polynomial(chunk.strip(), ring) for chunk in inner.split(",")]
    return Ideal(ring, gens, spair_cap=spair_cap)


def _require(job: dict, field: str):
    if field not in job:
        raise JobValidationError(f"missing required field {field!r}")
    return job[field]


def _validate_fields(job: dict):
    command = _require(job, "command")
    if command not in COMMANDS:
        raise JobValidationError(f"unknown command {command!r}")
    allowed = _FIELDS[command]
    unknown = set(job) - allowed
    if unknown:
        raise JobValidationError(f"unknown fields for {command}: {sorted(unknown)}")
    return command


def _ring_of(job: dict) -> Ring:
    p = _require(job, "p")
    variables = _require(job, "vars")
    if not isinstance(p, int):
        raise JobValidationError("field 'p' must be an integer")
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise JobValidationError("field 'vars' must be a list of names")
    return Ring(p, variables)


def _ambient_of(job: dict, ring: Ring):
    w_text = job.get("w")
    if w_text is None:
        return polynomial_ambient(ring)
    return quotient_ambient(ring, parse_polynomial(w_text, ring))


def _spair_cap(job: dict) -> int:
    if "spair_cap" in job:
        cap = job["spair_cap"]
        if not isinstance(cap, int) or cap < 1:
            raise JobValidationError("field 'spair_cap' must be a positive integer")
        return cap
    env = os.environ.get(ENV_SPAIR_CAP)
    if env:
        return int(env)
    return DEFAULT_SPAIR_CAP


def _pair_of(job: dict, ring: Ring, ambient) -> PrincipalPair:
    g = parse_polynomial(_require(job, "g"), ring)
    t = parse_rational(str(_require(job, "t")))
    return PrincipalPair(ambient, g, t)


def _cover_of(job: dict, ring: Ring, ambient, spair_cap: int) -> KummerCover:
    spec = _require(job, "cover")
    if not isinstance(spec, dict) or set(spec) - {"n", "f", "assert_irreducible"}:
        raise JobValidationError("field 'cover' must be {n, f[, assert_irreducible]}")
    n = spec.get("n")
    if not isinstance(n, int):
        raise JobValidationError("cover degree 'n' must be an integer")
    f = parse_polynomial(_require(spec, "f"), ring)
    return KummerCover(ambient, n, f,
                       assert_irreducible=bool(spec.get("assert_irreducible", False)),
                       spair_cap=spair_cap)


def _tau_options(job: dict) -> dict:
    options = {}
    if "e_max" in job:
        options["e_max"] = int(job["e_max"])
    if "window" in job:
        options["window"] = int(job["window"])
    return options


def _tau_report(job: dict) -> dict:
    ring = _ring_of(job)
    ambient = _ambient_of(job, ring)
    cap = _spair_cap(job)
    pair = _pair_of(job, ring, ambient)
    options = _tau_options(job)
    if ambient.is_quotient:
        extra = {}
        if "c" in job:
            extra["c"] = parse_polynomial(job["c"], ring)
        if "N" in job:
            extra["N"] = int(job["N"])
        result = tau_quotient(pair, spair_cap=cap, **options, **extra)
        return {
            "generators": [str(g) for g in result.ideal.groebner_basis()],
            "stabilized_at_e": result.stabilized_at_e,
            "terms_per_e": [len(t.groebner_basis()) for t in result.terms],
            "scheme": result.scheme,
        }
    if "scheme" in job or "c" in job or "N" in job:
        extra = {}
        if "scheme" in job:
            extra["scheme"] = job["scheme"]
        if "c" in job:
            extra["c"] = parse_polynomial(job["c"], ring)
        if "N" in job:
            extra["N"] = int(job["N"])
        result = tau_polynomial(pair, spair_cap=cap, **options, **extra)
        agree = None
    else:
        result, premult, agree = cross_checked_tau(pair, spair_cap=cap, **options)
    report = {
        "generators": [str(g) for g in result.ideal.groebner_basis()],
        "stabilized_at_e": result.stabilized_at_e,
        "terms_per_e": [len(t.groebner_basis()) for t in result.terms],
        "scheme": result.scheme,
    }
    if agree is not None:
        report["schemes_agree"] = agree
    return report


def _fpt_report(job: dict) -> dict:
    ring = _ring_of(job)
    cap = _spair_cap(job)
    g = parse_polynomial(_require(job, "g"), ring)
    e_max = int(job.get("e_max", 2))
    bound = int(job.get("denominator_bound", 100))
    lo, hi = fpt_search(g, e_max, bound, spair_cap=cap)
    return {"lo": format_rational(lo), "hi": format_rational(hi)}


def _cartier_report(job: dict) -> dict:
    ring = _ring_of(job)
    e = int(_require(job, "e"))
    h = parse_polynomial(_require(job, "h"), ring)
    f = parse_polynomial(_require(job, "f"), ring)
    out = cartier_apply(CartierMap(ring, e, h), f)
    return {"result": str(out)}


def _nu_report(job: dict) -> dict:
    ring = _ring_of(job)
    g = parse_polynomial(_require(job, "g"), ring)
    return {"nu": nu_value(g, int(_require(job, "e")))}


def _verify_transform_report(job: dict) -> dict:
    ring = _ring_of(job)
    cap = _spair_cap(job)
    ambient = polynomial_ambient(ring)
    cover = _cover_of(job, ring, ambient, cap)
    pair = _pair_of(job, ring, ambient)
    options = _tau_options(job)
    rep = verify_tau_transform(cover, pair,
                               assert_coprime=bool(job.get("assert_coprime", False)),
                               **options)
    return {
        "equal": rep.equal,
        "lhs": format_ideal(rep.lhs),
        "rhs": format_ideal(rep.rhs),
        "cover_stabilized_at_e": rep.cover_result.stabilized_at_e,
        "base_stabilized_at_e": rep.base_result.stabilized_at_e,
    }


def _verify_multiplier_report(job: dict) -> dict:
    ring = _ring_of(job)
    cap = _spair_cap(job)
    ambient = polynomial_ambient(ring)
    cover = _cover_of(job, ring, ambient, cap)
    pair = _pair_of(job, ring, ambient)
    rep = verify_multiplier_transform(cover, pair)
    return {
        "equal": rep.equal,
        "lhs": format_ideal(rep.lhs),
        "rhs": format_ideal(rep.rhs),
        "cover_numerator": format_ideal(rep.cover_side.numerator),
        "cover_denominator_exponent": rep.cover_side.exponent,
    }


def _trace_image_report(job: dict) -> dict:
    ring = _ring_of(job)
    cap = _spair_cap(job)
    ambient = _ambient_of(job, ring)
    cover = _cover_of(job, ring, ambient, cap)
    data = trace_image(cover)
    return {
        "numerator": format_ideal(data.numerator),
        "denominator_exponent": data.exponent,
        "phi_stable": frobenius_stable(cover, data),
        "tau_contained": verify_containment_tau_in_image(cover),
    }


def _multiplier_report(job: dict) -> dict:
    ring = _ring_of(job)
    cap = _spair_cap(job)
    pair = _pair_of(job, ring, polynomial_ambient(ring))
    ideal = multiplier_of_pair(pair, cap)
    return {"generators": [str(g) for g in ideal.groebner_basis()]}


def _compare_report(job: dict) -> dict:
    ring = _ring_of(job)
    cap = _spair_cap(job)
    pair = _pair_of(job, ring, polynomial_ambient(ring))
    rep = compare_tau_multiplier(pair, spair_cap=cap)
    return {
        "tau": format_ideal(rep.tau),
        "multiplier": format_ideal(rep.multiplier),
        "contained": rep.contained,
        "equal": rep.equal,
    }


_RUNNERS = {
    "tau": _tau_report,
    "fpt": _fpt_report,
    "cartier": _cartier_report,
    "nu": _nu_report,
    "verify-transform": _verify_transform_report,
    "verify-multiplier-transform": _verify_multiplier_report,
    "trace-image": _trace_image_report,
    "multiplier": _multiplier_report,
    "compare": _compare_report,
}

_VALIDATION_ERRORS = (
    JobValidationError,
    ParseError,
    RingMismatchError,
    UnsupportedCoverError,
    IterationCapExceeded,
    ExponentOverflowError,
    ValueError,
    KeyError,
    TypeError,
    ArithmeticError,
)

_ERROR_KINDS = {
    JobValidationError: "validation",
    ParseError: "parse",
    RingMismatchError: "ring_mismatch",
    UnsupportedCoverError: "unsupported_cover",
    NotStabilizedError: "not_stabilized",
    SPairCapExceeded: "resource_cap",
    IterationCapExceeded: "iteration_cap",
    ExponentOverflowError: "overflow",
}


def _error_kind(exc: Exception) -> str:
    for klass, kind in _ERROR_KINDS.items():
        if isinstance(exc, klass):
            return kind
    return "validation"


def run(job: dict) -> tuple[dict, int]:
    """Execute one job and return (report, exit_code)."""
    report = {"schema": SCHEMA_VERSION, "job": job}
    start = time.perf_counter()
    try:
        command = _validate_fields(job)
        if command == "corpus":
            raise JobValidationError("corpus jobs run through the corpus command")
        result = _RUNNERS[command](job)
    except (NotStabilizedError, SPairCapExceeded) as exc:
        report["status"] = "error"
        report["error"] = {"kind": _error_kind(exc), "message": str(exc)}
        code = 3
    except _VALIDATION_ERRORS as exc:
        report["status"] = "error"
        report["error"] = {"kind": _error_kind(exc), "message": str(exc)}
        code = 2
    else:
        report["status"] = "ok"
        report["result"] = result
        code = 0
    report["wall_time_ms"] = round((time.perf_counter() - start) * 1000, 3)
    return report, code


def canonical_report(report: dict) -> dict:
    """The byte-diffed region: everything except timing."""
    return {k: v for k, v in report.items() if k != "wall_time_ms"}


def dump_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def _golden_path(job_path: Path) -> Path:
    name = job_path.name
    if not name.endswith(".job.json"):
        raise JobValidationError(f"job files must end with .job.json: {name}")
    return job_path.with_name(name[: -len(".job.json")] + ".golden.json")


def _run_corpus_entry(job_path: Path, write_goldens: bool):
    golden_path = _golden_path(job_path)
    try:
        job = json.loads(job_path.read_text())
        report, _ = run(job)
        text = dump_report(canonical_report(report)) + "\n"
    except (OSError, json.JSONDecodeError) as exc:
        return {"job_file": job_path.name, "ok": False,
                "diff": f"error reading or running job: {exc}"}
    if write_goldens:
        golden_path.write_text(text)
        return {"job_file": job_path.name, "ok": True}
    try:
        golden = golden_path.read_text()
    except OSError as exc:
        return {"job_file": job_path.name, "ok": False, "diff": f"missing golden: {exc}"}
    if text == golden:
        return {"job_file": job_path.name, "ok": True}
    diff = "".join(
        difflib.unified_diff(
            golden.splitlines(keepends=True),
            text.splitlines(keepends=True),
            fromfile=golden_path.name,
            tofile="computed",
        )
    )
    return {"job_file": job_path.name, "ok": False, "diff": diff}


def run_corpus(path: str, workers: int = 1, write_goldens: bool = False) -> tuple[dict, int]:
    """Run every *.job.json under path and diff byte-exact against goldens."""
    root = Path(path)
    if not root.is_dir():
        return (
            {"schema": SCHEMA_VERSION, "command": "corpus", "status": "error",
             "error": {"kind": "io", "message": f"not a directory: {path}"}},
            2,
        )
    job_files = sorted(root.glob("*.job.json"))
    if workers > 1 and job_files:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(lambda f: _run_corpus_entry(f, write_goldens), job_files))
    else:
        entries = [_run_corpus_entry(f, write_goldens) for f in job_files]
    failures = [e for e in entries if not e["ok"]]
    summary = {
        "schema": SCHEMA_VERSION,
        "command": "corpus",
        "status": "ok" if not failures else "mismatch",
        "total": len(entries),
        "passed": len(entries) - len(failures),
        "failed": len(failures),
        "failures": [{"job_file": e["job_file"], "diff": e["diff"]} for e in failures],
    }
    return summary, 0 if not failures else 1


def _add_ring_flags(sub):
    sub.add_argument("-p", type=int, help="prime modulus")
    sub.add_argument("--vars", help="comma-separated variable names")
    sub.add_argument("--w", help="hypersurface relation (quotient ambient)")
    sub.add_argument("--spair-cap", type=int, dest="spair_cap")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cartierlab",
        description="test ideals, Frobenius-trace operators, and Kummer-cover checks over F_p",
    )
    parser.add_argument("--job", help="run a job described by a JSON file")
    sub = parser.add_subparsers(dest="subcommand")

    for name in ("tau", "multiplier", "compare"):
        s = sub.add_parser(name)
        _add_ring_flags(s)
        s.add_argument("--g", help="pair element")
        s.add_argument("--t", help="pair exponent, as num/den")
        if name == "tau":
            s.add_argument("--e-max", type=int, dest="e_max")
            s.add_argument("--window", type=int)
            s.add_argument("--scheme", choices=("classical", "premultiplied"))
            s.add_argument("--c", help="premultiplier base element")
            s.add_argument("--N", type=int, help="premultiplier power")

    s = sub.add_parser("fpt")
    _add_ring_flags(s)
    s.add_argument("--g")
    s.add_argument("--e-max", type=int, dest="e_max")
    s.add_argument("--den-bound", type=int, dest="denominator_bound")

    s = sub.add_parser("cartier")
    _add_ring_flags(s)
    s.add_argument("--e", type=int)
    s.add_argument("--h", help="premultiplier")
    s.add_argument("--f", help="operand")

    s = sub.add_parser("nu")
    _add_ring_flags(s)
    s.add_argument("--g")
    s.add_argument("--e", type=int)

    for name in ("verify-transform", "verify-multiplier-transform", "trace-image"):
        s = sub.add_parser(name)
        _add_ring_flags(s)
        s.add_argument("--cover-n", type=int, dest="cover_n")
        s.add_argument("--cover-f", dest="cover_f")
        if name != "trace-image":
            s.add_argument("--g")
            s.add_argument("--t")
        if name == "verify-transform":
            s.add_argument("--e-max", type=int, dest="e_max")
            s.add_argument("--window", type=int)
            s.add_argument("--assert-coprime", action="store_true", dest="assert_coprime")

    s = sub.add_parser("corpus")
    s.add_argument("path")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--write-goldens", action="store_true", dest="write_goldens")
    return parser


def _job_from_args(args) -> dict:
    job = {"command": args.subcommand}
    if getattr(args, "p", None) is not None:
        job["p"] = args.p
    if getattr(args, "vars", None):
        job["vars"] = [v.strip() for v in args.vars.split(",") if v.strip()]
    for field in ("w", "g", "t", "h", "f", "c", "N", "scheme", "e", "e_max",
                  "window", "spair_cap", "denominator_bound", "assert_coprime"):
        value = getattr(args, field, None)
        if value is not None and value is not False:
            job[field] = value
    if getattr(args, "cover_n", None) is not None or getattr(args, "cover_f", None):
        job["cover"] = {}
        if args.cover_n is not None:
            job["cover"]["n"] = args.cover_n
        if args.cover_f:
            job["cover"]["f"] = args.cover_f
    return job


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.job:
        try:
            job = json.loads(Path(args.job).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            print(json.dumps({
                "schema": SCHEMA_VERSION, "status": "error",
                "error": {"kind": "io", "message": str(exc)},
            }, sort_keys=True, indent=2))
            return 2
        if job.get("command") == "corpus":
            summary, code = run_corpus(job.get("path", "."), int(job.get("jobs", 1)))
            print(dump_report(summary))
            return code
        report, code = run(job)
        print(dump_report(report))
        return code
    if not args.subcommand:
        parser.print_usage()
        return 2
    if args.subcommand == "corpus":
        summary, code = run_corpus(args.path, args.jobs, args.write_goldens)
        print(dump_report(summary))
        return code
    report, code = run(_job_from_args(args))
    print(dump_report(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
