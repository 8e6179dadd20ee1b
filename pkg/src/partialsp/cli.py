"""Command-line front end.

Exit codes: 0 success / property holds, 1 property fails, 2 usage error,
3 refusal because an enumeration cap would be exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import classify
from .axioms import AXIOMS, CHECKS
from .core import (
    InvalidAllocation,
    InvalidPreference,
    InvalidSetting,
    UtilityFn,
    make_profile,
    make_setting,
    named_setting,
)
from .enumeration import SYMMETRIES, CapExceeded, SymmetryError
from .mechanisms import LIBRARY, get_mechanism
from .psp import (
    PreconditionError,
    check_counterexample,
    compute_rho,
    maximality_counterexample,
    rho_bisect,
    urbi_share,
    verify_psp,
)
from .serialize import (
    TableParseError,
    allocation_to_json,
    fmt,
    load_table,
    parse_r,
    read_json,
    save_table,
    setting_from_dict,
    write_json,
)

OK, FAILS, USAGE, CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --- argument helpers -------------------------------------------------------

def _setting(text: str | None, table=None):
    if text is None:
        if table is not None:
            return table.setting
        raise UsageError("--setting is required")
    if Path(text).suffix == ".json" or Path(text).is_file():
        try:
            return setting_from_dict(read_json(text))
        except (OSError, ValueError, TypeError) as exc:
            raise UsageError(f"cannot read setting {text}: {exc}") from None
    return named_setting(text)


def _mechanism(args):
    if getattr(args, "table", None):
        try:
            return load_table(read_json(args.table))
        except OSError as exc:
            raise UsageError(f"cannot read table {args.table}: {exc}") from None
    if not getattr(args, "mech", None):
        raise UsageError("one of --mech or --table is required")
    try:
        return get_mechanism(args.mech)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _resolve(args):
    f = _mechanism(args)
    table = f if hasattr(f, "entries") else None
    setting = _setting(args.setting, table)
    if table is not None and table.setting != setting:
        raise UsageError("--setting differs from the table's own setting")
    return f, setting


def _bound(text, name="--r") -> Fraction:
    if text is None:
        raise UsageError(f"{name} is required")
    try:
        r = parse_r(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{name}: cannot parse {text!r} as a rational") from None
    if not (0 < r <= 1):
        raise UsageError(f"{name}={text} must lie in (0, 1]")
    return r


def _agent(k: int, setting) -> int:
    if not 1 <= k <= setting.n:
        raise UsageError(f"--agent must be between 1 and {setting.n}")
    return k - 1


def _emit(args, text: str, doc: dict):
    if args.output == "json":
        print(json.dumps(doc, indent=2))
    elif args.output == "csv":
        raise UsageError(f"--output csv is not available for '{args.command}'")
    else:
        print(text)


def _emit_csv(rows):
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    sys.stdout.write(buf.getvalue())


def _scan_kw(args, setting=None) -> dict:
    kw = {"workers": args.workers}
    if getattr(args, "profile", None):
        prof = make_profile(setting, args.profile.split(","))
        agents = range(setting.n) if args.agent is None else [_agent(args.agent, setting)]
        if getattr(args, "misreport", None):
            kw["profiles"] = [(prof, tuple(agents), args.misreport.split(","))]
        else:
            kw["profiles"] = [(prof, tuple(agents))]
    elif getattr(args, "agent", None) is not None or getattr(args, "misreport", None):
        raise UsageError("--agent and --misreport need --profile")
    if args.symmetry:
        kw["symmetry"] = args.symmetry
    if args.type_cap:
        kw["type_cap"] = args.type_cap
    if args.profile_cap:
        kw["profile_cap"] = args.profile_cap
    return kw


# --- commands ---------------------------------------------------------------

def cmd_axioms(args) -> int:
    f, setting = _resolve(args)
    wanted = args.axiom or list(AXIOMS)
    kw = _scan_kw(args, setting)
    reports = {a: CHECKS[a](f, setting, **kw) for a in wanted}
    text = f"{f.name} on {setting}\n" + "\n".join(str(r) for r in reports.values())
    doc = {
        "mechanism": f.name,
        "setting": setting.to_dict(),
        "reports": {a: r.to_dict(setting) for a, r in reports.items()},
    }
    _emit(args, text, doc)
    return OK if all(r.holds for r in reports.values()) else FAILS


def cmd_verify(args) -> int:
    r = _bound(args.r)
    f, setting = _resolve(args)
    res = verify_psp(f, setting, r, **_scan_kw(args, setting))
    doc = {"mechanism": f.name, "setting": setting.to_dict(), **res.to_dict(setting)}
    _emit(args, f"{f.name} on {setting}\n{res}", doc)
    return OK if res.holds else FAILS


def cmd_rho(args) -> int:
    f, setting = _resolve(args)
    kw = _scan_kw(args)
    try:
        res = compute_rho(f, setting, **kw)
    except PreconditionError as exc:
        doc = {"mechanism": f.name, "error": str(exc), "axiom": exc.report.axiom}
        if exc.report.witness is not None:
            doc["witness"] = exc.report.witness.to_dict(setting)
        if args.output == "json":
            print(json.dumps(doc, indent=2))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return FAILS
    doc = {"mechanism": f.name, "setting": setting.to_dict(), **res.to_dict()}
    text = f"{f.name} on {setting}\n{res}"
    if args.bisect is not None:
        tol = parse_r(args.bisect)
        if tol <= 0:
            raise UsageError("--bisect tolerance must be positive")
        lo, hi = rho_bisect(f, setting, tol, check_precondition=False, **kw)
        agree = lo <= res.hi and res.lo <= hi
        doc["bisect"] = {"interval": [fmt(lo), fmt(hi)], "tol": fmt(tol), "agrees": agree}
        text += f"\nbisection: [{lo}, {hi}] (~[{float(lo):.9f}, {float(hi):.9f}]), agrees: {agree}"
    _emit(args, text, doc)
    return OK


def cmd_table1(args) -> int:
    names = args.mech_list or list(LIBRARY)
    for n in names:
        if n not in classify.MANIFEST:
            raise UsageError(f"no pinned probes for {n!r}; choose from {list(classify.MANIFEST)}")
    progress = None
    if args.output == "text":
        progress = lambda row: print(f"  classified {row.mechanism} ({row.seconds:.1f}s)", file=sys.stderr)
    rows = classify.table1(names, workers=args.workers, progress=progress)
    if args.output == "json":
        print(json.dumps(classify.to_dict(rows), indent=2))
    elif args.output == "csv":
        _emit_csv(classify.csv_rows(rows))
    else:
        print(classify.format_text(rows))
    return OK if all(r.matches is not False for r in rows) else FAILS


def _utility(text: str, setting) -> UtilityFn:
    try:
        vals = [parse_r(v) for v in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--utility: cannot parse {text!r}") from None
    if len(vals) != setting.m:
        raise UsageError(f"--utility needs {setting.m} values (objects {list(setting.objects)})")
    return UtilityFn.from_vector(setting.objects, vals)


def cmd_counterexample(args) -> int:
    setting = _setting(args.setting)
    r = _bound(args.r)
    if r == 1:
        raise UsageError("--r must be below 1")
    u = _utility(args.utility, setting)
    try:
        table = maximality_counterexample(setting, r, u, agent=_agent(args.agent, setting))
    except (ValueError, InvalidPreference) as exc:
        raise UsageError(str(exc)) from None
    check = check_counterexample(table, setting, r, u)
    doc = {"mechanism": save_table(table), "transcript": check.to_dict(setting)}
    if args.out:
        write_json(args.out, doc)
    text = (
        f"generated {table.name} on {setting}\n{check.verify}\n"
        f"agent {table.keyed_by[0] + 1} of type {check.truthful} reporting {check.misreport}:"
        f" gain {check.gain} at utility {[str(u[o]) for o in setting.objects]}"
    )
    if args.out:
        text += f"\nwritten to {args.out}"
    _emit(args, text, doc)
    return OK if check.ok else FAILS


def cmd_scaling(args) -> int:
    f = _mechanism(args)
    try:
        mults = [int(x) for x in args.multipliers.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--multipliers: expected comma separated integers, got {args.multipliers!r}") from None
    rows = [["multiplier", "n", "q", "rho", "exact", "constraints", "seconds"]]
    docs = []
    objects = [chr(ord("a") + j) for j in range(args.objects)]
    for k in mults:
        if k < 1:
            raise UsageError("multipliers must be positive")
        setting = make_setting(k * args.objects, objects, k)
        res = compute_rho(f, setting, **_scan_kw(args))
        val = fmt(res.lo) if res.exact else f"[{fmt(res.lo)},{fmt(res.hi)}]"
        rows.append([k, setting.n, k, val, res.exact, res.constraints, f"{res.seconds:.2f}"])
        docs.append({"multiplier": k, **res.to_dict()})
    if args.output == "json":
        print(json.dumps({"mechanism": f.name, "rows": docs}, indent=2))
    elif args.output == "csv":
        _emit_csv(rows)
    else:
        for row in rows:
            print("\t".join(map(str, row)))
    return OK


def cmd_allocate(args) -> int:
    f, setting = _resolve(args)
    prof = make_profile(setting, args.profile.split(","))
    alloc = f.allocate(setting, prof)
    doc = {
        "mechanism": f.name,
        "setting": setting.to_dict(),
        "profile": [list(t.ranking) for t in prof],
        "allocation": allocation_to_json(alloc),
    }
    head = " ".join(f"{o:>6}" for o in setting.objects)
    lines = [f"{f.name} on {setting}", f"{'':>12} {head}"]
    for t, row in zip(prof, alloc.probs):
        lines.append(f"{str(t):>12} " + " ".join(f"{str(x):>6}" for x in row))
    _emit(args, "\n".join(lines), doc)
    return OK


def cmd_share(args) -> int:
    r = _bound(args.r)
    est, err = urbi_share(r, args.samples, args.seed)
    doc = {"r": fmt(r), "samples": args.samples, "seed": args.seed, "estimate": est, "stderr": err}
    _emit(args, f"share of URBI({r}) among 3-object utilities: {est:.4f} ± {err:.4f}", doc)
    return OK


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="partialsp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("text", "json", "csv"), default="text")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)

    scan = argparse.ArgumentParser(add_help=False)
    scan.add_argument("--symmetry", choices=SYMMETRIES)
    scan.add_argument("--type-cap", type=int, default=None)
    scan.add_argument("--profile-cap", type=int, default=None)

    mech = argparse.ArgumentParser(add_help=False)
    g = mech.add_mutually_exclusive_group()
    g.add_argument("--mech", help=f"built-in mechanism, one of {', '.join(LIBRARY)}")
    g.add_argument("--table", help="table mechanism JSON file")
    mech.add_argument("--setting", help="named setting such as 3x3unit, or a JSON file")

    a = sub.add_parser("axioms", parents=[common, scan, mech], help="check the swap axioms and SP")
    a.add_argument("--axiom", action="append", choices=AXIOMS)
    a.add_argument("--profile", help="restrict the scan to this profile, e.g. abcd,acbd,bcad,bcad")
    a.add_argument("--agent", type=int, help="with --profile: only this agent (1-based)")
    a.add_argument("--misreport", help="with --profile: only these misreports, comma separated")
    a.set_defaults(func=cmd_axioms)

    v = sub.add_parser("verify", parents=[common, scan, mech], help="verify r-partial strategyproofness")
    v.add_argument("--r")
    v.add_argument("--profile", help="restrict the scan to this profile")
    v.add_argument("--agent", type=int, help="with --profile: only this agent (1-based)")
    v.add_argument("--misreport", help="with --profile: only these misreports, comma separated")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("rho", parents=[common, scan, mech], help="compute the degree of strategyproofness")
    r.add_argument("--bisect", metavar="TOL", help="cross-check by bisection to this tolerance")
    r.set_defaults(func=cmd_rho)

    t = sub.add_parser("table1", parents=[common], help="classification matrix on the pinned settings")
    t.add_argument("--mech", dest="mech_list", action="append")
    t.set_defaults(func=cmd_table1)

    c = sub.add_parser("counterexample", parents=[common], help="maximality counterexample mechanism")
    c.add_argument("--setting", required=True)
    c.add_argument("--r")
    c.add_argument("--utility", required=True, help="comma separated values in setting object order")
    c.add_argument("--agent", type=int, default=1, help="designated agent (1-based)")
    c.add_argument("--out", help="write mechanism and transcript as JSON")
    c.set_defaults(func=cmd_counterexample)

    s = sub.add_parser("scaling", parents=[common, scan], help="rho as capacities grow")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--mech")
    g.add_argument("--table")
    s.add_argument("--objects", type=int, default=3)
    s.add_argument("--multipliers", default="1,2")
    s.set_defaults(func=cmd_scaling)

    al = sub.add_parser("allocate", parents=[common, mech], help="evaluate a mechanism on one profile")
    al.add_argument("--profile", required=True, help="comma separated reports, e.g. abc,bac,bca")
    al.set_defaults(func=cmd_allocate)

    sh = sub.add_parser("share", parents=[common], help="Monte Carlo share of URBI(r), three objects")
    sh.add_argument("--r")
    sh.add_argument("--samples", type=int, default=100_000)
    sh.set_defaults(func=cmd_share)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.workers < 1:
        parser.error("--workers must be >= 1")
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return CAP
    except (
        UsageError,
        InvalidSetting,
        InvalidPreference,
        InvalidAllocation,
        TableParseError,
        SymmetryError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
