"""Command line interface.

    totalreality lattice FILE
    totalreality discr FILE
    totalreality bounds --dmax N [--format plain|csv|json] [--pairs]
    totalreality status G D [--format ...]
    totalreality verify --dmax N
    totalreality budget G D [--split R,S] [--format ...]

Data goes to stdout, diagnostics to stderr.  Exit status is 0 when every
requested check passes, 1 when a check fails and 2 for bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds, checks
from .discriminant import discr, format_fraction
from .lattice import Lattice, LatticeError

EXIT_FAIL = 1
EXIT_INPUT = 2


class InputError(Exception):
    pass


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return format_fraction(x)
    return str(x)


def _load_lattice(path: str) -> Lattice:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    try:
        return Lattice.from_text(text)
    except LatticeError as e:
        raise InputError(f"{path}: {e}") from None


def _emit(rows: list[dict], columns, fmt: str, out) -> None:
    if fmt == "json":
        json.dump(rows, out, indent=2, ensure_ascii=False)
        out.write("\n")
    elif fmt == "csv":
        w = csv.DictWriter(out, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow({k: _fmt(r[k]) for k in columns})
    else:
        table = [[str(c) for c in columns]] + [[_fmt(r[c]) for c in columns] for r in rows]
        widths = [max(len(row[i]) for row in table) for i in range(len(columns))]
        for row in table:
            out.write("  ".join(v.rjust(w) for v, w in zip(row, widths)).rstrip() + "\n")


# -- report records <-> rows ---------------------------------------------------


def record_to_row(rec: bounds.ReportRecord) -> dict:
    return {
        "d": rec.d,
        "g": rec.g,
        "status": rec.status,
        "sources": ";".join(rec.sources),
        "G0": format_fraction(rec.G0),
        "G1": format_fraction(rec.G1),
        "c": rec.c,
        "n": rec.n,
        "slack_even": rec.slack_even,
        "slack_odd": rec.slack_odd,
        "ell3": rec.ell3,
    }


def _opt_int(s: str):
    return int(s) if s not in ("", None) else None


def row_to_record(row: dict) -> bounds.ReportRecord:
    return bounds.ReportRecord(
        d=int(row["d"]),
        g=int(row["g"]),
        status=row["status"],
        sources=tuple(s for s in str(row["sources"]).split(";") if s),
        G0=Fraction(row["G0"]),
        G1=Fraction(row["G1"]),
        c=int(row["c"]),
        n=int(row["n"]),
        slack_even=_opt_int(row.get("slack_even")),
        slack_odd=_opt_int(row.get("slack_odd")),
        ell3=_opt_int(row.get("ell3")),
    )


def records_to_csv(records) -> str:
    buf = io.StringIO()
    _emit([record_to_row(r) for r in records], bounds.CSV_COLUMNS, "csv", buf)
    return buf.getvalue()


def records_from_csv(text: str) -> list[bounds.ReportRecord]:
    return [row_to_record(row) for row in csv.DictReader(io.StringIO(text))]


# -- commands -----------------------------------------------------------------


def cmd_lattice(args, out) -> int:
    L = _load_lattice(args.file)
    d = L.det()
    out.write(f"rank {L.rank}, det {d}, signature {L.signature()}\n")
    out.write(f"nondegenerate: {str(d != 0).lower()}\n")
    out.write(f"unimodular: {str(L.is_unimodular()).lower()}\n")
    for p in (2, 3, 5):
        out.write(f"{p}-unimodular: {str(L.is_p_unimodular(p)).lower()}\n")
    return 0


def cmd_discr(args, out) -> int:
    L = _load_lattice(args.file)
    if L.det() == 0:
        raise InputError("lattice is degenerate; discriminant form undefined")
    F = discr(L)
    out.write(f"{F}\n")
    out.write(f"order {F.order}, ell {F.ell()}")
    for p in sorted({p for d in F.factors for p in (2, 3, 5, 7) if d % p == 0}):
        out.write(f", ell_{p} {F.ell_p(p)}")
    out.write("\n")
    for i, g in enumerate(F.generators):
        out.write(f"g{i + 1} = (" + ", ".join(format_fraction(v) for v in g) + ")\n")
    return 0


def cmd_bounds(args, out) -> int:
    if args.dmax < 2:
        raise InputError("--dmax must be >= 2")
    if args.pairs:
        rows = [record_to_row(r) for r in bounds.report_rows(args.dmax)]
        cols = bounds.CSV_COLUMNS + (("ell3",) if args.format == "json" else ())
        _emit(rows, cols, args.format, out)
        return 0
    rows = []
    mismatch = []
    for d in range(2, args.dmax + 1):
        g0 = bounds.G0(d)
        derived = bounds.derived_bound(d)
        if derived != bounds.integral_threshold(g0):
            mismatch.append(d)
        rows.append({"d": d, "G0": format_fraction(g0), "G1": format_fraction(bounds.G1(d)), "derived_bound": derived})
    _emit(rows, ("d", "G0", "G1", "derived_bound"), args.format, out)
    if mismatch:
        print(f"derived bound disagrees with G0 at d = {mismatch}", file=sys.stderr)
        return EXIT_FAIL
    return 0


def _check_pair(g: int, d: int) -> None:
    if d < 1 or g < 0:
        raise InputError("need g >= 0 and d >= 1")


def cmd_status(args, out) -> int:
    _check_pair(args.g, args.d)
    if args.format == "plain":
        out.write(f"{bounds.classify(args.g, args.d)}\n")
        return 0
    rec = bounds.report(args.g, args.d, with_ell3=2 <= args.d <= 40)
    cols = bounds.CSV_COLUMNS + (("ell3",) if args.format == "json" else ())
    _emit([record_to_row(rec)], cols, args.format, out)
    return 0


def cmd_verify(args, out) -> int:
    if args.dmax < 2:
        raise InputError("--dmax must be >= 2")
    results = checks.run_all(args.dmax)
    for r in results:
        out.write(f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.detail}\n")
    if all(r.ok for r in results):
        out.write(f"OK: derived bounds match G0 for d=2..{args.dmax}\n")
        return 0
    out.write("FAILED\n")
    return EXIT_FAIL


def cmd_budget(args, out) -> int:
    _check_pair(args.g, args.d)
    if args.d < 2:
        raise InputError("budget needs d >= 2")
    split = None
    if args.split:
        try:
            r, s = (int(v) for v in args.split.split(","))
        except ValueError:
            raise InputError(f"--split expects R,S, got {args.split!r}") from None
        split = (r, s)
    parity = "even" if args.d % 2 == 0 else "odd"
    try:
        cd = bounds.curve_data(args.g, args.d, split)
    except ValueError as e:
        raise InputError(str(e)) from None
    b = bounds.budget(cd, parity)
    F = discr(b.s_minus)
    row = {
        "d": cd.d, "g": cd.g, "c": cd.c, "n": cd.n, "r": cd.r, "s": cd.s,
        "parity": parity,
        "rank_sigma_minus": b.sigma_minus.rank,
        "sigma_plus_definite_rank": b.sigma_plus_definite_rank,
        "rank_S_minus": b.s_minus.rank,
        "signature_S_minus": str(b.s_minus.signature()),
        "discr_S_minus": str(F.group),
        "ell3_S": b.ell3_S,
        "assumes_rank_perp_ge_c": parity == "odd",
    }
    if args.format == "plain":
        extra = " + (d-1)[-4] + A3" if parity == "odd" else ""
        out.write(f"curve: d={cd.d} g={cd.g} c={cd.c} n={cd.n} (r={cd.r}, s={cd.s}), {parity} case\n")
        out.write(f"Sigma^-: {cd.c} A2 + {cd.r} A1 + {cd.s} [-4]{extra}, rank {b.sigma_minus.rank}\n")
        out.write(f"S^- = Sigma^- + [4]: rank {b.s_minus.rank}, signature {row['signature_S_minus']}\n")
        out.write(f"negative definite rank in L^+: {b.sigma_plus_definite_rank}\n")
        out.write(f"discr S^-: {F.group}\n")
        out.write(f"ell_3(discr S^-) = {b.ell3_S} (c = {cd.c})\n")
        if parity == "odd":
            out.write("note: the odd-case slack assumes rank S^perp >= c (no 3-torsion in the kernel)\n")
    else:
        _emit([row], tuple(row), args.format, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="totalreality", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    fmt = dict(choices=("plain", "csv", "json"), default="plain")

    p = sub.add_parser("lattice", help="rank, determinant, signature, unimodularity")
    p.add_argument("file")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("discr", help="discriminant form of a lattice")
    p.add_argument("file")
    p.set_defaults(func=cmd_discr)

    p = sub.add_parser("bounds", help="table of G0, G1 and the derived bound")
    p.add_argument("--dmax", type=int, required=True)
    p.add_argument("--format", **fmt)
    p.add_argument("--pairs", action="store_true", help="one record per (g, d) instead of per d")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("status", help="classify a pair (g, d)")
    p.add_argument("g", type=int)
    p.add_argument("d", type=int)
    p.add_argument("--format", **fmt)
    p.set_defaults(func=cmd_status)

    p = sub.add_parser("verify", help="run the engine self-checks up to --dmax")
    p.add_argument("--dmax", type=int, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("budget", help="eigenlattice budget of a cuspidal curve")
    p.add_argument("g", type=int)
    p.add_argument("d", type=int)
    p.add_argument("--split", help="R,S: real nodes and conjugate node pairs")
    p.add_argument("--format", **fmt)
    p.set_defaults(func=cmd_budget)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
