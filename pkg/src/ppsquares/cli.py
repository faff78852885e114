"""Command-line front end: scan, polarizations, moduli, invariants, report.

Exit codes: 0 success, 1 usage or input error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import analytic
from .classify import enumerate_polarizations
from .hermitian import HermitianForm, is_congruent
from .moduli import field_of_moduli_is_Q
from .quadorder import class_group, has_exponent_at_most_two, is_fundamental, scan_discriminants
from .reference import golden_text, reference_counts, reference_curves, reference_discriminants

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2

SCAN_BOUND = 5500
QUICK_BOUND = 600
RECORD_FIELDS = ("disc", "a", "b", "d", "det", "decomposable", "aut_order", "fom_q", "fod_q")


class UsageError(Exception):
    pass


@dataclass
class ReportRow:
    delta: int
    h: int
    n_indecomposable: int
    n_fom_Q: int
    n_fod_Q: int
    records: list = field(default_factory=list)

    def __post_init__(self):
        assert self.n_fod_Q <= self.n_fom_Q <= self.n_indecomposable


def form_record(rec, fom=None, fod=None):
    M = rec.form
    return {
        "disc": M.delta,
        "a": M.a,
        "b": [M.b.x, M.b.y],
        "d": M.d,
        "det": M.det(),
        "decomposable": rec.decomposable,
        "aut_order": rec.aut_order,
        "fom_q": fom,
        "fod_q": fod,
    }


def _matrix_ints(P):
    return [[[e.x, e.y] for e in row] for row in P]


def _check_disc(delta, force=False):
    if delta >= 0 or not is_fundamental(delta):
        raise UsageError(f"{delta} is not a negative fundamental discriminant")
    if not force and not has_exponent_at_most_two(class_group(delta)):
        raise UsageError(f"class group of {delta} has exponent > 2 (use --force)")


def classify_with_moduli(delta, force=False):
    """Classification of ``delta`` plus a moduli certificate per indecomposable class."""
    res = enumerate_polarizations(delta, force=force)
    certs = [field_of_moduli_is_Q(delta, rec.form, res.class_group, aut_order=rec.aut_order)
             for rec in res.indecomposables]
    return res, certs


def report_row(delta):
    res, certs = classify_with_moduli(delta)
    records = [form_record(r) for r in res.decomposables]
    records += [form_record(r, c.fom_is_Q, c.fod_is_Q) for r, c in zip(res.indecomposables, certs)]
    return ReportRow(delta, res.class_group.h, len(res.indecomposables),
                     sum(c.fom_is_Q for c in certs), sum(c.fod_is_Q for c in certs), records)


def build_report(bound, jobs=1):
    """Rows for every exponent-2 discriminant with |D| <= bound, in scan order."""
    discs = [d for d, _ in scan_discriminants(bound)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(report_row, discs, chunksize=1))
    else:
        rows = [report_row(d) for d in discs]
    return rows


def report_payload(rows, bound):
    scan = scan_discriminants(min(bound, SCAN_BOUND))
    by_h = {}
    for d, h in scan:
        by_h.setdefault(h, []).append(d)
    return {
        "bound": bound,
        "discriminants_by_h": {str(h): ds for h, ds in sorted(by_h.items())},
        "counts": [
            {"disc": r.delta, "h": r.h, "indecomposable": r.n_indecomposable,
             "fom_q": r.n_fom_Q, "fod_q": r.n_fod_Q}
            for r in rows
        ],
        "totals": {
            "discriminants": len(rows),
            "indecomposable": sum(r.n_indecomposable for r in rows),
            "fom_q": sum(r.n_fom_Q for r in rows),
            "fod_q": sum(r.n_fod_Q for r in rows),
        },
        "records": [rec for r in rows for rec in r.records],
    }


def check_report(payload):
    """Mismatches between a report payload and the bundled reference tables."""
    problems = []
    ref_rows, ref_totals = reference_counts()
    bound = payload["bound"]
    ref1 = {h: [d for d in ds if -d <= bound] for h, ds in reference_discriminants().items()}
    got1 = {int(h): ds for h, ds in payload["discriminants_by_h"].items()}
    if {h: ds for h, ds in ref1.items() if ds} != got1:
        problems.append("discriminant list differs")
    for row in payload["counts"]:
        ref = ref_rows.get(row["disc"])
        got = (row["h"], row["indecomposable"], row["fom_q"])
        if ref != got:
            problems.append(f"{row['disc']}: got {got}, reference {ref}")
    if len(payload["counts"]) != sum(1 for d in ref_rows if -d <= bound):
        problems.append("number of discriminants differs")
    if bound >= SCAN_BOUND:
        for k, v in ref_totals.items():
            if payload["totals"][k] != v:
                problems.append(f"total {k}: got {payload['totals'][k]}, reference {v}")
        fod = [r for r in payload["records"] if r["fod_q"]]
        if not fod_matches_reference(fod):
            problems.append("forms definable over Q differ from the reference matrices")
    return problems


def fod_matches_reference(records):
    """The records are congruent, one to one, to the reference curve matrices."""
    refs = [HermitianForm.from_ints(r["disc"], r["a"], *r["b"], r["d"]) for r in reference_curves()]
    forms = [HermitianForm.from_ints(r["disc"], r["a"], *r["b"], r["d"]) for r in records]
    if len(refs) != len(forms):
        return False
    unused = list(refs)
    for M in forms:
        hit = next((R for R in unused if R.delta == M.delta and is_congruent(R, M)), None)
        if hit is None:
            return False
        unused.remove(hit)
    return True


def dump_json(obj):
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# curve helpers


def format_curve(coeffs):
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if mono and abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}{mono}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "y^2 = 0"
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        s += f" {sign} {body}"
    return "y^2 = " + s


def small_factorization(n, limit=10**5):
    """``[[p, e], ...]`` for primes ``p < limit``, then the unfactored cofactor if any."""
    n = abs(n)
    out = []
    p = 2
    while p < limit and n > 1:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append([p, e])
        p += 1 if p == 2 else 2
    if n > 1:
        out.append([n, 1])
    return out


def recognition_height(precision):
    return 2 ** (precision // 4)


def invariants_verdict(delta, M, precision, fom_q):
    """Numeric invariants of ``(E^2, M)`` and a verdict against the reference curves.

    Returns ``(payload, exit_code)``.
    """
    res = analytic.analytic_invariants(delta, M, precision)
    ctx = analytic.make_context(precision)
    tol = ctx.mpf(2) ** (-(precision // 2))
    numeric = res.invariants.absolute
    digits = max(15, int(precision * 0.30103) // 2)
    out = {
        "disc": delta,
        "form": [M.a, [M.b.x, M.b.y], M.d],
        "precision": precision,
        "theta_radius": res.thetas.radius,
        "absolute_invariants": [ctx.nstr(ctx.mpc(x).real, digits) for x in numeric],
    }
    for row in reference_curves():
        if row["disc"] != delta:
            continue
        exact = analytic.igusa_invariants_exact(row["curve"]).absolute
        close = all(abs(ctx.mpc(x) - ctx.mpf(y.numerator) / y.denominator)
                    <= tol * max(1, abs(ctx.mpf(y.numerator) / y.denominator))
                    for x, y in zip(numeric, exact))
        if close:
            out["verdict"] = "match"
            out["curve"] = row["curve"]
            out["equation"] = format_curve(row["curve"])
            out["rationals"] = [str(y) for y in exact]
            out["denominators"] = [small_factorization(y.denominator) for y in exact]
            return out, EXIT_OK
    if not fom_q:
        out["verdict"] = "field of moduli is not Q"
        return out, EXIT_OK
    rats = [analytic.rational_recognition(x, recognition_height(precision), precision)
            for x in numeric]
    if any(r is None for r in rats):
        out["verdict"] = "unrecognized"
        return out, EXIT_VERIFY
    out["verdict"] = "recognized, no reference curve"
    out["rationals"] = [str(r) for r in rats]
    out["denominators"] = [small_factorization(r.denominator) for r in rats]
    return out, EXIT_OK


# ---------------------------------------------------------------------------
# commands


def cmd_scan(args, out):
    if args.max_abs_disc < 0:
        raise UsageError("--max-abs-disc must be non-negative")
    rows = scan_discriminants(args.max_abs_disc)
    if args.format == "json":
        out.write(dump_json([{"disc": d, "h": h} for d, h in rows]))
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["disc", "h"])
        w.writerows(rows)
    else:
        for d, h in rows:
            out.write(f"{d}\t{h}\n")
    return EXIT_OK


def _write_records(records, fmt, out, extra_text=None):
    if fmt == "json":
        out.write(dump_json(records))
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(RECORD_FIELDS)
        for r in records:
            w.writerow([r["disc"], r["a"], f"{r['b'][0]} {r['b'][1]}", r["d"], r["det"],
                        r["decomposable"], r["aut_order"], r["fom_q"], r["fod_q"]])
    else:
        for i, r in enumerate(records):
            kind = "decomposable" if r["decomposable"] else "indecomposable"
            line = (f"{r['disc']}\ta={r['a']}\tb={r['b'][0]}{r['b'][1]:+d}w\td={r['d']}"
                    f"\t{kind}\t|Aut|={r['aut_order']}")
            if r["fom_q"] is not None:
                line += f"\tfom_Q={r['fom_q']}\tfod_Q={r['fod_q']}"
            out.write(line + "\n")
            if extra_text and extra_text[i]:
                out.write(extra_text[i])


def cmd_polarizations(args, out):
    _check_disc(args.disc, args.force)
    res = enumerate_polarizations(args.disc, force=args.force)
    _write_records([form_record(r) for r in res.records], args.format, out)
    return EXIT_OK


def cmd_moduli(args, out):
    _check_disc(args.disc)
    res, certs = classify_with_moduli(args.disc)
    records, notes = [], []
    for rec, c in zip(res.indecomposables, certs):
        r = form_record(rec, c.fom_is_Q, c.fod_is_Q)
        r["witnesses"] = [{"ideal": [I.n, [I.alpha.x, I.alpha.y]], "P": _matrix_ints(P)}
                          for I, P in c.witnesses]
        records.append(r)
        notes.append("".join(f"    witness for ({I.n}, {I.alpha}): {_matrix_ints(P)}\n"
                             for I, P in c.witnesses) if c.fom_is_Q else "")
    if args.format == "json":
        out.write(dump_json(records))
    else:
        _write_records(records, args.format, out, notes)
        if args.format == "text":
            out.write(f"{sum(c.fom_is_Q for c in certs)} of {len(certs)} with field of moduli Q,"
                      f" {sum(c.fod_is_Q for c in certs)} definable over Q\n")
    return EXIT_OK


def cmd_invariants(args, out):
    _check_disc(args.disc)
    if args.precision < analytic.MIN_PRECISION:
        raise UsageError(f"--precision must be at least {analytic.MIN_PRECISION}")
    res = enumerate_polarizations(args.disc)
    if not 0 <= args.index < len(res.indecomposables):
        raise UsageError(f"--index must be in [0, {len(res.indecomposables)})")
    rec = res.indecomposables[args.index]
    cert = field_of_moduli_is_Q(args.disc, rec.form, res.class_group, aut_order=rec.aut_order)
    try:
        payload, code = invariants_verdict(args.disc, rec.form, args.precision, cert.fom_is_Q)
    except analytic.AnalyticError as exc:
        payload, code = {"disc": args.disc, "verdict": "unrecognized", "error": str(exc)}, EXIT_VERIFY
    if args.format == "json":
        out.write(dump_json(payload))
    else:
        for k in ("disc", "form", "precision", "theta_radius", "absolute_invariants", "rationals",
                  "denominators"):
            if k in payload:
                out.write(f"{k}: {payload[k]}\n")
        verdict = payload["verdict"]
        if verdict == "match":
            verdict += ": " + payload["equation"]
        out.write(f"verdict: {verdict}\n")
    return code


def cmd_report(args, out):
    bound = QUICK_BOUND if args.quick else args.max_abs_disc
    jobs = args.jobs if args.jobs else min(4, os.cpu_count() or 1)
    t0 = time.perf_counter()
    rows = build_report(bound, jobs)
    payload = report_payload(rows, bound)
    problems = check_report(payload)
    if args.json:
        text = dump_json(payload)
        golden = {QUICK_BOUND: "report_quick.json", SCAN_BOUND: "report_full.json"}.get(bound)
        if golden is not None:
            try:
                same = text == golden_text(golden)
            except FileNotFoundError:
                same = False
            if not same:
                problems.append(f"JSON output differs from bundled {golden}")
        out.write(text)
    else:
        out.write(f"Discriminants with class group of exponent <= 2, |D| <= {min(bound, SCAN_BOUND)}\n")
        for h, ds in payload["discriminants_by_h"].items():
            out.write(f"  h={h}: {' '.join(map(str, ds))}\n")
        out.write("Polarization counts\n  disc\th\t#indec\t#fom_Q\t#fod_Q\n")
        for r in payload["counts"]:
            out.write(f"  {r['disc']}\t{r['h']}\t{r['indecomposable']}\t{r['fom_q']}\t{r['fod_q']}\n")
        tot = payload["totals"]
        out.write(f"totals: {tot['discriminants']} discriminants, {tot['indecomposable']}"
                  f" indecomposable, {tot['fom_q']} field of moduli Q, {tot['fod_q']} definable over Q\n")
        out.write("forms definable over Q:\n")
        for r in payload["records"]:
            if r["fod_q"]:
                out.write(f"  {r['disc']}\t[[{r['a']}, {r['b']}], d={r['d']}]\t|Aut|={r['aut_order']}\n")
    for p in problems:
        print(f"verification: {p}", file=sys.stderr)
    print(f"report finished in {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    return EXIT_VERIFY if problems else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="ppsquares", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    fmt = dict(choices=("text", "json", "csv"), default="text")

    s = sub.add_parser("scan", help="discriminants with class group of exponent <= 2")
    s.add_argument("--max-abs-disc", type=int, required=True)
    s.add_argument("--format", **fmt)
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("polarizations", help="principal polarizations on E^2")
    s.add_argument("--disc", type=int, required=True)
    s.add_argument("--force", action="store_true", help="allow class groups of exponent > 2")
    s.add_argument("--format", **fmt)
    s.set_defaults(func=cmd_polarizations)

    s = sub.add_parser("moduli", help="field of moduli and field of definition")
    s.add_argument("--disc", type=int, required=True)
    s.add_argument("--format", **fmt)
    s.set_defaults(func=cmd_moduli)

    s = sub.add_parser("invariants", help="numeric Igusa invariants and curve check")
    s.add_argument("--disc", type=int, required=True)
    s.add_argument("--index", type=int, default=0, help="index among indecomposable classes")
    s.add_argument("--precision", type=int, default=analytic.DEFAULT_PRECISION, help="bits")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("report", help="tables and totals over all discriminants")
    s.add_argument("--quick", action="store_true", help=f"only |D| <= {QUICK_BOUND}")
    s.add_argument("--max-abs-disc", type=int, default=SCAN_BOUND)
    s.add_argument("--json", action="store_true")
    s.add_argument("--jobs", type=int, default=0, help="worker processes (default: up to 4)")
    s.set_defaults(func=cmd_report)
    return p


def main(argv=None, out=None):
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run(argv):
    """Run the CLI in-process and capture stdout; returns ``(exit_code, text)``."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
