"""
khtorsion command line.

    khtorsion compute  PD|NAME|FILE [--reduced] [--mod p ...] [--cap N] [--store DIR]
    khtorsion classify PD|NAME|FILE
    khtorsion verify   CENSUS [--suite S ...] [--report FILE] [--keep-going]
    khtorsion batch    CENSUS --store DIR [--jobs N]

CENSUS may be a path or one of the bundled names ``census`` / ``stretch``.

Table cells read ``a[b,c]`` = Z^a + Z_2^b + Z_4^c; longer bracket lists
continue with Z_8, Z_16, ...  A missing factor leaves its slot empty.
Odd torsion, which should never show up for H-slim links, is printed
after a ``;`` as ``q:m`` and the cell ends in ``!``.  Rows labelled ``~j``
are reduced homology.
"""

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .complex import DEFAULT_CAP, GeneratorCapExceeded
from .diagram import PDError, bundled_census, parse_pd, read_census
from .homology import compute_homology
from .invariants import classify
from .linalg import is_prime
from .render import render_table
from .store import Store, diagram_hash, make_record, table_from_record
from . import verify as V

log = logging.getLogger("khtorsion")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _census(source):
    if source in ("census", "stretch"):
        return bundled_census(source)
    p = Path(source)
    if not p.exists():
        raise FileNotFoundError(f"census file {source} not found")
    return read_census(p)


def _dedupe(entries):
    """Later entries win on duplicate names."""
    seen = {}
    for e in entries:
        if e.name in seen:
            log.warning("duplicate census name %s (line %d overrides line %d)",
                        e.name, e.line, seen[e.name].line)
        seen[e.name] = e
    return list(seen.values())


def resolve_input(text, store=None, basepoint=None):
    """A diagram from PD text, a census name (store, then bundled) or a file."""
    name = None
    looks_like_pd = any(c in text for c in "[({") or text.strip().lower().startswith("unlink")
    if not looks_like_pd:
        if store is not None:
            rec = Store(store).lookup(text)
            if rec is not None:
                d = parse_pd(rec.pd, name=rec.name)
                return d if basepoint is None else d.with_base_point(basepoint)
        for which in ("census", "stretch"):
            for e in bundled_census(which):
                if e.name == text and e.diagram is not None:
                    d = e.diagram
                    return d if basepoint is None else d.with_base_point(basepoint)
        p = Path(text)
        if p.is_file():
            text, name = p.read_text(encoding="utf-8"), p.stem
        else:
            raise PDError(f"{text!r} is neither a PD code nor a known census name")
    d = parse_pd(text, name=name)
    return d if basepoint is None else d.with_base_point(basepoint)


def _compute(d, args):
    primes = tuple(sorted(set(args.mod or ())))
    for p in primes:
        if p < 2 or not is_prime(p):
            raise ValueError(f"--mod needs a prime, got {p}")
    table = compute_homology(d, reduced=True, primes=primes or (2,), cap=args.cap)
    return table, classify(table)


def _verdict_lines(report, table):
    out = [f"verdict: {report.verdict()}"]
    if report.s_value is not None:
        out.append(f"s = {report.s_value}")
    if report.knight_poly is not None:
        out.append(f"Kh' = {report.knight_poly}")
    else:
        out.append(f"knight move: {report.knight.reason}")
    out.append(f"reason: {report.reason}")
    if report.scope_note:
        out.append(f"note: {report.scope_note}")
    odd = [q for q in table.torsion_orders() if q & (q - 1)]
    if odd:
        out.append(f"WARNING: torsion of odd order {odd}")
    if report.t_class == "T-rich":
        red = any(g.has_torsion for g in (table.reduced or {}).values())
        out.append(f"reduced torsion present: {red}")
    return out


def cmd_compute(args, out=None):
    out = out or sys.stdout
    d = resolve_input(args.input, args.store, args.basepoint)
    table, report = _compute(d, args)
    out.write(f"{d.name or 'diagram'}: {d.n_crossings} crossings, "
              f"{d.m_components} component(s), {table.generators} generators\n")
    out.write(render_table(table.groups, table.reduced if args.reduced else None))
    for p in sorted(set(args.mod or ())):
        b = table.betti[p]
        out.write(f"mod {p} Betti numbers: "
                  + " ".join(f"({i},{j}):{n}" for (i, j), n in sorted(b.items())) + "\n")
    out.write("\n".join(_verdict_lines(report, table)) + "\n")
    if args.store:
        Store(args.store).put(make_record(d, table, report))
        Store(args.store).write_index()
    return EXIT_OK


def cmd_classify(args, out=None):
    out = out or sys.stdout
    d = resolve_input(args.input, args.store, args.basepoint)
    table, report = _compute(d, args)
    out.write(f"{d.name or 'diagram'}: " + "\n".join(_verdict_lines(report, table)) + "\n")
    return EXIT_OK


def _suites(values):
    chosen = set()
    for v in values or ["all"]:
        chosen |= set(V.SUITES) if v == "all" else {v}
    return tuple(s for s in V.SUITES if s in chosen)


def cmd_verify(args, out=None):
    out = out or sys.stdout
    entries = _dedupe(_census(args.census))
    suites = _suites(args.suite)
    checks, parse_errors, items = [], 0, []
    calibration = V.calibrate_diagonals() if "theorems" in suites else 1
    if "theorems" in suites and entries:
        for n in range(1, 13):
            checks.append(V.check_gn_acyclic(n))
    for e in entries:
        if e.diagram is None:
            parse_errors += 1
            checks.append(V.CheckResult("parse", e.name, False, e.error))
            log.error("%s: %s", e.name, e.error)
            continue
        try:
            res = V.verify_entry(e.diagram, suites, calibration, lee_max=args.lee_max,
                                 cap=args.cap)
        except GeneratorCapExceeded as exc:
            checks.append(V.CheckResult("generator cap", e.name, False, str(exc), level="info"))
            continue
        checks.extend(res.checks)
        items.append((res.table, res.report))
        bad = [c for c in res.checks if not c.passed and c.level == "theorem"]
        log.info("%s: %s%s", e.name, res.report.verdict(),
                 f", {len(bad)} failed" if bad else "")
    if "conjectures" in suites:
        checks.extend(V.scan_conjectures(items))
    header = [f"suites: {','.join(suites)}", f"entries: {len(entries)}",
              f"diagonal calibration: {calibration:+d} (support on sigma-1, sigma+1 in b = 2i - j)"]
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="") as fh:
            V.write_report(checks, fh, header)
    else:
        out.write(V.write_report(checks, header=header))
    failed = [c for c in checks if not c.passed and c.level == "theorem"]
    for c in failed:
        log.error("FAILED %s on %s: %s", c.check_name, c.subject, c.detail)
    if args.keep_going:
        return EXIT_OK if not [c for c in failed if c.check_name != "parse"] else EXIT_FAIL
    return EXIT_FAIL if failed else EXIT_OK


def _batch_one(job):
    name, pd, meta, base_point, cap, primes = job
    d = parse_pd(pd, name=name, base_point=base_point, meta=meta)
    try:
        table = compute_homology(d, reduced=True, primes=primes, cap=cap)
    except GeneratorCapExceeded as exc:
        return name, None, str(exc)
    return name, make_record(d, table, classify(table)), None


def cmd_batch(args, out=None):
    out = out or sys.stdout
    if not args.store:
        raise ValueError("batch needs --store")
    store = Store(args.store)
    entries = _dedupe(_census(args.census))
    primes = tuple(sorted(set(args.mod or ()) | {2}))
    jobs, hits, bind, bad = [], 0, [], 0
    for e in entries:
        if e.diagram is None:
            log.error("%s: %s", e.name, e.error)
            bad += 1
            continue
        h = diagram_hash(e.diagram)
        if store.has(h, reduced=True, primes=primes):
            hits += 1
            bind.append((e.name, h))
        else:
            jobs.append((e.name, e.pd, e.meta, e.base_point, args.cap, primes))
    store.bind(bind)
    done = skipped = 0
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = pool.map(_batch_one, jobs)
            for name, rec, err in results:
                done, skipped = _store_result(store, name, rec, err, done, skipped)
    else:
        for job in jobs:
            done, skipped = _store_result(store, *_batch_one(job), done, skipped)
    store.write_index()
    out.write(f"{len(entries)} entries: {done} computed, {hits} cached, "
              f"{skipped} over the cap, {bad} parse errors\n")
    return EXIT_FAIL if bad and not args.keep_going else EXIT_OK


def _store_result(store, name, rec, err, done, skipped):
    if rec is None:
        log.warning("%s: skipped (%s)", name, err)
        return done, skipped + 1
    store.put(rec)
    log.info("%s: %s", name, rec.classification["verdict"])
    return done + 1, skipped


def build_parser():
    ap = argparse.ArgumentParser(prog="khtorsion", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--cap", type=lambda s: None if s in ("none", "0") else int(s),
                       default=DEFAULT_CAP,
                       help="generator cap ('none' to lift it); default %(default)s")
        p.add_argument("--mod", type=int, action="append", metavar="P",
                       help="also compute mod-P Betti numbers (repeatable)")
        p.add_argument("--store", metavar="DIR", help="result store directory")
        p.add_argument("-v", "--verbose", action="store_true", help="log per-entry progress")

    p = sub.add_parser("compute", help="homology table of one diagram")
    p.add_argument("input", help="PD code, census name or file")
    p.add_argument("--reduced", action="store_true", help="interleave reduced rows")
    p.add_argument("--basepoint", type=int, metavar="EDGE")
    common(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("classify", help="thinness verdicts of one diagram")
    p.add_argument("input")
    p.add_argument("--basepoint", type=int, metavar="EDGE")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="run check suites over a census")
    p.add_argument("census")
    p.add_argument("--suite", action="append", choices=list(V.SUITES) + ["all"])
    p.add_argument("--report", metavar="FILE", help="CSV report (default stdout)")
    p.add_argument("--keep-going", action="store_true",
                   help="parse errors do not affect the exit status")
    p.add_argument("--lee-max", type=int, default=8,
                   help="largest crossing number for the Lee check")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("batch", help="compute a census into a store")
    p.add_argument("census")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--keep-going", action="store_true")
    common(p)
    p.set_defaults(func=cmd_batch)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except GeneratorCapExceeded as exc:
        log.error("%s; raise it with --cap N or --cap none", exc)
    except (PDError, ValueError, FileNotFoundError, OSError) as exc:
        log.error("%s", exc)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
