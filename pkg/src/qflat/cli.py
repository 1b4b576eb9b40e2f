"""Command line entry point: qflat enumerate | scan | mass | classnumber |
invariants | maximalize | verify-paper."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from qflat.genus import class_number, genus_of
from qflat.lattice import IntegralForm, content, enlarge_form, is_maximal, lll_reduce, local_profile
from qflat.mass import mass_from_profile
from qflat.pipeline import CertificationError, RunConfig, enumerate_maximal, render_table, run_full_scan, scan_summary

EXIT_OK, EXIT_ERROR, EXIT_CERT = 0, 1, 2


def _load_form(path: str) -> IntegralForm:
    with open(path) as fh:
        return IntegralForm.from_json(json.load(fh))


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_enumerate(a):
    cfg = RunConfig(rank_min=a.rank, rank_max=a.rank, bound=a.bound, fmt=a.format, jobs=a.jobs)
    res = enumerate_maximal(a.rank, a.bound, cfg)
    _emit(render_table(res, a.format), a.out)


def cmd_scan(a):
    cfg = RunConfig(bound=a.bound, rank_max=a.rank_max, jobs=a.jobs)
    results = run_full_scan(a.bound, cfg)
    sys.stdout.write(scan_summary(results))
    if a.tables:
        for r in results:
            if r.entries:
                print()
                sys.stdout.write(render_table(r))


def cmd_mass(a):
    f = _load_form(a.form)
    st = mass_from_profile(local_profile(f))
    print(f"Mass+ = {st.proper_mass}")
    print(f"Mass  = {st.proper_mass / 2}")
    if not is_maximal(f):
        print("note: form is not maximal; these are the masses of the maximal genus on its space")


def cmd_classnumber(a):
    rec = genus_of(_load_form(a.form))
    if a.json:
        print(json.dumps(rec.to_json(), indent=1))
    else:
        print(f"h = {rec.class_number} ({'certified by mass' if rec.certified else 'neighbor closure, uncertified'})")


def cmd_invariants(a):
    f = _load_form(a.form)
    prof = local_profile(f)
    doc = {
        "det_H": f.det_H,
        "content": content(f),
        "maximal": is_maximal(f),
        "profile": prof.summary(),
    }
    print(json.dumps(doc, indent=1))


def cmd_maximalize(a):
    f, _ = enlarge_form(_load_form(a.form))
    f, _ = lll_reduce(f)
    print(json.dumps(f.to_json()))


def cmd_verify(a):
    from qflat.verify import run_battery

    checks = run_battery(RunConfig(jobs=a.jobs))
    if not all(c.ok for c in checks):
        raise CertificationError("some checks failed")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qflat", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="forms of one rank with class number <= B")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--bound", type=Fraction, default=Fraction(1))
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("scan", help="all ranks up to the certified horizon")
    p.add_argument("--bound", type=Fraction, default=Fraction(1))
    p.add_argument("--rank-max", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--tables", action="store_true", help="also print each rank's table")
    p.set_defaults(fn=cmd_scan)

    for name, fn, helptext in [
        ("mass", cmd_mass, "formula masses for the space of a form"),
        ("classnumber", cmd_classnumber, "class number by genus traversal"),
        ("invariants", cmd_invariants, "determinant, content, maximality and local profile"),
        ("maximalize", cmd_maximalize, "a maximal Z-valued overlattice"),
    ]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("form", help="form JSON file: {\"rank\": n, \"coeffs\": [[...], ...]}")
        if name == "classnumber":
            p.add_argument("--json", action="store_true")
        p.set_defaults(fn=fn)

    p = sub.add_parser("verify-paper", help="run the acceptance battery")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        args.fn(args)
    except CertificationError as exc:
        print(f"certification failure: {exc}", file=sys.stderr)
        return EXIT_CERT
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
