"""Command-line front end: build, verify, ehrhart, subgroups.

Exit codes: 0 every claim passed, 1 some claim failed, 2 some claim was
skipped for capacity (and none failed), 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager

from .config import CapacityError, Caps, caps_from_env
from .dihedral import DihedralGroup, all_subgroups
from .ehrhart import ehrhart_data, trim, verify_corollary, verify_theorem3
from .exact import dot, rank
from .faces import dihedral_polytope, subgroup_face_test, verify_conjecture58
from .models import (
    make_model,
    free_sum_structure,
    verify_compressed,
    verify_dpn_hdescription,
    verify_gorenstein,
    verify_odd_isomorphism,
    verify_theorem1,
    verify_theorem2,
    verify_tinhofer,
)
from .polytope import VPolytope, facets
from .report import FAIL, PASS, SKIPPED, Report

EXIT_PASS, EXIT_FAIL, EXIT_SKIP, EXIT_USAGE = 0, 1, 2, 64

MIN_N = {"qn": 2, "dpn": 3}

SCOPES = ("theorem1", "theorem2", "theorem3", "corollary", "gorenstein", "compressed", "conjecture58", "tinhofer")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --- n ranges ---------------------------------------------------------------


def parse_n(text: str) -> list[int]:
    """``"5"`` or an inclusive range ``"3..6"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO..HI, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def _ns(args) -> list[int]:
    if args.n is not None and args.n_range is not None:
        raise UsageError("give --n or --n-range, not both")
    if args.n_range is not None:
        lo, hi = args.n_range
        if lo > hi:
            raise UsageError(f"empty range {lo}..{hi}")
        return list(range(lo, hi + 1))
    if args.n is None:
        raise UsageError("one of --n or --n-range is required")
    return args.n


# --- build ------------------------------------------------------------------


def _system_json(system) -> list[dict]:
    return [{"coeffs": [int(c) for c in row], "rhs": int(b)} for row, b in system]


def build_document(model_name: str, n: int) -> dict:
    """Vertices plus H-description.  Inequalities read ``coeffs . x >= rhs``."""
    if n < MIN_N[model_name]:
        raise UsageError(f"{model_name} needs n >= {MIN_N[model_name]}, got {n}")
    model = make_model(model_name, n)
    H = model.hpoly
    return {
        "model": model_name,
        "n": n,
        "dim": model.dim,
        "vertices": [list(v) for v in model.vpoly.vertices],
        "equations": _system_json(H.equations),
        "inequalities": _system_json(H.inequalities),
    }


def dumps(doc) -> str:
    return json.dumps(doc, separators=(",", ":"))


def load_document(path: str) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    missing = {"model", "n", "vertices", "equations", "inequalities"} - set(doc)
    if missing:
        raise UsageError(f"{path}: missing keys {sorted(missing)}")
    if doc["model"] not in MIN_N:
        raise UsageError(f"{path}: unknown model {doc['model']!r}")
    return doc


def document_report(doc: dict, caps: Caps) -> Report:
    """Checks that depend only on the data in a build document."""
    rep = Report(f"{doc['model']} n={doc['n']} (input)")
    V = [tuple(v) for v in doc["vertices"]]
    eqs = [(e["coeffs"], e["rhs"]) for e in doc["equations"]]
    ineqs = [(e["coeffs"], e["rhs"]) for e in doc["inequalities"]]
    anchor = "build document"

    def integral():
        ok = all(isinstance(x, int) for v in V for x in v)
        ok &= all(isinstance(x, int) for a, b in eqs + ineqs for x in list(a) + [b])
        return ok, {}

    def satisfied():
        bad = [i for i, v in enumerate(V) if any(dot(a, v) != b for a, b in eqs) or any(dot(a, v) < b for a, b in ineqs)]
        return not bad, {"violating_vertices": bad}

    def dimension():
        P = VPolytope(V)
        by_eqs = len(V[0]) - rank([a for a, _ in eqs], len(V[0])) if eqs else len(V[0])
        want = doc.get("dim", P.dim)
        return P.dim == by_eqs == want, {"dim": P.dim, "from_equations": by_eqs}

    def facet_inequalities():
        P = VPolytope(V)
        bad = []
        for idx, (a, b) in enumerate(ineqs):
            tight = [v for v in V if dot(a, v) == b]
            if len(tight) == len(V) or not tight or VPolytope(tight, len(V[0])).dim != P.dim - 1:
                bad.append(idx)
        return not bad, {"inequalities": len(ineqs), "not_facets": bad}

    def facet_count():
        if doc["n"] > caps.generic_max_n:
            raise CapacityError(f"generic facet enumeration capped at n <= {caps.generic_max_n}")
        P = VPolytope(V)
        tight_sets = {frozenset(i for i, v in enumerate(V) if dot(a, v) == b) for a, b in ineqs}
        generic = {f.incident for f in facets(P, caps)}
        return tight_sets == generic, {"generic": len(generic), "input": len(tight_sets)}

    def matches_model():
        model = make_model(doc["model"], doc["n"])
        return set(model.vpoly.vertices) == set(V), {"vertices": len(V)}

    rep.check("input.integral", anchor, integral)
    rep.check("input.vertices_satisfy", anchor, satisfied)
    rep.check("input.dimension", anchor, dimension)
    rep.check("input.facet_inequalities", anchor, facet_inequalities)
    rep.check("input.facet_count", anchor, facet_count)
    rep.check("input.matches_model", anchor, matches_model)
    return rep


# --- verify -----------------------------------------------------------------


def scope_applies(scope: str, n: int) -> bool:
    if scope in ("theorem1", "theorem3", "gorenstein", "compressed"):
        return n >= 2
    if scope == "corollary":
        return n >= 4 and n % 2 == 0
    return n >= 3


def scope_reports(scope: str, n: int, caps: Caps) -> list[Report]:
    if scope == "theorem1":
        return [verify_theorem1(n, caps), free_sum_structure(n)]
    if scope == "theorem2":
        # odd n: DP_n is Q_n with columns permuted
        first = verify_theorem2(n) if n % 2 == 0 else verify_odd_isomorphism(n)
        return [first, verify_dpn_hdescription(n, caps)]
    if scope == "theorem3":
        return [verify_theorem3(n, caps)]
    if scope == "corollary":
        return [verify_corollary(n, caps)]
    if scope == "gorenstein":
        return [verify_gorenstein(n, caps)]
    if scope == "compressed":
        return [verify_compressed(n)]
    if scope == "conjecture58":
        return [verify_conjecture58(n)]
    if scope == "tinhofer":
        return [verify_tinhofer(n, caps)]
    raise ValueError(f"unknown scope {scope!r}")


def run_task(scope: str, n: int, caps: Caps) -> list[Report]:
    scopes = SCOPES if scope == "all" else (scope,)
    out = []
    for s in scopes:
        if scope_applies(s, n):
            out.extend(scope_reports(s, n, caps))
    return out


def _task(args):
    return run_task(*args)


def _run_all(tasks, jobs: int) -> list[list[Report]]:
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_task, tasks))
    return [_task(t) for t in tasks]


def exit_status(reports) -> int:
    statuses = [c.status for r in reports for c in r.claims]
    if FAIL in statuses:
        return EXIT_FAIL
    if SKIPPED in statuses:
        return EXIT_SKIP
    return EXIT_PASS


def claim_rows(reports, timing: bool) -> list[dict]:
    return [{"target": r.target, **c.as_dict(timing)} for r in reports for c in r.claims]


def summary_table(reports) -> str:
    rows = [(r.target, c.id, c.status, f"{c.elapsed:.3f}s") for r in reports for c in r.claims]
    head = ("target", "claim", "status", "elapsed")
    widths = [max(len(str(x)) for x in col) for col in zip(head, *rows)]
    lines = ["  ".join(str(x).ljust(w) for x, w in zip(row, widths)).rstrip() for row in [head] + rows]
    counts = {s: sum(1 for r in rows if r[2] == s) for s in (PASS, FAIL, SKIPPED)}
    lines.append(f"{counts[PASS]} passed, {counts[FAIL]} failed, {counts[SKIPPED]} skipped")
    return "\n".join(lines) + "\n"


def _render(rows: list[dict], fmt: str, columns=None) -> str:
    if fmt == "json":
        return "".join(dumps(r) + "\n" for r in rows)
    buf = io.StringIO()
    if columns is None:
        columns = list(rows[0]) if rows else []
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_csv_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, (bool, dict, list)):
        return dumps(v)
    return v


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_build(args, caps: Caps) -> int:
    doc = build_document(args.model, args.n_pos)
    with _output(args.out) as fh:
        fh.write(dumps(doc) + "\n")
    return EXIT_PASS


def cmd_verify(args, caps: Caps) -> int:
    if args.input is not None:
        if args.n is not None or args.n_range is not None:
            raise UsageError("--input fixes n; do not also pass --n or --n-range")
        doc = load_document(args.input)
        reports = [document_report(doc, caps)] + run_task(args.scope, doc["n"], caps)
    else:
        ns = _ns(args)
        if not any(scope_applies(s, n) for n in ns for s in (SCOPES if args.scope == "all" else (args.scope,))):
            raise UsageError(f"scope {args.scope} does not apply to n in {ns[0]}..{ns[-1]}")
        tasks = [(args.scope, n, caps) for n in ns]
        reports = [r for rs in _run_all(tasks, args.jobs) for r in rs]
    rows = claim_rows(reports, args.timing)
    with _output(args.out) as fh:
        fh.write(_render(rows, args.format, ["target", "claim", "anchor", "status", "details"] + (["elapsed"] if args.timing else [])))
    sys.stderr.write(summary_table(reports))
    for r in reports:
        for c in r.failed:
            sys.stderr.write(f"FAILED {r.target} {c.id}: {dumps(c.details)}\n")
    return exit_status(reports)


def ehrhart_row(model_name: str, n: int, kmax, caps: Caps) -> dict:
    model = make_model(model_name, n)
    data = ehrhart_data(model, kmax, "both", caps)
    counts = data.counts if kmax is None else data.counts[: kmax + 1]
    return {
        "model": model_name,
        "n": n,
        "dim": data.dim,
        "counts": counts,
        "hstar": trim(data.hstar),
        "codegree": data.codegree,
        "normalized_volume": data.normalized_volume,
    }


def ehrhart_csv(row: dict) -> str:
    """One line per dilate k; the h* column is blank past its degree."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "count", "hstar", "codegree", "normalized_volume"])
    h = row["hstar"]
    for k, L in enumerate(row["counts"]):
        w.writerow([k, L, h[k] if k < len(h) else "", row["codegree"], row["normalized_volume"]])
    return buf.getvalue()


def cmd_ehrhart(args, caps: Caps) -> int:
    if args.n_pos < MIN_N[args.model]:
        raise UsageError(f"{args.model} needs n >= {MIN_N[args.model]}, got {args.n_pos}")
    if args.kmax is not None and args.kmax < 0:
        raise UsageError("--kmax must be >= 0")
    try:
        row = ehrhart_row(args.model, args.n_pos, args.kmax, caps)
    except CapacityError as exc:
        skip = {"model": args.model, "n": args.n_pos, "status": SKIPPED, "reason": str(exc)}
        with _output(args.out) as fh:
            fh.write(dumps(skip) + "\n")
        sys.stderr.write(f"skipped: {exc}\n")
        return EXIT_SKIP
    with _output(args.out) as fh:
        fh.write(dumps(row) + "\n" if args.format == "json" else ehrhart_csv(row))
    return EXIT_PASS


def subgroup_rows(n: int) -> list[dict]:
    G = DihedralGroup(n)
    P = dihedral_polytope(G)
    rows = []
    for H in all_subgroups(G):
        v = subgroup_face_test(G, H, P)
        rows.append(
            {
                "n": n,
                "subgroup": H.describe(),
                "order": len(H.members),
                "orbits": [[i + 1 for i in o] for o in v.orbits],
                "is_face": v.is_face,
                "is_orbit_stabilizer": v.is_orbit_stabilizer,
                "certified": v.certified,
            }
        )
    return rows


def cmd_subgroups(args, caps: Caps) -> int:
    ns = _ns(args)
    if min(ns) < 3:
        raise UsageError("subgroups needs n >= 3")
    rows = [r for n in ns for r in subgroup_rows(n)]
    with _output(args.out) as fh:
        fh.write(_render(rows, args.format))
    ok = all(r["is_face"] == r["is_orbit_stabilizer"] and r["certified"] for r in rows)
    return EXIT_PASS if ok else EXIT_FAIL


# --- parser -----------------------------------------------------------------


def _add_range_flags(p):
    p.add_argument("--n", type=parse_n, help="N or LO..HI (inclusive)")
    p.add_argument("--n-range", type=int, nargs=2, metavar=("LO", "HI"), help="inclusive range of n")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dihedral-polytopes", description="Exact checks for dihedral permutation polytopes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="write vertices and H-description as JSON")
    p.add_argument("model", choices=sorted(MIN_N))
    p.add_argument("n_pos", type=int, metavar="n")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="check the structural claims")
    p.add_argument("scope", choices=SCOPES + ("all",))
    _add_range_flags(p)
    p.add_argument("--input", help="re-read a build JSON document instead of constructing the model")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="include per-claim elapsed seconds")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ehrhart", help="lattice-point counts and h*-vector")
    p.add_argument("model", choices=sorted(MIN_N))
    p.add_argument("n_pos", type=int, metavar="n")
    p.add_argument("--kmax", type=int, help="largest dilate (default dim + 2)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ehrhart)

    p = sub.add_parser("subgroups", help="face test for every subgroup of D_n")
    _add_range_flags(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_subgroups)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    try:
        caps = caps_from_env()
    except ValueError as exc:
        parser.error(str(exc))
    try:
        return args.func(args, caps)
    except UsageError as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
