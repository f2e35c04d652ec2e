"""Command-line surface for batch verification, search, and reports.

Subcommands map one-to-one onto the toolkit's activities:

* ``verify-corpus`` — golden run over the twelve frozen tables
* ``check`` / ``decompose`` — capability report / core partition of a table file
* ``search`` / ``bounds`` — backtracking search from a spec file / size scan
* ``iso`` — absorber-preserving isomorphisms between two table files
* ``encode`` — DIMACS export of a spec file
* ``derive-separation`` — re-find the size-6 weakening separation table
* ``sweep`` — optional long-running per-size satisfiability scan
* ``report`` — capability CSV plus rendered figures for the corpus

Exit codes: 0 success/found, 1 unsat-or-mismatch, 2 usage/parse errors,
3 node budget exceeded.  With ``--report json`` the output is a single
JSON document and contains no timing, so identical invocations print
identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from typing import Dict, List, Optional, Sequence

from . import __version__
from .core import (
    EmptyCoreError,
    Decomposition,
    DichotomyViolation,
    DomainError,
    MagmaError,
    ValidationError,
    decompose,
    normalize,
    validate_e2pm,
)
from .capabilities import full_report
from .corpus import (
    ParseError,
    corpus_all,
    load_table,
    save_table,
    verify_witness,
)
from .search import (
    ResourceLimit,
    SearchSpec,
    SpecInvalid,
    derive_nontriviality_separation,
    minimal_size,
    search,
)
from . import cnf as cnf_mod
from . import iso as iso_mod

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

DIRECTIONS = {
    "R-D": (("E2PM", "R_mutual"), ("D",)),
    "R-H": (("E2PM", "R_mutual"), ("H",)),
    "D-H": (("E2PM", "D"), ("H",)),
    "H-D": (("E2PM", "H"), ("D",)),
    "D-R": (("E2PM", "D"), ("R_mutual",)),
    "H-R": (("E2PM", "H"), ("R_mutual",)),
}


def _emit(args, payload: Dict, text_lines: List[str], elapsed_ms: float) -> None:
    if args.report == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)
        print(f"elapsed: {elapsed_ms:.1f} ms")


def _flag(value: bool) -> str:
    return "yes" if value else "no"


def _load_file(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return load_table(fh.read())


def _normalized(loaded):
    m = validate_e2pm(loaded.table, loaded.z1, loaded.z2)
    return normalize(m)


def _read_specfile(path: str) -> SearchSpec:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if "constraints" in doc:
        cons = tuple((c["pred"], bool(c["polarity"])) for c in doc["constraints"])
    else:
        cons = tuple((p, True) for p in doc.get("require", ())) + \
            tuple((p, False) for p in doc.get("forbid", ()))
    roles = tuple(sorted((doc.get("fixed_roles") or {}).items()))
    return SearchSpec(n=doc["n"], constraints=cons, fixed_roles=roles,
                      limit=doc.get("limit"), budget=doc.get("budget", 10 ** 9))


def _report_payload(rep, dec) -> Dict:
    d: Dict[str, object] = {
        "r": rep.has_r,
        "d": rep.has_d,
        "h": rep.has_h,
        "r_mutual": [[p.s, p.r] for p in rep.r_mutual],
        "r_onesided": [[p.s, p.r] for p in rep.r_onesided],
        "icp_triples": [[t.a, t.b, t.c] for t in rep.h],
        "associative": rep.associative,
        "right_identity": rep.right_identity,
        "commutative": rep.commutative,
    }
    if isinstance(dec, Decomposition):
        d["zeros"] = sorted(dec.zeros)
        d["classifiers"] = sorted(dec.classifiers)
        d["nonclassifiers"] = sorted(dec.nonclassifiers)
    elif isinstance(dec, DichotomyViolation):
        d["violation"] = {"element": dec.element,
                          "absorber_input": dec.absorber_input,
                          "nonabsorber_input": dec.nonabsorber_input}
    return d


def _report_lines(name: str, rep, dec) -> List[str]:
    caps_line = (f"R{'✓' if rep.has_r else '✗'} "
                 f"D{'✓' if rep.has_d else '✗'} "
                 f"H{'✓' if rep.has_h else '✗'}")
    lines = [f"{name}: {caps_line}"]
    if rep.r_mutual:
        lines.append("  retraction pairs (mutual, anchored): "
                     + " ".join(f"({p.s},{p.r})" for p in rep.r_mutual))
    if rep.h:
        lines.append("  composition triples: "
                     + " ".join(f"({t.a},{t.b},{t.c})" for t in rep.h))
    if isinstance(dec, Decomposition):
        lines.append(f"  Z={sorted(dec.zeros)} C={sorted(dec.classifiers)} "
                     f"N={sorted(dec.nonclassifiers)}")
    elif isinstance(dec, DichotomyViolation):
        lines.append(f"  dichotomy violation at element {dec.element} "
                     f"(column {dec.nonabsorber_input} stays in core, "
                     f"column {dec.absorber_input} hits an absorber)")
    lines.append(f"  associative={_flag(rep.associative)} "
                 f"right_identity={rep.right_identity} "
                 f"commutative={_flag(rep.commutative)}")
    return lines


# ============================================================================
# Subcommands
# ============================================================================

def cmd_verify_corpus(args) -> int:
    start = time.perf_counter()
    items = []
    failures = 0
    for w in corpus_all():
        problems = verify_witness(w, strict=args.strict_classifier)
        items.append({"name": w.name, "ok": not problems, "problems": problems})
        failures += bool(problems)
    elapsed = (time.perf_counter() - start) * 1000
    lines = []
    for item in items:
        mark = "✓" if item["ok"] else "✗"
        lines.append(f"{mark} {item['name']}")
        for p in item["problems"]:
            lines.append(f"    {p}")
    lines.append(f"{len(items) - failures}/{len(items)} tables match expectations")
    payload = {"command": "verify-corpus", "items": items,
               "passed": len(items) - failures, "total": len(items)}
    _emit(args, payload, lines, elapsed)
    return EXIT_OK if failures == 0 else EXIT_MISMATCH


def cmd_check(args) -> int:
    start = time.perf_counter()
    loaded = _load_file(args.file)
    m = _normalized(loaded)
    rep = full_report(m, strict=args.strict_classifier)
    try:
        dec = decompose(m)
    except EmptyCoreError:
        dec = None
    elapsed = (time.perf_counter() - start) * 1000
    name = loaded.name or os.path.basename(args.file)
    payload = {"command": "check", "table": name, "n": m.n}
    payload.update(_report_payload(rep, dec))
    _emit(args, payload, _report_lines(name, rep, dec), elapsed)
    return EXIT_OK


def cmd_decompose(args) -> int:
    start = time.perf_counter()
    loaded = _load_file(args.file)
    m = _normalized(loaded)
    dec = decompose(m)
    elapsed = (time.perf_counter() - start) * 1000
    name = loaded.name or os.path.basename(args.file)
    payload: Dict[str, object] = {"command": "decompose", "table": name}
    if isinstance(dec, Decomposition):
        payload.update({"zeros": sorted(dec.zeros),
                        "classifiers": sorted(dec.classifiers),
                        "nonclassifiers": sorted(dec.nonclassifiers)})
        lines = [f"{name}: Z={sorted(dec.zeros)} C={sorted(dec.classifiers)} "
                 f"N={sorted(dec.nonclassifiers)}"]
        code = EXIT_OK
    else:
        payload["violation"] = {"element": dec.element,
                                "absorber_input": dec.absorber_input,
                                "nonabsorber_input": dec.nonabsorber_input}
        lines = [f"{name}: dichotomy violation at element {dec.element}"]
        code = EXIT_MISMATCH
    _emit(args, payload, lines, elapsed)
    return code


def _witness_rows(table) -> List[List[int]]:
    return [list(r) for r in table.rows]


def cmd_search(args) -> int:
    start = time.perf_counter()
    spec = _read_specfile(args.specfile)
    if args.budget is not None:
        spec = SearchSpec(spec.n, spec.constraints, spec.fixed_roles,
                          spec.limit, args.budget)
    out = search(spec, threads=args.threads)
    elapsed = (time.perf_counter() - start) * 1000
    payload = {
        "command": "search", "n": spec.n, "status": out.status,
        "explored": out.explored, "pruned": out.pruned,
        "exhaustive": out.exhaustive, "witness_count": len(out.witnesses),
        "first_witness": _witness_rows(out.witnesses[0]) if out.witnesses else None,
    }
    lines = [f"status: {out.status}  explored={out.explored} pruned={out.pruned} "
             f"exhaustive={_flag(out.exhaustive)} witnesses={len(out.witnesses)}"]
    if out.witnesses:
        lines.append(save_table(out.witnesses[0], 0, 1).rstrip("\n"))
    _emit(args, payload, lines, elapsed)
    return EXIT_OK if out.found else EXIT_MISMATCH


def cmd_bounds(args) -> int:
    start = time.perf_counter()
    require = tuple(p for p in args.require.split(",") if p)
    forbid = tuple(p for p in args.forbid.split(",") if p) if args.forbid else ()
    roles = _parse_roles(args.roles)
    results = minimal_size(require, forbid, args.min, args.max,
                           fixed_roles=roles, budget=args.budget or 10 ** 9,
                           threads=args.threads)
    elapsed = (time.perf_counter() - start) * 1000
    items = []
    lines = []
    found = False
    budget_hit = False
    for res in results:
        entry = {"n": res.n, "status": res.status}
        if res.outcome is not None:
            entry["explored"] = res.outcome.explored
            entry["exhaustive"] = res.outcome.exhaustive
            if res.outcome.witnesses:
                entry["witness"] = _witness_rows(res.outcome.witnesses[0])
        items.append(entry)
        lines.append(f"n={res.n}: {res.status}"
                     + (f" (explored={res.outcome.explored})" if res.outcome else ""))
        found = found or res.status == "found"
        budget_hit = budget_hit or res.status == "resource-limit"
    payload = {"command": "bounds", "require": list(require),
               "forbid": list(forbid), "results": items}
    _emit(args, payload, lines, elapsed)
    if found:
        return EXIT_OK
    return EXIT_BUDGET if budget_hit else EXIT_MISMATCH


def cmd_iso(args) -> int:
    start = time.perf_counter()
    m1 = _normalized(_load_file(args.file1))
    m2 = _normalized(_load_file(args.file2))
    if args.sample:
        import random as _random
        rng = _random.Random(args.seed)
        seen = []
        for _ in range(args.sample):
            perm = iso_mod.sample_absorber_fixing_permutation(m1, rng)
            if iso_mod._is_isomorphism(m1.rows, m2.rows, list(perm), m1.n):
                if perm not in seen:
                    seen.append(perm)
        isos = [iso_mod.IsoWitness(p, True) for p in seen]
        exhaustive = False
    else:
        isos = iso_mod.find_isomorphisms(m1, m2)
        exhaustive = True
    elapsed = (time.perf_counter() - start) * 1000
    payload = {"command": "iso", "count": len(isos), "exhaustive": exhaustive,
               "isomorphisms": [list(w.perm) for w in isos]}
    if isos:
        lines = [f"{len(isos)} isomorphism(s):"]
        lines.extend("  " + " ".join(str(v) for v in w.perm) for w in isos)
    else:
        lines = ["none"]
    _emit(args, payload, lines, elapsed)
    return EXIT_OK if isos else EXIT_MISMATCH


def cmd_encode(args) -> int:
    start = time.perf_counter()
    spec = _read_specfile(args.specfile)
    doc = cnf_mod.encode(spec)
    text = cnf_mod.to_dimacs(doc)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    elapsed = (time.perf_counter() - start) * 1000
    payload = {"command": "encode", "n": spec.n, "variables": doc.num_vars,
               "clauses": len(doc.clauses), "out": args.out}
    lines = [f"wrote {doc.num_vars} variables, {len(doc.clauses)} clauses to {args.out}"]
    _emit(args, payload, lines, elapsed)
    return EXIT_OK


def cmd_derive_separation(args) -> int:
    start = time.perf_counter()
    table = derive_nontriviality_separation()
    text = save_table(table, 0, 1, name="separation6")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    elapsed = (time.perf_counter() - start) * 1000
    payload = {"command": "derive-separation", "rows": _witness_rows(table)}
    lines = [text.rstrip("\n")]
    _emit(args, payload, lines, elapsed)
    return EXIT_OK


def cmd_sweep(args) -> int:
    start = time.perf_counter()
    directions = args.directions.split(",") if args.directions else list(DIRECTIONS)
    items = []
    lines = []
    for name in directions:
        if name not in DIRECTIONS:
            print(f"unknown direction {name!r}; known: {', '.join(DIRECTIONS)}",
                  file=sys.stderr)
            return EXIT_USAGE
        require, forbid = DIRECTIONS[name]
        per_n = []
        for n in range(args.min, args.max + 1):
            spec = SearchSpec.build(n, require=require, forbid=forbid, limit=1,
                                    budget=args.budget or 10 ** 9)
            try:
                out = search(spec, threads=args.threads)
                per_n.append({"n": n, "status": out.status})
            except ResourceLimit:
                per_n.append({"n": n, "status": "resource-limit"})
        items.append({"direction": name, "sizes": per_n})
        lines.append(name + ": " + " ".join(
            f"{e['n']}={e['status']}" for e in per_n))
    elapsed = (time.perf_counter() - start) * 1000
    payload = {"command": "sweep", "results": items}
    _emit(args, payload, lines, elapsed)
    return EXIT_OK


def cmd_report(args) -> int:
    from . import figures
    start = time.perf_counter()
    os.makedirs(args.out_dir, exist_ok=True)
    entries = []
    for w in corpus_all():
        rep = full_report(w.table)
        entries.append((w, rep))
    csv_path = os.path.join(args.out_dir, "corpus_capabilities.csv")
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", "n", "r", "d", "h", "associative",
                         "right_identity", "commutative",
                         "retraction_pairs", "icp_triples"])
        for w, rep in entries:
            writer.writerow([
                w.name, w.table.n, int(rep.has_r), int(rep.has_d), int(rep.has_h),
                int(rep.associative),
                "" if rep.right_identity is None else rep.right_identity,
                int(rep.commutative),
                " ".join(f"{p.s}:{p.r}" for p in rep.r_mutual),
                " ".join(f"{t.a}:{t.b}:{t.c}" for t in rep.h),
            ])
    figure_paths = []
    for w, _rep in entries:
        path = os.path.join(args.out_dir, f"table_{w.name}.png")
        figures.save_table_figure(w, path)
        figure_paths.append(path)
    matrix_path = os.path.join(args.out_dir, "capability_matrix.png")
    figures.save_capability_matrix([(w.name, rep) for w, rep in entries], matrix_path)
    figure_paths.append(matrix_path)
    elapsed = (time.perf_counter() - start) * 1000
    payload = {"command": "report", "csv": csv_path, "figures": figure_paths}
    lines = [f"wrote {csv_path}"] + [f"wrote {p}" for p in figure_paths]
    _emit(args, payload, lines, elapsed)
    return EXIT_OK


def _parse_roles(text: Optional[str]) -> Optional[Dict[str, int]]:
    if not text:
        return None
    roles = {}
    for part in text.split(","):
        key, _, val = part.partition("=")
        roles[key.strip()] = int(val)
    return roles


# ============================================================================
# Parser
# ============================================================================

def _add_common(p, *, budget=False, threads=False, seed=False, strict=False):
    p.add_argument("--report", choices=("text", "json"), default="text",
                   help="output rendering (json output carries no timing)")
    if budget:
        p.add_argument("--budget", type=int, default=None,
                       help="node budget for the search engine")
    if threads:
        p.add_argument("--threads", type=int, default=1,
                       help="top-level branch parallelism for exhaustive runs")
    if seed:
        p.add_argument("--seed", type=int, default=0, help="sampling seed")
    if strict:
        p.add_argument("--strict-classifier", type=_parse_bool, default=True,
                       help="classifier existence quantified over all columns "
                            "(true, default) or core columns only (false)")


def _parse_bool(text: str) -> bool:
    if text.lower() in ("true", "1", "yes"):
        return True
    if text.lower() in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magmakit",
        description="verification and search toolkit for finite two-pointed "
                    "extensional magmas")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-corpus", help="golden run over the frozen corpus")
    _add_common(p, strict=True)
    p.set_defaults(fn=cmd_verify_corpus)

    p = sub.add_parser("check", help="capability report for a table file")
    p.add_argument("file")
    _add_common(p, strict=True)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("decompose", help="zero/classifier/non-classifier partition")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("search", help="backtracking search from a spec file")
    p.add_argument("specfile")
    _add_common(p, budget=True, threads=True)
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("bounds", help="per-size scan certifying minimal sizes")
    p.add_argument("--require", required=True, help="comma-separated predicates")
    p.add_argument("--forbid", default="", help="comma-separated predicates")
    p.add_argument("--min", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--roles", default=None, help="pinned roles, e.g. s=2,r=3")
    _add_common(p, budget=True, threads=True)
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("iso", help="absorber-preserving isomorphisms between two tables")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--sample", type=int, default=0,
                   help="sample this many permutations instead of exhausting")
    _add_common(p, seed=True)
    p.set_defaults(fn=cmd_iso)

    p = sub.add_parser("encode", help="write the DIMACS encoding of a spec file")
    p.add_argument("specfile")
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_encode)

    p = sub.add_parser("derive-separation",
                       help="re-find the size-6 weakening separation table")
    p.add_argument("--out", default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_derive_separation)

    p = sub.add_parser("sweep", help="per-size satisfiability scan (long-running)")
    p.add_argument("--directions", default=None,
                   help=f"comma-separated from: {', '.join(DIRECTIONS)}")
    p.add_argument("--min", type=int, default=3)
    p.add_argument("--max", type=int, default=15)
    _add_common(p, budget=True, threads=True)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("report", help="corpus capability CSV plus figures")
    p.add_argument("--out-dir", default="reports")
    _add_common(p)
    p.set_defaults(fn=cmd_report)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ParseError, DomainError, json.JSONDecodeError, SpecInvalid,
            FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValidationError, MagmaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


def entry() -> None:
    sys.exit(main())
