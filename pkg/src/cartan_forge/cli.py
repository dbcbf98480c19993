"""Command-line surface: catalog listing, builds, superdimensions, odd
reflections, and the golden-data verification harness.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 build limit
exceeded.  On failure the first stderr line is ``error: <code>: <message>``.

``verify`` writes a deterministic JSON artifact (no timings) to stdout and
human-readable progress lines (with wall-times) to stderr, so repeated runs
produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from .analysis import RootReport, compare, root_report
from .builder import BuildLimitError, build
from .catalog import CatalogError, CartanSpec, builtin, builtin_specs, instantiate, parse_catalog
from .field import FieldError
from .reflection import (
    ReflectionError,
    canonical_form,
    enumerate_bases,
    initial_state,
    odd_reflect,
)


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _fail(code: int, message: str) -> int:
    print(f"error: {code}: {message}", file=sys.stderr)
    return code


def _spec_from_args(args) -> CartanSpec:
    if getattr(args, "file", None):
        try:
            text = open(args.file, encoding="utf-8").read()
        except OSError as exc:
            raise CliError(2, f"cannot read {args.file}: {exc}") from None
        import os
        specs = parse_catalog(text, base_path=os.path.dirname(os.path.abspath(args.file)))
        if args.name:
            hits = [s for s in specs if s.name == args.name]
            if not hits:
                raise CliError(2, f"no entry {args.name!r} in {args.file}")
            return hits[0]
        if len(specs) != 1:
            raise CliError(2, f"{args.file} has {len(specs)} entries; pass NAME to choose one")
        return specs[0]
    if not args.name:
        raise CliError(2, "a catalog NAME or --file is required")
    return builtin(args.name)


def _bindings(params: list[str]) -> dict:
    out = {}
    for item in params or []:
        sym, eq, val = item.partition("=")
        if not eq:
            raise CliError(2, f"--param expects sym=value, got {item!r}")
        out[sym.strip()] = val.strip()
    return out


def _report(spec: CartanSpec, bindings: dict, max_height: int) -> RootReport:
    cc = instantiate(spec, bindings)
    model = build(cc, max_height=max_height)
    return root_report(model)


# -- emitters ----------------------------------------------------------------


def emit_json(report: RootReport) -> str:
    return json.dumps(report.to_json_dict(), indent=2, sort_keys=False) + "\n"


def emit_csv(report: RootReport) -> str:
    lines = [f"# k1..k{report.n},parity,isotropic"]
    for e in report.entries:
        lines.append(",".join(str(v) for v in (*e.weight, e.parity, e.isotropic)))
    return "\n".join(lines) + "\n"


def _latex_root(weight) -> str:
    terms = []
    for i, k in enumerate(weight, 1):
        if k == 0:
            continue
        coef = "" if k == 1 else str(k)
        terms.append(f"{coef}\\alpha_{{{i}}}")
    return "+".join(terms) or "0"


def emit_latex(report: RootReport) -> str:
    """Two-column table: vectors | roots, one row per height, odd vectors
    framed and isotropic roots underlined."""
    out = ["\\begin{tabular}{|l|l|}", "\\hline", "vectors&roots\\\\", "\\hline"]
    by_height: dict[int, list] = {}
    for e in report.entries:
        by_height.setdefault(e.height, []).append(e)
    idx = 0
    for h in sorted(by_height):
        vecs, roots = [], []
        for e in by_height[h]:
            idx += 1
            vec = f"x_{{{idx}}}"
            if e.parity == 1:
                vec = f"\\fbox{{${vec}$}}"
            else:
                vec = f"${vec}$"
            root = _latex_root(e.weight)
            root = f"$\\underline{{{root}}}$" if e.isotropic else f"${root}$"
            vecs.append(vec)
            roots.append(root)
        out.append(", ".join(vecs) + "&" + ", ".join(roots) + "\\\\")
        out.append("\\hline")
    out.append("\\end{tabular}")
    return "\n".join(out) + "\n"


EMITTERS = {"json": emit_json, "csv": emit_csv, "latex": emit_latex}


# -- subcommands -------------------------------------------------------------


def cmd_list(args) -> int:
    for s in builtin_specs():
        print(f"{s.name}\t{s.source}")
    return 0


def cmd_build(args) -> int:
    spec = _spec_from_args(args)
    report = _report(spec, _bindings(args.param), args.max_height)
    text = EMITTERS[args.emit](report)
    if args.out:
        open(args.out, "w", encoding="utf-8").write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_sdim(args) -> int:
    spec = _spec_from_args(args)
    report = _report(spec, _bindings(args.param), args.max_height)
    e, o = report.sdim
    if report.derived is not None:
        print(f"{e}/{report.derived[0]}|{o}")
    else:
        print(f"{e}|{o}")
    return 0


def cmd_reflect(args) -> int:
    spec = _spec_from_args(args)
    cc = instantiate(spec, _bindings(args.param))
    if args.enumerate:
        graph = enumerate_bases(cc, limit=args.limit)
        if args.emit == "dot":
            sys.stdout.write(graph.to_dot() + "\n")
        else:
            sys.stdout.write(json.dumps(graph.to_json_dict(), indent=2) + "\n")
        return 0
    chain = []
    if args.chain:
        try:
            chain = [int(t) for t in args.chain.split(",") if t.strip() != ""]
        except ValueError:
            raise CliError(2, f"--chain expects comma-separated indices, got {args.chain!r}")
    state = initial_state(cc)
    for i in chain:
        if not 0 <= i < cc.n:
            raise CliError(2, f"reflection index {i} out of range for n={cc.n}")
        model = build(state.cartan)
        state = odd_reflect(state, model, i)
    F = state.cartan.field
    doc = {
        "name": spec.name,
        "chain": list(state.chain),
        "matrix": [[F.fmt(int(state.cartan.A[i, j])) for j in range(cc.n)]
                   for i in range(cc.n)],
        "parities": list(state.cartan.parities),
        "simple_roots": [list(w) for w in state.simple_roots],
        "canonical_key": list(canonical_form(state.cartan)),
    }
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return 0


def _verify_one(spec: CartanSpec):
    if spec.source == "external":
        return {"name": spec.name, "status": "skipped-external", "summary": ""}, 0.0
    t0 = time.perf_counter()
    try:
        report = _report(spec, {}, 64)
    except (BuildLimitError, CatalogError, FieldError) as exc:
        return ({"name": spec.name, "status": "fail", "summary": str(exc)},
                time.perf_counter() - t0)
    if spec.expected is None:
        return ({"name": spec.name, "status": "pass", "summary": "no golden data"},
                time.perf_counter() - t0)
    diff = compare(report, spec.expected)
    status = "pass" if diff.empty else "fail"
    return ({"name": spec.name, "status": status, "summary": diff.summary()},
            time.perf_counter() - t0)


def cmd_verify(args) -> int:
    if not args.all and not args.name:
        raise CliError(2, "verify needs a NAME or --all")
    if args.all:
        specs = builtin_specs()
    else:
        specs = [builtin(args.name)]
    jobs = max(1, args.jobs)
    if jobs == 1:
        results = [_verify_one(s) for s in specs]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_verify_one, specs))
    entries = []
    for (entry, dt), spec in zip(results, specs):
        entries.append(entry)
        print(f"{entry['name']:16s} {entry['status']:16s} {entry['summary']} "
              f"({dt:.2f}s)", file=sys.stderr)
    n_pass = sum(1 for e in entries if e["status"] == "pass")
    n_fail = sum(1 for e in entries if e["status"] == "fail")
    doc = {"entries": entries, "passed": n_pass, "failed": n_fail,
           "skipped": len(entries) - n_pass - n_fail}
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    if n_fail:
        raise CliError(1, f"{n_fail} entr{'y' if n_fail == 1 else 'ies'} failed verification")
    return 0


# -- argument parsing --------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(2, message)


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cartan-forge",
                description="Exact contragredient (super)algebra constructions "
                            "over small finite fields.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="catalog names and source tags")

    def add_spec_args(sp, with_build=True):
        sp.add_argument("name", nargs="?", default=None, metavar="NAME")
        sp.add_argument("--file", default=None, help="read the entry from a catalog file")
        sp.add_argument("--param", action="append", default=[],
                        metavar="SYM=VAL", help="bind a matrix parameter")
        if with_build:
            sp.add_argument("--max-height", type=int, default=64)

    b = sub.add_parser("build", help="construct the algebra and emit its root report")
    add_spec_args(b)
    b.add_argument("--emit", choices=sorted(EMITTERS), default="json")
    b.add_argument("--out", default=None, help="write output to a file")

    s = sub.add_parser("sdim", help="print the superdimension")
    add_spec_args(s)

    r = sub.add_parser("reflect", help="apply odd reflections or enumerate bases")
    add_spec_args(r, with_build=False)
    r.add_argument("--chain", default=None, metavar="I,J,...")
    r.add_argument("--enumerate", action="store_true")
    r.add_argument("--limit", type=int, default=512)
    r.add_argument("--emit", choices=["json", "dot"], default="json")

    v = sub.add_parser("verify", help="check catalog entries against golden data")
    v.add_argument("name", nargs="?", default=None, metavar="NAME")
    v.add_argument("--all", action="store_true")
    v.add_argument("--jobs", type=int, default=1)
    return p


COMMANDS = {
    "list": cmd_list,
    "build": cmd_build,
    "sdim": cmd_sdim,
    "reflect": cmd_reflect,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except CliError as exc:
        return _fail(exc.code, str(exc))
    except BuildLimitError as exc:
        return _fail(3, str(exc))
    except (CatalogError, FieldError, ReflectionError) as exc:
        return _fail(2, str(exc))


if __name__ == "__main__":
    sys.exit(main())
