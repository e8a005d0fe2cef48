"""The ``tmc`` command line.

Subcommands::

    tmc check FILE            evaluate every entity, grade models, check expectations
    tmc mirror FILE [NAME]    mirror model of a toric block
    tmc apply FILE NAME       run a pipeline, print the final model and derivation log
    tmc crit FILE [NAME]      critical-locus questions about one model
    tmc corpus [DIR]          run every .tmc file in DIR (default: the shipped corpus)

Exit codes: 0 success, 2 parse error, 3 semantic or engine error,
4 an expectation failed, 5 the Groebner budget ran out.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

from . import lgmodel as lg
from .algebra import DEFAULT_FORMAL_ORDER
from .crit import critical as cr
from .crit import numeric as nm
from .dsl import ast as A
from .dsl.semantics import Document, eval_poly
from .dsl.parser import parse_model_file, parse_expr
from .errors import ParseError, PipelineError, ResourceBudgetExceeded, SemanticError, TmcError

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SEMANTIC = 3
EXIT_EXPECT = 4
EXIT_BUDGET = 5


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, ResourceBudgetExceeded):
        return EXIT_BUDGET
    if isinstance(exc, PipelineError) and isinstance(exc.cause, ResourceBudgetExceeded):
        return EXIT_BUDGET
    return EXIT_SEMANTIC


def error_json(exc: BaseException) -> dict:
    out = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, PipelineError):
        out["cause"] = type(exc.cause).__name__
        out["step"] = exc.step
        if getattr(exc, "pipeline", None):
            out["pipeline"] = exc.pipeline
        out["log"] = exc.log.to_json()
    line = getattr(exc, "line", None)
    if line is not None:
        out["line"] = line
        out["col"] = getattr(exc, "col", 0)
    return out


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def _options(args) -> dict:
    return {
        "formal_order": args.formal_order,
        "absorb_units": args.absorb_units,
        "budget": args.budget,
        "trials": args.trials,
        "seed": args.seed,
    }


def _load(path: str, args) -> Document:
    text = Path(path).read_text(encoding="utf-8")
    return Document(parse_model_file(text), **_options(args))


def _pick(doc: Document, name: str | None, kinds=(A.ModelItem, A.ToricItem, A.PipelineItem)) -> str:
    if name is not None:
        return name
    for n, item in doc.items.items():
        if isinstance(item, kinds):
            return n
    raise SemanticError("the file defines nothing to act on")


def _grading_json(m: lg.LGModel) -> dict:
    g = lg.solve_grading(m)
    if g is None:
        return {"feasible": False}
    return {"feasible": True, "dof": g.dof, "weights": {n: str(w) for n, w in g.weights.items()}}


# subcommands


def check_document(doc: Document, numeric: bool = False) -> dict:
    entities = {}
    for name, ent in doc.evaluate_all().items():
        entities[name] = {"kind": ent.kind, "model": ent.model.snapshot(),
                          "grading": _grading_json(ent.model)}
    results = []
    for e in doc.expectations:
        r = doc.check(e).to_json()
        if numeric:
            x = doc.numeric_crosscheck(e)
            if x is not None:
                r["numeric"] = {"agrees": x[0], "detail": x[1]}
        results.append(r)
    passed = all(r["passed"] for r in results) and all(
        r.get("numeric", {}).get("agrees", True) for r in results)
    return {"entities": entities, "expectations": results, "passed": passed}


def cmd_check(args) -> tuple[int, object]:
    doc = _load(args.file, args)
    out = check_document(doc, args.numeric)
    code = EXIT_OK if out["passed"] else EXIT_EXPECT
    if not args.json:
        lines = []
        for r in out["expectations"]:
            status = "PASS" if r["passed"] else "FAIL"
            extra = ""
            if "numeric" in r:
                extra = "  numeric " + ("agrees" if r["numeric"]["agrees"] else "DISAGREES")
            lines.append(f"{status}  line {r['line']:<4} {r['kind']} {r['subject'] or ''}  [{r['detail']}]{extra}")
        for name, ent in out["entities"].items():
            g = ent["grading"]
            desc = (", ".join(f"{n}={w}" for n, w in g["weights"].items()) + f" (dof {g['dof']})"
                    if g["feasible"] else "no grading")
            lines.append(f"{ent['kind']} {name}: W = {ent['model']['potential']}; {desc}")
        n = len(out["expectations"])
        k = sum(r["passed"] for r in out["expectations"])
        lines.append(f"{k}/{n} expectations pass")
        out = "\n".join(lines)
    return code, out


def cmd_mirror(args) -> tuple[int, object]:
    doc = _load(args.file, args)
    name = _pick(doc, args.name, (A.ToricItem,))
    if not isinstance(doc.items.get(name), A.ToricItem):
        raise SemanticError(f"no toric block named {name!r}")
    ent = doc.entity(name)
    out = {"name": name, "model": ent.model.snapshot(), "grading": _grading_json(ent.model)}
    if ent.primal is not None:
        out["primal"] = ent.primal.snapshot()
        out["pairing"] = ent.pairing
    if not args.json:
        out = _model_text(name, ent.model)
    return EXIT_OK, out


def cmd_apply(args) -> tuple[int, object]:
    doc = _load(args.file, args)
    item = doc.items.get(args.name)
    if not isinstance(item, A.PipelineItem):
        raise SemanticError(f"no pipeline named {args.name!r}")
    ent = doc.entity(args.name)
    out = {"name": args.name, "model": ent.model.snapshot(), "log": ent.log.to_json()}
    if ent.primal is not None:
        out["primal"] = ent.primal.snapshot()
    if not args.json:
        lines = [f"pipeline {args.name} on {item.source}"]
        for e in ent.log.entries:
            lines.append(f"  {e.index}: {e.step.op:<15} W = {e.model.potential}"
                         + (f"   ({e.note})" if e.note else ""))
        lines.append(_model_text(args.name, ent.model))
        out = "\n".join(lines)
    return EXIT_OK, out


def cmd_crit(args) -> tuple[int, object]:
    doc = _load(args.file, args)
    name = _pick(doc, args.name)
    m = doc.model(name)
    over = tuple(args.over.replace(",", " ").split()) if args.over else ()
    code = EXIT_OK
    if args.values:
        report = cr.critical_values(m, tuple(args.values.replace(",", " ").split()), args.budget)
    elif args.contained_in is not None:
        g = eval_poly(parse_expr(args.contained_in), m.vars)
        report = cr.crit_contained_in(m, g, over, args.budget)
        if report.result != cr.CONTAINED:
            code = EXIT_EXPECT
    else:
        report = cr.is_crit_empty(m, over, args.budget)
    out = {"name": name, "model": m.snapshot(), "report": report.to_json()}
    if args.numeric:
        pts = nm.numeric_crit_search(m, trials=args.trials, seed=args.seed)
        out["numeric"] = {
            "points": [{k: _complex_json(v) for k, v in p.items()} for p in pts],
            "hessian_det_abs": [round(abs(nm.hessian_det(m, p)), 9) for p in pts],
        }
    if not args.json:
        r = report
        text = f"{name}: {r.result}"
        if r.classification:
            text += f" {r.classification} " + ", ".join(p.canonical() for p in r.polys)
        text += f"  ({r.spolys} S-polynomials)"
        if args.numeric:
            text += f"\nnumeric oracle: {len(out['numeric']['points'])} critical points"
        out = text
    return code, out


def _complex_json(z: complex) -> list[float]:
    return [round(z.real, 9) + 0.0, round(z.imag, 9) + 0.0]


def _model_text(name: str, m: lg.LGModel) -> str:
    lines = [f"model {name}",
             "  vars: " + ", ".join(f"{v.name}: {v.spec}" for v in m.vars),
             f"  potential: {m.potential.canonical()}"]
    for n, s in m.sigmas:
        lines.append(f"  sigma {n} = {s.canonical()}")
    for c in m.constraints:
        lines.append(f"  constraint {c.canonical()}")
    return "\n".join(lines)


# corpus


def corpus_dir() -> Path:
    return Path(str(resources.files("toricmirror") / "corpus"))


def run_file(path: str, options: dict, numeric: bool = False) -> dict:
    """Check one file; never raises."""
    row = {"file": os.path.basename(path)}
    try:
        doc = Document(parse_model_file(Path(path).read_text(encoding="utf-8")), **options)
        res = check_document(doc, numeric)
        row["expectations"] = res["expectations"]
        row["total"] = len(res["expectations"])
        row["passed"] = sum(r["passed"] for r in res["expectations"])
        row["status"] = "pass" if res["passed"] else "fail"
        row["code"] = EXIT_OK if res["passed"] else EXIT_EXPECT
    except TmcError as exc:
        row.update(status="error", code=exit_code_for(exc), error=error_json(exc), total=0, passed=0)
        row["error"].pop("log", None)
    return row


def cmd_corpus(args) -> tuple[int, object]:
    root = Path(args.dir) if args.dir else corpus_dir()
    if not root.is_dir():
        raise SemanticError(f"{root} is not a directory")
    files = sorted(str(p) for p in root.glob("*.tmc"))
    options = _options(args)
    jobs = args.jobs or min(4, os.cpu_count() or 1)
    if jobs > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(run_file, files, [options] * len(files), [args.numeric] * len(files)))
    else:
        rows = [run_file(f, options, args.numeric) for f in files]
    code = max((r["code"] for r in rows), default=EXIT_OK)
    out = {"files": rows, "passed": code == EXIT_OK,
           "cases": sum(r["total"] for r in rows)}
    if not args.json:
        width = max((len(r["file"]) for r in rows), default=4)
        lines = []
        for r in rows:
            if r["status"] == "error":
                lines.append(f"{r['file']:<{width}}  ERROR  {r['error']['error']}: {r['error']['message']}")
                continue
            lines.append(f"{r['file']:<{width}}  {r['status'].upper():<5}  {r['passed']}/{r['total']}")
            for e in r["expectations"]:
                if not e["passed"] or not e.get("numeric", {}).get("agrees", True):
                    lines.append(f"    line {e['line']}: {e['kind']} {e['subject'] or ''} [{e['detail']}]")
        lines.append(f"{len(rows)} files, {out['cases']} cases, " + ("all pass" if out["passed"] else "FAILURES"))
        out = "\n".join(lines)
    return code, out


# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--absorb-units", action="store_true",
                        help="strip torus monomial factors of W after every pipeline step")
    common.add_argument("--formal-order", type=int, default=DEFAULT_FORMAL_ORDER,
                        help="truncation order for formal variables without an explicit order")
    common.add_argument("--budget", type=int, default=None,
                        help="maximum S-polynomials per Groebner run (default: $TMC_BUDGET or 100000)")
    common.add_argument("--trials", type=int, default=nm.DEFAULT_TRIALS,
                        help="numeric oracle start points")
    common.add_argument("--seed", type=int, default=0, help="numeric oracle seed")

    p = argparse.ArgumentParser(prog="tmc", description="Toric mirror calculus")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="check a .tmc file")
    s.add_argument("file")
    s.add_argument("--numeric", action="store_true", help="cross-check crit verdicts numerically")
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("mirror", parents=[common], help="mirror model of a toric block")
    s.add_argument("file")
    s.add_argument("name", nargs="?")
    s.set_defaults(run=cmd_mirror)

    s = sub.add_parser("apply", parents=[common], help="run a pipeline")
    s.add_argument("file")
    s.add_argument("name")
    s.set_defaults(run=cmd_apply)

    s = sub.add_parser("crit", parents=[common], help="critical-locus analysis")
    s.add_argument("file")
    s.add_argument("name", nargs="?")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--empty", action="store_true", help="decide whether Crit(W) is empty (default)")
    g.add_argument("--contained-in", metavar="EXPR", help="decide whether EXPR vanishes on Crit(W)")
    g.add_argument("--values", metavar="VARS", help="critical values over these torus variables")
    s.add_argument("--over", metavar="VARS", help="treat these variables as parameters")
    s.add_argument("--numeric", action="store_true", help="also run the numeric oracle")
    s.set_defaults(run=cmd_crit)

    s = sub.add_parser("corpus", parents=[common], help="run a directory of .tmc files")
    s.add_argument("dir", nargs="?")
    s.add_argument("--jobs", type=int, default=None, help="worker processes")
    s.add_argument("--numeric", action="store_true", help="cross-check crit verdicts numerically")
    s.set_defaults(run=cmd_corpus)
    return p


def run_command(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        code, out = args.run(args)
    except TmcError as exc:
        code = exit_code_for(exc)
        if args.json:
            print(dumps(error_json(exc)), file=stdout)
        else:
            print(f"tmc: {type(exc).__name__}: {exc}", file=stderr)
        return code
    except OSError as exc:
        print(f"tmc: {exc}", file=stderr)
        return EXIT_SEMANTIC
    print(dumps(out) if args.json else out, file=stdout)
    return code


def main(argv=None) -> None:
    sys.exit(run_command(argv))


if __name__ == "__main__":
    main()
