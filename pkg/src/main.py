"""
Main entry point for the circle-graph / isotropic-matroid toolkit.

Subcommands:
  recognize <graph>            Naji-system recognition, optional obstruction and realization
  signed-ias <dow>             signed IAS matrix, unimodularity sweep, 3-circuits, shelter check
  paper-example                reproduce the worked examples against embedded golden data (alias: worked-example)
  multimatroid <action> [file] classify / refute / h33 / s1 / z2 / z3 / planar

Exit codes: 0 circle (or success), 1 not circle, 2 inconclusive or bound
exceeded, 3 parse or domain error, 4 internal consistency failure.
"""

import argparse
import hashlib
import os
import sys
import time
from pathlib import Path
from typing import Any, Optional

# Add src to path for imports
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from config import config
from errors import CircleMatroidError, DomainError, exit_code_for
from logging_config import get_logger, initialize_logging
from models import (
    CircuitListModel,
    MatrixReport,
    MultimatroidReport,
    NajiReport,
    ObstructionReport,
    RunReport,
    ShelterReport,
    SignedIASReport,
    VerdictReport,
)
from telemetry.run_summary import run_summary


def _digest(*paths: Optional[str]) -> Optional[str]:
    h = hashlib.sha256()
    seen = False
    for p in paths:
        if p and Path(p).is_file():
            h.update(Path(p).read_bytes())
            seen = True
    return h.hexdigest()[:16] if seen else None


def _field(args):
    from exactalg import FieldSpec

    return FieldSpec.parse(args.field or config.DEFAULT_FIELD)


# ----------------------------------------------------------------------
# recognize
# ----------------------------------------------------------------------

def cmd_recognize(args, logger) -> RunReport:
    from formats import read_graph
    from recognize import find_obstruction, is_circle, realize

    g = read_graph(args.path)
    logger.info(f"Recognizing {g.n}-vertex graph from {args.path}")
    verdict = is_circle(g)
    system = verdict.system
    naji = NajiReport(
        variables=len(system.variables),
        equations=len(system.equations),
        solution={f"{v},{w}": int(x) for (v, w), x in verdict.solution.items()} if verdict.solution else None,
        certificate=[str(eq) for eq in verdict.certificate],
    )
    report = VerdictReport(circle=verdict.circle, naji=naji)

    if args.obstruction:
        found = find_obstruction(g, args.budget)
        report.obstruction = ObstructionReport(
            name=found.name,
            moves=[f"{m.kind}:{m.vertex}" for m in found.witness.moves] if found.witness else [],
            deleted=sorted(map(str, found.witness.deleted)) if found.witness else [],
            iso={str(k): str(v) for k, v in found.witness.isomorphism.items()} if found.witness else {},
            complete=found.complete,
        )
        if not verdict.circle and not found.found and not found.complete:
            report.inconclusive = True
        if found.found and verdict.circle:
            logger.error("obstruction found in a graph the Naji system accepts")
    if args.realize and verdict.circle:
        report.realization = realize(g)

    exit_code = 2 if report.inconclusive else (0 if verdict.circle else 1)
    return RunReport(command="recognize", inputs_digest=_digest(args.path),
                     verdicts={"circle": verdict.circle}, payload=report.model_dump(),
                     exit_code=exit_code)


# ----------------------------------------------------------------------
# signed-ias
# ----------------------------------------------------------------------

def cmd_signed_ias(args, logger) -> RunReport:
    from formats import read_dow
    from fourreg import fundamental_circuits, interlacement, parse_dow
    from isotropic import shelter_check
    from signedias import signed_ias, three_circuits, transversal_determinants

    field = _field(args)
    words = read_dow(args.path)
    _, c = parse_dow(words)
    warnings = []
    if args.unbased:
        gamma = fundamental_circuits(c)
        if args.require_unimodular:
            warnings.append("fundamental circuits are not based; transverse unimodularity is not guaranteed")
    else:
        base = args.base or [circuit[-1][0] for circuit in c.circuits]
        gamma = fundamental_circuits(c, base=base)
    s = signed_ias(c, gamma)
    for w in warnings:
        logger.warning(w)

    report = SignedIASReport(
        words=c.words(),
        signed_words=[c.signed_word(gamma, ci) for ci in range(len(c.circuits))],
        base=[c.graph.edge_name(e) for e in sorted(gamma.base)] if gamma.base else None,
        matrix=MatrixReport.from_matrix(s.matrix),
        column_labels=s.column_labels(),
        warnings=warnings,
    )
    n = len(s.vertices)
    if n <= config.TRANSVERSAL_SWEEP_BOUND:
        sweep = transversal_determinants(s)
        report.unimodular = sweep.transversely_unimodular
        report.worst_determinant = int(sweep.worst)
        report.determinants_checked = len(sweep.determinants)
    else:
        report.warnings.append(f"determinant sweep skipped above {config.TRANSVERSAL_SWEEP_BOUND} vertices")
    if n <= config.THREE_CIRCUIT_BOUND:
        report.three_circuits = [sorted(map(str, t)) for t in three_circuits(s, field)]
    if n <= config.SHELTER_VERTEX_BOUND:
        result = shelter_check(s.matrix.over(field), interlacement(c), 3, strict=s.based)
        report.shelters = ShelterReport.from_result(field.name, result)

    verdicts = {"unimodular": report.unimodular,
                "shelters": report.shelters.verdict if report.shelters else None}
    return RunReport(command="signed-ias", inputs_digest=_digest(args.path), verdicts=verdicts,
                     payload=report.model_dump(), exit_code=0)


# ----------------------------------------------------------------------
# paper-example
# ----------------------------------------------------------------------

def cmd_paper_example(args, logger) -> RunReport:
    from worked_example import run_checks

    field = _field(args) if args.field else None
    checks = run_checks(field)
    failed = [c for c in checks if not c.passed]
    logger.info(f"Worked example: {len(checks) - len(failed)}/{len(checks)} checks passed")
    return RunReport(command="paper-example",
                     verdicts={"all_passed": not failed, "checks": len(checks)},
                     payload={"checks": [c.model_dump() for c in checks],
                              "mismatches": [c.model_dump() for c in failed]},
                     exit_code=0 if not failed else 4)


# ----------------------------------------------------------------------
# multimatroid
# ----------------------------------------------------------------------

def cmd_multimatroid(args, logger) -> RunReport:
    from formats import read_circuit_list, read_matroid
    from multimatroid import binary_refutation, classify, fundamental_graph, h33, s1, z2_of_matroid, z3_of_matroid
    from recognize import is_circle, matroid_is_planar

    action = args.action
    needs_file = action in ("classify", "refute", "z2", "z3", "planar")
    if needs_file and not args.path:
        raise DomainError(f"multimatroid {action} needs a file argument")

    if action in ("classify", "refute", "h33", "s1"):
        z = {"h33": h33, "s1": s1}.get(action, lambda: read_circuit_list(args.path))()
        report = MultimatroidReport(name=z.name, order=z.order,
                                    circuits=CircuitListModel.model_validate(z.to_circuit_list()))
        if action != "refute":
            report.classification = classify(z).value
        report.binary_refutation = binary_refutation(z)
    else:
        m = read_matroid(args.path)
        g = fundamental_graph(m)
        edges = [[str(a), str(b)] for a, b in g.edges()]
        if action == "planar":
            report = MultimatroidReport(name="M", order=len(m.elements), planar=matroid_is_planar(m),
                                        fundamental_graph_edges=edges)
        elif action == "z2":
            z = z2_of_matroid(m)
            report = MultimatroidReport(name=z.name, order=z.order, classification=classify(z).value,
                                        fundamental_graph_edges=edges)
        else:
            z = z3_of_matroid(m)
            report = MultimatroidReport(name=z.name, order=z.order, fundamental_graph_edges=edges)
            if args.naji:
                report.regular = is_circle(g).circle
    verdicts = {k: v for k, v in report.model_dump().items()
                if k in ("classification", "binary_refutation", "planar", "regular") and v is not None}
    return RunReport(command=f"multimatroid {action}", inputs_digest=_digest(args.path),
                     verdicts=verdicts, payload=report.model_dump(), exit_code=0)


# ----------------------------------------------------------------------
# Output and dispatch
# ----------------------------------------------------------------------

def _print_human(report: RunReport) -> None:
    status = "✅" if report.exit_code == 0 else ("⚠️" if report.exit_code == 2 else "❌")
    print(f"{status} {report.command}")
    for key, value in report.verdicts.items():
        print(f"  {key}: {value}")
    payload = report.payload
    if "matrix" in payload:
        m = payload["matrix"]
        width = max(len(str(x)) for row in m["entries"] for x in row) if m["entries"] else 1
        print("  " + " ".join(m["cols"]))
        for label, row in zip(m["rows"], m["entries"]):
            print(f"  {label}: " + " ".join(str(x).rjust(width) for x in row))
    for check in payload.get("mismatches", []):
        print(f"  mismatch {check['name']}: expected {check['expected']}, got {check['actual']}")
    for warning in payload.get("warnings", []):
        print(f"  warning: {warning}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Circle graphs, isotropic matroids and multimatroids",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--field", help="gf2 | gf3 | gf5 | gf<p> | rational")
    parser.add_argument("--budget", type=int, help="state budget for orbit / vertex-minor searches")
    parser.add_argument("--json", action="store_true", help="print the machine-readable report")
    parser.add_argument("--no-timing", action="store_true", help="omit timings from the report")
    parser.add_argument("--log-level", default=config.LOG_LEVEL)
    parser.add_argument("--no-log-files", action="store_true", help="log to stderr only")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("recognize", help="decide whether a graph is a circle graph")
    p.add_argument("path")
    p.add_argument("--obstruction", action="store_true", help="search for W5 / BW3 / W7 vertex-minors")
    p.add_argument("--realize", action="store_true", help="find double occurrence words (n <= 6)")

    p = sub.add_parser("signed-ias", help="signed IAS of an Euler system")
    p.add_argument("path")
    p.add_argument("--base", action="append", help="base edge (repeat once per component)")
    p.add_argument("--unbased", action="store_true", help="use first-occurrence fundamental circuits")
    p.add_argument("--require-unimodular", action="store_true")

    sub.add_parser("paper-example", aliases=["worked-example"], help="reproduce the worked examples")

    p = sub.add_parser("multimatroid", help="multimatroid constructions and verdicts")
    p.add_argument("action", choices=["classify", "refute", "h33", "s1", "z2", "z3", "planar"])
    p.add_argument("path", nargs="?")
    p.add_argument("--naji", action="store_true", help="report regularity of Z3 through the Naji system")
    return parser


COMMANDS = {
    "recognize": cmd_recognize,
    "signed-ias": cmd_signed_ias,
    "paper-example": cmd_paper_example,
    "worked-example": cmd_paper_example,
    "multimatroid": cmd_multimatroid,
}


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    initialize_logging(logs_dir=config.LOGS_DIR, enable_logfire=config.ENABLE_LOGFIRE,
                       send_to_logfire=config.SEND_TO_LOGFIRE, console_level=args.log_level,
                       write_files=not args.no_log_files)
    system_logger = get_logger("main")
    run_summary.reset()

    start = time.perf_counter()
    try:
        report = COMMANDS[args.command](args, system_logger)
    except CircleMatroidError as e:
        run_summary.add_error(e.message)
        system_logger.error(f"{args.command} failed: {e}")
        code = exit_code_for(e)
        report = RunReport(command=args.command, payload={"error": e.to_dict()}, exit_code=code)
        if not args.json:
            print(f"❌ {e}", file=sys.stderr)
            run_summary.emit({"command": args.command, "exit_code": code})
            return code

    report.bounds = config.get_bounds()
    if not args.no_timing:
        report.timings = {"total_seconds": round(time.perf_counter() - start, 4)}
    run_summary.emit({"command": args.command, "exit_code": report.exit_code})

    if args.json:
        print(report.model_dump_json(indent=2))
    else:
        _print_human(report)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
