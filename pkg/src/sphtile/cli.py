"""Command line entry point: ``sphtile <command> ...``.

Exit codes: 0 success, 2 verification failure, 3 domain error, 4 node cap
exceeded. Errors are written to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

from . import classifier, embedding
from .catalog import FamilyId, build
from .combinatorics import TOL_VERTEX, enumerate_vertices
from .errors import BudgetExceeded, ClosureFailure, DomainError, SphtileError
from .geometry import FAMILY_SYSTEMS, TOL_EQ5, CUBE_GAMMA, AngleSet, earth_map_angles, solve_vertex_system
from .tiling import TOL_AREA, Tiling, canonical_code, stats, verify

EXIT_OK, EXIT_VERIFY, EXIT_DOMAIN, EXIT_BUDGET = 0, 2, 3, 4

CASES = {"beta3": "quad_subdivision", "fusion": "fusion", "sporadic": "sporadic", "cube": "cube"}


class _Usage(DomainError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def case_angles(case: str, tol_eq5: float = TOL_EQ5) -> AngleSet:
    """Angles for ``beta3``, ``fusion``, ``sporadic``, ``cube`` or ``earth-map:<c>``."""
    if case.startswith("earth-map:"):
        try:
            c = int(case.split(":", 1)[1])
        except ValueError:
            raise DomainError(f"bad earth map case {case!r}") from None
        return earth_map_angles(c)
    if case not in CASES:
        raise DomainError(f"unknown case {case!r}; choose from {sorted(CASES)} or earth-map:<c>")
    sol = solve_vertex_system(FAMILY_SYSTEMS[CASES[case]], tol_eq5)
    if sol.is_empty:
        raise DomainError(f"no admissible angles for case {case!r}")
    if sol.kind == "curve":
        return sol.parameterization.sample(CUBE_GAMMA)[0]
    return sol.point


def _tolerance(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerances must be positive")
    return v


def _positive(text: str) -> int:
    v = int(float(text))
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _parser() -> argparse.ArgumentParser:
    tol = argparse.ArgumentParser(add_help=False)
    g = tol.add_argument_group("tolerances")
    g.add_argument("--tol-vertex", type=_tolerance, default=TOL_VERTEX)
    g.add_argument("--tol-eq5", type=_tolerance, default=TOL_EQ5)
    g.add_argument("--tol-area", type=_tolerance, default=TOL_AREA)
    g.add_argument("--tol-embed", type=_tolerance, default=embedding.TOL_EMBED)

    p = _Parser(prog="sphtile", description="Dihedral square/rhombus tilings of the sphere.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("angles", parents=[tol], help="solve the angles of a case")
    s.add_argument("--case", required=True)

    s = sub.add_parser("avc", parents=[tol], help="admissible vertex types at a case's angles")
    s.add_argument("--case", required=True)
    s.add_argument("--max-degree", type=int, default=None)

    s = sub.add_parser("build", parents=[tol], help="write a catalog tiling as JSON")
    s.add_argument("family")
    s.add_argument("--out", type=Path)

    s = sub.add_parser("verify", parents=[tol], help="check a tiling file against a case's angles")
    s.add_argument("tiling", type=Path)
    s.add_argument("--angles", required=True)

    s = sub.add_parser("classify", parents=[tol], help="find every tiling with at most N tiles")
    s.add_argument("--max-f", type=int, required=True)
    s.add_argument("--jobs", type=_positive, default=1)
    s.add_argument("--node-cap", type=_positive, default=None)
    s.add_argument("--report", type=Path, default=Path("sphtile-report.json"))
    s.add_argument("--out-dir", type=Path, default=None, help="also write each tiling as JSON")

    s = sub.add_parser("render", parents=[tol], help="draw a tiling as SVG (and optionally OFF)")
    s.add_argument("tiling", type=Path)
    s.add_argument("--angles", required=True)
    s.add_argument("--svg", type=Path, required=True)
    s.add_argument("--off", type=Path)
    s.add_argument("--pole", help="projection pole as x,y,z")

    s = sub.add_parser("plot-c", parents=[tol], help="tabulate c(gamma) as CSV")
    s.add_argument("--from", dest="gfrom", type=float, default=0.005)
    s.add_argument("--to", dest="gto", type=float, default=0.4995)
    s.add_argument("--steps", type=int, default=1000)
    s.add_argument("--csv", type=Path, required=True)
    return p


def _header(args) -> str:
    return (f"# sphtile {args.command}  tol_vertex={args.tol_vertex:g} tol_eq5={args.tol_eq5:g} "
            f"tol_area={args.tol_area:g} tol_embed={args.tol_embed:g}")


def _load(path: Path) -> Tiling:
    try:
        text = path.read_text()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return Tiling.from_json(text)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise DomainError(f"{path} is not a tiling file: {exc}") from None


def code_digest(t: Tiling) -> str:
    return hashlib.sha256(canonical_code(t)).hexdigest()


def _cmd_angles(args, out) -> int:
    a = case_angles(args.case, args.tol_eq5)
    print(f"case {args.case}", file=out)
    for k, v in a.in_pi(6).items():
        print(f"{k} = {v}", file=out)
    return EXIT_OK


def _cmd_avc(args, out) -> int:
    a = case_angles(args.case, args.tol_eq5)
    avc = enumerate_vertices(a, max_degree=args.max_degree, tol_vertex=args.tol_vertex)
    print(f"case {args.case}", file=out)
    print(str(avc), file=out)
    for v in avc:
        print(f"{v}", file=out)
    return EXIT_OK


def _cmd_build(args, out) -> int:
    t = build(FamilyId.parse(args.family))
    text = t.to_json()
    if args.out:
        args.out.write_text(text + "\n")
        st = stats(t)
        print(f"wrote {args.out}: {t.name} f={st.f} squares={st.n_square} rhombi={st.n_rhombus}", file=out)
    else:
        print(text, file=out)
    return EXIT_OK


def _cmd_verify(args, out) -> int:
    t = _load(args.tiling)
    a = case_angles(args.angles, args.tol_eq5)
    rep = verify(t, a, tol_vertex=args.tol_vertex, tol_area=args.tol_area)
    print(str(rep), file=out)
    print("verification " + ("passed" if rep.passed else "FAILED: " + ", ".join(rep.failed())), file=out)
    return EXIT_OK if rep.passed else EXIT_VERIFY


def _cmd_classify(args, out) -> int:
    if args.max_f < 6:
        raise DomainError("--max-f must be >= 6")
    report = classifier.RunReport()
    try:
        found = classifier.classify_all(args.max_f, jobs=args.jobs, node_cap=args.node_cap, report=report,
                                        tol_vertex=args.tol_vertex)
    except BudgetExceeded as exc:
        rep = exc.report or report
        args.report.write_text(json.dumps(rep.to_dict(), indent=1) + "\n")
        raise
    print(f"{len(found)} tilings with f <= {args.max_f}", file=out)
    for n, (case, t) in enumerate(found):
        st = stats(t)
        name = classifier.identify(t) or "-"
        avc = ",".join(v.pretty for v in sorted(set(t.vertex_types())))
        print(f"{n:2d}  {name:<16} f={st.f:<3d} S={st.n_square:<2d} R={st.n_rhombus:<2d} "
              f"{{{avc}}}  code={code_digest(t)}", file=out)
        if args.out_dir:
            args.out_dir.mkdir(parents=True, exist_ok=True)
            (args.out_dir / f"tiling-{n:02d}.json").write_text(t.to_json() + "\n")
    data = report.to_dict()
    data["tilings"] = [{"index": n, "id": classifier.identify(t), "f": t.f, "code_sha256": code_digest(t),
                        "case": case.label} for n, (case, t) in enumerate(found)]
    args.report.write_text(json.dumps(data, indent=1) + "\n")
    print(f"# report: {args.report}  nodes={report.nodes}  monohedral discarded={report.monohedral_discarded}",
          file=out)
    return EXIT_OK


def _cmd_render(args, out) -> int:
    t = _load(args.tiling)
    a = case_angles(args.angles, args.tol_eq5)
    e = embedding.embed(t, a, tol_embed=args.tol_embed)
    pole = None
    if args.pole:
        try:
            pole = [float(v) for v in args.pole.split(",")]
        except ValueError:
            raise DomainError(f"bad pole {args.pole!r}") from None
        if len(pole) != 3 or math.hypot(*pole) == 0:
            raise DomainError("pole needs three coordinates, not all zero")
    args.svg.write_text(embedding.export_svg(e, t, pole))
    print(f"wrote {args.svg} ({t.f} faces, closure residual {e.closure_residual:.2e})", file=out)
    if args.off:
        args.off.write_text(embedding.export_off(e, t))
        print(f"wrote {args.off}", file=out)
    return EXIT_OK


def _cmd_plot_c(args, out) -> int:
    args.csv.write_text(embedding.export_csv_cgamma(args.gfrom, args.gto, args.steps))
    print(f"wrote {args.csv} ({args.steps} rows)", file=out)
    return EXIT_OK


_COMMANDS = {"angles": _cmd_angles, "avc": _cmd_avc, "build": _cmd_build, "verify": _cmd_verify,
             "classify": _cmd_classify, "render": _cmd_render, "plot-c": _cmd_plot_c}


def _fail(kind: str, message: str, code: int, err) -> int:
    print(json.dumps({"error": kind, "message": message, "exit_code": code}), file=err)
    return code


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = _parser().parse_args(argv)
        print(_header(args), file=out)
        return _COMMANDS[args.command](args, out)
    except BudgetExceeded as exc:
        return _fail("BudgetExceeded", str(exc), EXIT_BUDGET, err)
    except ClosureFailure as exc:
        return _fail("ClosureFailure", str(exc), EXIT_VERIFY, err)
    except _Usage as exc:
        return _fail("UsageError", str(exc), EXIT_DOMAIN, err)
    except SphtileError as exc:
        return _fail(type(exc).__name__, str(exc), EXIT_DOMAIN, err)
    except OSError as exc:
        return _fail("IOError", str(exc), EXIT_DOMAIN, err)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        return _fail("DomainError", str(exc), EXIT_DOMAIN, err)


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
