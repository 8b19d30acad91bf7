"""Command-line front end for batch computation and golden-table emission.

Subcommands: validate, betti, thom, table, pair, structconst, transfer,
integrate, demo.  Graphs come from builder specs (complete:N,
permutahedron:N) or files (file:PATH or a bare path).  Output is the
canonical polynomial rendering, deterministic across runs; --format
structured mirrors the same content as JSON.  The GKMCALC_JOBS environment
variable caps the worker-process count used for per-column table
computation (default: the machine's CPU count).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Optional, Sequence

from .builders import build_graph
from .cohomology import CohomologyClass, integrate
from .crosssection import chamber_levels, compose_transfer
from .demo import run_demo
from .errors import GkmCalcError
from .graph import GkmGraph, Polarization, betti, polarize, validate
from .render import basis_renderer, layout_table, parse_polynomial
from .symbolic import Polynomial, default_names, format_rational, rat
from .thom import ThomCalculator

USAGE_ERROR = 2
FAILURE = 1


def _parse_xi(text: Optional[str]) -> Optional[tuple[Fraction, ...]]:
    if text is None:
        return None
    try:
        return tuple(rat(piece.strip()) for piece in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise GkmCalcError(f"bad --xi value {text!r}: {exc}") from exc


def _graph_and_polarization(args) -> tuple[GkmGraph, Polarization]:
    graph = build_graph(args.graph)
    return graph, polarize(graph, _parse_xi(getattr(args, "xi", None)))


def _emit(args, text: str, structured: dict) -> None:
    if getattr(args, "format", "text") == "structured":
        print(json.dumps(structured, indent=2, sort_keys=True))
    else:
        print(text)


def _names_and_convert(graph: GkmGraph, basis: str):
    names, convert = basis_renderer(graph, basis)
    if names is None:
        names = default_names(graph.dimension)
    return names, convert


def cmd_validate(args) -> int:
    try:
        graph = build_graph(args.graph)
    except GkmCalcError as exc:
        _emit(args, f"[FAIL] {exc}", {"ok": False, "violations": [str(exc)]})
        return FAILURE
    report = validate(graph)
    if report.ok:
        _emit(
            args,
            f"[OK] {args.graph}: {len(graph.vertices)} vertices, valence {graph.valence}, "
            f"dimension {graph.dimension}",
            {"ok": True, "violations": []},
        )
        return 0
    text = "\n".join(f"[FAIL] {line}" for line in report.violations)
    _emit(args, text, {"ok": False, "violations": report.violations})
    return FAILURE


def cmd_betti(args) -> int:
    graph = build_graph(args.graph)
    xi = _parse_xi(args.xi)
    if xi is None:
        xi = graph.default_xi
    if xi is None:
        from .graph import search_polarization

        xi = search_polarization(graph)
    numbers = betti(graph, xi)
    _emit(args, " ".join(str(b) for b in numbers), {"betti": list(numbers)})
    return 0


def _class_lines(
    graph: GkmGraph, pol: Polarization, values: dict[str, Polynomial], basis: str
) -> tuple[list[str], dict[str, str]]:
    names, convert = _names_and_convert(graph, basis)
    rendered = {
        graph.label(v): convert(values[v]).render(names) for v in pol.vertices_by_level()
    }
    lines = [f"{label}: {value}" for label, value in rendered.items()]
    return lines, rendered


def cmd_thom(args) -> int:
    graph, pol = _graph_and_polarization(args)
    calc = ThomCalculator(pol)
    vertex = graph.vertex_by_label(args.vertex)
    if args.minus:
        cls = calc.thom_class_minus(vertex)
    elif args.algorithm == "inductive":
        cls = calc.thom_class_inductive(vertex)
    else:
        cls = calc.thom_class_paths(vertex)
    lines, rendered = _class_lines(graph, pol, dict(cls.values), args.basis)
    _emit(
        args,
        "\n".join(lines),
        {"vertex": args.vertex, "minus": bool(args.minus), "values": rendered},
    )
    return 0


def _table_column(spec: str, xi_text: Optional[str], basis: str, base_label: str):
    """Worker entry point: one Thom class rendered to strings."""
    graph = build_graph(spec)
    pol = polarize(graph, _parse_xi(xi_text))
    calc = ThomCalculator(pol)
    base = graph.vertex_by_label(base_label)
    cls = calc.thom_class_paths(base)
    names, convert = _names_and_convert(graph, basis)
    return base_label, {
        graph.label(v): convert(cls.values[v]).render(names) for v in graph.vertices
    }


def _job_count() -> int:
    raw = os.environ.get("GKMCALC_JOBS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise GkmCalcError(f"GKMCALC_JOBS must be an integer, got {raw!r}")


def cmd_table(args) -> int:
    graph, pol = _graph_and_polarization(args)
    order = pol.vertices_by_level()
    labels = [graph.label(v) for v in order]
    jobs = min(_job_count(), len(order))
    columns: dict[str, dict[str, str]] = {}
    if jobs > 1 and len(order) >= 12:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            work = [
                pool.submit(_table_column, args.graph, args.xi, args.basis, label)
                for label in labels
            ]
            for future in work:
                label, values = future.result()
                columns[label] = values
    else:
        calc = ThomCalculator(pol)
        names, convert = _names_and_convert(graph, args.basis)
        for base in order:
            cls = calc.thom_class_paths(base)
            columns[graph.label(base)] = {
                graph.label(v): convert(cls.values[v]).render(names) for v in graph.vertices
            }
    headers = ["vertex"] + [f"tau[{label}]" for label in labels]
    rows = [[row_label] + [columns[col][row_label] for col in labels] for row_label in labels]
    _emit(args, layout_table(headers, rows), {"order": labels, "columns": columns})
    return 0


def cmd_pair(args) -> int:
    graph, pol = _graph_and_polarization(args)
    calc = ThomCalculator(pol)
    names, convert = _names_and_convert(graph, args.basis)
    if args.p and args.q:
        value = calc.pairing(graph.vertex_by_label(args.p), graph.vertex_by_label(args.q))
        text = convert(value).render(names)
        _emit(args, text, {"p": args.p, "q": args.q, "integral": text})
        return 0
    order = pol.vertices_by_level()
    labels = [graph.label(v) for v in order]
    matrix = {}
    rows = []
    for p in order:
        row = []
        for q in order:
            text = convert(calc.pairing(p, q)).render(names)
            matrix[f"{graph.label(p)},{graph.label(q)}"] = text
            row.append(text)
        rows.append([graph.label(p)] + row)
    headers = ["tau+ \\ tau-"] + labels
    _emit(args, layout_table(headers, rows), {"order": labels, "matrix": matrix})
    return 0


def cmd_structconst(args) -> int:
    graph, pol = _graph_and_polarization(args)
    calc = ThomCalculator(pol)
    names, convert = _names_and_convert(graph, args.basis)
    p = graph.vertex_by_label(args.p)
    q = graph.vertex_by_label(args.q)
    targets = [graph.vertex_by_label(args.r)] if args.r else pol.vertices_by_level()
    coefficients = calc.multiplication_constants(p, q)
    lines = []
    structured = {}
    for r in targets:
        path_value = calc.structure_constant(p, q, r)
        expansion_value = coefficients[r]
        agree = path_value == expansion_value
        rendered = convert(path_value).render(names)
        label = graph.label(r)
        marker = "" if agree else f"  [MISMATCH expansion: {convert(expansion_value).render(names)}]"
        lines.append(f"c[{args.p},{args.q} -> {label}] = {rendered}{marker}")
        structured[label] = {
            "paths": rendered,
            "expansion": convert(expansion_value).render(names),
            "agree": agree,
        }
    _emit(args, "\n".join(lines), {"p": args.p, "q": args.q, "constants": structured})
    return 0 if all(entry["agree"] for entry in structured.values()) else FAILURE


def cmd_transfer(args) -> int:
    graph, pol = _graph_and_polarization(args)
    levels = chamber_levels(pol)
    low = rat(args.from_level) if args.from_level else levels[1]
    high = rat(args.to_level) if args.to_level else (levels[-2] if len(levels) > 2 else levels[-1])
    matrix = compose_transfer(pol, low, high)
    names, _ = _names_and_convert(graph, args.basis)
    markov = matrix.is_markov()
    text = matrix.render(names) + f"\nmarkov column sums: {'ok' if markov else 'VIOLATED'}"
    entries = {
        f"{graph.edges[v].key()}|{graph.edges[w].key()}": value.render(names)
        for (v, w), value in sorted(matrix.entries.items())
    }
    _emit(
        args,
        text,
        {
            "from": format_rational(matrix.source.level),
            "to": format_rational(matrix.target.level),
            "entries": entries,
            "markov": markov,
        },
    )
    return 0 if markov else FAILURE


def cmd_integrate(args) -> int:
    graph, pol = _graph_and_polarization(args)
    with open(args.class_file) as handle:
        document = json.load(handle)
    coordinate_names = default_names(graph.dimension)
    values = {
        graph.vertex_by_label(label): parse_polynomial(text, coordinate_names)
        for label, text in document.items()
    }
    from .cohomology import cocycle_witness

    witness = cocycle_witness(graph, values)
    if witness is not None:
        _emit(args, f"[FAIL] not a cocycle: {witness}", {"ok": False, "witness": str(witness)})
        return FAILURE
    result = integrate(CohomologyClass(graph, values))
    names, convert = _names_and_convert(graph, args.basis)
    text = convert(result).render(names)
    _emit(args, text, {"integral": text})
    return 0


def cmd_demo(args) -> int:
    results = run_demo()
    lines = []
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        suffix = f" ({result.detail})" if result.detail else ""
        lines.append(f"[{status}] {result.name}{suffix}")
    ok = all(r.passed for r in results)
    _emit(
        args,
        "\n".join(lines),
        {"checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results]},
    )
    return 0 if ok else FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gkmcalc",
        description="Exact equivariant cohomology of GKM graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, xi=True, basis=True):
        p.add_argument("--graph", required=True, help="complete:N, permutahedron:N or file:PATH")
        if xi:
            p.add_argument("--xi", help="polarizing vector, comma-separated rationals")
        if basis:
            p.add_argument(
                "--basis",
                choices=["x", "roots", "auto"],
                default="auto",
                help="render in coordinates or simple roots (auto: roots for sum-zero weights)",
            )
        p.add_argument(
            "--format", choices=["text", "structured"], default="text", help="output format"
        )

    p = sub.add_parser("validate", help="check the GKM axioms and connection")
    add_common(p, xi=False, basis=False)
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("betti", help="Betti numbers by Morse index")
    add_common(p, basis=False)
    p.set_defaults(handler=cmd_betti)

    p = sub.add_parser("thom", help="one Thom class, vertex by vertex")
    add_common(p)
    p.add_argument("--vertex", required=True, help="base vertex (label or name)")
    p.add_argument("--algorithm", choices=["paths", "inductive"], default="paths")
    p.add_argument("--minus", action="store_true", help="descending class instead")
    p.set_defaults(handler=cmd_thom)

    p = sub.add_parser("table", help="all Thom classes as a table")
    add_common(p)
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser("pair", help="integrals of tau_p^+ tau_q^-")
    add_common(p)
    p.add_argument("--p", help="ascending base vertex")
    p.add_argument("--q", help="descending base vertex")
    p.set_defaults(handler=cmd_pair)

    p = sub.add_parser("structconst", help="structure constants by path configurations")
    add_common(p)
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--r", help="target vertex; omit for all")
    p.set_defaults(handler=cmd_structconst)

    p = sub.add_parser("transfer", help="cross-section transfer matrix")
    add_common(p)
    p.add_argument("--from-level", dest="from_level", help="lower regular value")
    p.add_argument("--to-level", dest="to_level", help="upper regular value")
    p.set_defaults(handler=cmd_transfer)

    p = sub.add_parser("integrate", help="localization integral of a class file")
    add_common(p)
    p.add_argument("--class-file", required=True, help="JSON map vertex -> polynomial string")
    p.set_defaults(handler=cmd_integrate)

    p = sub.add_parser("demo", help="run the worked-example suite")
    p.add_argument("--format", choices=["text", "structured"], default="text")
    p.set_defaults(handler=cmd_demo)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except GkmCalcError as exc:
        print(f"[FAIL] {type(exc).__name__}: {exc}", file=sys.stderr)
        return FAILURE


if __name__ == "__main__":
    sys.exit(main())
