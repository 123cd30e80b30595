"""Command-line entry point.

Exit codes: 0 success, 1 diagnostics with errors (or bad input content),
2 usage error, 3 I/O error.  All diagnostics go to standard error as
``code: message @vertex`` lines.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .adtool_xml import emit_adtool_xml, parse_adtool_xml
from .analysis import DOMAINS, analyze
from .benchgen import gen_benchmark
from .core import AdtError, AdtGraph, has_errors, validate
from .dot import DotParseError, emit_dot, parse_dot
from .estimation import EstimateRequest, estimate_gaussian
from .export_prism import export_prism
from .export_uppaal import export_uppaal
from .pac import analyze_pac
from .samples import parse_csv_samples

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_USAGE = 2
EXIT_IO = 3


def print_diagnostics(diags, stream=None) -> None:
    stream = stream or sys.stderr
    for d in diags:
        at = f" @{d.vertex}" if d.vertex else ""
        print(f"{d.code}: {d.message}{at}", file=stream)


class _Abort(Exception):
    """Internal: stop the subcommand with an exit code after printing."""

    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _Abort(f"cannot read {path}: {exc.strerror or exc}", EXIT_IO)


def _write_text(path: str, content: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(content)
    except OSError as exc:
        raise _Abort(f"cannot write {path}: {exc.strerror or exc}", EXIT_IO)


def load_model(path: str) -> AdtGraph:
    """Parse a model file as DOT or ADTool XML, chosen by extension."""
    text = _read_text(path)
    try:
        if path.lower().endswith(".xml"):
            return parse_adtool_xml(text)
        return parse_dot(text)
    except (DotParseError, AdtError) as exc:
        raise _Abort(f"{path}: {exc}", EXIT_DIAGNOSTICS)


def _display(graph: AdtGraph, vid: str) -> str:
    v = graph.vertices[vid]
    return v.label if v.label else vid


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _result_json(domain: str, exact, pac_pair=None) -> dict:
    if domain == "prob":
        out = {"value": exact}
        if pac_pair is not None:
            lo, hi = pac_pair.interval(probability=True)
            out.update(eps=pac_pair.eps, delta=pac_pair.delta,
                       intervalLo=lo, intervalHi=hi)
        return out
    out = {"pair": list(exact)}
    if pac_pair is not None:
        ivs = [p.interval() for p in (pac_pair.succeed, pac_pair.fail)]
        out.update(eps=[pac_pair.succeed.eps, pac_pair.fail.eps],
                   delta=pac_pair.succeed.delta,
                   intervalLo=[iv[0] for iv in ivs],
                   intervalHi=[iv[1] for iv in ivs])
    return out


def analysis_payload(graph: AdtGraph, domain: str, pac: bool,
                     delta_rule: str) -> dict:
    """The analyze result object, shared verbatim by --json and the service."""
    diags = []
    exact = analyze(graph, domain)
    pac_res = analyze_pac(graph, domain, delta_rule=delta_rule) if pac else {}
    results = {vid: _result_json(domain, exact[vid], pac_res.get(vid))
               for vid in exact}
    return {"results": results, "diagnostics": [d.to_json() for d in diags]}


def _print_listing(graph: AdtGraph, domain: str, exact, pac_res) -> None:
    if domain == "prob":
        print("# probability analysis assumes mutually independent basic events")

    def line(vid: str, depth: int) -> None:
        indent = " " * depth
        name = _display(graph, vid)
        if domain == "prob":
            parts = [f"p: {_fmt(exact[vid])}"]
            if pac_res:
                pv = pac_res[vid]
                lo, hi = pv.interval(probability=True)
                parts += [f"ε: {_fmt(pv.eps)}", f"δ: {_fmt(pv.delta)}",
                          f"[{_fmt(lo)}, {_fmt(hi)}]"]
        else:
            s, f = exact[vid]
            parts = [f"s: {_fmt(s)}", f"f: {_fmt(f)}"]
            if pac_res:
                pp = pac_res[vid]
                parts += [f"ε: ({_fmt(pp.succeed.eps)}, {_fmt(pp.fail.eps)})",
                          f"δ: {_fmt(pp.succeed.delta)}"]
        print(f"{indent}ID {name} " + " ".join(parts))

    stack = [(graph.goal, 0)]
    while stack:
        vid, depth = stack.pop()
        line(vid, depth)
        for child in reversed(graph.inputs_of(vid)):
            stack.append((child, depth + 1))


def _validated(graph: AdtGraph) -> int | None:
    diags = validate(graph)
    print_diagnostics(diags)
    if has_errors(diags):
        return EXIT_DIAGNOSTICS
    return None


def cmd_validate(args) -> int:
    graph = load_model(args.file)
    diags = validate(graph)
    print_diagnostics(diags)
    if has_errors(diags):
        return EXIT_DIAGNOSTICS
    print(f"ok: {len(graph.vertices)} vertices, {len(graph.input_edges)} input edges")
    return EXIT_OK


def cmd_analyze(args) -> int:
    graph = load_model(args.file)
    rc = _validated(graph)
    if rc is not None:
        return rc
    try:
        payload = analysis_payload(graph, args.domain, args.pac, args.delta_rule)
    except AdtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSTICS
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
        return EXIT_OK
    exact = analyze(graph, args.domain)
    pac_res = analyze_pac(graph, args.domain, delta_rule=args.delta_rule) if args.pac else {}
    _print_listing(graph, args.domain, exact, pac_res)
    return EXIT_OK


def cmd_estimate(args) -> int:
    text = _read_text(args.file)
    try:
        series = parse_csv_samples(text, source=args.file)
        pv = estimate_gaussian(EstimateRequest(series.values, args.delta,
                                               source=args.file))
    except AdtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSTICS
    if args.json:
        print(json.dumps({"value": pv.value, "eps": pv.eps, "delta": pv.delta},
                         sort_keys=True))
    else:
        print(f"value: {_fmt(pv.value)} ε: {_fmt(pv.eps)} δ: {_fmt(pv.delta)}"
              f" (n={len(series.values)})")
    return EXIT_OK


def cmd_convert(args) -> int:
    graph = load_model(args.file)
    rc = _validated(graph)
    if rc is not None:
        return rc
    if args.to == "dot":
        _write_text(args.output, emit_dot(graph))
        return EXIT_OK
    text, diags = emit_adtool_xml(graph)
    print_diagnostics(diags)
    if has_errors(diags):
        return EXIT_DIAGNOSTICS
    _write_text(args.output, text)
    return EXIT_OK


def cmd_export(args) -> int:
    graph = load_model(args.file)
    rc = _validated(graph)
    if rc is not None:
        return rc
    if args.to == "prism":
        artifact = export_prism(graph)
    else:
        artifact = export_uppaal(graph, horizon=args.horizon)
    print_diagnostics(artifact.diagnostics)
    if has_errors(artifact.diagnostics):
        return EXIT_DIAGNOSTICS
    try:
        os.makedirs(args.output, exist_ok=True)
    except OSError as exc:
        raise _Abort(f"cannot create {args.output}: {exc.strerror or exc}", EXIT_IO)
    for name, content in sorted(artifact.files.items()):
        _write_text(os.path.join(args.output, name), content)
        print(os.path.join(args.output, name))
    return EXIT_OK


def cmd_gen(args) -> int:
    graph = gen_benchmark(args.size, args.seed)
    _write_text(args.output, emit_dot(graph))
    return EXIT_OK


def cmd_report(args) -> int:
    from .report import write_report

    graph = load_model(args.file)
    rc = _validated(graph)
    if rc is not None:
        return rc
    try:
        paths = write_report(graph, args.output, pac=args.pac,
                             delta_rule=args.delta_rule)
    except AdtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSTICS
    for p in paths:
        print(p)
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import run_server

    return run_server(port=args.port, static_dir=args.static,
                      data_dir=args.data, seed_ids=args.seed_ids)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adtquant",
        description="Quantitative attack-defense tree workbench.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a model's structural invariants")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", help="bottom-up analysis of a model")
    p.add_argument("file")
    p.add_argument("--domain", choices=DOMAINS, default="prob")
    p.add_argument("--pac", action="store_true",
                   help="propagate PAC (eps, delta) alongside the values")
    p.add_argument("--delta-rule", choices=("independent", "union"),
                   default="independent")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("estimate", help="PAC-estimate a quantity from CSV samples")
    p.add_argument("file")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("convert", help="convert between DOT and ADTool XML")
    p.add_argument("file")
    p.add_argument("--to", choices=("dot", "xml"), required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("export", help="compile to model-checker inputs")
    p.add_argument("file")
    p.add_argument("--to", choices=("prism", "uppaal"), required=True)
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument("--horizon", type=float, default=None,
                   help="UPPAAL query time bound (default: sum of success delays)")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("gen", help="generate a random benchmark tree")
    p.add_argument("--size", type=int, required=True, help="number of leaves")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("report", help="write per-vertex CSV and figures")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument("--pac", action="store_true")
    p.add_argument("--delta-rule", choices=("independent", "union"),
                   default="independent")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the HTTP JSON service")
    p.add_argument("--port", type=int,
                   default=int(os.environ.get("ADTQUANT_PORT", "8437")))
    p.add_argument("--static", default=None, help="directory of web UI assets")
    p.add_argument("--data", default=None,
                   help="directory for DOT-backed model persistence")
    p.add_argument("--seed-ids", action="store_true",
                   help="deterministic model ids (for tests)")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Abort as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except AdtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSTICS


if __name__ == "__main__":
    sys.exit(main())
