"""UPPAAL stochastic timed automata export.

Encoding (frozen, documented here): one template per basic event with
locations Idle -> Attempting -> {Succeeded, Failed}.  The attempt holds the
clock between the two delay components and resolves success by a
probabilistic branch weighted by the event's probability (weights scaled to
parts per million).  Per-event global booleans carry outcomes; a Monitor
template raises the ``goal`` flag when the gate structure over those
booleans is satisfied, fires trigger channels when a TR gate's input
subtree succeeds, fires reset channels when an RE gate's input succeeds,
and advances order counters for SAND/SOR gates once a child subtree is
fully decided.  The query bounds time by the sum of all success delays
unless a horizon is given.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .core import AdtGraph, AdtError, BasicEvent, Diagnostic, Gate, feedback, has_errors
from .emitted import validate_emitted
from .export_prism import ExportArtifact

_WEIGHT_SCALE = 1_000_000


def _succ_formula(graph: AdtGraph, vid: str) -> str:
    v = graph.vertices[vid]
    if isinstance(v, BasicEvent):
        return f"succ_{vid}"
    kids = [_succ_formula(graph, c) for c in graph.inputs_of(vid)]
    if v.gate_type in ("AND", "SAND"):
        return "(" + " && ".join(kids) + ")"
    if v.gate_type in ("OR", "SOR"):
        return "(" + " || ".join(kids) + ")"
    if v.gate_type == "NOT":
        return f"(!{kids[0]})"
    return kids[0]  # TR, RE: identity


def _done_formula(graph: AdtGraph, vid: str) -> str:
    events = sorted(b for b in graph.subtree(vid) if graph.is_basic(b))
    return "(" + " && ".join(f"done_{b}" for b in events) + ")"


def _loc(template, loc_id, name, invariant=None):
    loc = ET.SubElement(template, "location", id=loc_id)
    ET.SubElement(loc, "name").text = name
    if invariant is not None:
        lab = ET.SubElement(loc, "label", kind="invariant")
        lab.text = invariant
    return loc


def _trans(template, source, target, guard=None, sync=None, assignment=None,
           probability=None):
    tr = ET.SubElement(template, "transition")
    ET.SubElement(tr, "source", ref=source)
    ET.SubElement(tr, "target", ref=target)
    for kind, text in (("guard", guard), ("synchronisation", sync),
                       ("assignment", assignment), ("probability", probability)):
        if text is not None:
            lab = ET.SubElement(tr, "label", kind=kind)
            lab.text = text
    return tr


def export_uppaal(graph: AdtGraph, horizon: float | None = None) -> ExportArtifact:
    diags = feedback(graph, "export-uppaal")
    if has_errors(diags):
        return ExportArtifact({}, diags)

    needed = graph.dependency_closure(graph.goal)
    events = sorted(b for b in needed if graph.is_basic(b))
    missing = []
    for b in events:
        ann = graph.vertices[b].annotation
        if ann.prob is None or ann.delay is None:
            missing.append(b)
    if missing:
        diags = diags + [Diagnostic(
            "E_MISSING_ANNOTATION", "error",
            f"basic event {b} needs probability and delay for the UPPAAL export",
            vertex=b, target="export-uppaal") for b in missing]
        return ExportArtifact({}, diags)

    gate_of = {vid: graph.vertices[vid] for vid in needed
               if isinstance(graph.vertices[vid], Gate)}
    tr_gates = sorted(v for v, g in gate_of.items() if g.gate_type == "TR")
    re_gates = sorted(v for v, g in gate_of.items() if g.gate_type == "RE")
    seq_gates = sorted(v for v, g in gate_of.items() if g.gate_type in ("SAND", "SOR"))

    # Child-order positions for SAND/SOR membership guards.
    seq_pos: dict[str, list[tuple[str, int]]] = {b: [] for b in events}
    for g in seq_gates:
        for idx, child in enumerate(graph.inputs_of(g)):
            for b in sorted(graph.subtree(child)):
                if b in seq_pos:
                    seq_pos[b].append((g, idx))

    decl = ["// generated attack-defense tree model", "bool goal = false;"]
    for b in events:
        decl.append(f"bool done_{b} = false;")
        decl.append(f"bool succ_{b} = false;")
    for g in tr_gates:
        decl.append(f"broadcast chan trig_{g};")
    for g in re_gates:
        decl.append(f"broadcast chan reset_{g};")
    for g in seq_gates:
        decl.append(f"int seq_{g} = 0;")

    nta = ET.Element("nta")
    ET.SubElement(nta, "declaration").text = "\n".join(decl)

    triggered_by: dict[str, str] = {}
    for (g, b) in graph.trigger_edges:
        if g in needed and b in needed:
            triggered_by[b] = g
    reset_targets: dict[str, list[str]] = {b: [] for b in events}
    for (g, b) in graph.reset_edges:
        if g in needed and b in reset_targets:
            reset_targets[b].append(g)

    for b in events:
        ann = graph.vertices[b].annotation
        p = ann.prob
        ds, df = ann.delay
        tpl = ET.SubElement(nta, "template")
        ET.SubElement(tpl, "name").text = f"BE_{b}"
        ET.SubElement(tpl, "declaration").text = "clock x;"
        _loc(tpl, "idle", "Idle")
        _loc(tpl, "attempting", "Attempting", invariant=f"x <= {max(ds, df):g}")
        _loc(tpl, "succeeded", "Succeeded")
        _loc(tpl, "failed", "Failed")
        ET.SubElement(tpl, "init", ref="idle")

        guard_parts = [f"seq_{g} >= {idx}" for (g, idx) in seq_pos[b]]
        guard = " && ".join(guard_parts) if guard_parts else None
        sync = f"trig_{triggered_by[b]}?" if b in triggered_by else None
        _trans(tpl, "idle", "attempting", guard=guard, sync=sync, assignment="x = 0")

        resolve_guard = f"x >= {min(ds, df):g}"
        win = f"succ_{b} = true, done_{b} = true"
        lose = f"done_{b} = true"
        if p >= 1.0:
            _trans(tpl, "attempting", "succeeded", guard=resolve_guard, assignment=win)
        elif p <= 0.0:
            _trans(tpl, "attempting", "failed", guard=resolve_guard, assignment=lose)
        else:
            ET.SubElement(tpl, "branchpoint", id="resolve")
            _trans(tpl, "attempting", "resolve", guard=resolve_guard)
            w = round(p * _WEIGHT_SCALE)
            _trans(tpl, "resolve", "succeeded", assignment=win, probability=str(w))
            _trans(tpl, "resolve", "failed", assignment=lose,
                   probability=str(_WEIGHT_SCALE - w))
        for g in sorted(reset_targets[b]):
            back = f"succ_{b} = false, done_{b} = false"
            _trans(tpl, "succeeded", "idle", sync=f"reset_{g}?", assignment=back)
            _trans(tpl, "failed", "idle", sync=f"reset_{g}?", assignment=back)

    monitor = ET.SubElement(nta, "template")
    ET.SubElement(monitor, "name").text = "Monitor"
    fired = [f"bool fired_{g} = false;" for g in tr_gates + re_gates + seq_gates]
    ET.SubElement(monitor, "declaration").text = "\n".join(fired) or "// no helpers"
    _loc(monitor, "watch", "Watch")
    _loc(monitor, "reached", "GoalReached")
    ET.SubElement(monitor, "init", ref="watch")
    _trans(monitor, "watch", "reached",
           guard=_succ_formula(graph, graph.goal), assignment="goal = true")
    for g in tr_gates:
        child = graph.inputs_of(g)[0]
        _trans(monitor, "watch", "watch",
               guard=f"!fired_{g} && {_succ_formula(graph, child)}",
               sync=f"trig_{g}!", assignment=f"fired_{g} = true")
    for g in re_gates:
        child = graph.inputs_of(g)[0]
        _trans(monitor, "watch", "watch",
               guard=f"!fired_{g} && {_succ_formula(graph, child)}",
               sync=f"reset_{g}!", assignment=f"fired_{g} = true")
    for g in seq_gates:
        n_children = len(graph.inputs_of(g))
        for idx, child in enumerate(graph.inputs_of(g)[:-1]):
            _trans(monitor, "watch", "watch",
                   guard=f"seq_{g} == {idx} && {_done_formula(graph, child)}",
                   assignment=f"seq_{g} = seq_{g} + 1")

    system = ET.SubElement(nta, "system")
    procs = [f"BE_{b}" for b in events] + ["Monitor"]
    system.text = "\nsystem " + ", ".join(procs) + ";\n"

    ET.indent(nta, space="  ")
    model = ('<?xml version="1.0" encoding="utf-8"?>\n'
             + ET.tostring(nta, encoding="unicode") + "\n")

    if horizon is None:
        horizon = sum(graph.vertices[b].annotation.delay[0] for b in events)
    queries = f"Pr[<={horizon:g}](<> Monitor.goal)\n"

    diags = diags + validate_emitted(model, "uppaal-xml")
    if "Monitor.goal" not in queries:
        diags.append(Diagnostic("E_EMIT_QUERY", "error",
                                "query file does not reference Monitor.goal",
                                target="export-uppaal"))
    return ExportArtifact({"model.xml": model, "queries.q": queries}, diags)
