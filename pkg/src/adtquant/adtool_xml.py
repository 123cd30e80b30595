"""ADTool-style XML import/export.

Schema (versioned here, not a byte-compatibility claim): root element
``adtree``, nested ``node`` elements with ``refinement`` in {conjunctive,
disjunctive, sequential} (AND/OR/SAND) and a ``label`` child element.  A
child ``node`` with ``switchRole="yes"`` is an opposite-player
countermeasure: it imports as a NOT gate over that subtree, and a NOT gate
exports that way.  Export keeps only the goal tree and drops PAC values,
collecting warnings alongside the output.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET

from .core import (
    ID_RE, AdtError, AdtGraph, BasicEvent, Diagnostic, Gate, QuantAnnotation,
    feedback, has_errors,
)

_REFINEMENTS = {"conjunctive": "AND", "disjunctive": "OR", "sequential": "SAND"}
_REFINEMENT_OF = {v: k for k, v in _REFINEMENTS.items()}


def parse_adtool_xml(text: str) -> AdtGraph:
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise AdtError(f"malformed XML: {exc}") from exc
    if root.tag != "adtree":
        raise AdtError(f"expected root element 'adtree', found {root.tag!r}")
    top = root.find("node")
    if top is None:
        raise AdtError("adtree has no node element")

    vertices: dict[str, BasicEvent | Gate] = {}
    input_edges: list[tuple[str, str]] = []
    used: set[str] = set()

    def fresh_id(label: str | None) -> str:
        base = re.sub(r"[^A-Za-z0-9_]", "_", label or "n")
        if not ID_RE.match(base):
            base = "n_" + base if base else "n"
        vid = base
        k = 2
        while vid in used:
            vid = f"{base}_{k}"
            k += 1
        used.add(vid)
        return vid

    def build(elem: ET.Element, player: str) -> str:
        label_el = elem.find("label")
        label = label_el.text if label_el is not None else None
        kids = elem.findall("node")
        refinement = elem.get("refinement")
        if refinement is not None and refinement not in _REFINEMENTS:
            raise AdtError(f"unknown refinement {refinement!r}")
        parts: list[str] = []
        for kid in kids:
            if kid.get("switchRole") == "yes":
                sub = build(kid, _flip(player))
                notg = fresh_id("not")
                vertices[notg] = Gate("NOT")
                input_edges.append((sub, notg))
                parts.append(notg)
            else:
                parts.append(build(kid, player))
        if not parts:
            vid = fresh_id(label)
            vertices[vid] = BasicEvent(player, QuantAnnotation(), label)
            return vid
        if len(parts) == 1 and refinement is None:
            # Single refining child without an operator: pass-through node.
            return parts[0]
        gate_type = _REFINEMENTS.get(refinement or "disjunctive")
        vid = fresh_id(label)
        vertices[vid] = Gate(gate_type, label)
        for c in parts:
            input_edges.append((c, vid))
        return vid

    goal = build(top, "attacker")
    return AdtGraph(vertices=vertices, input_edges=tuple(input_edges), goal=goal)


def _flip(player: str) -> str:
    return "defender" if player == "attacker" else "attacker"


def emit_adtool_xml(graph: AdtGraph) -> tuple[str, list[Diagnostic]]:
    """Export the goal tree; returns (xml text, warnings).

    Raises on error-level incompatibilities (unsupported operators or player
    nesting); PAC values and extra roots produce warnings and are dropped.
    """
    diags = feedback(graph, "export-xml")
    if has_errors(diags):
        raise AdtError("not exportable to XML: "
                       + "; ".join(d.message for d in diags if d.severity == "error"))

    def render(vid: str, switch_role: bool) -> ET.Element:
        v = graph.vertices[vid]
        if isinstance(v, Gate) and v.gate_type == "NOT":
            # NOT collapses into switchRole="yes" on its single child;
            # stacked NOTs cancel pairwise.
            return render(graph.inputs_of(vid)[0], not switch_role)
        elem = ET.Element("node")
        if switch_role:
            elem.set("switchRole", "yes")
        label = ET.SubElement(elem, "label")
        label.text = v.label if v.label is not None else vid
        if isinstance(v, Gate):
            elem.set("refinement", _REFINEMENT_OF[v.gate_type])
            for c in graph.inputs_of(vid):
                elem.append(render(c, False))
        return elem

    root = ET.Element("adtree")
    root.append(render(graph.goal, False))
    ET.indent(root, space="  ")
    text = ET.tostring(root, encoding="unicode", xml_declaration=False)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + text + "\n", diags
