"""PRISM-games export: the tree as a stochastic two-player game.

Encoding (frozen, documented here): one state variable per basic event
(0 undecided, 1 succeeded, 2 failed) plus a scheduler variable ``turn``.
While events are undecided the scheduler draws uniformly among all events
(rejection-resampled if the drawn one is decided, which preserves
uniformity over the undecided set); the owning player then chooses to
attempt or skip, an attempt succeeding with the event's probability.  The
goal is a state label over the event variables; the query asks for the
attacker's maximal probability of reaching it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import AdtGraph, AdtError, BasicEvent, Diagnostic, Gate, feedback, has_errors
from .dot import format_real
from .emitted import validate_emitted


@dataclass(frozen=True)
class ExportArtifact:
    files: dict[str, str]
    diagnostics: list[Diagnostic]


def goal_formula(graph: AdtGraph, var_of: dict[str, str], vid: str | None = None,
                 negated: bool = False) -> str:
    """Boolean success formula over event state variables.

    Negation-normal form: a positive event tests succeeded (s=1), a negated
    one tests failed (s=2).  Testing the decided-failed state rather than
    "not succeeded" keeps the label false while events are still undecided,
    so it only fires in states where the outcome is settled.
    """
    vid = graph.goal if vid is None else vid
    v = graph.vertices[vid]
    if isinstance(v, BasicEvent):
        return f"({var_of[vid]}={2 if negated else 1})"
    if v.gate_type == "NOT":
        (c,) = graph.inputs_of(vid)
        return goal_formula(graph, var_of, c, not negated)
    kids = [goal_formula(graph, var_of, c, negated) for c in graph.inputs_of(vid)]
    if v.gate_type == "AND":
        op = "|" if negated else "&"
    elif v.gate_type == "OR":
        op = "&" if negated else "|"
    else:
        raise AdtError(f"operator {v.gate_type} not supported by the PRISM export")
    return "(" + op.join(kids) + ")"


def export_prism(graph: AdtGraph) -> ExportArtifact:
    diags = feedback(graph, "export-prism")
    if has_errors(diags):
        return ExportArtifact({}, diags)

    events = sorted(v for v in graph.subtree(graph.goal) if graph.is_basic(v))
    missing = [b for b in events if graph.vertices[b].annotation.prob is None]
    if missing:
        diags = diags + [Diagnostic("E_MISSING_ANNOTATION", "error",
                                    f"basic event {b} has no probability",
                                    vertex=b, target="export-prism")
                         for b in missing]
        return ExportArtifact({}, diags)

    n = len(events)
    var_of = {b: f"s_{i}" for i, b in enumerate(events, start=1)}
    undecided = "(" + "|".join(f"({var_of[b]}=0)" for b in events) + ")"

    lines = ["smg", ""]
    lines.append(f"global turn : [0..{n}] init 0;")
    lines.append("")
    lines.append(f'label "goal" = {goal_formula(graph, var_of)};')
    lines.append("")
    lines.append("module sched")
    tick_branches = " + ".join(f"1/{n}:(turn'={i})" for i in range(1, n + 1))
    lines.append(f"  [tick] turn=0 & {undecided} -> {tick_branches};")
    for i, b in enumerate(events, start=1):
        lines.append(f"  [requeue_{i}] turn={i} & {var_of[b]}!=0 -> (turn'=0);")
        lines.append(f"  [attempt_{i}] turn={i} -> (turn'=0);")
        lines.append(f"  [skip_{i}] turn={i} -> (turn'=0);")
    lines.append(f"  [done] turn=0 & !{undecided} -> true;")
    players = {"attacker": ["sched", "[tick]", "[done]"], "defender": []}
    for i, b in enumerate(events, start=1):
        players["attacker"].append(f"[requeue_{i}]")
    for i, b in enumerate(events, start=1):
        owner = graph.vertices[b].player
        players[owner] += [f"[attempt_{i}]", f"[skip_{i}]"]
    if not players["defender"]:
        lines.append("  [noop_defender] false -> true;")
        players["defender"].append("[noop_defender]")
    lines.append("endmodule")

    for i, b in enumerate(events, start=1):
        p = graph.vertices[b].annotation.prob
        s = var_of[b]
        lines.append("")
        lines.append(f"module be_{i}")
        lines.append(f"  // {b}: {graph.vertices[b].player}")
        lines.append(f"  {s} : [0..2] init 0;")
        if p >= 1.0:
            attempt = f"({s}'=1)"
        elif p <= 0.0:
            attempt = f"({s}'=2)"
        else:
            pr = format_real(p)
            attempt = f"{pr}:({s}'=1) + 1-{pr}:({s}'=2)"
        lines.append(f"  [attempt_{i}] {s}=0 -> {attempt};")
        lines.append(f"  [skip_{i}] {s}=0 -> ({s}'=2);")
        lines.append("endmodule")

    for player in ("attacker", "defender"):
        lines.append("")
        lines.append(f"player {player}")
        lines.append("  " + ", ".join(players[player]))
        lines.append("endplayer")

    model = "\n".join(lines) + "\n"
    props = '<<attacker>> Pmax=? [ F "goal" ]\n'

    diags = diags + validate_emitted(model, "prism-smg")
    if '"goal"' not in props:
        diags.append(Diagnostic("E_EMIT_QUERY", "error",
                                "props file does not reference the goal label",
                                target="export-prism"))
    return ExportArtifact({"model.prism": model, "props.props": props}, diags)
