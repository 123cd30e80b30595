"""DOT import/export for attack-defense trees.

Supported subset: ``digraph [name] { ... }`` with node statements, edge
statements ``a -> b`` and attribute lists.  Edges run child -> parent
(inputs are predecessors), the opposite of the usual Graphviz drawing
direction.  Unrecognized node attributes are preserved and re-emitted
verbatim; emission is canonical (sorted attribute keys, shortest
round-trip decimals) and therefore byte-deterministic.
"""

from __future__ import annotations

import re

from .core import (
    GATE_TYPES, ID_RE, PLAYERS, AdtError, AdtGraph, BasicEvent, Gate,
    PacParams, QuantAnnotation,
)


class DotParseError(AdtError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t\r\n]+)
      | (?P<comment>//[^\n]*|\#[^\n]*|/\*.*?\*/)
      | (?P<arrow>->)
      | (?P<punct>[{}\[\];,=])
      | (?P<quoted>"(?:\\.|[^"\\])*")
      | (?P<word>[A-Za-z_][A-Za-z0-9_]*|-?\.?[0-9][0-9.eE+-]*)
    """,
    re.VERBOSE | re.DOTALL,
)


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, str, int, int]] = []
        line, col = 1, 1
        while self.pos < len(text):
            m = _TOKEN_RE.match(text, self.pos)
            if not m:
                raise DotParseError(f"unexpected character {text[self.pos]!r}", line, col)
            kind = m.lastgroup
            value = m.group()
            if kind not in ("ws", "comment"):
                self.tokens.append((kind, value, line, col))
            nl = value.count("\n")
            if nl:
                line += nl
                col = len(value) - value.rfind("\n")
            else:
                col += len(value)
            self.pos = m.end()
        self.tokens.append(("eof", "", line, col))
        self.idx = 0

    def peek(self):
        return self.tokens[self.idx]

    def next(self):
        tok = self.tokens[self.idx]
        if tok[0] != "eof":
            self.idx += 1
        return tok

    def expect(self, value: str):
        kind, val, line, col = self.next()
        if val != value:
            raise DotParseError(f"expected {value!r}, found {val!r}", line, col)


def _unquote(value: str) -> str:
    if value.startswith('"'):
        return re.sub(r'\\(.)', r'\1', value[1:-1])
    return value


_RECOGNIZED = {
    "type", "player", "label", "goal", "prob", "prob_eps", "prob_delta",
    "cost_s", "cost_f", "cost_eps_s", "cost_eps_f", "cost_delta",
    "delay_s", "delay_f", "delay_eps_s", "delay_eps_f", "delay_delta",
}

_NUMERIC = _RECOGNIZED - {"type", "player", "label", "goal"}


def _parse_attr_list(tok: _Tokenizer) -> dict[str, tuple[str, int, int]]:
    attrs: dict[str, tuple[str, int, int]] = {}
    tok.expect("[")
    while True:
        kind, val, line, col = tok.next()
        if val == "]":
            break
        if kind not in ("word", "quoted"):
            raise DotParseError(f"expected attribute name, found {val!r}", line, col)
        name = _unquote(val)
        tok.expect("=")
        vkind, vval, vline, vcol = tok.next()
        if vkind not in ("word", "quoted"):
            raise DotParseError(f"expected attribute value, found {vval!r}", vline, vcol)
        attrs[name] = (_unquote(vval), vline, vcol)
        if tok.peek()[1] in (",", ";"):
            tok.next()
    return attrs


def _number(name: str, raw: str, line: int, col: int) -> float:
    try:
        v = float(raw)
    except ValueError:
        raise DotParseError(f"attribute {name} must be numeric, got {raw!r}", line, col)
    return v


def _build_annotation(attrs: dict[str, tuple[str, int, int]]) -> QuantAnnotation:
    num: dict[str, float] = {}
    for name in _NUMERIC:
        if name in attrs:
            raw, line, col = attrs[name]
            num[name] = _number(name, raw, line, col)

    def pair(s, f, what):
        if (s in num) != (f in num):
            raise AdtError(f"{what} needs both succeed and fail components")
        return (num[s], num[f]) if s in num else None

    prob_pac = None
    if "prob_eps" in num or "prob_delta" in num:
        if "prob_eps" not in num or "prob_delta" not in num:
            raise AdtError("prob_eps and prob_delta must be given together")
        prob_pac = PacParams(num["prob_eps"], num["prob_delta"])
    return QuantAnnotation(
        prob=num.get("prob"),
        prob_pac=prob_pac,
        cost=pair("cost_s", "cost_f", "cost"),
        cost_eps=pair("cost_eps_s", "cost_eps_f", "cost eps"),
        cost_delta=num.get("cost_delta"),
        delay=pair("delay_s", "delay_f", "delay"),
        delay_eps=pair("delay_eps_s", "delay_eps_f", "delay eps"),
        delay_delta=num.get("delay_delta"),
    )


def parse_dot(text: str) -> AdtGraph:
    """Parse the emitted-DOT schema into a graph.

    Node attribute ``type`` selects BE or a gate type; ``goal="true"`` marks
    the goal (otherwise the unique sink is used); edge attribute
    ``kind="trigger"``/``"reset"`` selects the edge set.
    """
    tok = _Tokenizer(text)
    kind, val, line, col = tok.next()
    if val != "digraph":
        raise DotParseError(f"expected 'digraph', found {val!r}", line, col)
    if tok.peek()[1] != "{":
        tok.next()  # optional graph name
    tok.expect("{")

    node_attrs: dict[str, dict] = {}
    node_order: list[str] = []
    input_edges: list[tuple[str, str]] = []
    trigger_edges: set[tuple[str, str]] = set()
    reset_edges: set[tuple[str, str]] = set()

    while True:
        kind, val, line, col = tok.next()
        if val == "}":
            break
        if kind == "eof":
            raise DotParseError("unexpected end of input, missing '}'", line, col)
        if kind not in ("word", "quoted"):
            raise DotParseError(f"expected a node or edge statement, found {val!r}", line, col)
        name = _unquote(val)
        if not ID_RE.match(name):
            raise DotParseError(f"invalid vertex id {name!r}", line, col)
        if tok.peek()[1] == "->":
            tok.next()
            kind2, val2, line2, col2 = tok.next()
            if kind2 not in ("word", "quoted"):
                raise DotParseError(f"expected edge target, found {val2!r}", line2, col2)
            target = _unquote(val2)
            if not ID_RE.match(target):
                raise DotParseError(f"invalid vertex id {target!r}", line2, col2)
            attrs = _parse_attr_list(tok) if tok.peek()[1] == "[" else {}
            edge_kind = _unquote(attrs["kind"][0]) if "kind" in attrs else "input"
            if edge_kind == "input":
                input_edges.append((name, target))
            elif edge_kind == "trigger":
                trigger_edges.add((name, target))
            elif edge_kind == "reset":
                reset_edges.add((name, target))
            else:
                raise DotParseError(f"unknown edge kind {edge_kind!r}", line, col)
            for end in (name, target):
                if end not in node_attrs:
                    node_attrs[end] = {}
                    node_order.append(end)
        else:
            attrs = _parse_attr_list(tok) if tok.peek()[1] == "[" else {}
            if name in node_attrs and node_attrs[name]:
                raise DotParseError(f"duplicate node statement for {name!r}", line, col)
            if name not in node_attrs:
                node_order.append(name)
            node_attrs[name] = attrs
        if tok.peek()[1] == ";":
            tok.next()
    kind, val, line, col = tok.next()
    if kind != "eof":
        raise DotParseError(f"trailing content {val!r} after '}}'", line, col)

    vertices: dict[str, BasicEvent | Gate] = {}
    goals: list[str] = []
    for name in node_order:
        attrs = node_attrs[name]
        vtype = _unquote(attrs["type"][0]) if "type" in attrs else "BE"
        label = attrs["label"][0] if "label" in attrs else None
        if "goal" in attrs and attrs["goal"][0] == "true":
            goals.append(name)
        foreign = tuple(sorted(
            (k, v[0]) for k, v in attrs.items()
            if k not in _RECOGNIZED and k != "kind"
        ))
        if vtype == "BE":
            player = attrs["player"][0] if "player" in attrs else "attacker"
            if player not in PLAYERS:
                _, line, col = attrs["player"]
                raise DotParseError(f"unknown player {player!r}", line, col)
            try:
                ann = _build_annotation(attrs)
                vertices[name] = BasicEvent(player, ann, label, foreign)
            except DotParseError:
                raise
            except AdtError as exc:
                line, col = (attrs.get("type") or ("", 0, 0))[1:]
                raise DotParseError(f"node {name}: {exc}", line or 1, col or 1) from exc
        elif vtype in GATE_TYPES:
            vertices[name] = Gate(vtype, label, foreign)
        else:
            _, line, col = attrs["type"]
            raise DotParseError(f"unknown node type {vtype!r}", line, col)

    if len(goals) > 1:
        raise AdtError(f"multiple goal vertices: {', '.join(sorted(goals))}")
    if goals:
        goal = goals[0]
    else:
        sinks = [v for v in node_order if all(c != v for (c, _p) in input_edges)]
        if len(sinks) != 1:
            raise AdtError(
                "goal is ambiguous: mark exactly one vertex with goal=\"true\" "
                f"(found sinks: {', '.join(sorted(sinks)) or 'none'})")
        goal = sinks[0]

    return AdtGraph(
        vertices=vertices,
        input_edges=tuple(input_edges),
        trigger_edges=frozenset(trigger_edges),
        reset_edges=frozenset(reset_edges),
        goal=goal,
    )


# -- emission -------------------------------------------------------------------


def format_real(x: float) -> str:
    """Shortest decimal that round-trips to the same double (<= 17 digits)."""
    return repr(float(x))


def _node_attrs(graph: AdtGraph, vid: str) -> list[tuple[str, str]]:
    v = graph.vertices[vid]
    attrs: list[tuple[str, str]] = []
    if isinstance(v, BasicEvent):
        attrs.append(("type", "BE"))
        if v.player != "attacker":
            attrs.append(("player", v.player))
        ann = v.annotation
        if ann.prob is not None:
            attrs.append(("prob", format_real(ann.prob)))
        if ann.prob_pac is not None:
            attrs.append(("prob_eps", format_real(ann.prob_pac.eps)))
            attrs.append(("prob_delta", format_real(ann.prob_pac.delta)))
        for kind in ("cost", "delay"):
            pair = getattr(ann, kind)
            if pair is not None:
                attrs.append((f"{kind}_s", format_real(pair[0])))
                attrs.append((f"{kind}_f", format_real(pair[1])))
            eps = getattr(ann, f"{kind}_eps")
            if eps is not None:
                attrs.append((f"{kind}_eps_s", format_real(eps[0])))
                attrs.append((f"{kind}_eps_f", format_real(eps[1])))
            delta = getattr(ann, f"{kind}_delta")
            if delta is not None:
                attrs.append((f"{kind}_delta", format_real(delta)))
    else:
        attrs.append(("type", v.gate_type))
    if v.label is not None:
        attrs.append(("label", v.label))
    if vid == graph.goal:
        attrs.append(("goal", "true"))
    attrs.extend(v.foreign)
    return sorted(attrs)


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def emit_dot(graph: AdtGraph) -> str:
    """Canonical emission: nodes sorted by id, input edges in stored order,
    then trigger/reset edges sorted.  LF line endings, UTF-8."""
    lines = ["digraph adt {"]
    for vid in sorted(graph.vertices):
        attrs = _node_attrs(graph, vid)
        rendered = ", ".join(f'{k}="{_escape(v)}"' for k, v in attrs)
        lines.append(f"  {vid} [{rendered}];")
    for (c, p) in graph.input_edges:
        lines.append(f"  {c} -> {p};")
    for (g, b) in sorted(graph.trigger_edges):
        lines.append(f'  {g} -> {b} [kind="trigger"];')
    for (g, b) in sorted(graph.reset_edges):
        lines.append(f'  {g} -> {b} [kind="reset"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
