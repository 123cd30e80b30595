"""Attack-defense tree data model, validation, traversal and per-target feedback.

The graph is a DAG whose sources are basic events (owned by the attacker or
the defender) and whose inner vertices are gates.  Input edges run from a
child vertex to the gate consuming it ("inputs are predecessors"); the
designated ``goal`` vertex is the analyzed root.  Everything here is
immutable by convention: operations return new graphs or plain data.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

ID_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

GATE_TYPES = ("AND", "OR", "NOT", "SAND", "SOR", "TR", "RE")
BINARY_GATES = frozenset({"AND", "OR", "SAND", "SOR"})
UNARY_GATES = frozenset({"NOT", "TR", "RE"})

PLAYERS = ("attacker", "defender")

# Targets accepted by feedback().
TARGETS = (
    "analysis-bottomup",
    "analysis-pac",
    "export-xml",
    "export-prism",
    "export-uppaal",
)

#: Closed catalogue of diagnostic codes (documented in the README).
DIAGNOSTIC_CODES = {
    "E_ID_FORMAT": "vertex id is not a valid identifier",
    "E_EDGE_ENDPOINT": "edge references an unknown vertex",
    "E_CYCLE": "input edges contain a cycle",
    "E_GOAL": "goal vertex missing or not a sink",
    "E_BE_SOURCE": "basic event has input edges",
    "E_ARITY": "gate has the wrong number of inputs",
    "E_TRIGGER_EDGE": "trigger/reset edge with wrong origin or terminus",
    "E_ANALYSIS_SHAPE": "model shape or operator unsupported by bottom-up analysis",
    "E_TR_SHARED": "basic event triggered by more than one vertex",
    "W_XML_MULTIROOT": "multiple roots; XML export keeps only the goal tree",
    "E_XML_UNSUPPORTED": "operator or player nesting not representable in ADTool XML",
    "W_XML_PAC": "PAC parameters are dropped on XML export",
    "E_PRISM_UNSUPPORTED": "operator unsupported by the PRISM export",
    "E_PRISM_SHAPE": "model is not a tree; PRISM export needs tree shape",
    "E_UPPAAL_SHAPE": "model is not a tree; UPPAAL export needs tree shape",
    "E_MISSING_ANNOTATION": "basic event lacks the quantity needed here",
    "E_EMIT_SYNTAX": "emitted file fails the subset grammar",
    "E_EMIT_UNDECLARED": "emitted file uses an undeclared identifier",
    "E_EMIT_WEIGHTS": "probabilistic branch weights do not sum to 1",
    "E_EMIT_STRUCTURE": "emitted file is missing a required element",
    "E_EMIT_QUERY": "query file does not reference the emitted goal",
}


class AdtError(ValueError):
    """Raised for hard contract violations (invalid construction or misuse)."""


@dataclass(frozen=True)
class Diagnostic:
    code: str
    severity: str  # "error" | "warning" | "info"
    message: str
    vertex: str | None = None
    target: str | None = None

    def __post_init__(self):
        if self.code not in DIAGNOSTIC_CODES:
            raise AdtError(f"unknown diagnostic code {self.code!r}")

    def to_json(self) -> dict:
        d = {"code": self.code, "severity": self.severity, "message": self.message}
        if self.vertex is not None:
            d["vertex"] = self.vertex
        if self.target is not None:
            d["target"] = self.target
        return d


def has_errors(diags) -> bool:
    return any(d.severity == "error" for d in diags)


@dataclass(frozen=True)
class PacParams:
    eps: float
    delta: float

    def __post_init__(self):
        if self.eps < 0:
            raise AdtError(f"eps must be >= 0, got {self.eps}")
        if not 0.0 <= self.delta <= 1.0:
            raise AdtError(f"delta must be in [0,1], got {self.delta}")


@dataclass(frozen=True)
class QuantAnnotation:
    """Per-basic-event quantities.

    ``prob`` is the success probability; ``cost`` and ``delay`` are
    (succeed, fail) pairs.  PAC decoration is optional: probability carries
    one (eps, delta); cost and delay carry per-component eps and one shared
    delta each.
    """

    prob: float | None = None
    prob_pac: PacParams | None = None
    cost: tuple[float, float] | None = None
    cost_eps: tuple[float, float] | None = None
    cost_delta: float | None = None
    delay: tuple[float, float] | None = None
    delay_eps: tuple[float, float] | None = None
    delay_delta: float | None = None

    def __post_init__(self):
        if self.prob is not None and not 0.0 <= self.prob <= 1.0:
            raise AdtError(f"prob must be in [0,1], got {self.prob}")
        for name in ("cost", "delay"):
            pair = getattr(self, name)
            if pair is not None and (pair[0] < 0 or pair[1] < 0):
                raise AdtError(f"{name} components must be >= 0, got {pair}")
            eps = getattr(self, f"{name}_eps")
            delta = getattr(self, f"{name}_delta")
            if eps is not None:
                if eps[0] < 0 or eps[1] < 0:
                    raise AdtError(f"{name} eps must be >= 0, got {eps}")
                if delta is None:
                    raise AdtError(f"{name}_eps given without {name}_delta")
            if delta is not None and not 0.0 <= delta <= 1.0:
                raise AdtError(f"{name}_delta must be in [0,1], got {delta}")
        if self.prob_pac is not None and self.prob is None:
            raise AdtError("prob PAC params given without prob")

    def is_empty(self) -> bool:
        return self.prob is None and self.cost is None and self.delay is None

    def has_pac(self) -> bool:
        return (
            self.prob_pac is not None
            or self.cost_eps is not None
            or self.delay_eps is not None
        )


@dataclass(frozen=True)
class BasicEvent:
    player: str = "attacker"
    annotation: QuantAnnotation = field(default_factory=QuantAnnotation)
    label: str | None = None
    foreign: tuple[tuple[str, str], ...] = ()  # preserved unknown attributes

    def __post_init__(self):
        if self.player not in PLAYERS:
            raise AdtError(f"unknown player {self.player!r}")


@dataclass(frozen=True)
class Gate:
    gate_type: str
    label: str | None = None
    foreign: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if self.gate_type not in GATE_TYPES:
            raise AdtError(f"unknown gate type {self.gate_type!r}")


@dataclass(frozen=True)
class AdtGraph:
    """Vertices plus ordered input edges, trigger/reset edges, and the goal."""

    vertices: dict[str, BasicEvent | Gate]
    input_edges: tuple[tuple[str, str], ...]  # (child, parent), order significant
    trigger_edges: frozenset[tuple[str, str]] = frozenset()  # (TR gate, BE)
    reset_edges: frozenset[tuple[str, str]] = frozenset()  # (RE gate, BE)
    goal: str = ""

    def __post_init__(self):
        object.__setattr__(self, "trigger_edges", frozenset(self.trigger_edges))
        object.__setattr__(self, "reset_edges", frozenset(self.reset_edges))
        object.__setattr__(self, "input_edges", tuple(self.input_edges))

    # -- convenience accessors ------------------------------------------------

    def is_basic(self, vid: str) -> bool:
        return isinstance(self.vertices[vid], BasicEvent)

    def basic_events(self) -> list[str]:
        return sorted(v for v in self.vertices if self.is_basic(v))

    def inputs_of(self, vid: str) -> list[str]:
        return [c for (c, p) in self.input_edges if p == vid]

    def parents_of(self, vid: str) -> list[str]:
        return [p for (c, p) in self.input_edges if c == vid]

    def trigger_source_of(self, be: str) -> str | None:
        """The TR gate triggering ``be``, if any (unique under analysis shape)."""
        sources = sorted(t for (t, b) in self.trigger_edges if b == be)
        return sources[0] if sources else None

    def subtree(self, vid: str) -> set[str]:
        """All vertices reachable downward from ``vid`` via input edges."""
        seen: set[str] = set()
        stack = [vid]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(self.inputs_of(v))
        return seen

    def dependency_closure(self, vid: str) -> set[str]:
        """Vertices the value of ``vid`` depends on: inputs plus, for
        triggered basic events, the triggering TR gate's subtree."""
        seen: set[str] = set()
        stack = [vid]
        while stack:
            v = stack.pop()
            if v in seen or v not in self.vertices:
                continue
            seen.add(v)
            stack.extend(self.inputs_of(v))
            if self.is_basic(v):
                src = self.trigger_source_of(v)
                if src is not None:
                    stack.append(src)
        return seen


# -- validation ---------------------------------------------------------------


def validate(graph: AdtGraph) -> list[Diagnostic]:
    """Check all structural invariants; one diagnostic per violation.

    Accepts arbitrary candidate graphs: never raises, never assumes the
    invariants it is checking.
    """
    diags: list[Diagnostic] = []

    def err(code, message, vertex=None):
        diags.append(Diagnostic(code, "error", message, vertex=vertex))

    for vid in sorted(graph.vertices):
        if not ID_RE.match(vid):
            err("E_ID_FORMAT", f"vertex id {vid!r} is not a valid identifier", vid)

    known = graph.vertices.keys()
    for (c, p) in graph.input_edges:
        for end in (c, p):
            if end not in known:
                err("E_EDGE_ENDPOINT", f"input edge {c}->{p} references unknown vertex {end!r}")
    for name, edges in (("trigger", graph.trigger_edges), ("reset", graph.reset_edges)):
        for (g, b) in sorted(edges):
            if g not in known or b not in known:
                err("E_EDGE_ENDPOINT", f"{name} edge {g}->{b} references an unknown vertex")

    if graph.goal not in known:
        err("E_GOAL", f"goal {graph.goal!r} is not a vertex")
    elif graph.parents_of(graph.goal):
        err("E_GOAL", f"goal {graph.goal!r} is not a sink", graph.goal)

    # Acyclicity over input edges (restricted to known endpoints).
    indeg = {v: 0 for v in known}
    succs: dict[str, list[str]] = {v: [] for v in known}
    for (c, p) in graph.input_edges:
        if c in known and p in known:
            indeg[p] += 1
            succs[c].append(p)
    ready = [v for v, d in indeg.items() if d == 0]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for nxt in succs[v]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                ready.append(nxt)
    if seen != len(known):
        cyclic = sorted(v for v, d in indeg.items() if d > 0)
        err("E_CYCLE", f"input edges contain a cycle through {', '.join(cyclic)}")

    for vid in sorted(graph.vertices):
        v = graph.vertices[vid]
        n_inputs = len(graph.inputs_of(vid))
        if isinstance(v, BasicEvent):
            if n_inputs:
                err("E_BE_SOURCE", f"basic event {vid} has {n_inputs} input edge(s)", vid)
        else:
            if v.gate_type in BINARY_GATES and n_inputs < 2:
                err("E_ARITY", f"{v.gate_type} gate {vid} needs >= 2 inputs, has {n_inputs}", vid)
            elif v.gate_type in UNARY_GATES and n_inputs != 1:
                err("E_ARITY", f"{v.gate_type} gate {vid} needs exactly 1 input, has {n_inputs}", vid)

    for (g, b) in sorted(graph.trigger_edges):
        if g in known and not (isinstance(graph.vertices[g], Gate) and graph.vertices[g].gate_type == "TR"):
            err("E_TRIGGER_EDGE", f"trigger edge origin {g} is not a TR gate", g)
        if b in known and not graph.is_basic(b):
            err("E_TRIGGER_EDGE", f"trigger edge terminus {b} is not a basic event", b)
    for (g, b) in sorted(graph.reset_edges):
        if g in known and not (isinstance(graph.vertices[g], Gate) and graph.vertices[g].gate_type == "RE"):
            err("E_TRIGGER_EDGE", f"reset edge origin {g} is not a RE gate", g)
        if b in known and not graph.is_basic(b):
            err("E_TRIGGER_EDGE", f"reset edge terminus {b} is not a basic event", b)

    return diags


def topo_order(graph: AdtGraph) -> list[str]:
    """Deterministic topological order over input edges (lexicographic ties)."""
    import heapq

    diags = validate(graph)
    if has_errors(diags):
        raise AdtError("topo_order on invalid graph: " + "; ".join(d.message for d in diags))

    indeg = {v: len(graph.inputs_of(v)) for v in graph.vertices}
    succs: dict[str, list[str]] = {v: [] for v in graph.vertices}
    for (c, p) in graph.input_edges:
        succs[c].append(p)
    heap = sorted(v for v, d in indeg.items() if d == 0)
    heapq.heapify(heap)
    order: list[str] = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for nxt in succs[v]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                heapq.heappush(heap, nxt)
    return order


# -- per-target feedback -------------------------------------------------------

ANALYSIS_OPERATORS = frozenset({"AND", "OR", "NOT", "TR"})
XML_OPERATORS = frozenset({"AND", "OR", "SAND", "NOT"})
PRISM_OPERATORS = frozenset({"AND", "OR", "NOT"})


def _tree_shape_offenders(graph: AdtGraph) -> list[str]:
    """Vertices with more than one outgoing input edge (shared subtrees)."""
    counts: dict[str, int] = {}
    for (c, _p) in graph.input_edges:
        counts[c] = counts.get(c, 0) + 1
    return sorted(v for v, n in counts.items() if n > 1)


def feedback(graph: AdtGraph, target: str) -> list[Diagnostic]:
    """Incompatibilities between the model and a target's restrictions.

    Empty list means the target accepts the model.  ``target`` is one of
    :data:`TARGETS`.
    """
    if target not in TARGETS:
        raise AdtError(f"unknown target {target!r}")
    base = validate(graph)
    if has_errors(base):
        raise AdtError("feedback requires a valid graph: " + "; ".join(d.message for d in base))

    diags: list[Diagnostic] = []

    def add(code, severity, message, vertex=None):
        diags.append(Diagnostic(code, severity, message, vertex=vertex, target=target))

    if target in ("analysis-bottomup", "analysis-pac"):
        for v in _tree_shape_offenders(graph):
            add("E_ANALYSIS_SHAPE", "error",
                f"vertex {v} feeds more than one gate; analysis needs tree shape", v)
        for vid in sorted(graph.vertices):
            v = graph.vertices[vid]
            if isinstance(v, Gate) and v.gate_type not in ANALYSIS_OPERATORS:
                add("E_ANALYSIS_SHAPE", "error",
                    f"operator {v.gate_type} at {vid} is not supported by bottom-up analysis", vid)
        trig_count: dict[str, int] = {}
        for (_g, b) in graph.trigger_edges:
            trig_count[b] = trig_count.get(b, 0) + 1
        for b in sorted(b for b, n in trig_count.items() if n > 1):
            add("E_TR_SHARED", "error",
                f"basic event {b} is triggered by {trig_count[b]} vertices", b)
        main = graph.subtree(graph.goal)
        tr_gates = sorted(
            vid for vid, v in graph.vertices.items()
            if isinstance(v, Gate) and v.gate_type == "TR"
        )
        for t in tr_gates:
            if graph.parents_of(t):
                add("E_ANALYSIS_SHAPE", "error",
                    f"TR gate {t} must not feed another gate", t)
        seen_tr: set[str] = set()
        for t in tr_gates:
            sub = graph.subtree(t)
            overlap = sorted((sub & main) | (sub & seen_tr))
            if overlap:
                add("E_ANALYSIS_SHAPE", "error",
                    f"TR subtree at {t} overlaps other trees via {', '.join(overlap)}", t)
            seen_tr |= sub

    elif target == "export-xml":
        sinks = sorted(v for v in graph.vertices if not graph.parents_of(v))
        if len(sinks) > 1:
            others = [s for s in sinks if s != graph.goal]
            add("W_XML_MULTIROOT", "warning",
                f"multiple roots ({', '.join(sinks)}); export keeps only the goal tree "
                f"and omits {', '.join(others)}")
        for v in _tree_shape_offenders(graph):
            if v in graph.subtree(graph.goal):
                add("E_XML_UNSUPPORTED", "error",
                    f"vertex {v} feeds more than one gate; XML export needs a strict tree", v)
        # Walk the goal tree tracking the player context: attacker at the root,
        # flipped below every NOT.  A NOT is exportable as an opposite-player
        # countermeasure only if the events below it actually switch sides.
        def walk(vid: str, context: str):
            v = graph.vertices[vid]
            if isinstance(v, BasicEvent):
                if v.player != context:
                    add("E_XML_UNSUPPORTED", "error",
                        f"basic event {vid} ({v.player}) cannot sit in a {context} "
                        "position of the XML tree", vid)
                if v.annotation.has_pac():
                    add("W_XML_PAC", "warning",
                        f"PAC parameters on {vid} are dropped by the XML export", vid)
                return
            if v.gate_type not in XML_OPERATORS:
                add("E_XML_UNSUPPORTED", "error",
                    f"operator {v.gate_type} at {vid} is not representable in ADTool XML", vid)
                return
            nxt = _other_player(context) if v.gate_type == "NOT" else context
            for c in graph.inputs_of(vid):
                walk(c, nxt)

        walk(graph.goal, "attacker")

    elif target == "export-prism":
        for v in _tree_shape_offenders(graph):
            add("E_PRISM_SHAPE", "error",
                f"vertex {v} feeds more than one gate; PRISM export needs tree shape", v)
        for vid in sorted(graph.vertices):
            v = graph.vertices[vid]
            if isinstance(v, Gate) and v.gate_type not in PRISM_OPERATORS:
                add("E_PRISM_UNSUPPORTED", "error",
                    f"operator {v.gate_type} at {vid} is not supported by the PRISM export", vid)

    elif target == "export-uppaal":
        for v in _tree_shape_offenders(graph):
            add("E_UPPAAL_SHAPE", "error",
                f"vertex {v} feeds more than one gate; UPPAAL export needs tree shape", v)

    return diags


def _other_player(p: str) -> str:
    return "defender" if p == "attacker" else "attacker"


# -- combination ---------------------------------------------------------------


def merge(a: AdtGraph, b: AdtGraph, root_type: str) -> AdtGraph:
    """Combine two models under a fresh AND/OR root over their goals.

    Vertex ids from ``b`` that collide with ids in ``a`` are suffix-renamed.
    """
    if root_type not in ("AND", "OR"):
        raise AdtError(f"merge root must be AND or OR, got {root_type!r}")
    for name, g in (("first", a), ("second", b)):
        if has_errors(validate(g)):
            raise AdtError(f"merge: {name} graph is invalid")

    rename: dict[str, str] = {}
    taken = set(a.vertices)
    for vid in b.vertices:
        new = vid
        k = 2
        while new in taken:
            new = f"{vid}_{k}"
            k += 1
        rename[vid] = new
        taken.add(new)

    root = "root"
    k = 2
    while root in taken:
        root = f"root_{k}"
        k += 1

    vertices: dict[str, BasicEvent | Gate] = dict(a.vertices)
    for vid, v in b.vertices.items():
        vertices[rename[vid]] = v
    vertices[root] = Gate(root_type)

    input_edges = list(a.input_edges)
    input_edges += [(rename[c], rename[p]) for (c, p) in b.input_edges]
    input_edges += [(a.goal, root), (rename[b.goal], root)]

    return AdtGraph(
        vertices=vertices,
        input_edges=tuple(input_edges),
        trigger_edges=frozenset(a.trigger_edges)
        | {(rename[g], rename[t]) for (g, t) in b.trigger_edges},
        reset_edges=frozenset(a.reset_edges)
        | {(rename[g], rename[t]) for (g, t) in b.reset_edges},
        goal=root,
    )


def with_annotation(graph: AdtGraph, vid: str, annotation: QuantAnnotation) -> AdtGraph:
    """Return a copy of ``graph`` with the annotation of one basic event replaced."""
    v = graph.vertices[vid]
    if not isinstance(v, BasicEvent):
        raise AdtError(f"{vid} is not a basic event")
    vertices = dict(graph.vertices)
    vertices[vid] = replace(v, annotation=annotation)
    return replace(graph, vertices=vertices)
