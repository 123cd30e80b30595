"""Exact bottom-up analyses: success probability, min/max cost, min/max delay.

Values are folded leaf-to-root over the input-edge order.  Probability values
are scalars in [0,1]; cost and delay values are (succeed, fail) pairs.  A
triggered basic event combines the triggering gate's value with its own leaf
value under the AND rule.
"""

from __future__ import annotations

from .core import AdtGraph, AdtError, BasicEvent, Diagnostic, feedback, has_errors

DOMAINS = ("prob", "cost-min", "cost-max", "delay-min", "delay-max")


def _and_pair(domain: str, x, y):
    if domain == "cost-min":
        return (x[0] + y[0], min(x[1], y[1]))
    if domain == "cost-max":
        return (x[0] + y[0], max(x[1], y[1]))
    if domain == "delay-min":
        return (max(x[0], y[0]), min(x[1], y[1]))
    if domain == "delay-max":
        return (max(x[0], y[0]), max(x[1], y[1]))
    raise AdtError(f"unknown pair domain {domain!r}")


def _or_pair(domain: str, x, y):
    if domain == "cost-min":
        return (min(x[0], y[0]), x[1] + y[1])
    if domain == "cost-max":
        return (max(x[0], y[0]), x[1] + y[1])
    if domain == "delay-min":
        return (min(x[0], y[0]), max(x[1], y[1]))
    if domain == "delay-max":
        return (max(x[0], y[0]), max(x[1], y[1]))
    raise AdtError(f"unknown pair domain {domain!r}")


def gate_fold(domain: str, gate_type: str, values: list):
    """Apply a gate's rule pairwise left-to-right over its input values."""
    if gate_type == "NOT":
        (x,) = values
        return 1.0 - x if domain == "prob" else (x[1], x[0])
    if gate_type == "TR":
        (x,) = values
        return x
    acc = values[0]
    for v in values[1:]:
        if domain == "prob":
            acc = acc * v if gate_type == "AND" else acc + v - acc * v
        else:
            acc = _and_pair(domain, acc, v) if gate_type == "AND" else _or_pair(domain, acc, v)
    return acc


def leaf_valuation(graph: AdtGraph, domain: str) -> tuple[dict, list[Diagnostic]]:
    """Project annotations into the domain's values; report missing ones."""
    if domain not in DOMAINS:
        raise AdtError(f"unknown domain {domain!r}")
    values: dict = {}
    missing: list[Diagnostic] = []
    for vid in graph.basic_events():
        ann = graph.vertices[vid].annotation
        if domain == "prob":
            val = ann.prob
        elif domain.startswith("cost"):
            val = ann.cost
        else:
            val = ann.delay
        if val is None:
            missing.append(Diagnostic(
                "E_MISSING_ANNOTATION", "error",
                f"basic event {vid} has no {domain.split('-')[0]} annotation",
                vertex=vid))
        else:
            values[vid] = val
    return values, missing


def analyze(graph: AdtGraph, domain: str) -> dict:
    """Exact bottom-up analysis; per-vertex values over the goal's dependency
    closure (the goal subtree plus any triggering subtrees it needs)."""
    if domain not in DOMAINS:
        raise AdtError(f"unknown domain {domain!r}")
    shape = feedback(graph, "analysis-bottomup")
    if has_errors(shape):
        raise AdtError("graph is not analyzable: " + "; ".join(d.message for d in shape))

    needed = graph.dependency_closure(graph.goal)
    leaves, missing = leaf_valuation(graph, domain)
    missing = [d for d in missing if d.vertex in needed]
    if missing:
        raise AdtError("missing annotations: " + "; ".join(d.message for d in missing))

    memo: dict = {}
    for vid in eval_order(graph):
        if vid not in needed:
            continue
        v = graph.vertices[vid]
        if isinstance(v, BasicEvent):
            result = leaves[vid]
            src = graph.trigger_source_of(vid)
            if src is not None:
                result = gate_fold(domain, "AND", [memo[src], result])
        else:
            result = gate_fold(domain, v.gate_type, [memo[c] for c in graph.inputs_of(vid)])
        memo[vid] = result
    return memo


def eval_order(graph: AdtGraph) -> list[str]:
    """Dependency-respecting evaluation order: input edges plus, for each
    triggered basic event, a dependency on its triggering TR gate.
    Deterministic (lexicographic ties); iterative, so deep trees are fine."""
    import heapq

    deps: dict[str, list[str]] = {v: graph.inputs_of(v) for v in graph.vertices}
    for (g, b) in graph.trigger_edges:
        deps[b].append(g)
    indeg = {v: len(ds) for v, ds in deps.items()}
    succs: dict[str, list[str]] = {v: [] for v in graph.vertices}
    for v, ds in deps.items():
        for d in ds:
            succs[d].append(v)
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
    if len(order) != len(graph.vertices):
        raise AdtError("trigger edges create a cyclic dependency")
    return order
