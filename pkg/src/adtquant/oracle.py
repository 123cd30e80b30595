"""Reference semantics used to verify the bottom-up analyses.

Three independent routes: direct Boolean evaluation of assignments, the
powerset bottom-up semantics (satisfying/unsatisfying assignment sets), and
brute-force enumeration over all assignments for probability, cost and delay.
All of it is exponential and capped at 20 basic events.
"""

from __future__ import annotations

from itertools import combinations

from .core import AdtGraph, AdtError, BasicEvent, feedback, has_errors

MAX_EVENTS = 20


def _check_shape(graph: AdtGraph, unsafe: bool = False):
    shape = feedback(graph, "analysis-bottomup")
    if has_errors(shape):
        raise AdtError("oracle needs an analyzable graph: "
                       + "; ".join(d.message for d in shape))
    n = len(graph.basic_events())
    if n > MAX_EVENTS and not unsafe:
        raise AdtError(f"{n} basic events exceeds the enumeration cap of {MAX_EVENTS}")


class _Prep:
    """Precomputed traversal context so per-assignment loops stay cheap."""

    def __init__(self, graph: AdtGraph):
        from .analysis import eval_order

        self.graph = graph
        self.order = eval_order(graph)
        self.inputs = {v: graph.inputs_of(v) for v in graph.vertices}
        self.trigger = {b: graph.trigger_source_of(b) for b in graph.basic_events()}
        self.events = graph.basic_events()

    def truth(self, true_set: frozenset[str]) -> dict[str, bool]:
        g = self.graph
        memo: dict[str, bool] = {}
        for vid in self.order:
            v = g.vertices[vid]
            if isinstance(v, BasicEvent):
                val = vid in true_set
                src = self.trigger[vid]
                if src is not None:
                    val = val and memo[src]
            elif v.gate_type == "AND":
                val = all(memo[c] for c in self.inputs[vid])
            elif v.gate_type == "OR":
                val = any(memo[c] for c in self.inputs[vid])
            elif v.gate_type == "NOT":
                val = not memo[self.inputs[vid][0]]
            else:  # TR
                val = memo[self.inputs[vid][0]]
            memo[vid] = val
        return memo


def bool_eval(graph: AdtGraph, true_set: frozenset[str] | set[str]) -> dict[str, bool]:
    """Boolean bottom-up value of every vertex for one assignment.

    ``true_set`` lists the basic events set to true; all others are false.
    A triggered basic event is the conjunction of its trigger source and its
    own assigned value.
    """
    _check_shape(graph)
    return _Prep(graph).truth(frozenset(true_set))


# -- powerset semantics ---------------------------------------------------------

SetOfSets = frozenset  # of frozensets of vertex ids


def _otimes(x1: SetOfSets, x2: SetOfSets) -> SetOfSets:
    return frozenset(a | b for a in x1 for b in x2)


def _and_pair(x, y):
    (x11, x12), (x21, x22) = x, y
    sat = _otimes(x11, x21)
    unsat = (x12 | x22 | _otimes(x12, x22) | _otimes(x12, x21) | _otimes(x11, x22))
    return (sat, unsat)


def _or_pair(x, y):
    (x11, x12), (x21, x22) = x, y
    sat = (x11 | x21 | _otimes(x11, x21) | _otimes(x12, x21) | _otimes(x11, x22))
    unsat = _otimes(x12, x22)
    return (sat, unsat)


def powerset_eval(graph: AdtGraph, unsafe: bool = False) -> dict[str, tuple[SetOfSets, SetOfSets]]:
    """Per-vertex (satisfying, unsatisfying) assignment sets over the
    vertex's own events.  Assignments list only the events set to true."""
    _check_shape(graph, unsafe)
    prep = _Prep(graph)

    memo: dict = {}
    for vid in prep.order:
        v = graph.vertices[vid]
        if isinstance(v, BasicEvent):
            val = (frozenset({frozenset({vid})}), frozenset({frozenset()}))
            src = prep.trigger[vid]
            if src is not None:
                val = _and_pair(memo[src], val)
        elif v.gate_type in ("AND", "OR"):
            op = _and_pair if v.gate_type == "AND" else _or_pair
            acc = memo[prep.inputs[vid][0]]
            for c in prep.inputs[vid][1:]:
                acc = op(acc, memo[c])
            val = acc
        elif v.gate_type == "NOT":
            sat, unsat = memo[prep.inputs[vid][0]]
            val = (unsat, sat)
        else:  # TR
            val = memo[prep.inputs[vid][0]]
        memo[vid] = val
    return memo


def event_scope(graph: AdtGraph, vertex: str) -> set[str]:
    """The basic events a vertex's value ranges over (its dependency closure)."""
    return {v for v in graph.dependency_closure(vertex) if graph.is_basic(v)}


# -- enumeration oracles ---------------------------------------------------------


def _assignments(events: list[str]):
    for k in range(len(events) + 1):
        for combo in combinations(events, k):
            yield frozenset(combo)


def _probs_of(graph: AdtGraph, events) -> dict[str, float]:
    probs = {}
    for b in events:
        p = graph.vertices[b].annotation.prob
        if p is None:
            raise AdtError(f"basic event {b} has no probability")
        probs[b] = p
    return probs


def enum_prob(graph: AdtGraph, vertex: str, unsafe: bool = False) -> float:
    """Probability of ``vertex`` by summing over all 2^n assignments.

    Deliberately independent of the powerset route: evaluates the Boolean
    semantics per assignment.
    """
    _check_shape(graph, unsafe)
    prep = _Prep(graph)
    probs = _probs_of(graph, prep.events)
    total = 0.0
    for true_set in _assignments(prep.events):
        if prep.truth(true_set)[vertex]:
            w = 1.0
            for b in prep.events:
                w *= probs[b] if b in true_set else 1.0 - probs[b]
            total += w
    return total


def prob_from_powerset(graph: AdtGraph, vertex: str, unsafe: bool = False) -> float:
    """Second, powerset-based probability oracle: sum the weights of the
    satisfying assignments over the vertex's event scope."""
    sat, _unsat = powerset_eval(graph, unsafe)[vertex]
    scope = sorted(event_scope(graph, vertex))
    probs = _probs_of(graph, scope)
    total = 0.0
    for x in sat:
        w = 1.0
        for b in scope:
            w *= probs[b] if b in x else 1.0 - probs[b]
        total += w
    return total


def unsat_prob_from_powerset(graph: AdtGraph, vertex: str, unsafe: bool = False) -> float:
    """Weight of the unsatisfying assignments (should equal 1 - sat weight)."""
    _sat, unsat = powerset_eval(graph, unsafe)[vertex]
    scope = sorted(event_scope(graph, vertex))
    probs = _probs_of(graph, scope)
    total = 0.0
    for x in unsat:
        w = 1.0
        for b in scope:
            w *= probs[b] if b in x else 1.0 - probs[b]
        total += w
    return total


def _witness(prep: _Prep, truth: dict[str, bool], true_set: frozenset[str],
             leaf_pair, agg) -> float:
    """Assignment-scoped goal value mirroring the bottom-up recursion.

    ``leaf_pair(vid)`` gives a basic event's (succeed, fail) value; ``agg``
    aggregates jointly-deciding children (sum for cost, max for delay).  A
    gate decided by a single side (failed AND, succeeded OR) takes the min
    over the children that decided it.
    """
    graph = prep.graph

    def combine_and(statuses_values):
        if all(s for s, _ in statuses_values):
            return agg(v for _, v in statuses_values)
        return min(v for s, v in statuses_values if not s)

    memo: dict[str, float] = {}
    for vid in prep.order:
        v = graph.vertices[vid]
        if isinstance(v, BasicEvent):
            own_status = vid in true_set
            own = leaf_pair(vid)[0] if own_status else leaf_pair(vid)[1]
            src = prep.trigger[vid]
            if src is None:
                memo[vid] = own
            else:
                memo[vid] = combine_and([(truth[src], memo[src]), (own_status, own)])
        elif v.gate_type == "AND":
            memo[vid] = combine_and([(truth[c], memo[c]) for c in prep.inputs[vid]])
        elif v.gate_type == "OR":
            kids = prep.inputs[vid]
            if truth[vid]:
                memo[vid] = min(memo[c] for c in kids if truth[c])
            else:
                memo[vid] = agg(memo[c] for c in kids)
        else:  # NOT, TR: value carried through (NOT only flips the status)
            memo[vid] = memo[prep.inputs[vid][0]]
    return memo[graph.goal]


def _enum_pair(graph: AdtGraph, leaf_pair, agg, unsafe: bool = False) -> tuple[float, float]:
    _check_shape(graph, unsafe)
    prep = _Prep(graph)
    best_s = None
    best_f = None
    for true_set in _assignments(prep.events):
        truth = prep.truth(true_set)
        val = _witness(prep, truth, true_set, leaf_pair, agg)
        if truth[graph.goal]:
            best_s = val if best_s is None else min(best_s, val)
        else:
            best_f = val if best_f is None else min(best_f, val)
    if best_s is None or best_f is None:
        raise AdtError("tree is constant: no satisfying or no unsatisfying assignment")
    return (best_s, best_f)


def enum_min_cost(graph: AdtGraph, unsafe: bool = False) -> tuple[float, float]:
    """(min cost of a successful attack, min cost of a failing one), scored
    by the witness recursion: a succeeding AND pays all children, a failing
    AND pays its cheapest failed child; OR dually."""
    return _enum_pair(graph, lambda vid: _pair_of(graph, vid, "cost"), sum, unsafe)


def witness_delay_min(graph: AdtGraph, unsafe: bool = False) -> tuple[float, float]:
    """Delay twin of :func:`enum_min_cost`: a succeeding AND waits for its
    slowest child (parallel attempts), a failing AND is decided by its
    fastest failed child; OR dually."""
    return _enum_pair(graph, lambda vid: _pair_of(graph, vid, "delay"), max, unsafe)


def flat_min_cost_success(graph: AdtGraph, unsafe: bool = False) -> float:
    """Flat-sum success cost: min over satisfying assignments of the summed
    success costs of the events set to true.  Agrees with the witness oracle
    on NOT-free trees; kept separate because NOT makes the flat attribution
    ambiguous."""
    _check_shape(graph, unsafe)
    prep = _Prep(graph)
    best = None
    for true_set in _assignments(prep.events):
        if prep.truth(true_set)[graph.goal]:
            total = sum(_pair_of(graph, b, "cost")[0] for b in true_set)
            best = total if best is None else min(best, total)
    if best is None:
        raise AdtError("no satisfying assignment")
    return best


def _pair_of(graph: AdtGraph, vid: str, kind: str) -> tuple[float, float]:
    pair = getattr(graph.vertices[vid].annotation, kind)
    if pair is None:
        raise AdtError(f"basic event {vid} has no {kind} annotation")
    return pair
