"""PAC value arithmetic and PAC-aware bottom-up analyses.

A PAC value (value, eps, delta) is an estimate whose distance from the true
value exceeds eps with probability at most delta.  Gate applications combine
eps with the midpoint-value rules below and delta with either the
independence rule 1-(1-d1)(1-d2) (default) or the union bound d1+d2.
"""

from __future__ import annotations

from dataclasses import dataclass

from .analysis import DOMAINS, analyze, eval_order, leaf_valuation
from .core import AdtGraph, AdtError, BasicEvent, feedback, has_errors

DELTA_RULES = ("independent", "union")


def combine_delta(d1: float, d2: float, rule: str = "independent") -> float:
    if rule == "independent":
        return 1.0 - (1.0 - d1) * (1.0 - d2)
    if rule == "union":
        return min(1.0, d1 + d2)
    raise AdtError(f"unknown delta rule {rule!r}")


@dataclass(frozen=True)
class PacValue:
    value: float
    eps: float
    delta: float

    def __post_init__(self):
        if self.eps < 0:
            raise AdtError(f"eps must be >= 0, got {self.eps}")
        if not 0.0 <= self.delta <= 1.0:
            raise AdtError(f"delta must be in [0,1], got {self.delta}")

    def interval(self, probability: bool = False) -> tuple[float, float]:
        """Clamped interval value +- eps (probabilities clamp into [0,1])."""
        lo = max(0.0, self.value - self.eps)
        hi = self.value + self.eps
        if probability:
            hi = min(hi, 1.0)
        return (lo, hi)


@dataclass(frozen=True)
class PacPair:
    """(succeed, fail) pair of PAC values for the cost/delay domains."""

    succeed: PacValue
    fail: PacValue


def pac_not(a: PacValue) -> PacValue:
    """1-x keeps the same imprecision and uncertainty."""
    return PacValue(1.0 - a.value, a.eps, a.delta)


def pac_mul(a: PacValue, b: PacValue, delta_rule: str = "independent") -> PacValue:
    eps = a.value * b.eps + b.value * a.eps + a.eps * b.eps
    return PacValue(a.value * b.value, eps, combine_delta(a.delta, b.delta, delta_rule))


def pac_prob_or(a: PacValue, b: PacValue, delta_rule: str = "independent") -> PacValue:
    value = a.value + b.value - a.value * b.value
    value = min(1.0, max(0.0, value))
    eps = a.eps + b.eps + a.value * b.eps + b.value * a.eps + a.eps * b.eps
    return PacValue(value, eps, combine_delta(a.delta, b.delta, delta_rule))


def pac_add(a: PacValue, b: PacValue, delta_rule: str = "independent") -> PacValue:
    return PacValue(a.value + b.value, a.eps + b.eps,
                    combine_delta(a.delta, b.delta, delta_rule))


def pac_max(a: PacValue, b: PacValue, delta_rule: str = "independent") -> PacValue:
    return PacValue(max(a.value, b.value), max(a.eps, b.eps),
                    combine_delta(a.delta, b.delta, delta_rule))


def pac_min(a: PacValue, b: PacValue, delta_rule: str = "independent") -> PacValue:
    return PacValue(min(a.value, b.value), max(a.eps, b.eps),
                    combine_delta(a.delta, b.delta, delta_rule))


# -- leaf extraction -----------------------------------------------------------


def pac_leaf_valuation(graph: AdtGraph, domain: str) -> dict:
    """Leaf PAC values per basic event; leaves without PAC decoration are
    treated as exact, i.e. (0,0)-PAC.  Missing quantities raise."""
    base, missing = leaf_valuation(graph, domain)
    needed = graph.dependency_closure(graph.goal)
    missing = [d for d in missing if d.vertex in needed]
    if missing:
        raise AdtError("missing annotations: " + "; ".join(d.message for d in missing))
    out: dict = {}
    for vid, val in base.items():
        ann = graph.vertices[vid].annotation
        if domain == "prob":
            if ann.prob_pac is not None:
                out[vid] = PacValue(val, ann.prob_pac.eps, ann.prob_pac.delta)
            else:
                out[vid] = PacValue(val, 0.0, 0.0)
        else:
            kind = domain.split("-")[0]
            eps = getattr(ann, f"{kind}_eps") or (0.0, 0.0)
            delta = getattr(ann, f"{kind}_delta")
            delta = 0.0 if delta is None else delta
            out[vid] = PacPair(PacValue(val[0], eps[0], delta),
                               PacValue(val[1], eps[1], delta))
    return out


# -- PAC folding ---------------------------------------------------------------


def _pair_binary(domain: str, gate_type: str, x: PacPair, y: PacPair,
                 delta_rule: str) -> PacPair:
    """One binary gate application on pairs.  Each child's delta enters the
    combination once, so both result components share one delta."""
    kind = domain.split("-")[1]  # "min" | "max"
    if gate_type == "AND":
        s_op, f_op = pac_add, (pac_min if kind == "min" else pac_max)
        if domain.startswith("delay"):
            s_op = pac_max
    else:  # OR
        if domain.startswith("cost"):
            s_op = pac_min if kind == "min" else pac_max
            f_op = pac_add
        else:
            s_op = pac_min if kind == "min" else pac_max
            f_op = pac_max
    s = s_op(x.succeed, y.succeed, delta_rule)
    f = f_op(x.fail, y.fail, delta_rule)
    delta = combine_delta(x.succeed.delta, y.succeed.delta, delta_rule)
    return PacPair(PacValue(s.value, s.eps, delta), PacValue(f.value, f.eps, delta))


def pac_gate_fold(domain: str, gate_type: str, values: list,
                  delta_rule: str = "independent"):
    if gate_type == "NOT":
        (x,) = values
        return pac_not(x) if domain == "prob" else PacPair(x.fail, x.succeed)
    if gate_type == "TR":
        (x,) = values
        return x
    acc = values[0]
    for v in values[1:]:
        if domain == "prob":
            op = pac_mul if gate_type == "AND" else pac_prob_or
            acc = op(acc, v, delta_rule)
        else:
            acc = _pair_binary(domain, gate_type, acc, v, delta_rule)
    return acc


def analyze_pac(graph: AdtGraph, domain: str,
                delta_rule: str = "independent") -> dict:
    """PAC-aware bottom-up analysis.

    Returns per-vertex :class:`PacValue` (probability) or :class:`PacPair`
    (cost/delay) over the goal's dependency closure.
    """
    if domain not in DOMAINS:
        raise AdtError(f"unknown domain {domain!r}")
    if delta_rule not in DELTA_RULES:
        raise AdtError(f"unknown delta rule {delta_rule!r}")
    shape = feedback(graph, "analysis-pac")
    if has_errors(shape):
        raise AdtError("graph is not analyzable: " + "; ".join(d.message for d in shape))

    needed = graph.dependency_closure(graph.goal)
    leaves = pac_leaf_valuation(graph, domain)

    memo: dict = {}
    for vid in eval_order(graph):
        if vid not in needed:
            continue
        v = graph.vertices[vid]
        if isinstance(v, BasicEvent):
            result = leaves[vid]
            src = graph.trigger_source_of(vid)
            if src is not None:
                result = pac_gate_fold(domain, "AND", [memo[src], result], delta_rule)
        else:
            result = pac_gate_fold(domain, v.gate_type,
                                   [memo[c] for c in graph.inputs_of(vid)], delta_rule)
        memo[vid] = result
    return memo
