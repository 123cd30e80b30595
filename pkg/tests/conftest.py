"""Shared fixtures: the power-meter models and random model generators."""

from __future__ import annotations

import pathlib
import random

import pytest

from adtquant.core import (
    AdtGraph,
    BasicEvent,
    Gate,
    PacParams,
    QuantAnnotation,
    validate,
)
from adtquant.dot import parse_dot

DATA = pathlib.Path(__file__).parent / "data"

# Verdict lines recorded by the acceptance suite; echoed in the terminal
# summary so they survive pytest's output capture in any run mode.
ACCEPTANCE_VERDICTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_VERDICTS:
            terminalreporter.write_line(line)
GOLDEN = pathlib.Path(__file__).parent / "golden"


@pytest.fixture
def powermeter() -> AdtGraph:
    return parse_dot((DATA / "powermeter.dot").read_text())


@pytest.fixture
def powermeter_pac() -> AdtGraph:
    return parse_dot((DATA / "powermeter_pac.dot").read_text())


def random_tree(rng: random.Random, n_events: int, ops=("AND", "OR", "NOT"),
                pac: bool = False, p_not: float = 0.2) -> AdtGraph:
    """Random annotated tree over ``n_events`` leaves, at least one gate."""
    verts: dict[str, BasicEvent | Gate] = {}
    roots: list[str] = []
    for i in range(n_events):
        vid = f"e{i}"
        ann = QuantAnnotation(
            prob=round(rng.random(), 6),
            prob_pac=PacParams(rng.uniform(0, 0.08), rng.uniform(0.01, 0.1)) if pac else None,
            cost=(round(rng.uniform(0, 20), 4), round(rng.uniform(0, 20), 4)),
            cost_eps=(rng.uniform(0, 2), rng.uniform(0, 2)) if pac else None,
            cost_delta=rng.uniform(0.01, 0.1) if pac else None,
            delay=(round(rng.uniform(0, 20), 4), round(rng.uniform(0, 20), 4)),
            delay_eps=(rng.uniform(0, 2), rng.uniform(0, 2)) if pac else None,
            delay_delta=rng.uniform(0.01, 0.1) if pac else None,
        )
        verts[vid] = BasicEvent(player=rng.choice(("attacker", "defender")),
                                annotation=ann)
        roots.append(vid)
    edges: list[tuple[str, str]] = []
    binary = [o for o in ops if o != "NOT"]
    k = 0
    while len(roots) > 1 or k == 0:
        if "NOT" in ops and len(roots) >= 1 and rng.random() < p_not:
            c = roots.pop(rng.randrange(len(roots)))
            gid = f"g{k}"
            k += 1
            verts[gid] = Gate("NOT")
            edges.append((c, gid))
            roots.append(gid)
            continue
        if len(roots) < 2:
            if k > 0:
                break
            continue
        a = roots.pop(rng.randrange(len(roots)))
        b = roots.pop(rng.randrange(len(roots)))
        gid = f"g{k}"
        k += 1
        verts[gid] = Gate(rng.choice(binary))
        edges.extend([(a, gid), (b, gid)])
        roots.append(gid)
    graph = AdtGraph(verts, tuple(edges), goal=roots[0])
    assert not validate(graph)
    return graph


def random_model(rng: random.Random) -> AdtGraph:
    """Random valid model for format round-trips: all operators, optional
    trigger/reset edges, labels and foreign attributes."""
    n = rng.randint(2, 10)
    graph = random_tree(rng, n, ops=("AND", "OR", "SAND", "SOR", "NOT"),
                        pac=rng.random() < 0.5, p_not=0.15)
    verts = dict(graph.vertices)
    edges = list(graph.input_edges)
    trigger = set()
    reset = set()
    events = [v for v in verts if isinstance(verts[v], BasicEvent)]
    if rng.random() < 0.3 and len(events) >= 2:
        src, dst = rng.sample(events, 2)
        gid = "tr0" if rng.random() < 0.5 else "re0"
        kind = "TR" if gid.startswith("tr") else "RE"
        verts[gid] = Gate(kind)
        edges.append((src, gid))
        # keep the triggering subtree out of the goal tree: use a spare
        # detached leaf as the gate's input instead when src feeds a gate
        if any(c == src for (c, _p) in graph.input_edges):
            spare = f"x{len(verts)}"
            verts[spare] = BasicEvent(annotation=QuantAnnotation(prob=0.5))
            edges[-1] = (spare, gid)
        (trigger if kind == "TR" else reset).add((gid, dst))
    for vid in list(verts):
        v = verts[vid]
        if rng.random() < 0.3:
            label = rng.choice(("step one", 'quo"ted', "plain", "x y z"))
            foreign = (("pos_x", str(rng.randint(0, 500))),
                       ("pos_y", str(rng.randint(0, 500))))
            verts[vid] = type(v)(**{**v.__dict__, "label": label,
                                    "foreign": foreign})
    out = AdtGraph(verts, tuple(edges), trigger_edges=frozenset(trigger),
                   reset_edges=frozenset(reset), goal=graph.goal)
    assert not validate(out)
    return out
