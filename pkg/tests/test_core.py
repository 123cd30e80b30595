import pytest

from adtquant.core import (
    AdtError,
    AdtGraph,
    BasicEvent,
    Gate,
    QuantAnnotation,
    feedback,
    has_errors,
    merge,
    topo_order,
    validate,
    with_annotation,
)


def codes(diags):
    return sorted(d.code for d in diags)


def simple_and(p1=0.5, p2=0.5) -> AdtGraph:
    return AdtGraph(
        {"a": BasicEvent(annotation=QuantAnnotation(prob=p1)),
         "b": BasicEvent(annotation=QuantAnnotation(prob=p2)),
         "g": Gate("AND")},
        (("a", "g"), ("b", "g")),
        goal="g",
    )


def test_validate_clean():
    assert validate(simple_and()) == []


def test_validate_bad_id():
    g = AdtGraph({"1bad": BasicEvent(), "g": Gate("NOT")},
                 (("1bad", "g"),), goal="g")
    assert "E_ID_FORMAT" in codes(validate(g))


def test_validate_unknown_edge_endpoint():
    g = AdtGraph({"a": BasicEvent()}, (("a", "ghost"),), goal="a")
    diags = validate(g)
    assert "E_EDGE_ENDPOINT" in codes(diags)


def test_validate_cycle():
    g = AdtGraph({"x": Gate("NOT"), "y": Gate("NOT"), "a": BasicEvent()},
                 (("x", "y"), ("y", "x"), ("a", "x")), goal="y")
    assert "E_CYCLE" in codes(validate(g))


def test_validate_goal_not_sink():
    g = AdtGraph({"a": BasicEvent(), "n": Gate("NOT")}, (("a", "n"),), goal="a")
    assert "E_GOAL" in codes(validate(g))


def test_validate_goal_missing():
    g = AdtGraph({"a": BasicEvent()}, (), goal="nope")
    assert "E_GOAL" in codes(validate(g))


def test_validate_be_with_inputs():
    g = AdtGraph({"a": BasicEvent(), "b": BasicEvent()}, (("a", "b"),), goal="b")
    assert "E_BE_SOURCE" in codes(validate(g))


def test_validate_arity():
    g = AdtGraph({"a": BasicEvent(), "g": Gate("AND")}, (("a", "g"),), goal="g")
    assert "E_ARITY" in codes(validate(g))
    g2 = AdtGraph({"a": BasicEvent(), "b": BasicEvent(), "n": Gate("NOT")},
                  (("a", "n"), ("b", "n")), goal="n")
    assert "E_ARITY" in codes(validate(g2))


def test_validate_trigger_endpoints():
    g = AdtGraph(
        {"a": BasicEvent(), "b": BasicEvent(), "g": Gate("AND"), "t": Gate("TR"),
         "c": BasicEvent()},
        (("a", "g"), ("b", "g"), ("c", "t")),
        trigger_edges={("g", "a")},  # origin is not a TR gate
        goal="g",
    )
    assert "E_TRIGGER_EDGE" in codes(validate(g))


def test_annotation_invariants():
    with pytest.raises(AdtError):
        QuantAnnotation(prob=1.5)
    with pytest.raises(AdtError):
        QuantAnnotation(cost=(-1.0, 2.0))
    with pytest.raises(AdtError):
        QuantAnnotation(cost=(1.0, 2.0), cost_eps=(0.1, 0.1))  # missing delta
    with pytest.raises(AdtError):
        Gate("XOR")
    with pytest.raises(AdtError):
        BasicEvent(player="nobody")


def test_topo_order_deterministic_and_sorted_ties():
    g = simple_and()
    assert topo_order(g) == ["a", "b", "g"]


def test_topo_order_rejects_invalid():
    bad = AdtGraph({"a": BasicEvent()}, (), goal="nope")
    with pytest.raises(AdtError):
        topo_order(bad)


def test_feedback_shared_subtree_blocks_analysis():
    g = AdtGraph(
        {"a": BasicEvent(annotation=QuantAnnotation(prob=0.5)),
         "b": BasicEvent(annotation=QuantAnnotation(prob=0.5)),
         "g1": Gate("AND"), "g2": Gate("OR"), "r": Gate("AND")},
        (("a", "g1"), ("b", "g1"), ("a", "g2"), ("b", "g2"),
         ("g1", "r"), ("g2", "r")),
        goal="r",
    )
    assert validate(g) == []
    diags = feedback(g, "analysis-bottomup")
    assert "E_ANALYSIS_SHAPE" in codes(diags)
    assert "E_PRISM_SHAPE" in codes(feedback(g, "export-prism"))
    assert "E_UPPAAL_SHAPE" in codes(feedback(g, "export-uppaal"))


def test_feedback_operator_restrictions():
    g = AdtGraph(
        {"a": BasicEvent(), "b": BasicEvent(), "s": Gate("SAND")},
        (("a", "s"), ("b", "s")),
        goal="s",
    )
    assert "E_ANALYSIS_SHAPE" in codes(feedback(g, "analysis-bottomup"))
    assert "E_PRISM_UNSUPPORTED" in codes(feedback(g, "export-prism"))
    assert feedback(g, "export-xml") == []  # SAND is XML-representable


def test_feedback_tr_rules():
    g = AdtGraph(
        {"a": BasicEvent(annotation=QuantAnnotation(prob=0.5)),
         "b": BasicEvent(annotation=QuantAnnotation(prob=0.5)),
         "c": BasicEvent(annotation=QuantAnnotation(prob=0.5)),
         "g": Gate("AND"), "t": Gate("TR")},
        (("a", "g"), ("b", "g"), ("c", "t")),
        trigger_edges={("t", "a"), ("t", "b")},
        goal="g",
    )
    assert feedback(g, "analysis-bottomup") == []
    shared = AdtGraph(
        g.vertices | {"t2": Gate("TR"), "d": BasicEvent(annotation=QuantAnnotation(prob=0.5))},
        g.input_edges + (("d", "t2"),),
        trigger_edges={("t", "a"), ("t2", "a")},
        goal="g",
    )
    assert "E_TR_SHARED" in codes(feedback(shared, "analysis-bottomup"))


def test_feedback_xml_player_context():
    # defender leaf directly under an attacker-context AND is not exportable
    g = AdtGraph(
        {"a": BasicEvent(), "d": BasicEvent(player="defender"), "g": Gate("AND")},
        (("a", "g"), ("d", "g")),
        goal="g",
    )
    assert "E_XML_UNSUPPORTED" in codes(feedback(g, "export-xml"))
    # under a NOT the context flips and the defender leaf is fine
    g2 = AdtGraph(
        {"a": BasicEvent(), "d": BasicEvent(player="defender"),
         "n": Gate("NOT"), "g": Gate("AND")},
        (("a", "g"), ("d", "n"), ("n", "g")),
        goal="g",
    )
    assert not has_errors(feedback(g2, "export-xml"))


def test_feedback_xml_multiroot_warning():
    g = AdtGraph(
        {"a": BasicEvent(player="defender"), "b": BasicEvent(), "n": Gate("NOT")},
        (("a", "n"),),
        goal="n",
    )
    diags = feedback(g, "export-xml")
    assert codes(diags) == ["W_XML_MULTIROOT"]
    assert not has_errors(diags)


def test_feedback_unknown_target():
    with pytest.raises(AdtError):
        feedback(simple_and(), "export-nusmv")


def test_merge_renames_collisions_and_preserves_annotations():
    a = simple_and(0.25, 0.75)
    b = simple_and(0.1, 0.2)
    m = merge(a, b, "OR")
    assert validate(m) == []
    assert m.vertices[m.goal].gate_type == "OR"
    assert set(m.inputs_of(m.goal)) == {"g", "g_2"}
    assert m.vertices["a"].annotation.prob == 0.25
    assert m.vertices["a_2"].annotation.prob == 0.1


def test_merge_rejects_bad_root():
    with pytest.raises(AdtError):
        merge(simple_and(), simple_and(), "NOT")


def test_with_annotation_replaces_only_target():
    g = simple_and()
    g2 = with_annotation(g, "a", QuantAnnotation(prob=0.9))
    assert g2.vertices["a"].annotation.prob == 0.9
    assert g.vertices["a"].annotation.prob == 0.5
    with pytest.raises(AdtError):
        with_annotation(g, "g", QuantAnnotation(prob=0.9))


def test_input_edge_order_preserved():
    g = AdtGraph(
        {"a": BasicEvent(), "b": BasicEvent(), "c": BasicEvent(), "g": Gate("SOR")},
        (("c", "g"), ("a", "g"), ("b", "g")),
        goal="g",
    )
    assert g.inputs_of("g") == ["c", "a", "b"]
