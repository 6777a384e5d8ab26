"""Graph invariants: expansion, visibility, and structural validation."""

import pytest

from promisegraph.model import (
    Agent,
    AgentKind,
    Assessment,
    Body,
    ErrorCode,
    Imposition,
    Polarity,
    Promise,
    PromiseGraph,
    SourceSpan,
    Superagent,
    Verdict,
    expand_members,
    new_graph,
    validate,
    visible_to,
)


def graph_of(**kwargs):
    base = dict(agents={}, superagents={}, promises=(), impositions=(),
                assessments=())
    base.update(kwargs)
    return PromiseGraph(**base)


def agents(*names):
    return {name: Agent(name) for name in names}


def test_source_span_rejects_inverted_ranges():
    with pytest.raises(ValueError):
        SourceSpan(10, 5, 1, 1)
    with pytest.raises(ValueError):
        SourceSpan(0, 0, 0, 1)


def test_superagent_members_must_be_non_empty():
    with pytest.raises(ValueError):
        Superagent("G", frozenset())


def test_promise_rejects_self_behalf():
    body = Body(Polarity.OFFER, "t", behalf_of="A")
    with pytest.raises(ValueError):
        Promise("p", "A", frozenset({"B"}), body)


def test_promise_requires_promisees():
    with pytest.raises(ValueError):
        Promise("p", "A", frozenset(), Body(Polarity.OFFER, "t"))


def test_imposition_rejects_self_imposition():
    with pytest.raises(ValueError):
        Imposition("i", "A", "A")


def test_expand_members_flattens_nested_superagents():
    g = graph_of(
        agents=agents("A", "B", "C"),
        superagents={
            "Inner": Superagent("Inner", frozenset({"A", "B"})),
            "Outer": Superagent("Outer", frozenset({"Inner", "C"})),
        },
    )
    assert expand_members(g, {"Outer"}) == {"Outer", "Inner", "A", "B", "C"}
    # plain agents expand to themselves
    assert expand_members(g, {"A"}) == {"A"}


def test_expansion_is_downward_only():
    # membership of A in a group must not make the group visible through A
    g = graph_of(
        agents=agents("A", "B"),
        superagents={"G": Superagent("G", frozenset({"A"}))},
    )
    assert expand_members(g, {"A"}) == {"A"}
    assert "G" not in expand_members(g, {"A", "B"})


def test_visible_to_promiser_promisees_and_scope():
    g = graph_of(
        agents=agents("A", "B", "C", "D"),
        promises=(
            Promise("p", "A", frozenset({"B"}),
                    Body(Polarity.OFFER, "t"), scope=frozenset({"C"})),
        ),
    )
    assert visible_to(g, "p") == frozenset({"A", "B", "C"})


def test_visible_to_expands_superagents_in_endpoints():
    g = graph_of(
        agents=agents("A", "B", "C"),
        superagents={"G": Superagent("G", frozenset({"B", "C"}))},
        promises=(
            Promise("p", "A", frozenset({"G"}), Body(Polarity.OFFER, "t")),
        ),
    )
    # the named superagent stays in the visible set alongside its members
    assert visible_to(g, "p") == frozenset({"A", "G", "B", "C"})


def test_visible_to_unknown_promise_raises():
    with pytest.raises(KeyError):
        visible_to(new_graph(), "ghost")


def test_validate_accepts_the_empty_graph():
    assert validate(new_graph()) == []


def test_validate_unresolved_references():
    g = graph_of(
        agents=agents("A"),
        promises=(
            Promise("p", "A", frozenset({"Ghost"}), Body(Polarity.OFFER, "t")),
        ),
    )
    errors = validate(g)
    assert [e.code for e in errors] == [ErrorCode.UNRESOLVED_REFERENCE]
    assert "Ghost" in errors[0].message


def test_validate_namespace_clash():
    g = graph_of(
        agents=agents("X", "A"),
        superagents={"X": Superagent("X", frozenset({"A"}))},
    )
    assert ErrorCode.NAMESPACE_CLASH in {e.code for e in validate(g)}


def test_validate_cyclic_superagents():
    g = graph_of(
        superagents={
            "A": Superagent("A", frozenset({"B"})),
            "B": Superagent("B", frozenset({"A"})),
        },
    )
    codes = {e.code for e in validate(g)}
    assert ErrorCode.CYCLIC_SUPERAGENT in codes


def test_validate_duplicate_promise_ids():
    p = Promise("p", "A", frozenset({"A"}), Body(Polarity.OFFER, "t"))
    g = graph_of(agents=agents("A"), promises=(p, p))
    assert ErrorCode.DUPLICATE_ID in {e.code for e in validate(g)}


def test_validate_assessment_references():
    g = graph_of(
        agents=agents("A"),
        assessments=(Assessment("a", "A", "nope", Verdict.KEPT),),
    )
    assert [e.code for e in validate(g)] == [ErrorCode.UNRESOLVED_REFERENCE]


def test_validate_assessment_ordinals_strictly_increase():
    p = Promise("p", "A", frozenset({"A"}), Body(Polarity.OFFER, "t"))
    g = graph_of(
        agents=agents("A"),
        promises=(p,),
        assessments=(
            Assessment("a1", "A", "p", Verdict.KEPT, ordinal=1),
            Assessment("a2", "A", "p", Verdict.KEPT, ordinal=1),
        ),
    )
    assert ErrorCode.INVALID_DECLARATION in {e.code for e in validate(g)}


def test_scope_references_are_checked():
    g = graph_of(
        agents=agents("A", "B"),
        promises=(
            Promise("p", "A", frozenset({"B"}), Body(Polarity.OFFER, "t"),
                    scope=frozenset({"Nobody"})),
        ),
    )
    assert [e.code for e in validate(g)] == [ErrorCode.UNRESOLVED_REFERENCE]


def test_affects_references_are_checked():
    g = graph_of(
        agents=agents("A", "B"),
        promises=(
            Promise("p", "A", frozenset({"B"}),
                    Body(Polarity.OFFER, "t", affects=frozenset({"Nobody"}))),
        ),
    )
    assert [e.code for e in validate(g)] == [ErrorCode.UNRESOLVED_REFERENCE]
