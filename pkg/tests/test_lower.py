"""AST-to-graph lowering: defaults, reference checks, and error batching."""

import pytest

from promisegraph.lower import LowerFailure, load
from promisegraph.model import (
    AgentKind,
    ErrorCode,
    ImpositionKind,
    Polarity,
    Provenance,
    Verdict,
)


def codes(source):
    with pytest.raises(LowerFailure) as exc:
        load(source)
    return [e.code for e in exc.value.errors]


def test_counts_and_declaration_order(clean_toy_source):
    g = load(clean_toy_source)
    assert list(g.agents) == ["Alice", "Bob"]
    assert [p.id for p in g.promises] == ["hello", "hello-back"]
    assert not g.superagents and not g.impositions and not g.assessments


def test_defaults_are_applied():
    g = load(
        "agent A\n"
        "agent B\n"
        "promise p from A to B { offer t }\n"
        'imposition i from A to B { "now" }\n'
        "assessment v by A on p verdict=kept\n"
    )
    assert g.agents["A"].kind is AgentKind.SYSTEM
    promise = g.promises[0]
    assert promise.provenance is Provenance.EXPLICIT
    assert promise.scope == frozenset()
    assert promise.body.text == ""
    assert promise.body.polarity is Polarity.OFFER
    assert g.impositions[0].kind is ImpositionKind.REQUIREMENT
    assert g.assessments[0].verdict is Verdict.KEPT
    assert g.assessments[0].note is None


def test_explicit_enums_survive_lowering():
    g = load(
        "agent A kind=human\n"
        "agent B kind=organization\n"
        "promise p from A to B provenance=imputed { accept t }\n"
        'imposition i from A to B kind=threat { "or else" }\n'
    )
    assert g.agents["A"].kind is AgentKind.HUMAN
    assert g.promises[0].provenance is Provenance.IMPUTED
    assert g.promises[0].body.polarity is Polarity.ACCEPT
    assert g.impositions[0].kind is ImpositionKind.THREAT


def test_assessment_ordinals_follow_declaration_order():
    g = load(
        "agent A\n"
        "agent B\n"
        "promise p from A to B { offer t }\n"
        "assessment first by A on p verdict=kept\n"
        "assessment second by A on p verdict=not-kept\n"
        "assessment third by A on p verdict=indeterminate\n"
    )
    assert [a.ordinal for a in g.assessments] == [0, 1, 2]


def test_unresolved_promisee():
    assert codes("agent A\npromise p from A to Ghost { offer t }\n") == [
        ErrorCode.UNRESOLVED_REFERENCE,
    ]


def test_unresolved_scope_and_affects():
    result = codes(
        "agent A\n"
        "agent B\n"
        "promise p from A to B scope [Ghost] { offer t affects [Phantom] }\n"
    )
    assert result == [ErrorCode.UNRESOLVED_REFERENCE] * 2


def test_duplicate_agent_id():
    assert ErrorCode.DUPLICATE_ID in set(codes("agent A\nagent A\n"))


def test_duplicate_promise_id():
    result = codes(
        "agent A\nagent B\n"
        "promise p from A to B { offer t }\n"
        "promise p from B to A { accept t }\n"
    )
    assert ErrorCode.DUPLICATE_ID in set(result)


def test_namespace_clash_between_agent_and_superagent():
    result = codes("agent X\nagent A\nsuperagent X { A }\n")
    assert ErrorCode.NAMESPACE_CLASH in set(result)


def test_cyclic_superagents():
    result = codes(
        "superagent A { B }\n"
        "superagent B { A }\n"
    )
    assert ErrorCode.CYCLIC_SUPERAGENT in set(result)


def test_self_behalf_is_invalid():
    result = codes(
        "agent A\nagent B\n"
        "promise p from A to B { offer t behalf A }\n"
    )
    assert ErrorCode.INVALID_DECLARATION in set(result)


def test_self_imposition_is_invalid():
    result = codes('agent A\nimposition i from A to A { "do it" }\n')
    assert ErrorCode.INVALID_DECLARATION in set(result)


def test_assessment_target_must_be_a_promise():
    result = codes(
        "agent A\n"
        "assessment v by A on missing verdict=kept\n"
    )
    assert result == [ErrorCode.UNRESOLVED_REFERENCE]


def test_errors_are_batched_and_ordered_by_position():
    source = (
        "agent A\n"
        "promise p from A to Ghost1 { offer t }\n"
        "promise q from Ghost2 to A { offer t }\n"
    )
    with pytest.raises(LowerFailure) as exc:
        load(source)
    errors = exc.value.errors
    assert len(errors) == 2
    starts = [e.span.byte_start for e in errors]
    assert starts == sorted(starts)
    assert "Ghost1" in errors[0].message
    assert "Ghost2" in errors[1].message


def test_promisees_may_name_superagents():
    g = load(
        "agent A\nagent B\n"
        "superagent G { B }\n"
        "promise p from A to G { offer t }\n"
    )
    assert g.promises[0].promisees == frozenset({"G"})
