"""Promise-graph analyses: offer/accept binding, structural findings,
polarity census, and the observer-relative trust engine.

Every function is pure over an immutable graph; analyze_all aggregates them
into one deterministic report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .model import (
    Imposition,
    ImpositionKind,
    Polarity,
    Promise,
    PromiseGraph,
    SourceSpan,
    Verdict,
    visible_to,
)


class FindingRule(Enum):
    UNBOUND_OFFER = "unbound-offer"
    UNBOUND_ACCEPT = "unbound-accept"
    POLARITY_MISMATCH = "polarity-mismatch"
    SINGLE_SOURCE_ACCEPTANCE = "single-source-acceptance"
    SCOPE_HIDING = "scope-hiding"
    BEHALF_OF_VIOLATION = "behalf-of-violation"
    IMPOSITION_PRESSURE = "imposition-pressure"


class Severity(Enum):
    INFO = "info"
    WARNING = "warning"
    VIOLATION = "violation"

    @property
    def rank(self) -> int:
        return {"info": 1, "warning": 2, "violation": 3}[self.value]


@dataclass(frozen=True)
class Binding:
    offer: str
    accept: str
    topic: str


@dataclass(frozen=True)
class Finding:
    rule: FindingRule
    severity: Severity
    subjects: Tuple[str, ...]
    message: str
    span: SourceSpan

    def __post_init__(self) -> None:
        if not self.subjects:
            raise ValueError("finding without subjects")


@dataclass(frozen=True)
class TrustParams:
    initial: float = 0.5
    alpha: float = 0.2
    beta: float = 0.6

    def __post_init__(self) -> None:
        for name in ("initial", "alpha", "beta"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError("trust parameter %s=%r outside [0,1]" % (name, value))


@dataclass(frozen=True)
class TrustTable:
    initial: float
    entries: Dict[Tuple[str, str], float] = field(default_factory=dict)

    def get(self, assessor: str, subject: str) -> float:
        return self.entries.get((assessor, subject), self.initial)


@dataclass(frozen=True)
class AnalysisConfig:
    quorum: int = 2
    trust: TrustParams = TrustParams()

    def __post_init__(self) -> None:
        if self.quorum < 1:
            raise ValueError("quorum must be >= 1")


@dataclass(frozen=True)
class AnalysisReport:
    bindings: Tuple[Binding, ...]
    findings: Tuple[Finding, ...]
    census: Dict[Tuple[str, str], Tuple[int, int]]
    trust: TrustTable


def _offers(graph: PromiseGraph) -> List[Tuple[int, Promise]]:
    return [(i, p) for i, p in enumerate(graph.promises)
            if p.body.polarity is Polarity.OFFER]


def _accepts(graph: PromiseGraph) -> List[Tuple[int, Promise]]:
    return [(i, p) for i, p in enumerate(graph.promises)
            if p.body.polarity is Polarity.ACCEPT]


def _mirrored(offer: Promise, accept: Promise) -> bool:
    """Complementary endpoints on the same topic, by declared ids."""
    return (offer.body.topic == accept.body.topic
            and accept.promiser in offer.promisees
            and offer.promiser in accept.promisees)


def candidate_pairs(graph: PromiseGraph) -> List[Tuple[int, int]]:
    """All compatible (offer index, accept index) pairs, ordered
    lexicographically by declaration index."""
    pairs: List[Tuple[int, int]] = []
    accepts = _accepts(graph)
    for oi, offer in _offers(graph):
        for ai, accept in accepts:
            if _mirrored(offer, accept):
                pairs.append((oi, ai))
    return pairs


def _max_matching_size(pairs: Sequence[Tuple[int, int]]) -> int:
    """Maximum bipartite matching size over candidate pairs (Kuhn's
    augmenting paths; offers on the left, accepts on the right)."""
    adjacency: Dict[int, List[int]] = {}
    for oi, ai in pairs:
        adjacency.setdefault(oi, []).append(ai)
    match_of_accept: Dict[int, int] = {}

    def augment(oi: int, visited: Set[int]) -> bool:
        for ai in adjacency.get(oi, ()):
            if ai in visited:
                continue
            visited.add(ai)
            if ai not in match_of_accept or augment(match_of_accept[ai], visited):
                match_of_accept[ai] = oi
                return True
        return False

    size = 0
    for oi in adjacency:
        if augment(oi, set()):
            size += 1
    return size


def bind(graph: PromiseGraph) -> List[Binding]:
    """The maximum offer/accept matching, choosing the lexicographically
    earliest pairs (by declaration order) among equally large matchings."""
    pairs = candidate_pairs(graph)
    target = _max_matching_size(pairs)
    chosen: List[Tuple[int, int]] = []
    used_offers: Set[int] = set()
    used_accepts: Set[int] = set()
    for oi, ai in pairs:
        if oi in used_offers or ai in used_accepts:
            continue
        rest = [(o, a) for o, a in pairs
                if o != oi and a != ai and o not in used_offers and a not in used_accepts]
        if len(chosen) + 1 + _max_matching_size(rest) == target:
            chosen.append((oi, ai))
            used_offers.add(oi)
            used_accepts.add(ai)
    return [
        Binding(graph.promises[oi].id, graph.promises[ai].id, graph.promises[oi].body.topic)
        for oi, ai in chosen
    ]


def unbound(graph: PromiseGraph, bindings: Sequence[Binding]) -> List[Finding]:
    """A warning for every promise that found no complementary partner."""
    bound_offers = {b.offer for b in bindings}
    bound_accepts = {b.accept for b in bindings}
    findings: List[Finding] = []
    for promise in graph.promises:
        if promise.body.polarity is Polarity.OFFER and promise.id not in bound_offers:
            findings.append(Finding(
                FindingRule.UNBOUND_OFFER, Severity.WARNING,
                (promise.id, promise.promiser),
                "offer %r of topic %r by %s is not accepted by any promisee"
                % (promise.id, promise.body.topic, promise.promiser),
                promise.span,
            ))
        elif promise.body.polarity is Polarity.ACCEPT and promise.id not in bound_accepts:
            findings.append(Finding(
                FindingRule.UNBOUND_ACCEPT, Severity.WARNING,
                (promise.id, promise.promiser),
                "acceptance %r of topic %r by %s matches no declared offer"
                % (promise.id, promise.body.topic, promise.promiser),
                promise.span,
            ))
    return findings


def polarity_census(graph: PromiseGraph) -> Dict[Tuple[str, str], Tuple[int, int]]:
    """Per (agent, topic): offers directed at the agent vs acceptances the
    agent makes. Counts use declared ids, superagents count as themselves."""
    counts: Dict[Tuple[str, str], List[int]] = {}

    def slot(agent: str, topic: str) -> List[int]:
        return counts.setdefault((agent, topic), [0, 0])

    for promise in graph.promises:
        topic = promise.body.topic
        if promise.body.polarity is Polarity.OFFER:
            for promisee in promise.promisees:
                slot(promisee, topic)[0] += 1
        else:
            slot(promise.promiser, topic)[1] += 1
    return {key: (pair[0], pair[1]) for key, pair in sorted(counts.items())}


def single_source(graph: PromiseGraph, quorum: int = 2) -> List[Finding]:
    """Flag consumers that accept a topic from fewer distinct sources than
    the quorum demands, despite more sources offering it. A consumer is an
    agent with at least one acceptance of the topic."""
    if quorum < 1:
        raise ValueError("quorum must be >= 1")
    offerers: Dict[Tuple[str, str], Set[str]] = {}
    accepted: Dict[Tuple[str, str], Set[str]] = {}
    first_accept: Dict[Tuple[str, str], Promise] = {}

    for promise in graph.promises:
        topic = promise.body.topic
        if promise.body.polarity is Polarity.OFFER:
            for promisee in promise.promisees:
                offerers.setdefault((promisee, topic), set()).add(promise.promiser)
        else:
            key = (promise.promiser, topic)
            accepted.setdefault(key, set()).update(promise.promisees)
            first_accept.setdefault(key, promise)

    findings: List[Finding] = []
    for key in sorted(accepted):
        consumer, topic = key
        sources = offerers.get(key, set())
        taken = accepted[key]
        if len(sources) < 2:
            continue
        if len(taken) >= min(quorum, len(sources)):
            continue
        ignored = sorted(sources - taken)
        findings.append(Finding(
            FindingRule.SINGLE_SOURCE_ACCEPTANCE, Severity.VIOLATION,
            (consumer, topic, *ignored),
            "%s accepts topic %r from %d source(s) while %d agents offer it "
            "(quorum %d); ignored: %s"
            % (consumer, topic, len(taken), len(sources), quorum, ", ".join(ignored)),
            first_accept[key].span,
        ))
    return findings


def scope_audit(graph: PromiseGraph) -> List[Finding]:
    """Flag promises whose declared impact set includes agents that cannot
    see the promise."""
    findings: List[Finding] = []
    for promise in graph.promises:
        if not promise.body.affects:
            continue
        visible = visible_to(graph, promise.id)
        for agent in sorted(promise.body.affects):
            if agent not in visible:
                findings.append(Finding(
                    FindingRule.SCOPE_HIDING, Severity.WARNING,
                    (promise.id, agent),
                    "promise %r affects %s, who is not privy to it"
                    % (promise.id, agent),
                    promise.span,
                ))
    return findings


def behalf_violations(graph: PromiseGraph) -> List[Finding]:
    """Flag promises made in another agent's name."""
    findings: List[Finding] = []
    for promise in graph.promises:
        behalf = promise.body.behalf_of
        if behalf is None:
            continue
        findings.append(Finding(
            FindingRule.BEHALF_OF_VIOLATION, Severity.VIOLATION,
            (promise.id, promise.promiser, behalf),
            "%s promises %r on behalf of %s, but only %s can promise its own behaviour"
            % (promise.promiser, promise.id, behalf, behalf),
            promise.span,
        ))
    return findings


def imposition_pressure(graph: PromiseGraph) -> List[Finding]:
    """Report agents under several impositions, and every threat."""
    inbound: Dict[str, List[Imposition]] = {}
    for imposition in graph.impositions:
        inbound.setdefault(imposition.imposee, []).append(imposition)

    findings: List[Finding] = []
    for imposee, impositions in inbound.items():
        if len(impositions) < 2:
            continue
        findings.append(Finding(
            FindingRule.IMPOSITION_PRESSURE, Severity.INFO,
            (imposee, *[imp.id for imp in impositions]),
            "%s is subject to %d impositions: %s"
            % (imposee, len(impositions), ", ".join(imp.id for imp in impositions)),
            impositions[0].span,
        ))
    for imposition in graph.impositions:
        if imposition.kind is ImpositionKind.THREAT:
            findings.append(Finding(
                FindingRule.IMPOSITION_PRESSURE, Severity.INFO,
                (imposition.id, imposition.imposer, imposition.imposee),
                "imposition %r is a threat by %s against %s"
                % (imposition.id, imposition.imposer, imposition.imposee),
                imposition.span,
            ))
    return findings


def trust(graph: PromiseGraph, params: Optional[TrustParams] = None) -> TrustTable:
    """Fold every assessment, in ordinal order, into per-(assessor, promiser)
    trust scores: kept gains a fraction alpha of the remaining headroom,
    not-kept loses a fraction beta, indeterminate records the pair unchanged."""
    params = params or TrustParams()
    by_id = {p.id: p for p in graph.promises}
    entries: Dict[Tuple[str, str], float] = {}
    for assessment in sorted(graph.assessments, key=lambda a: a.ordinal):
        subject = by_id[assessment.target].promiser
        key = (assessment.assessor, subject)
        value = entries.get(key, params.initial)
        if assessment.verdict is Verdict.KEPT:
            value = value + params.alpha * (1.0 - value)
        elif assessment.verdict is Verdict.NOT_KEPT:
            value = value * (1.0 - params.beta)
        entries[key] = value
    return TrustTable(params.initial, entries)


def sort_findings(findings: Sequence[Finding]) -> Tuple[Finding, ...]:
    """Severity first (violations on top), then document position."""
    return tuple(sorted(
        findings,
        key=lambda f: (-f.severity.rank, f.span.byte_start, f.rule.value, f.subjects),
    ))


def analyze_all(graph: PromiseGraph, config: Optional[AnalysisConfig] = None) -> AnalysisReport:
    """Run every analysis and aggregate deterministically."""
    config = config or AnalysisConfig()
    bindings = bind(graph)
    findings: List[Finding] = []
    findings.extend(unbound(graph, bindings))
    findings.extend(single_source(graph, config.quorum))
    findings.extend(scope_audit(graph))
    findings.extend(behalf_violations(graph))
    findings.extend(imposition_pressure(graph))
    return AnalysisReport(
        bindings=tuple(bindings),
        findings=sort_findings(findings),
        census=polarity_census(graph),
        trust=trust(graph, config.trust),
    )
