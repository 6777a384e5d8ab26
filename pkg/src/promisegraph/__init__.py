"""promisegraph: a modeling language and static analyzer for promise networks.

Parse declarations of agents, promises, impositions, and assessments into
a promise graph; detect structural flaws; compute observer-relative trust;
export viewpoint-filtered graphs and reports.
"""

from .analysis import (
    AnalysisConfig,
    AnalysisReport,
    Binding,
    Finding,
    FindingRule,
    Severity,
    TrustParams,
    TrustTable,
    analyze_all,
    behalf_violations,
    bind,
    imposition_pressure,
    polarity_census,
    scope_audit,
    single_source,
    trust,
    unbound,
)
from .export import (
    JsonError,
    ReportFormat,
    ViewpointGraph,
    from_json,
    render_report,
    to_dot,
    to_json,
    viewpoint,
)
from .lexer import ParseError, ParseFailure, Token, TokenKind, tokenize
from .lower import LowerFailure, load, lower
from .model import (
    Agent,
    AgentKind,
    Assessment,
    Body,
    ErrorCode,
    Imposition,
    ImpositionKind,
    Polarity,
    Promise,
    PromiseGraph,
    Provenance,
    SourceSpan,
    StructuralError,
    Superagent,
    Verdict,
    expand_members,
    new_graph,
    validate,
    visible_to,
)
from .parser import Document, parse

__version__ = "0.1.0"

__all__ = [
    "Agent",
    "AgentKind",
    "AnalysisConfig",
    "AnalysisReport",
    "Assessment",
    "Binding",
    "Body",
    "Document",
    "ErrorCode",
    "Finding",
    "FindingRule",
    "Imposition",
    "ImpositionKind",
    "JsonError",
    "LowerFailure",
    "ParseError",
    "ParseFailure",
    "Polarity",
    "Promise",
    "PromiseGraph",
    "Provenance",
    "ReportFormat",
    "Severity",
    "SourceSpan",
    "StructuralError",
    "Superagent",
    "Token",
    "TokenKind",
    "TrustParams",
    "TrustTable",
    "Verdict",
    "ViewpointGraph",
    "analyze_all",
    "behalf_violations",
    "bind",
    "expand_members",
    "from_json",
    "imposition_pressure",
    "load",
    "lower",
    "new_graph",
    "parse",
    "polarity_census",
    "render_report",
    "scope_audit",
    "single_source",
    "to_dot",
    "to_json",
    "tokenize",
    "trust",
    "unbound",
    "validate",
    "viewpoint",
    "visible_to",
]
