"""Recursive-descent parser for promise declaration documents.

Outside braces and brackets a newline ends the current statement; inside
them newlines are insignificant, so promise bodies can span lines. On a
grammar error the parser records a diagnostic and skips to the next
top-level keyword, so one run reports every broken statement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .lexer import (
    TOP_LEVEL_KEYWORDS,
    ParseError,
    ParseFailure,
    Token,
    TokenKind,
    tokenize,
)
from .model import (
    AgentKind,
    ImpositionKind,
    Provenance,
    SourceSpan,
    Verdict,
)

AGENT_KINDS = tuple(k.value for k in AgentKind)
PROVENANCES = tuple(p.value for p in Provenance)
IMPOSITION_KINDS = tuple(k.value for k in ImpositionKind)
VERDICTS = tuple(v.value for v in Verdict)


@dataclass(frozen=True)
class AgentDecl:
    name: str
    kind: Optional[str]
    span: SourceSpan


@dataclass(frozen=True)
class SuperagentDecl:
    name: str
    members: Tuple[str, ...]
    span: SourceSpan


@dataclass(frozen=True)
class BodyDecl:
    polarity: str
    topic: str
    text: Optional[str]
    behalf: Optional[str]
    affects: Tuple[str, ...]
    condition: Optional[str]
    span: SourceSpan


@dataclass(frozen=True)
class PromiseDecl:
    name: str
    promiser: str
    promisees: Tuple[str, ...]
    scope: Optional[Tuple[str, ...]]
    provenance: Optional[str]
    body: BodyDecl
    span: SourceSpan


@dataclass(frozen=True)
class ImpositionDecl:
    name: str
    imposer: str
    imposee: str
    kind: Optional[str]
    text: str
    span: SourceSpan


@dataclass(frozen=True)
class AssessmentDecl:
    name: str
    assessor: str
    target: str
    verdict: str
    note: Optional[str]
    span: SourceSpan


Item = object  # any of the *Decl classes above


@dataclass(frozen=True)
class Document:
    items: Tuple[Item, ...]


class _Unwind(Exception):
    """Internal signal: abandon the current statement and recover."""

    def __init__(self, error: ParseError):
        super().__init__(str(error))
        self.error = error


class _Parser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0
        self.depth = 0  # nesting of {} and []
        self.last = tokens[0]

    # raw access ignores the depth rule; used by the statement loop
    def raw_peek(self) -> Token:
        return self.tokens[self.pos]

    def _skip_soft_newlines(self) -> None:
        while self.depth > 0 and self.tokens[self.pos].kind is TokenKind.NEWLINE:
            self.pos += 1

    def peek(self) -> Token:
        self._skip_soft_newlines()
        return self.tokens[self.pos]

    def advance(self) -> Token:
        self._skip_soft_newlines()
        token = self.tokens[self.pos]
        if token.kind is not TokenKind.EOF:
            self.pos += 1
        if token.kind is TokenKind.PUNCTUATION:
            if token.text in "{[":
                self.depth += 1
            elif token.text in "}]":
                self.depth = max(0, self.depth - 1)
        self.last = token
        return token

    def fail(self, message: str, expected: Tuple[str, ...] = ()) -> None:
        raise _Unwind(ParseError(message, expected, self.peek().span))

    def match_keyword(self, word: str) -> bool:
        token = self.peek()
        if token.kind is TokenKind.KEYWORD and token.text == word:
            self.advance()
            return True
        return False

    def expect_keyword(self, word: str) -> Token:
        token = self.peek()
        if token.kind is not TokenKind.KEYWORD or token.text != word:
            self.fail("expected keyword %r, found %s" % (word, _describe(token)), (word,))
        return self.advance()

    def expect_ident(self, what: str = "identifier") -> Token:
        token = self.peek()
        if token.kind is not TokenKind.IDENTIFIER:
            self.fail("expected %s, found %s" % (what, _describe(token)), ("identifier",))
        return self.advance()

    def expect_punct(self, char: str) -> Token:
        token = self.peek()
        if token.kind is not TokenKind.PUNCTUATION or token.text != char:
            self.fail("expected %r, found %s" % (char, _describe(token)), (char,))
        return self.advance()

    def expect_string(self) -> Token:
        token = self.peek()
        if token.kind is not TokenKind.STRING:
            self.fail("expected string literal, found %s" % _describe(token),
                      ("string-literal",))
        return self.advance()

    def expect_choice(self, allowed: Tuple[str, ...], what: str) -> Token:
        token = self.expect_ident(what)
        if token.text not in allowed:
            raise _Unwind(ParseError(
                "expected %s (one of %s), found %r" % (what, ", ".join(allowed), token.text),
                allowed, token.span))
        return token

    def recover(self) -> None:
        """Skip to the next top-level keyword (or EOF)."""
        self.depth = 0
        if self.tokens[self.pos].kind is not TokenKind.EOF:
            self.pos += 1
        while True:
            token = self.tokens[self.pos]
            if token.kind is TokenKind.EOF:
                return
            if token.kind is TokenKind.KEYWORD and token.text in TOP_LEVEL_KEYWORDS:
                return
            self.pos += 1


def _describe(token: Token) -> str:
    if token.kind is TokenKind.EOF:
        return "end of input"
    if token.kind is TokenKind.NEWLINE:
        return "end of line"
    return "%s %r" % (token.kind.value, token.text)


def _span_between(start: Token, end: Token) -> SourceSpan:
    return SourceSpan(start.span.byte_start, end.span.byte_end,
                      start.span.line, start.span.column)


def _ident_list(parser: _Parser, what: str) -> List[str]:
    names = [parser.expect_ident(what).text]
    while parser.peek().kind is TokenKind.PUNCTUATION and parser.peek().text == ",":
        parser.advance()
        names.append(parser.expect_ident(what).text)
    return names


def _parse_agent(parser: _Parser) -> AgentDecl:
    start = parser.expect_keyword("agent")
    name = parser.expect_ident("agent name")
    kind = None
    if parser.match_keyword("kind"):
        parser.expect_punct("=")
        kind = parser.expect_choice(AGENT_KINDS, "agent kind").text
    return AgentDecl(name.text, kind, _span_between(start, parser.last))


def _parse_superagent(parser: _Parser) -> SuperagentDecl:
    start = parser.expect_keyword("superagent")
    name = parser.expect_ident("superagent name")
    parser.expect_punct("{")
    members = _ident_list(parser, "member name")
    parser.expect_punct("}")
    return SuperagentDecl(name.text, tuple(members), _span_between(start, parser.last))


def _parse_bracket_list(parser: _Parser, what: str, allow_empty: bool) -> List[str]:
    parser.expect_punct("[")
    names: List[str] = []
    closing = parser.peek()
    if closing.kind is TokenKind.PUNCTUATION and closing.text == "]":
        if not allow_empty:
            parser.fail("expected at least one %s" % what, ("identifier",))
        parser.advance()
        return names
    names = _ident_list(parser, what)
    parser.expect_punct("]")
    return names


def _parse_body(parser: _Parser) -> BodyDecl:
    start = parser.peek()
    if parser.match_keyword("offer"):
        polarity = "offer"
    elif parser.match_keyword("accept"):
        polarity = "accept"
    else:
        parser.fail("expected keyword 'offer' or 'accept', found %s" % _describe(start),
                    ("offer", "accept"))
    topic = parser.expect_ident("topic")
    text = None
    if parser.peek().kind is TokenKind.STRING:
        text = parser.advance().value
    behalf = None
    if parser.match_keyword("behalf"):
        behalf = parser.expect_ident("behalf agent").text
    affects: Tuple[str, ...] = ()
    if parser.match_keyword("affects"):
        affects = tuple(_parse_bracket_list(parser, "affected agent", allow_empty=False))
    condition = None
    if parser.match_keyword("condition"):
        condition = parser.expect_string().value
    return BodyDecl(polarity, topic.text, text, behalf, affects, condition,
                    _span_between(start, parser.last))


def _parse_promise(parser: _Parser) -> PromiseDecl:
    start = parser.expect_keyword("promise")
    name = parser.expect_ident("promise name")
    parser.expect_keyword("from")
    promiser = parser.expect_ident("promiser name")
    parser.expect_keyword("to")
    promisees = _ident_list(parser, "promisee name")
    scope = None
    if parser.match_keyword("scope"):
        scope = tuple(_parse_bracket_list(parser, "scope agent", allow_empty=True))
    provenance = None
    if parser.match_keyword("provenance"):
        parser.expect_punct("=")
        provenance = parser.expect_choice(PROVENANCES, "provenance").text
    parser.expect_punct("{")
    body = _parse_body(parser)
    parser.expect_punct("}")
    return PromiseDecl(name.text, promiser.text, tuple(promisees), scope, provenance,
                       body, _span_between(start, parser.last))


def _parse_imposition(parser: _Parser) -> ImpositionDecl:
    start = parser.expect_keyword("imposition")
    name = parser.expect_ident("imposition name")
    parser.expect_keyword("from")
    imposer = parser.expect_ident("imposer name")
    parser.expect_keyword("to")
    imposee = parser.expect_ident("imposee name")
    kind = None
    if parser.match_keyword("kind"):
        parser.expect_punct("=")
        kind = parser.expect_choice(IMPOSITION_KINDS, "imposition kind").text
    parser.expect_punct("{")
    text = parser.expect_string().value
    parser.expect_punct("}")
    return ImpositionDecl(name.text, imposer.text, imposee.text, kind, text,
                          _span_between(start, parser.last))


def _parse_assessment(parser: _Parser) -> AssessmentDecl:
    start = parser.expect_keyword("assessment")
    name = parser.expect_ident("assessment name")
    parser.expect_keyword("by")
    assessor = parser.expect_ident("assessor name")
    parser.expect_keyword("on")
    target = parser.expect_ident("target promise name")
    parser.expect_keyword("verdict")
    parser.expect_punct("=")
    verdict = parser.expect_choice(VERDICTS, "verdict").text
    note = None
    if parser.match_keyword("note"):
        note = parser.expect_string().value
    return AssessmentDecl(name.text, assessor.text, target.text, verdict, note,
                          _span_between(start, parser.last))


_ITEM_PARSERS = {
    "agent": _parse_agent,
    "superagent": _parse_superagent,
    "promise": _parse_promise,
    "imposition": _parse_imposition,
    "assessment": _parse_assessment,
}


def parse(text: str) -> Document:
    """Parse a document; raises ParseFailure carrying every diagnostic."""
    tokens = tokenize(text)
    parser = _Parser(tokens)
    items: List[Item] = []
    errors: List[ParseError] = []

    while True:
        while parser.raw_peek().kind is TokenKind.NEWLINE:
            parser.pos += 1
        token = parser.raw_peek()
        if token.kind is TokenKind.EOF:
            break
        try:
            if token.kind is not TokenKind.KEYWORD or token.text not in _ITEM_PARSERS:
                parser.fail("expected a declaration, found %s" % _describe(token),
                            tuple(sorted(TOP_LEVEL_KEYWORDS)))
            items.append(_ITEM_PARSERS[token.text](parser))
            terminator = parser.raw_peek()
            if terminator.kind not in (TokenKind.NEWLINE, TokenKind.EOF):
                parser.fail("expected end of statement, found %s" % _describe(terminator),
                            ("newline",))
        except _Unwind as unwind:
            errors.append(unwind.error)
            parser.recover()

    if errors:
        raise ParseFailure(errors)
    return Document(tuple(items))
