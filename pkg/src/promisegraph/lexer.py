"""Tokenizer for the promise-declaration language.

Hand-rolled scanner. Tokens carry exact source slices and byte spans so the
parser can report precise diagnostics; whitespace and `#` comments are
skipped but the spans of the surviving tokens still tile the input (the
lossless-lexing property is tested against this).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

from .model import SourceSpan

KEYWORDS = frozenset({
    "agent", "superagent", "promise", "imposition", "assessment",
    "from", "to", "scope", "provenance", "kind",
    "offer", "accept", "behalf", "affects", "condition",
    "by", "on", "verdict", "note",
})

TOP_LEVEL_KEYWORDS = frozenset({
    "agent", "superagent", "promise", "imposition", "assessment",
})

PUNCTUATION = frozenset("={}[],")


class TokenKind(Enum):
    KEYWORD = "keyword"
    IDENTIFIER = "identifier"
    STRING = "string-literal"
    PUNCTUATION = "punctuation"
    NEWLINE = "newline"
    EOF = "eof"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    span: SourceSpan

    @property
    def value(self) -> str:
        """Decoded payload: for strings the unescaped content, else the text."""
        if self.kind is not TokenKind.STRING:
            return self.text
        body = self.text[1:-1]
        out = []
        i = 0
        while i < len(body):
            if body[i] == "\\":
                out.append(body[i + 1])
                i += 2
            else:
                out.append(body[i])
                i += 1
        return "".join(out)


@dataclass(frozen=True)
class ParseError:
    message: str
    expected: tuple
    span: SourceSpan

    def __str__(self) -> str:
        return "%d:%d: %s" % (self.span.line, self.span.column, self.message)


class ParseFailure(Exception):
    """Raised when tokenize/parse cannot produce a document."""

    def __init__(self, errors: List[ParseError]):
        super().__init__("; ".join(str(e) for e in errors))
        self.errors = errors


def _is_ident_start(ch: str) -> bool:
    return ch.isascii() and ch.isalpha()


def _is_ident_part(ch: str) -> bool:
    return ch.isascii() and (ch.isalnum() or ch in "_-")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.column = 1

    def span_from(self, start_pos: int, start_line: int, start_col: int) -> SourceSpan:
        return SourceSpan(start_pos, self.pos, start_line, start_col)

    def advance(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.column = 1
        else:
            self.column += 1
        return ch

    def peek(self) -> Optional[str]:
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]


def tokenize(text: str) -> List[Token]:
    """Scan the whole input; raises ParseFailure with a single error on the
    first unterminated string or illegal character."""
    scanner = _Scanner(text)
    tokens: List[Token] = []

    def fail(message: str, span: SourceSpan) -> None:
        raise ParseFailure([ParseError(message, (), span)])

    while scanner.peek() is not None:
        start_pos, start_line, start_col = scanner.pos, scanner.line, scanner.column
        ch = scanner.peek()

        if ch == "\n":
            scanner.advance()
            tokens.append(Token(TokenKind.NEWLINE, "\n",
                                scanner.span_from(start_pos, start_line, start_col)))
            continue
        if ch in " \t\r":
            scanner.advance()
            continue
        if ch == "#":
            while scanner.peek() is not None and scanner.peek() != "\n":
                scanner.advance()
            continue
        if ch in PUNCTUATION:
            scanner.advance()
            tokens.append(Token(TokenKind.PUNCTUATION, ch,
                                scanner.span_from(start_pos, start_line, start_col)))
            continue
        if ch == '"':
            scanner.advance()
            while True:
                nxt = scanner.peek()
                if nxt is None or nxt == "\n":
                    fail("unterminated string literal",
                         scanner.span_from(start_pos, start_line, start_col))
                if nxt == "\\":
                    scanner.advance()
                    esc = scanner.peek()
                    if esc not in ('"', "\\"):
                        fail("illegal escape sequence in string literal",
                             scanner.span_from(start_pos, start_line, start_col))
                    scanner.advance()
                    continue
                scanner.advance()
                if nxt == '"':
                    break
            tokens.append(Token(TokenKind.STRING,
                                text[start_pos:scanner.pos],
                                scanner.span_from(start_pos, start_line, start_col)))
            continue
        if _is_ident_start(ch):
            while scanner.peek() is not None and _is_ident_part(scanner.peek()):
                scanner.advance()
            word = text[start_pos:scanner.pos]
            kind = TokenKind.KEYWORD if word in KEYWORDS else TokenKind.IDENTIFIER
            tokens.append(Token(kind, word,
                                scanner.span_from(start_pos, start_line, start_col)))
            continue

        scanner.advance()
        fail("illegal character %r" % ch,
             scanner.span_from(start_pos, start_line, start_col))

    tokens.append(Token(TokenKind.EOF, "",
                        SourceSpan(len(text), len(text), scanner.line, scanner.column)))
    return tokens
