"""Text front ends: actions, licenses, formulas, run files, and DR licenses.

All grammars are plain ASCII.  ``#`` starts a comment anywhere.  Reserved
words (``pay render bot issue true P O X G F U``) cannot be used as license
names.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

from .digitalrights import DrLicense, Exactly, Single, Upto
from .formulas import (
    ActionExpr,
    Act,
    Formula,
    Perm,
    Issue,
    Truth,
    f_and,
    f_eventually,
    f_implies,
    f_not,
    f_oblig,
    f_or,
    f_until,
    f_next,
    f_always,
)
from .licenses import (
    BOT,
    Action,
    Atom,
    Concat,
    License,
    Pay,
    Render,
    Star,
    Union,
)
from .runs import Run, make_run


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


RESERVED = frozenset(
    {"pay", "render", "bot", "issue", "do", "true", "P", "O", "X", "G", "F", "U"}
)

_TWO_CHAR_OPS = ("->",)
_ONE_CHAR_OPS = "()[]{},*|&!=@~"


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "number" | "op" | "eof"
    text: str
    line: int
    col: int


def tokenize(text: str, first_line: int = 1) -> list[Token]:
    tokens: list[Token] = []
    line, col = first_line, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if text.startswith(_TWO_CHAR_OPS[0], i):
            tokens.append(Token("op", "->", line, start_col))
            i += 2
            col += 2
            continue
        if ch in _ONE_CHAR_OPS:
            tokens.append(Token("op", ch, line, start_col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            if j < len(text) and text[j] == ".":
                j += 1
                while j < len(text) and text[j].isdigit():
                    j += 1
            tokens.append(Token("number", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("ident", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, start_col)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Stream:
    def __init__(self, tokens: list[Token]):
        self._tokens = tokens
        self._pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self._tokens[min(self._pos + ahead, len(self._tokens) - 1)]

    def next(self) -> Token:
        token = self.peek()
        if token.kind != "eof":
            self._pos += 1
        return token

    def expect(self, text: str) -> Token:
        token = self.peek()
        if token.text != text:
            self.fail(f"expected {text!r}, found {self._describe(token)}")
        return self.next()

    def fail(self, message: str):
        token = self.peek()
        raise ParseError(message, token.line, token.col)

    def at_end(self) -> bool:
        return self.peek().kind == "eof"

    def expect_end(self) -> None:
        if not self.at_end():
            self.fail(f"unexpected trailing input {self._describe(self.peek())}")

    @staticmethod
    def _describe(token: Token) -> str:
        return "end of input" if token.kind == "eof" else repr(token.text)


def _parse_name(stream: _Stream, what: str = "name") -> str:
    token = stream.peek()
    if token.kind != "ident" or token.text in RESERVED:
        stream.fail(f"expected a {what}")
    return stream.next().text


def _parse_amount(stream: _Stream) -> Decimal:
    token = stream.peek()
    if token.kind != "number":
        stream.fail("expected a decimal amount")
    stream.next()
    if "." in token.text and len(token.text.split(".")[1]) > 2:
        raise ParseError(
            f"amount {token.text} has more than two fractional digits",
            token.line,
            token.col,
        )
    return Decimal(token.text)


def _parse_natural(stream: _Stream, what: str = "number") -> int:
    token = stream.peek()
    if token.kind != "number" or "." in token.text:
        stream.fail(f"expected a {what}")
    stream.next()
    return int(token.text)


def _starts_action(token: Token) -> bool:
    return token.text in ("pay", "render", "bot")


def _parse_action(stream: _Stream) -> Action:
    token = stream.peek()
    if token.text == "bot":
        stream.next()
        return BOT
    if token.text == "pay":
        stream.next()
        stream.expect("[")
        amount = _parse_amount(stream)
        stream.expect("]")
        return Pay(amount)
    if token.text == "render":
        stream.next()
        stream.expect("[")
        work = _parse_name(stream, "work identifier")
        stream.expect(",")
        device = _parse_name(stream, "device identifier")
        stream.expect("]")
        return Render(work, device)
    stream.fail("expected an action (pay[..], render[..,..], or bot)")


def parse_action(text: str) -> Action:
    stream = _Stream(tokenize(text))
    action = _parse_action(stream)
    stream.expect_end()
    return action


# License grammar: union over concatenation over starred primaries.

def _parse_license(stream: _Stream) -> License:
    lic = _parse_license_concat(stream)
    while stream.peek().text == "|":
        stream.next()
        lic = Union(lic, _parse_license_concat(stream))
    return lic


def _parse_license_concat(stream: _Stream) -> License:
    lic = _parse_license_postfix(stream)
    while _starts_action(stream.peek()) or stream.peek().text == "(":
        lic = Concat(lic, _parse_license_postfix(stream))
    return lic


def _parse_license_postfix(stream: _Stream) -> License:
    lic = _parse_license_primary(stream)
    while stream.peek().text == "*":
        stream.next()
        lic = Star(lic)
    return lic


def _parse_license_primary(stream: _Stream) -> License:
    token = stream.peek()
    if token.kind == "number":
        stream.fail("the license constants 0 and 1 are not part of the surface syntax")
    if token.text == "(":
        stream.next()
        lic = _parse_license(stream)
        stream.expect(")")
        return lic
    if _starts_action(token):
        return Atom(_parse_action(stream))
    stream.fail("expected a license")


def parse_license(text: str) -> License:
    stream = _Stream(tokenize(text))
    lic = _parse_license(stream)
    stream.expect_end()
    return lic


# Formula grammar, loosest to tightest: ->, |, &, U, unary (! X G F), atoms.

def _parse_formula(stream: _Stream) -> Formula:
    left = _parse_formula_or(stream)
    if stream.peek().text == "->":
        stream.next()
        return f_implies(left, _parse_formula(stream))
    return left


def _parse_formula_or(stream: _Stream) -> Formula:
    formula = _parse_formula_and(stream)
    while stream.peek().text == "|":
        stream.next()
        formula = f_or(formula, _parse_formula_and(stream))
    return formula


def _parse_formula_and(stream: _Stream) -> Formula:
    formula = _parse_formula_until(stream)
    while stream.peek().text == "&":
        stream.next()
        formula = f_and(formula, _parse_formula_until(stream))
    return formula


def _parse_formula_until(stream: _Stream) -> Formula:
    formula = _parse_formula_unary(stream)
    if stream.peek().text == "U":
        stream.next()
        return f_until(formula, _parse_formula_until(stream))
    return formula


def _parse_formula_unary(stream: _Stream) -> Formula:
    token = stream.peek()
    if token.text == "!":
        stream.next()
        return f_not(_parse_formula_unary(stream))
    if token.text == "X":
        stream.next()
        return f_next(_parse_formula_unary(stream))
    if token.text == "G":
        stream.next()
        return f_always(_parse_formula_unary(stream))
    if token.text == "F":
        stream.next()
        return f_eventually(_parse_formula_unary(stream))
    return _parse_formula_atom(stream)


def _parse_action_pair(stream: _Stream) -> ActionExpr:
    stream.expect("(")
    positive = True
    if stream.peek().text == "~":
        stream.next()
        positive = False
    action = _parse_action(stream)
    stream.expect(",")
    name = _parse_name(stream)
    stream.expect(")")
    return ActionExpr(positive, action, name)


def _parse_formula_atom(stream: _Stream) -> Formula:
    token = stream.peek()
    if token.text == "true":
        stream.next()
        return Truth()
    if token.text == "issue":
        stream.next()
        stream.expect("(")
        name = _parse_name(stream)
        stream.expect(",")
        lic = _parse_license(stream)
        stream.expect(")")
        return Issue(name, lic)
    if token.text == "P":
        stream.next()
        return Perm(_parse_action_pair(stream))
    if token.text == "O":
        stream.next()
        expr = _parse_action_pair(stream)
        if not expr.positive:
            stream.fail("obligations take a plain action, not a complement")
        return f_oblig(expr.action, expr.name)
    if token.text == "(":
        after = stream.peek(1)
        if after.text == "~" or _starts_action(after):
            return Act(_parse_action_pair(stream))
        stream.next()
        formula = _parse_formula(stream)
        stream.expect(")")
        return formula
    stream.fail("expected a formula")


def parse_formula(text: str) -> Formula:
    stream = _Stream(tokenize(text))
    formula = _parse_formula(stream)
    stream.expect_end()
    return formula


# Run files are line oriented:
#   @<t> issue <name> = <license>
#   @<t> do <name> <action>

def parse_run(text: str) -> Run:
    issuances: list[tuple[int, str, License]] = []
    actions: list[tuple[int, str, Action]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        stream = _Stream(tokenize(raw, first_line=lineno))
        stream.expect("@")
        time = _parse_natural(stream, "time")
        keyword = stream.peek()
        if keyword.text == "issue":
            stream.next()
            name = _parse_name(stream)
            stream.expect("=")
            lic = _parse_license(stream)
            stream.expect_end()
            issuances.append((time, name, lic))
        elif keyword.text == "do":
            stream.next()
            name = _parse_name(stream)
            action = _parse_action(stream)
            stream.expect_end()
            actions.append((time, name, action))
        else:
            stream.fail("expected 'issue' or 'do'")
    return make_run(issuances, actions)


# DR licenses:  for [upto] [m] p pay x (upfront|flatrate|peruse) for {..} on {..}

def _parse_ident_set(stream: _Stream) -> frozenset[str]:
    stream.expect("{")
    names = [_parse_name(stream, "identifier")]
    while stream.peek().text == ",":
        stream.next()
        names.append(_parse_name(stream, "identifier"))
    stream.expect("}")
    return frozenset(names)


def parse_dr(text: str) -> DrLicense:
    stream = _Stream(tokenize(text))
    stream.expect("for")
    if stream.peek().text == "upto":
        stream.next()
        count = _parse_natural(stream, "period count")
        period = _parse_natural(stream, "period length")
        repetition = Upto(count, period)
    else:
        first = _parse_natural(stream, "period length")
        if stream.peek().kind == "number":
            period = _parse_natural(stream, "period length")
            repetition = Exactly(first, period)
        else:
            repetition = Single(first)
    stream.expect("pay")
    amount = _parse_amount(stream)
    schedule = stream.peek().text
    if schedule not in ("upfront", "flatrate", "peruse"):
        stream.fail("expected a payment schedule (upfront, flatrate, or peruse)")
    stream.next()
    stream.expect("for")
    works = _parse_ident_set(stream)
    stream.expect("on")
    devices = _parse_ident_set(stream)
    stream.expect_end()
    return DrLicense(repetition, amount, schedule, works, devices)
