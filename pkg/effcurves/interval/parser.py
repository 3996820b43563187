"""
Parser for the expression DSL, inequality lines and chain corpus files.

Grammar (whitespace insignificant, `#` starts a comment):

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' (INT | '-' INT | '(' ['-'] INT ')'))*
    atom    := NUMBER | NAME | 'pi' | FUNC '(' expr (',' expr)* ')' | '(' expr ')'

    inequality := expr '>=' '0' ['on' NAME 'in' '[' expr ',' expr ']' (',' ...)*]

Numbers are decimal literals with optional exponent; they become exact
rationals. Interval bounds must be constant rational expressions.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..errors import ParseError
from .expr import (
    FUNCTION_ARITY, PI, Add, Call, Const, Div, Expr, Mul, Neg, Pow, Sub, Var,
    variables,
)

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>>=|==|[-+*/^(),\[\]])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # number, name, op, end
    text: str
    line: int
    column: int


def tokenize(text: str, line: int = 1, column: int = 1) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    col = column
    while pos < len(text):
        if text[pos] == "\n":
            line += 1
            col = 1
            pos += 1
            continue
        if text[pos] == "#":
            while pos < len(text) and text[pos] != "\n":
                pos += 1
            continue
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = match.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, match.group(), line, col))
        col += match.end() - pos
        pos = match.end()
    tokens.append(Token("end", "", line, col))
    return tokens


class _Parser:
    """Recursive-descent parser over a token list."""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def error(self, message: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.current
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        return ParseError(f"{message}, found {found}", tok.line, tok.column)

    def accept(self, text: str) -> bool:
        if self.current.kind in ("op", "name") and self.current.text == text:
            self.advance()
            return True
        return False

    def expect(self, text: str) -> Token:
        if self.current.text != text or self.current.kind == "end":
            raise self.error(f"expected {text!r}")
        return self.advance()

    # ------------------------------------------------------------------
    # Expressions
    # ------------------------------------------------------------------

    def expr(self) -> Expr:
        node = self.term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self.advance().text
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.current.kind == "op" and self.current.text in ("*", "/"):
            op = self.advance().text
            rhs = self.unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def unary(self) -> Expr:
        if self.current.kind == "op" and self.current.text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        node = self.atom()
        while self.accept("^"):
            node = Pow(node, self.exponent())
        return node

    def exponent(self) -> int:
        parenthesized = self.accept("(")
        sign = -1 if self.accept("-") else 1
        tok = self.current
        if tok.kind != "number" or not tok.text.isdigit():
            raise self.error("exponent must be an integer")
        self.advance()
        if parenthesized:
            self.expect(")")
        return sign * int(tok.text)

    def atom(self) -> Expr:
        tok = self.current
        if tok.kind == "number":
            self.advance()
            return Const(Fraction(tok.text))
        if tok.kind == "name":
            self.advance()
            if tok.text == "pi":
                return PI
            if tok.text in FUNCTION_ARITY:
                return self.call(tok)
            if self.current.text == "(" and self.current.kind == "op":
                raise self.error(f"unknown function {tok.text!r}", tok)
            return Var(tok.text)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        raise self.error("expected a number, name or '('")

    def call(self, name: Token) -> Expr:
        self.expect("(")
        args = [self.expr()]
        while self.accept(","):
            args.append(self.expr())
        self.expect(")")
        lo, hi = FUNCTION_ARITY[name.text]
        if len(args) < lo or (hi is not None and len(args) > hi):
            raise ParseError(f"wrong number of arguments to {name.text}", name.line, name.column)
        return Call(name.text, tuple(args))

    def finish(self) -> None:
        if self.current.kind != "end":
            raise self.error("unexpected trailing input")


def parse_expr(text: str, line: int = 1) -> Expr:
    """Parse one DSL expression."""
    parser = _Parser(tokenize(text, line))
    node = parser.expr()
    parser.finish()
    return node


# =================================================================
# INEQUALITIES
# =================================================================

def constant_value(e: Expr) -> Optional[Fraction]:
    """Exact value of a variable-free rational expression, else None."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Neg):
        v = constant_value(e.arg)
        return None if v is None else -v
    if isinstance(e, Pow):
        v = constant_value(e.base)
        if v is None or (v == 0 and e.exponent < 0):
            return None
        return v ** e.exponent
    if isinstance(e, (Add, Sub, Mul, Div)):
        a, b = constant_value(e.left), constant_value(e.right)
        if a is None or b is None:
            return None
        if isinstance(e, Add):
            return a + b
        if isinstance(e, Sub):
            return a - b
        if isinstance(e, Mul):
            return a * b
        return None if b == 0 else a / b
    return None


@dataclass(frozen=True)
class Inequality:
    """`expr >= 0` over a product of closed rational intervals."""

    expr: Expr
    domains: Tuple[Tuple[str, Fraction, Fraction], ...] = ()
    text: str = ""
    line: int = 1

    def bounds(self) -> Dict[str, Tuple[Fraction, Fraction]]:
        return {name: (lo, hi) for name, lo, hi in self.domains}


def _parse_inequality_tokens(parser: _Parser, text: str, line: int) -> Inequality:
    lhs = parser.expr()
    ge = parser.current
    parser.expect(">=")
    rhs = parser.expr()
    if constant_value(rhs) != 0:
        raise ParseError("right-hand side of an inequality must be 0", ge.line, ge.column)

    domains: List[Tuple[str, Fraction, Fraction]] = []
    if parser.accept("on"):
        while True:
            name = parser.current
            if name.kind != "name":
                raise parser.error("expected a variable name")
            parser.advance()
            parser.expect("in")
            parser.expect("[")
            lo_tok = parser.current
            lo = constant_value(parser.expr())
            parser.expect(",")
            hi = constant_value(parser.expr())
            parser.expect("]")
            if lo is None or hi is None:
                raise ParseError("interval bounds must be rational constants", lo_tok.line, lo_tok.column)
            if lo > hi:
                raise ParseError(f"empty interval for {name.text}", lo_tok.line, lo_tok.column)
            if any(d[0] == name.text for d in domains):
                raise ParseError(f"variable {name.text} bound twice", name.line, name.column)
            domains.append((name.text, lo, hi))
            if not parser.accept(","):
                break
    parser.finish()
    return Inequality(lhs, tuple(domains), text.strip(), line)


def parse_inequality(text: str, line: int = 1) -> Inequality:
    """Parse `EXPR >= 0 on VAR in [lo, hi], ...`."""
    return _parse_inequality_tokens(_Parser(tokenize(text, line)), text, line)


@dataclass(frozen=True)
class Identity:
    """Claimed equality between two monomial expressions."""

    lhs: Expr
    rhs: Expr
    text: str = ""
    line: int = 1


def parse_identity(text: str, line: int = 1) -> Identity:
    parser = _Parser(tokenize(text, line))
    lhs = parser.expr()
    parser.expect("==")
    rhs = parser.expr()
    parser.finish()
    return Identity(lhs, rhs, text.strip(), line)


# =================================================================
# CORPUS FILES
# =================================================================

@dataclass
class ChainBlock:
    """One `[chain_id]` section of a corpus file."""

    chain_id: str
    cite: str = ""
    note: str = ""
    line: int = 1
    steps: List[Inequality] = field(default_factory=list)
    tails: List[Inequality] = field(default_factory=list)
    premises: List[Inequality] = field(default_factory=list)
    identities: List[Identity] = field(default_factory=list)

    def free_names(self) -> set:
        """Names used by the chain's expressions but not bound by any domain."""
        names = set()
        for ineq in self.steps + self.tails + self.premises:
            names |= set(variables(ineq.expr)) - {d[0] for d in ineq.domains}
        for ident in self.identities:
            names |= set(variables(ident.lhs)) | set(variables(ident.rhs))
        return names


_HEADER_RE = re.compile(r"^\[([A-Za-z_][A-Za-z_0-9]*)\]$")
_KEY_RE = re.compile(r"^(cite|note|tail|premise|identity)\s*=\s*(.*)$")


def parse_corpus(text: str, source: str = "<corpus>") -> List[ChainBlock]:
    """
    Parse a chain corpus.

    Args:
        text: File contents
        source: Name used in log messages

    Returns:
        Chain blocks in file order
    """
    blocks: List[ChainBlock] = []
    seen: Dict[str, int] = {}
    block: Optional[ChainBlock] = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        header = _HEADER_RE.match(stripped)
        if header:
            chain_id = header.group(1)
            if chain_id in seen:
                raise ParseError(f"duplicate chain id {chain_id!r} (first at line {seen[chain_id]})", lineno, 1)
            seen[chain_id] = lineno
            block = ChainBlock(chain_id=chain_id, line=lineno)
            blocks.append(block)
            continue
        if block is None:
            raise ParseError("content before the first [chain_id] header", lineno, 1)

        key = _KEY_RE.match(stripped)
        if key:
            name, value = key.group(1), key.group(2)
            offset = raw.index(value) + 1 if value else 1
            if name == "cite":
                block.cite = value
            elif name == "note":
                block.note = (block.note + " " + value).strip()
            elif name == "identity":
                block.identities.append(_with_column(parse_identity, value, lineno, offset))
            elif name == "tail":
                block.tails.append(_with_column(parse_inequality, value, lineno, offset))
            else:
                block.premises.append(_with_column(parse_inequality, value, lineno, offset))
            continue

        offset = raw.index(stripped) + 1
        block.steps.append(_with_column(parse_inequality, stripped, lineno, offset))

    logger.debug("parsed %d chains from %s", len(blocks), source)
    return blocks


def _with_column(parse, text: str, line: int, column: int):
    try:
        return parse(text, line)
    except ParseError as e:
        raise ParseError(str(e).rsplit(" (line", 1)[0], e.line, e.column + column - 1) from None
