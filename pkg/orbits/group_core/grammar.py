"""
Recursive-descent parser for the plain expression grammar.

    expr    := factor ('x' factor)*
    factor  := atom ('^' NUM)?
    atom    := '1' | 'Z' | 'Z<m>' | '(' expr ')'
             | ('Wr' | 'WrM') '(' expr ',' NUM ')'
             | ('Wr2' | 'Wr2M') '(' expr ',' NUM ',' NUM ')'
             | ('TwWr' | 'TwWrM') '(' expr ',' expr ',' gamma ',' NUM ')'
    gamma   := 'id' | 'inv' | 'table' '[' NUM, ... ']'
             | 'perm' '[' NUM, ... ']' ('(' gamma, ... ')')?

`G^k` is sugar for the k-fold direct product and expands in place.
"""
import re
from typing import List, NamedTuple

from pydantic import ValidationError

from orbits.errors import ExprSyntaxError
from orbits.group_core.constants import (
    INVOLUTION_KEYWORDS,
    PRODUCT_OPERATOR,
    TWISTED_KEYWORDS,
    WREATH_KEYWORDS,
)
from orbits.group_core.models import (
    Cyclic,
    Direct,
    FactorPermutation,
    IdentityInvolution,
    IntLine,
    TableInvolution,
    TwistedWrZ,
    TwistedWrZm,
    Unit,
    WrZ,
    WrZm,
    WrZZ,
    WrZZmn,
    factors_of,
)

TOKEN_PATTERN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[(),\[\]^]))")
CYCLIC_PATTERN = re.compile(r"^Z(\d+)$")

WREATH_BUILDERS = {"Wr": WrZ, "WrM": WrZm, "Wr2": WrZZ, "Wr2M": WrZZmn}
TWISTED_BUILDERS = {"TwWr": TwistedWrZ, "TwWrM": TwistedWrZm}


class Token(NamedTuple):
    kind: str
    value: str
    pos: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = TOKEN_PATTERN.match(text, pos)
        if not match or match.end() == pos:
            raise ExprSyntaxError(text, pos, f"unexpected character {text[pos]!r}")
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    # --- token helpers ---

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def fail(self, reason: str, token: Token = None):
        token = token or self.current
        raise ExprSyntaxError(self.text, token.pos, reason)

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def expect(self, value: str) -> Token:
        if self.current.value != value:
            self.fail(f"expected {value!r}, found {self.current.value or 'end of input'!r}")
        return self.advance()

    def number(self, minimum: int = 1) -> int:
        token = self.current
        if token.kind != "num":
            self.fail("expected an integer")
        self.advance()
        value = int(token.value)
        if value < minimum:
            self.fail(f"integer must be >= {minimum}, got {value}", token)
        return value

    def number_list(self) -> List[int]:
        self.expect("[")
        values = []
        if self.current.value != "]":
            values.append(self.number(minimum=0))
            while self.current.value == ",":
                self.advance()
                values.append(self.number(minimum=0))
        self.expect("]")
        return values

    # --- grammar ---

    def parse(self):
        expr = self.expr()
        if self.current.kind != "end":
            self.fail(f"unexpected trailing input {self.current.value!r}")
        return expr

    def expr(self):
        factors = self.factor()
        while self.current.kind == "name" and self.current.value == PRODUCT_OPERATOR:
            self.advance()
            factors.extend(self.factor())
        return factors[0] if len(factors) == 1 else Direct(factors)

    def factor(self) -> list:
        atom = self.atom()
        if self.current.value == "^":
            self.advance()
            power = self.number()
            return [atom] * power
        return [atom]

    def atom(self):
        token = self.current
        if token.kind == "num":
            if token.value != "1":
                self.fail(f"only '1' may appear as a bare integer, found {token.value}")
            self.advance()
            return Unit()
        if token.value == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if token.kind != "name":
            self.fail(f"unexpected {token.value or 'end of input'!r}")
        self.advance()
        if token.value == "Z":
            return IntLine()
        cyclic = CYCLIC_PATTERN.match(token.value)
        if cyclic:
            order = int(cyclic.group(1))
            if order < 1:
                self.fail("cyclic order must be >= 1", token)
            return Cyclic(order)
        if token.value in WREATH_KEYWORDS:
            return self.wreath(token)
        if token.value in TWISTED_KEYWORDS:
            return self.twisted(token)
        self.fail(f"unknown name {token.value!r}", token)

    def wreath(self, keyword: Token):
        self.expect("(")
        base = self.expr()
        params = []
        for _ in range(WREATH_KEYWORDS[keyword.value]):
            self.expect(",")
            params.append(self.number())
        self.expect(")")
        return WREATH_BUILDERS[keyword.value](base, *params)

    def twisted(self, keyword: Token):
        self.expect("(")
        g = self.expr()
        self.expect(",")
        h = self.expr()
        self.expect(",")
        gamma_token = self.current
        gamma = self.gamma(h)
        self.expect(",")
        m = self.number()
        self.expect(")")
        try:
            return TWISTED_BUILDERS[keyword.value](g, h, gamma, m)
        except ValidationError as exc:
            self.fail(f"involution does not fit H: {exc.errors()[0]['msg']}", gamma_token)

    def gamma(self, h):
        token = self.current
        if token.kind != "name":
            self.fail("expected an involution")
        if token.value not in INVOLUTION_KEYWORDS:
            self.fail(f"unknown involution {token.value!r}, expected one of {', '.join(INVOLUTION_KEYWORDS)}")
        self.advance()
        try:
            if token.value == "id":
                return IdentityInvolution()
            if token.value == "inv":
                from orbits.group_arith.involution import inversion_table

                return inversion_table(h)
            if token.value == "table":
                return TableInvolution(self.number_list())
            if token.value == "perm":
                perm = self.number_list()
                inner = []
                if self.current.value == "(":
                    parts = factors_of(h) if h is not None else ()
                    self.advance()
                    inner.append(self.gamma(parts[0] if parts else None))
                    while self.current.value == ",":
                        self.advance()
                        slot = len(inner)
                        inner.append(self.gamma(parts[slot] if slot < len(parts) else None))
                    self.expect(")")
                return FactorPermutation(perm, inner or None)
        except (ValidationError, ValueError) as exc:
            self.fail(f"invalid involution: {exc}", token)
        self.fail(f"unknown involution {token.value!r}", token)


def parse_expr(text: str):
    """
    Parse a plain-style group expression.

    Args:
        text: Expression such as "Wr(Z x Z2, 3)" or "TwWr(Z2, Z3, id, 2)"

    Returns:
        The GroupExpr, exactly as written (no normalization).

    Raises:
        ExprSyntaxError: on malformed input or a multiplicity below 1
    """
    return _Parser(text).parse()


def parse_involution(text: str, h):
    """Parse a standalone gamma (`id`, `inv`, `table[...]`, `perm[...]`) over H."""
    parser = _Parser(text)
    gamma = parser.gamma(h)
    if parser.current.kind != "end":
        parser.fail(f"unexpected trailing input {parser.current.value!r}")
    return gamma
