"""Polynomial surface syntax: exact parsing and canonical printing.

Grammar (whitespace insignificant, multiplication always explicit):

    expr     := ('-')? term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' uint)?
    base     := variable | rational | '(' expr ')'
    rational := uint ('/' uint)?

Input expressions name body variables only; x, y and t are reserved for
image coordinates and root isolation, and are rejected with a pointed
message unless explicitly allowed (the report reader allows x, y when
it restores boundary curves).
"""

from fractions import Fraction

from .algebra import integer_primitive
from .errors import ParseError
from .mvpoly import VARS, MvPoly

_MAX_EXPONENT = 64
_DEFAULT_VARS = ("u", "v", "w")

# print order: image coordinates first, then body variables, then t
_PRINT_ORDER = ("x", "y", "u", "v", "w", "t")
_PRINT_INDEX = {name: VARS.index(name) for name in _PRINT_ORDER}


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_space(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def next_token(self):
        """(kind, value, position); kind is one of 'int', 'var', 'op',
        'end'."""
        self._skip_space()
        if self.pos >= len(self.text):
            return ("end", None, self.pos)
        ch = self.text[self.pos]
        start = self.pos
        if ch.isdigit():
            while (self.pos < len(self.text)
                   and self.text[self.pos].isdigit()):
                self.pos += 1
            return ("int", int(self.text[start:self.pos]), start)
        if ch.isalpha():
            while (self.pos < len(self.text)
                   and self.text[self.pos].isalnum()):
                self.pos += 1
            return ("var", self.text[start:self.pos], start)
        if ch in "+-*/^()":
            self.pos += 1
            return ("op", ch, start)
        raise ParseError(f"unexpected character {ch!r}", start)


class _Parser:
    def __init__(self, text: str, variables):
        self.variables = tuple(variables)
        self.tokens = []
        lexer = _Lexer(text)
        while True:
            token = lexer.next_token()
            self.tokens.append(token)
            if token[0] == "end":
                break
        self.index = 0

    def peek(self):
        return self.tokens[self.index]

    def advance(self):
        token = self.tokens[self.index]
        if token[0] != "end":
            self.index += 1
        return token

    def fail(self, expected: str):
        kind, value, pos = self.peek()
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"expected {expected}, found {found}", pos)

    def expect_op(self, symbol: str):
        kind, value, _ = self.peek()
        if kind == "op" and value == symbol:
            return self.advance()
        self.fail(f"'{symbol}'")

    def parse(self) -> MvPoly:
        result = self.expr()
        if self.peek()[0] != "end":
            self.fail("'+', '-', '*', '^' or end of input")
        return result

    def expr(self) -> MvPoly:
        kind, value, _ = self.peek()
        negate = kind == "op" and value == "-"
        if negate:
            self.advance()
        result = self.term()
        if negate:
            result = -result
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                rhs = self.term()
                result = result + rhs if value == "+" else result - rhs
            else:
                return result

    def term(self) -> MvPoly:
        result = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                result = result * self.factor()
            else:
                return result

    def factor(self) -> MvPoly:
        base = self.base()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            kind, value, pos = self.peek()
            if kind != "int":
                self.fail("an integer exponent")
            if value > _MAX_EXPONENT:
                raise ParseError(
                    f"exponent {value} exceeds the supported maximum "
                    f"{_MAX_EXPONENT}", pos)
            self.advance()
            return base ** value
        return base

    def base(self) -> MvPoly:
        kind, value, pos = self.peek()
        if kind == "var":
            if value not in self.variables:
                if value in VARS:
                    raise ParseError(
                        f"variable {value!r} is reserved here; allowed "
                        f"variables: {', '.join(self.variables)}", pos)
                raise ParseError(f"unknown variable {value!r}", pos)
            self.advance()
            return MvPoly.var(value)
        if kind == "int":
            self.advance()
            num = value
            kind, value, _ = self.peek()
            if kind == "op" and value == "/":
                self.advance()
                kind, value, pos = self.peek()
                if kind != "int":
                    self.fail("an integer denominator")
                if value == 0:
                    raise ParseError("denominator must be nonzero", pos)
                self.advance()
                return MvPoly.constant(Fraction(num, value))
            return MvPoly.constant(num)
        if kind == "op" and value == "(":
            self.advance()
            inner = self.expr()
            self.expect_op(")")
            return inner
        self.fail("a variable, a number or '('")


def parse_poly(text: str, variables=None) -> MvPoly:
    """Parse a polynomial expression into an exact MvPoly.

    `variables` restricts the legal variable names (body variables by
    default); anything else, reserved or unknown, raises ParseError with
    the offending position.
    """
    return _Parser(text, variables or _DEFAULT_VARS).parse()


def _monomial_key(exp: tuple):
    return (sum(exp),) + tuple(exp[_PRINT_INDEX[name]]
                               for name in _PRINT_ORDER)


def _monomial_text(exp: tuple) -> str:
    parts = []
    for name in _PRINT_ORDER:
        e = exp[_PRINT_INDEX[name]]
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _coef_text(c: Fraction) -> str:
    a = abs(c)
    if a.denominator == 1:
        return str(a.numerator)
    return f"{a.numerator}/{a.denominator}"


def format_poly(p: MvPoly, scaled: bool = True) -> str:
    """Canonical text: integer-primitive scaling, graded-lex descending
    terms (x before y before body variables), '*' and '^' explicit.
    Parsing the output reproduces the canonical polynomial exactly.
    With scaled=False the coefficients are printed verbatim (rationals
    as num/den), making the text a lossless image of the input."""
    if p.is_zero():
        return "0"
    q = integer_primitive(p) if scaled else p
    items = sorted(q.terms.items(), key=lambda kv: _monomial_key(kv[0]),
                   reverse=True)
    pieces = []
    for i, (exp, coef) in enumerate(items):
        mono = _monomial_text(exp)
        if mono:
            body = mono if abs(coef) == 1 else f"{_coef_text(coef)}*{mono}"
        else:
            body = _coef_text(coef)
        if i == 0:
            pieces.append(body if coef > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coef > 0 else f"- {body}")
    return " ".join(pieces)
