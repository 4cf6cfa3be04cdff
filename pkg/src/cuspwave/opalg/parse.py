"""A small source language for differential operators.

Grammar (whitespace insignificant):

    expr     := ['-'] term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := atom ('^' exponent)?
    atom     := 'Dt' | 'D'index | 't' | 'x'index | 'r'
              | rational | '(' expr ')'
    exponent := integer | '(' integer '/' '2' ')'
    rational := integer ('/' integer)?

Multiplication is operator composition, so it does not commute: t*Dt
and Dt*t are different operators.  Half-integer exponents are only
meaningful on t and expand into powers of the square-root generator.
Negative exponents are allowed on pure coefficients, never on Dt or Di.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import ParseError
from .coeff import CoeffContext
from .diffop import DiffOp

__all__ = ["parse", "to_source"]

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<name>Dt|D[0-9]+|t|x[0-9]+|r)
  | (?P<int>[0-9]+)
  | (?P<op>[+\-*^()/])
""", re.VERBOSE)


class _Token:
    __slots__ = ("kind", "text", "line", "column")

    def __init__(self, kind, text, line, column):
        self.kind = kind
        self.text = text
        self.line = line
        self.column = column


def _tokenize(source):
    tokens = []
    line = 1
    line_start = 0
    pos = 0
    while pos < len(source):
        match = _TOKEN_RE.match(source, pos)
        if match is None:
            raise ParseError("unexpected character %r" % source[pos],
                             line=line, column=pos - line_start + 1,
                             expected="operator, name or number")
        if match.lastgroup != "ws":
            tokens.append(_Token(match.lastgroup, match.group(),
                                 line, pos - line_start + 1))
        else:
            for offset, ch in enumerate(match.group()):
                if ch == "\n":
                    line += 1
                    line_start = pos + offset + 1
        pos = match.end()
    tokens.append(_Token("end", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, ctx, tokens):
        self.ctx = ctx
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def fail(self, expected):
        token = self.peek()
        found = repr(token.text) if token.kind != "end" else "end of input"
        raise ParseError("found %s" % found, line=token.line,
                         column=token.column, expected=expected)

    def expect(self, text):
        token = self.peek()
        if token.text != text:
            self.fail(repr(text))
        return self.advance()

    # -- grammar ---------------------------------------------------------

    def parse_expr(self):
        negate = False
        if self.peek().text == "-":
            self.advance()
            negate = True
        result = self.parse_term()
        if negate:
            result = -result
        while self.peek().text in ("+", "-"):
            op = self.advance().text
            term = self.parse_term()
            result = result + term if op == "+" else result - term
        return result

    def parse_term(self):
        result = self.parse_factor()
        while self.peek().text == "*":
            self.advance()
            result = result * self.parse_factor()
        return result

    def parse_factor(self):
        atom_token = self.peek()
        atom = self.parse_atom()
        if self.peek().text != "^":
            return atom
        self.advance()
        exponent, halves = self.parse_exponent()
        if halves:
            if atom_token.text != "t":
                self.fail("a half-integer exponent on anything but t "
                          "is not defined")
            return DiffOp.from_coeff(self.ctx.t_pow(exponent))
        if self._is_coeff(atom):
            coeff = atom.terms[(0,) * (self.ctx.n + 1)]
            return DiffOp.from_coeff(coeff ** exponent)
        if exponent < 0:
            token = self.peek()
            raise ParseError("negative power of a differential operator",
                             line=atom_token.line, column=atom_token.column,
                             expected="a nonnegative exponent")
        return atom ** exponent

    def parse_exponent(self):
        """Return (value, halves): value in units of 1 or of 1/2."""
        if self.peek().text == "(":
            self.advance()
            value = self.parse_integer()
            self.expect("/")
            two = self.peek()
            if two.kind != "int" or two.text != "2":
                self.fail("the denominator 2")
            self.advance()
            self.expect(")")
            return value, True
        return self.parse_integer(), False

    def parse_integer(self):
        sign = 1
        if self.peek().text == "-":
            self.advance()
            sign = -1
        token = self.peek()
        if token.kind != "int":
            self.fail("an integer")
        self.advance()
        return sign * int(token.text)

    def parse_atom(self):
        token = self.peek()
        ctx = self.ctx
        if token.kind == "name":
            self.advance()
            name = token.text
            if name == "Dt":
                return DiffOp.dt(ctx)
            if name == "t":
                return DiffOp.from_coeff(ctx.t())
            if name == "r":
                if ctx.n < 2:
                    raise ParseError(
                        "the radial coefficient r needs at least two "
                        "space dimensions", line=token.line,
                        column=token.column, expected="t, x1 or D1")
                return DiffOp.from_coeff(ctx.r())
            index = int(name[1:])
            if not 1 <= index <= ctx.n:
                raise ParseError(
                    "index %d exceeds the space dimension %d"
                    % (index, ctx.n), line=token.line, column=token.column,
                    expected="an index between 1 and %d" % ctx.n)
            if name[0] == "D":
                return DiffOp.dx(ctx, index)
            return DiffOp.from_coeff(ctx.x(index))
        if token.kind == "int" or token.text == "-":
            numer = self.parse_integer()
            if self.peek().text == "/" and \
                    self.tokens[self.pos + 1].kind == "int":
                self.advance()
                denom = self.parse_integer()
                return DiffOp.from_coeff(ctx.rational(numer, denom))
            return DiffOp.from_coeff(ctx.rational(numer))
        if token.text == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        self.fail("an atom: Dt, Di, t, xi, r, a rational or '('")

    def _is_coeff(self, op):
        zero_index = (0,) * (self.ctx.n + 1)
        return set(op.terms) <= {zero_index}


def parse(source, ctx):
    """Parse operator source text over the given coefficient context."""
    if not isinstance(ctx, CoeffContext):
        raise TypeError("expected a CoeffContext")
    parser = _Parser(ctx, _tokenize(source))
    result = parser.parse_expr()
    if parser.peek().kind != "end":
        parser.fail("'+', '-', '*' or end of input")
    return result


def _monomial_factors(ctx, exponents, rational):
    """Format one coefficient monomial as grammar-conforming factors."""
    factors = []
    if rational.denominator != 1:
        factors.append("%d/%d" % (rational.numerator, rational.denominator))
    elif rational != 1:
        factors.append(str(rational))
    h_exp = exponents[0]
    if h_exp:
        if h_exp % 2 == 0:
            power = h_exp // 2
            factors.append("t" if power == 1 else "t^%d" % power)
        else:
            factors.append("t^(%d/2)" % h_exp)
    for i in range(1, ctx.n + 1):
        e = exponents[i]
        if e:
            factors.append("x%d" % i if e == 1 else "x%d^%d" % (i, e))
    if ctx.r_index is not None and len(exponents) > ctx.r_index:
        e = exponents[ctx.r_index]
        if e:
            factors.append("r" if e == 1 else "r^%d" % e)
    return factors


def to_source(op):
    """Render an operator as parseable source.

    The coefficient of every term must have a monomial denominator,
    since the grammar has no general quotients; otherwise a ValueError
    is raised.
    """
    ctx = op.ctx
    if op.is_zero():
        return "0"
    pieces = []
    for index in sorted(op.terms, key=lambda i: (sum(i), i), reverse=True):
        coeff = op.terms[index]
        den_terms = list(coeff.frac.denom.terms())
        if len(den_terms) != 1:
            raise ValueError("coefficient denominator %s is not a "
                             "monomial" % coeff.frac.denom)
        den_monom, den_const = den_terms[0]
        deriv_factors = []
        if index[0]:
            deriv_factors.append("Dt" if index[0] == 1
                                 else "Dt^%d" % index[0])
        for i in range(1, len(index)):
            if index[i]:
                deriv_factors.append("D%d" % i if index[i] == 1
                                     else "D%d^%d" % (i, index[i]))
        for monom, const in sorted(coeff.frac.numer.terms(), reverse=True):
            rational = Fraction(int(const.numerator),
                                int(const.denominator)) \
                / Fraction(int(den_const.numerator),
                           int(den_const.denominator))
            exponents = tuple(a - b for a, b in zip(monom, den_monom))
            factors = _monomial_factors(ctx, exponents, abs(rational))
            factors.extend(deriv_factors)
            if not factors:
                factors = ["1"]
            text = "*".join(factors)
            pieces.append(("-" if rational < 0 else "+", text))
    sign, first = pieces[0]
    out = ("-" if sign == "-" else "") + first
    for sign, text in pieces[1:]:
        out += " %s %s" % (sign, text)
    return out
