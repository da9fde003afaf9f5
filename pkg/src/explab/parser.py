"""Parser for the operator expression language.

Grammar (whitespace-insensitive):

    expr     := ['-'] term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := atom ('^' nat)?
    atom     := rational | var | '(' expr ')'
    var      := 'x' | 'd' | 't' | 'x' nat | 'd' nat      (t, bare x, bare d: n = 1 only)
    rational := nat ('/' nat)?

Parsing normal-orders on the fly, so print(parse(print(e))) is a fixed
point of the canonical printer in explab.weyl.
"""

from __future__ import annotations

from fractions import Fraction

from .weyl import WeylElt


class ParseError(ValueError):
    """Syntax or name error, carrying a 1-based column."""

    def __init__(self, message: str, column: int):
        super().__init__(f"{message} (column {column})")
        self.column = column


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens = []
        self._run()
        self.index = 0

    def _run(self):
        text = self.text
        i = 0
        while i < len(text):
            c = text[i]
            if c.isspace():
                i += 1
                continue
            col = i + 1
            if c.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.tokens.append(("num", int(text[i:j]), col))
                i = j
            elif c in "xdt":
                j = i + 1
                while j < len(text) and text[j].isdigit():
                    j += 1
                if j > i + 1 and c == "t":
                    raise ParseError("'t' takes no index", col)
                index = int(text[i + 1 : j]) if j > i + 1 else None
                self.tokens.append(("var", (c, index), col))
                i = j
            elif c in "+-*/^()":
                self.tokens.append((c, c, col))
                i += 1
            else:
                raise ParseError(f"unexpected character {c!r}", col)
        self.tokens.append(("end", None, len(text) + 1))

    def peek(self):
        return self.tokens[self.index]

    def next(self):
        tok = self.tokens[self.index]
        self.index += 1
        return tok


class _Parser:
    def __init__(self, text: str, n: int):
        self.toks = _Tokenizer(text)
        self.n = n

    def parse(self) -> WeylElt:
        value = self._expr()
        kind, _, col = self.toks.peek()
        if kind != "end":
            raise ParseError("trailing input", col)
        return value

    def _expr(self) -> WeylElt:
        negate = False
        if self.toks.peek()[0] == "-":
            self.toks.next()
            negate = True
        value = self._term()
        if negate:
            value = -value
        while self.toks.peek()[0] in ("+", "-"):
            op, _, _ = self.toks.next()
            rhs = self._term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _term(self) -> WeylElt:
        value = self._factor()
        while self.toks.peek()[0] == "*":
            self.toks.next()
            value = value * self._factor()
        return value

    def _factor(self) -> WeylElt:
        value = self._atom()
        if self.toks.peek()[0] == "^":
            self.toks.next()
            kind, num, col = self.toks.next()
            if kind != "num":
                raise ParseError("exponent must be a natural number", col)
            value = value**num
        return value

    def _atom(self) -> WeylElt:
        kind, payload, col = self.toks.next()
        if kind == "num":
            numerator = payload
            if self.toks.peek()[0] == "/":
                self.toks.next()
                dkind, den, dcol = self.toks.next()
                if dkind != "num" or den == 0:
                    raise ParseError("denominator must be a positive integer", dcol)
                return WeylElt.const(Fraction(numerator, den), self.n)
            return WeylElt.const(numerator, self.n)
        if kind == "var":
            return self._variable(payload, col)
        if kind == "(":
            value = self._expr()
            kind2, _, col2 = self.toks.next()
            if kind2 != ")":
                raise ParseError("expected ')'", col2)
            return value
        raise ParseError("expected a number, variable or '('", col)

    def _variable(self, payload, col) -> WeylElt:
        letter, index = payload
        n = self.n
        if letter == "t":
            if n != 1:
                raise ParseError("'t' is only available with one variable", col)
            return WeylElt.x(1, 1)
        if index is None:
            if n != 1:
                raise ParseError(f"bare '{letter}' is only available with one variable", col)
            index = 1
        if not 1 <= index <= n:
            raise ParseError(f"unknown variable {letter}{index} for n={n}", col)
        return WeylElt.x(index, n) if letter == "x" else WeylElt.d(index, n)


def parse_weyl(text: str, n: int = 1) -> WeylElt:
    """Parse an operator expression into a normal-ordered element of A_n."""
    if n < 1:
        raise ValueError("need at least one variable")
    return _Parser(text, n).parse()


def parse_generators(text: str, n: int):
    """Parse a semicolon-separated list of operators."""
    gens = [chunk for chunk in text.split(";") if chunk.strip()]
    if not gens:
        raise ValueError("no generators given")
    return [parse_weyl(chunk, n) for chunk in gens]
