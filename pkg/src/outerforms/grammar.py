"""Tokenizer and expression evaluator shared by the scalar and quaternion grammars.

Grammar::

    expr  := term (("+" | "-") term)*
    term  := unary (("*" | "/") unary)*
    unary := ("+" | "-") unary | power
    power := atom (("^" | "**") unary)?
    atom  := INT | NAME | "(" expr ")"

Evaluation is delegated to the values themselves, so the same parser serves
field elements and quaternions.
"""

import re

from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def tokenize(text):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start, text)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            op = m.group(3)
            tokens.append(("op", "^" if op == "**" else op, m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, resolve, lift):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.resolve = resolve
        self.lift = lift

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            tok = self.take()
            rhs = self.unary()
            if tok[1] == "*":
                value = value * rhs
            else:
                try:
                    value = value / rhs
                except ZeroDivisionError:
                    self.error("division by zero", tok)
        return value

    def unary(self):
        tok = self.peek()
        if tok[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if tok[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            tok = self.take()
            sign = 1
            while self.peek()[:2] in (("op", "-"), ("op", "+")):
                if self.take()[1] == "-":
                    sign = -sign
            etok = self.peek()
            if etok[0] == "int":
                self.take()
                exp = sign * etok[1]
            elif etok[:2] == ("op", "("):
                self.take()
                while self.peek()[:2] in (("op", "-"), ("op", "+")):
                    if self.take()[1] == "-":
                        sign = -sign
                if self.peek()[0] != "int":
                    self.error("exponent must be an integer literal")
                exp = sign * self.take()[1]
                if self.peek()[:2] != ("op", ")"):
                    self.error("expected ')'")
                self.take()
            else:
                self.error("exponent must be an integer literal", etok)
            try:
                return base ** exp
            except ZeroDivisionError:
                self.error("zero raised to a negative power", tok)
        return base

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            return self.lift(val)
        if kind == "name":
            try:
                return self.resolve(val)
            except KeyError:
                raise ParseError(f"unknown identifier {val!r}", pos, self.text) from None
        if tok[:2] == ("op", "("):
            value = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.error("expected ')'")
            self.take()
            return value
        self.error(f"unexpected token {val!r}" if val is not None else "unexpected end of input", tok)


def evaluate(text, resolve, lift):
    """Parse ``text`` and evaluate it with ``resolve(name)`` and ``lift(int)``."""
    return _Parser(text, resolve, lift).parse()


def split_top_level(text, sep=","):
    """Split on ``sep`` outside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    tail = "".join(cur).strip()
    if tail or parts:
        parts.append(tail)
    return parts
