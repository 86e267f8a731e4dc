"""Parser for the set and chain mini-language (grammar in docs/dsl.md).

    expr    := term ('|' term)*
    term    := unary ('&' unary)*
    unary   := '!' unary | element ('>' | '<') unary | atom
    atom    := '(' expr ')' | primitive

Every choice is decided by the next token, so one token of lookahead is
enough.  Elements are integers over N0/Z, pairs ``(x,y)`` over Z2 and reduced
words (``e`` for the identity) over F2.
"""

from __future__ import annotations

import re

from .ambient import F2, N0, Z, Z2
from .errors import ParseError, PreconditionError
from .families import block_chain, const_chain, evenlen_chain, scaled_chain
from .setcalc import (
    Complement, Contraction, Dilation, EventuallyPeriodic, Finite, FSGen, Full, Inflation, Intersection,
    Neighborhood, Translate, Union, chain_blocks, even_words, pow2_blocks,
)

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<pair>\(\s*-?\d+\s*,\s*-?\d+\s*\))"
    r"|(?P<int>-?\d+)"
    r"|(?P<name>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<op>[|&!<>(){},:-])"
    r")"
)

_KEYWORDS = {"ep", "fs", "fp", "fin", "dil", "con", "inf", "full", "blocks", "cblocks", "evenlen", "rt", "nbhd"}


class _Lexer:
    def __init__(self, text):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError("unexpected character", text, pos)
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.tokens.append(("end", "", len(text)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value, what=None):
        kind, text, pos = self.take()
        if text != value or kind == "end":
            raise ParseError(f"expected {what or repr(value)}", self.text, pos)
        return pos

    def error(self, message):
        raise ParseError(message, self.text, self.peek()[2])


class _SetParser:
    def __init__(self, text, ambient):
        self.lx = _Lexer(text)
        self.a = ambient

    def parse(self):
        s = self.expr()
        kind, _, pos = self.lx.peek()
        if kind != "end":
            raise ParseError("unexpected trailing input", self.lx.text, pos)
        return s

    def expr(self):
        parts = [self.term()]
        while self.lx.peek()[1] == "|" and self.lx.peek()[0] == "op":
            self.lx.take()
            parts.append(self.term())
        return parts[0] if len(parts) == 1 else Union(parts)

    def term(self):
        parts = [self.unary()]
        while self.lx.peek()[1] == "&" and self.lx.peek()[0] == "op":
            self.lx.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else Intersection(parts)

    def unary(self):
        kind, text, pos = self.lx.peek()
        if kind == "op" and text == "!":
            self.lx.take()
            return Complement(self.unary())
        if kind in ("int", "pair") or (kind == "name" and text not in _KEYWORDS):
            g = self.element()
            op_kind, op, op_pos = self.lx.take()
            if op_kind != "op" or op not in "<>" or not op:
                raise ParseError("expected '>' or '<' after an element", self.lx.text, op_pos)
            return Translate(self.unary(), g, inverse=(op == "<"))
        return self.atom()

    def atom(self):
        kind, text, pos = self.lx.peek()
        if kind == "op" and text == "(":
            self.lx.take()
            s = self.expr()
            self.lx.expect(")")
            return s
        if kind != "name":
            self.lx.error("expected a set")
        self.lx.take()
        return self.primitive(text, pos)

    # pieces

    def element(self):
        kind, text, pos = self.lx.take()
        if kind not in ("int", "pair", "name"):
            raise ParseError("expected a group element", self.lx.text, pos)
        try:
            return self.a.parse(text)
        except ParseError as exc:
            raise ParseError(f"bad element for {self.a.kind} ({exc.args[0].split(' at position')[0]})",
                             self.lx.text, pos) from None

    def integer(self, what="an integer"):
        kind, text, pos = self.lx.take()
        if kind != "int":
            raise ParseError(f"expected {what}", self.lx.text, pos)
        return int(text), pos

    def positive(self, what):
        value, pos = self.integer(what)
        if value < 1:
            raise ParseError(f"{what} must be positive", self.lx.text, pos)
        return value

    def braced(self, allow_empty=False, what="element", reader=None):
        reader = reader or self.element
        open_pos = self.lx.expect("{")
        items = []
        if self.lx.peek()[1] == "}" and self.lx.peek()[0] == "op":
            self.lx.take()
            if not allow_empty:
                raise ParseError(f"empty {what} list is not allowed", self.lx.text, open_pos)
            return items
        items.append(reader())
        while self.lx.peek()[1] == ",":
            self.lx.take()
            items.append(reader())
        self.lx.expect("}")
        return items

    def colon(self, name):
        self.lx.expect(":", f"':' after {name}")

    def comma(self):
        self.lx.expect(",")

    def primitive(self, name, pos):
        try:
            return self._primitive(name, pos)
        except PreconditionError as exc:
            raise ParseError(str(exc), self.lx.text, pos) from None

    def _primitive(self, name, pos):
        a = self.a
        if name == "full":
            return Full(a)
        if name == "blocks":
            return pow2_blocks(a)
        if name == "evenlen":
            return even_words(a)
        if name == "ep":
            self.colon(name)
            offset, _ = self.integer("an offset")
            self.comma()
            period = self.positive("the period")
            self.comma()
            residues = self.braced(what="residue", reader=lambda: self.integer("a residue")[0])
            return EventuallyPeriodic(a, offset, period, residues)
        if name in ("fs", "fp"):
            self.colon(name)
            gens = [self.element()]
            while self.lx.peek()[1] == ",":
                self.lx.take()
                gens.append(self.element())
            return FSGen(a, gens)
        if name == "fin":
            self.colon(name)
            items = self.braced(what="finite set")
            return Finite(a, items)
        if name in ("dil", "con", "inf"):
            self.colon(name)
            factor = self.positive("the factor")
            self.comma()
            base = self.unary()
            return {"dil": Dilation, "con": Contraction, "inf": Inflation}[name](base, factor)
        if name == "cblocks":
            self.colon(name)
            base = self.positive("the base")
            self.comma()
            level = self.positive("the level")
            parity = None
            if self.lx.peek()[1] == ",":
                self.lx.take()
                parity = self.parity()
            return chain_blocks(a, base, level, parity)
        if name == "rt":
            self.colon(name)
            inverse = self.lx.peek()[1] == "-"
            if inverse:
                self.lx.take()
            g = self.element()
            self.comma()
            return Translate(self.unary(), g, inverse=inverse, right=True)
        if name == "nbhd":
            self.colon(name)
            k_set = self.braced(what="neighborhood")
            self.comma()
            return Neighborhood(self.unary(), k_set)
        raise ParseError(f"unknown set kind {name!r}", self.lx.text, pos)

    def parity(self):
        kind, text, pos = self.lx.take()
        if text not in ("even", "odd"):
            raise ParseError("expected 'even' or 'odd'", self.lx.text, pos)
        return 0 if text == "even" else 1


def parse_set(text, ambient=Z):
    """Parse a set expression over ``ambient``."""
    return _SetParser(text, ambient).parse()


def parse_chain(text, ambient=N0):
    """Parse a chain: ``const:<set>``, ``scaled:k``, ``blocks:b,step[,even|odd]`` or ``evenlen``."""
    lx = _Lexer(text)
    kind, name, pos = lx.take()
    if kind != "name":
        raise ParseError("expected a chain kind", text, pos)
    if name == "evenlen":
        if lx.peek()[0] != "end":
            raise ParseError("unexpected trailing input", text, lx.peek()[2])
        return evenlen_chain(ambient)
    colon = lx.expect(":", "':' after the chain kind")
    if name == "const":
        body = text[colon + 1:]
        s = parse_set(body, ambient)
        chain = const_chain(s)
        if chain.decomposition is None:
            raise ParseError("constant chains need a syndetic set", text, colon + 1)
        return chain
    sub = _SetParser.__new__(_SetParser)
    sub.lx, sub.a = lx, ambient
    try:
        if name == "scaled":
            k = sub.positive("the factor")
            chain = scaled_chain(k, ambient)
        elif name == "blocks":
            base = sub.positive("the base")
            sub.comma()
            step = sub.positive("the step")
            parity = None
            if lx.peek()[1] == ",":
                lx.take()
                parity = sub.parity()
            chain = block_chain(base, step, parity, ambient)
        else:
            raise ParseError(f"unknown chain kind {name!r}", text, pos)
    except PreconditionError as exc:
        raise ParseError(str(exc), text, pos) from None
    if lx.peek()[0] != "end":
        raise ParseError("unexpected trailing input", text, lx.peek()[2])
    return chain


AMBIENTS = {"N0": N0, "Z": Z, "Z2": Z2, "F2": F2}
