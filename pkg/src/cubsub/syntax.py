"""Tokenizer and small parsing helpers shared by the textual formats.

Grammars for each format live next to the type they describe; see FORMATS.md.
"""

from __future__ import annotations

import re

from .names import Name, perm_from_cycles

_TOKEN = re.compile(r"\s*(?:(->|=>)|([{}\[\](),:;<>])|([A-Za-z0-9_.]+))")
_NAME = re.compile(r"a(\d+)$")


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int | None = None):
        self.text = text
        self.pos = pos
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)


class Tokens:
    """A cursor over the tokens of one input string."""

    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, int]] = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
            start = m.start(m.lastindex)
            self.toks.append((m.group(m.lastindex), start))
            pos = m.end()
        self.i = 0

    def peek(self, k: int = 0) -> str | None:
        j = self.i + k
        return self.toks[j][0] if j < len(self.toks) else None

    @property
    def pos(self) -> int:
        return self.toks[self.i][1] if self.i < len(self.toks) else len(self.text)

    def next(self) -> str:
        if self.i >= len(self.toks):
            raise ParseError("unexpected end of input", self.text, len(self.text))
        tok = self.toks[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        pos = self.pos
        got = self.next() if self.i < len(self.toks) else None
        if got != tok:
            raise ParseError(f"expected {tok!r}, found {got!r}", self.text, pos)

    def accept(self, tok: str) -> bool:
        if self.peek() == tok:
            self.i += 1
            return True
        return False

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(f"{message}, found {tok!r}", self.text, self.pos)

    def at_end(self) -> bool:
        return self.i >= len(self.toks)

    def finish(self) -> None:
        if not self.at_end():
            raise self.error("trailing input")

    def rest(self) -> str:
        """Raw text from the current token on."""
        return self.text[self.pos:]

    def name(self) -> Name:
        pos = self.pos
        tok = self.next()
        m = _NAME.match(tok)
        if m is None:
            raise ParseError(f"expected a name like a0, found {tok!r}", self.text, pos)
        return Name(int(m.group(1)))

    def bit(self) -> int:
        pos = self.pos
        tok = self.next()
        if tok not in ("0", "1"):
            raise ParseError(f"expected a bit 0 or 1, found {tok!r}", self.text, pos)
        return int(tok)

    def name_or_bit(self):
        tok = self.peek()
        if tok in ("0", "1"):
            return self.bit()
        return self.name()

    def nameset(self) -> frozenset:
        self.expect("{")
        out = []
        if not self.accept("}"):
            while True:
                pos = self.pos
                a = self.name()
                if a in out:
                    raise ParseError(f"duplicate name {a}", self.text, pos)
                out.append(a)
                if self.accept("}"):
                    break
                self.expect(",")
        return frozenset(out)


def parse_name(text: str) -> Name:
    t = Tokens(text)
    a = t.name()
    t.finish()
    return a


def parse_nameset(text: str) -> frozenset:
    t = Tokens(text)
    A = t.nameset()
    t.finish()
    return A


def parse_perm(text: str):
    """Cycle notation: ``()`` or ``(a0 a1)(a2 a3 a4)``."""
    t = Tokens(text)
    cycles = []
    if t.at_end():
        raise t.error("expected a permutation")
    while not t.at_end():
        t.expect("(")
        cyc = []
        while not t.accept(")"):
            pos = t.pos
            a = t.name()
            if a in cyc:
                raise ParseError(f"repeated name {a} in cycle", text, pos)
            cyc.append(a)
        cycles.append(cyc)
    return perm_from_cycles(cycles)


def split_top(text: str, sep: str) -> list[str]:
    """Split on `sep` outside (), [], {} nesting."""
    out, depth, start = [], 0, 0
    for k, ch in enumerate(text):
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        elif ch == sep and depth == 0:
            out.append(text[start:k])
            start = k + 1
    out.append(text[start:])
    return out


def matching_close(text: str, start: int) -> int:
    """Index of the bracket closing the one at `start`."""
    depth = 0
    for k in range(start, len(text)):
        if text[k] in "([{":
            depth += 1
        elif text[k] in ")]}":
            depth -= 1
            if depth == 0:
                return k
    raise ParseError("unbalanced brackets", text, start)
