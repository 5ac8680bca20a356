"""Streaming reader and writer for expanded polynomials in infix notation.

Grammar (whitespace and newlines are ignored)::

    poly   := [sign] term (sign term)*
    sign   := '+' | '-'
    term   := factor ('*' factor)*
    factor := natural | var power?
    power  := ('^' | '**') natural
    var    := letter (letter | digit | '_')*

Parentheses are rejected on purpose: inputs are sums of monomials.
"""

from __future__ import annotations

import codecs
import io
import os
import re
from typing import IO, Iterator, Union

from .poly import MultiPoly, canonical_key

CHUNK_SIZE = 1 << 20

_TOKEN = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<num>\d+)"
    r"|(?P<var>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<pow>\*\*|\^)"
    r"|(?P<mul>\*)"
    r"|(?P<sign>[+-])"
    r"|(?P<bad>.)",
    re.S,
)

_FACTOR = r"(?:\d+|[A-Za-z][A-Za-z0-9_]*(?:\s*(?:\*\*|\^)\s*\d+)?)"
_TERM = re.compile(r"\s*([+-]?)\s*(" + _FACTOR + r"(?:\s*\*\s*" + _FACTOR + r")*)\s*")
_FACTOR_PARTS = re.compile(r"(\d+)|([A-Za-z][A-Za-z0-9_]*)(?:\s*(?:\*\*|\^)\s*(\d+))?")


class PolynomialSyntaxError(SyntaxError):
    """Malformed polynomial text; ``lineno`` and ``offset`` are 1-based."""

    def __init__(self, msg: str, line: int, column: int):
        super().__init__(msg)
        self.msg = msg
        self.lineno = line
        self.offset = column

    def __str__(self):
        return f"{self.msg} (line {self.lineno}, column {self.offset})"


class DuplicateOperator(PolynomialSyntaxError):
    pass


class EmptyInput(PolynomialSyntaxError):
    pass


# parser states
_START, _AFTER_SIGN, _AFTER_FACTOR, _AFTER_VAR, _AFTER_MUL, _AFTER_POW = range(6)


class _Reader:
    """Incremental tokenizer/parser; feed text pieces, then call ``finish``."""

    def __init__(self):
        self.terms: dict[tuple, int] = {}
        self.state = _START
        self.sign = 1
        self.coeff = 1
        self.monomial: dict[str, int] = {}
        self.last_var: str | None = None
        self.line = 1
        self.line_start = 0  # offset of the current line start relative to the consumed stream
        self.consumed = 0
        self.seen_any = False
        self.pending = False

    def _error(self, cls, msg, buf, pos):
        before = buf[:pos]
        nl = before.count("\n")
        if nl:
            column = pos - before.rfind("\n")
        else:
            column = self.consumed + pos - self.line_start + 1
        raise cls(msg, self.line + nl, column)

    def _close_term(self):
        self.pending = False
        key = tuple(sorted((v, e) for v, e in self.monomial.items() if e))
        self.terms[key] = self.terms.get(key, 0) + self.sign * self.coeff
        self.sign, self.coeff, self.monomial, self.last_var = 1, 1, {}, None

    def feed(self, buf: str):
        if self.pending:
            self._close_term()
        if not self._feed_fast(buf):
            self._feed_tokens(buf)
        nl = buf.count("\n")
        if nl:
            self.line += nl
            self.line_start = self.consumed + buf.rfind("\n") + 1
        self.consumed += len(buf)

    def _feed_fast(self, buf: str) -> bool:
        # whole terms at a time; any irregularity defers to the token parser,
        # which also produces the error position
        if self.state not in (_START, _AFTER_FACTOR, _AFTER_VAR):
            return False
        local: list[tuple[tuple, int]] = []
        first = self.state == _START
        pos, end = 0, len(buf)
        match = _TERM.match
        parts = _FACTOR_PARTS.findall
        while pos < end:
            m = match(buf, pos)
            if m is None:
                if buf[pos:].strip():
                    return False
                break
            sign, body = m.groups()
            if not sign and not first:
                return False
            first = False
            coeff = -1 if sign == "-" else 1
            mono: dict[str, int] = {}
            for num, var, exp in parts(body):
                if num:
                    coeff *= int(num)
                else:
                    mono[var] = mono.get(var, 0) + (int(exp) if exp else 1)
            local.append((tuple(sorted((v, e) for v, e in mono.items() if e)), coeff))
            pos = m.end()
        terms = self.terms
        for key, c in local:
            terms[key] = terms.get(key, 0) + c
        if local:
            self.seen_any = True
            self.state = _AFTER_FACTOR
        return True

    def _feed_tokens(self, buf: str):
        state = self.state
        for m in _TOKEN.finditer(buf):
            kind = m.lastgroup
            if kind == "ws":
                continue
            text = m.group()
            self.seen_any = True
            self.pending = True
            if kind == "sign":
                if state in (_AFTER_FACTOR, _AFTER_VAR):
                    self._close_term()
                elif state == _START:
                    pass
                elif state in (_AFTER_SIGN, _AFTER_MUL):
                    self._error(DuplicateOperator, f"operator {text!r} follows another operator", buf, m.start())
                else:
                    self._error(PolynomialSyntaxError, f"expected an exponent before {text!r}", buf, m.start())
                if text == "-":
                    self.sign = -self.sign
                state = _AFTER_SIGN
            elif kind == "num":
                if state == _AFTER_POW:
                    self.monomial[self.last_var] += int(text) - 1
                    self.last_var = None
                    state = _AFTER_FACTOR
                elif state in (_START, _AFTER_SIGN, _AFTER_MUL):
                    self.coeff *= int(text)
                    state = _AFTER_FACTOR
                else:
                    self._error(PolynomialSyntaxError, f"unexpected number {text!r}", buf, m.start())
            elif kind == "var":
                if state in (_START, _AFTER_SIGN, _AFTER_MUL):
                    self.monomial[text] = self.monomial.get(text, 0) + 1
                    self.last_var = text
                    state = _AFTER_VAR
                else:
                    self._error(PolynomialSyntaxError, f"unexpected variable {text!r}", buf, m.start())
            elif kind == "mul":
                if state in (_AFTER_FACTOR, _AFTER_VAR):
                    state = _AFTER_MUL
                elif state in (_AFTER_MUL, _AFTER_SIGN, _AFTER_POW):
                    self._error(DuplicateOperator, "'*' follows another operator", buf, m.start())
                else:
                    self._error(PolynomialSyntaxError, "expression cannot start with '*'", buf, m.start())
            elif kind == "pow":
                if state == _AFTER_VAR:
                    state = _AFTER_POW
                elif state in (_AFTER_MUL, _AFTER_SIGN, _AFTER_POW):
                    self._error(DuplicateOperator, f"{text!r} follows another operator", buf, m.start())
                else:
                    self._error(PolynomialSyntaxError, f"{text!r} must follow a variable", buf, m.start())
            else:
                self._error(PolynomialSyntaxError, f"unexpected character {text!r}", buf, m.start())
        self.state = state

    def finish(self) -> MultiPoly:
        if not self.seen_any:
            raise EmptyInput("empty input", self.line, 1)
        if self.state not in (_AFTER_FACTOR, _AFTER_VAR):
            raise PolynomialSyntaxError("unexpected end of input", self.line, self.consumed - self.line_start + 1)
        if self.pending:
            self._close_term()
        names = sorted({v for key in self.terms for v, _ in key})
        pos = {v: i for i, v in enumerate(names)}
        d = len(names)
        out: dict[tuple[int, ...], int] = {}
        for key, c in self.terms.items():
            if not c:
                continue
            p = [0] * d
            for v, e in key:
                p[pos[v]] = e
            out[tuple(p)] = c
        return MultiPoly(tuple(names), out)


def _chunks(source: IO, size: int) -> Iterator[str]:
    tail = ""
    decoder = codecs.getincrementaldecoder("utf-8")()
    while True:
        raw = source.read(size)
        if not raw:
            break
        block = decoder.decode(raw) if isinstance(raw, bytes) else raw
        buf = tail + block
        # signs only separate terms, so cutting just before one never splits a term
        cut = max(buf.rfind("+"), buf.rfind("-"))
        if cut <= 0:
            tail = buf
            continue
        yield buf[:cut]
        tail = buf[cut:]
    if tail:
        yield tail


def parse_polynomial(source: Union[str, bytes, IO], chunk_size: int = CHUNK_SIZE) -> MultiPoly:
    """Parse text, bytes or an open (text or binary) stream into a :class:`MultiPoly`.

    Variables are ordered lexicographically by name.  Streams are consumed
    in chunks, so memory is proportional to the number of distinct terms.
    """
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = _Reader()
    for piece in _chunks(source, chunk_size):
        reader.feed(piece)
    return reader.finish()


def parse_file(path: Union[str, os.PathLike], chunk_size: int = CHUNK_SIZE) -> MultiPoly:
    with open(path, "rb") as fh:
        return parse_polynomial(fh, chunk_size)


def render_polynomial(f: MultiPoly) -> str:
    """Text in the accepted grammar; terms in canonical order."""
    if f.is_zero():
        return "0"
    out = []
    for p in sorted(f.terms, key=canonical_key):
        c = f.terms[p]
        factors = [v if e == 1 else f"{v}^{e}" for v, e in zip(f.variables, p) if e]
        mag = abs(c)
        if mag != 1 or not factors:
            factors.insert(0, str(mag))
        sign = "-" if c < 0 else "+"
        out.append(sign + "*".join(factors))
    text = "".join(out)
    return text[1:] if text.startswith("+") else text
