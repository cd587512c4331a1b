"""Parser for a discrete subset of the BIF network format.

Supported: ``network`` blocks, ``variable`` blocks declaring
``type discrete [ k ] { states }``, and ``probability`` blocks whose
rows are either ``table p0, ...;`` (parentless variables) or
``( state, ... ) p0, ...;`` keyed by parent states in header order.
``//`` and ``/* */`` comments are ignored. Everything else (continuous
variables in particular) is rejected with a line/column diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bnet import CptNetwork, CycleError, Dag


class BifParseError(ValueError):
    """Syntax or consistency error in a BIF file, with source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class _Token:
    kind: str  # "word", "number", "punct", "string", "eof"
    text: str
    line: int
    col: int


_PUNCT = set("{}[]()|,;=")


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)

    def advance(k: int):
        nonlocal i, line, col
        for _ in range(k):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            advance(1)
        elif text.startswith("//", i):
            while i < n and text[i] != "\n":
                advance(1)
        elif text.startswith("/*", i):
            start_line, start_col = line, col
            advance(2)
            while i < n and not text.startswith("*/", i):
                advance(1)
            if i >= n:
                raise BifParseError("unterminated comment", start_line, start_col)
            advance(2)
        elif ch in _PUNCT:
            tokens.append(_Token("punct", ch, line, col))
            advance(1)
        elif ch == '"':
            start_line, start_col = line, col
            advance(1)
            begin = i
            while i < n and text[i] != '"':
                advance(1)
            if i >= n:
                raise BifParseError("unterminated string", start_line, start_col)
            tokens.append(_Token("string", text[begin:i], start_line, start_col))
            advance(1)
        elif ch.isdigit() or (ch in "+-." and i + 1 < n and text[i + 1].isdigit()):
            start_line, start_col = line, col
            begin = i
            advance(1)
            while i < n and (text[i].isdigit() or text[i] in ".eE+-"):
                # Stop before a sign that does not follow an exponent.
                if text[i] in "+-" and text[i - 1] not in "eE":
                    break
                advance(1)
            tokens.append(_Token("number", text[begin:i], start_line, start_col))
        elif ch.isalpha() or ch == "_":
            start_line, start_col = line, col
            begin = i
            while i < n and (text[i].isalnum() or text[i] in "_.-"):
                advance(1)
            tokens.append(_Token("word", text[begin:i], start_line, start_col))
        else:
            raise BifParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise BifParseError(message, tok.line, tok.col)

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.next()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            raise BifParseError(f"expected {want!r}, found {tok.text!r}",
                                tok.line, tok.col)
        return tok

    def skip_statement(self):
        # Consume a property-style statement up to and including ';'.
        depth = 0
        while True:
            tok = self.next()
            if tok.kind == "eof":
                self.fail("unterminated statement", tok)
            if tok.text in "([{":
                depth += 1
            elif tok.text in ")]}":
                depth -= 1
            elif tok.text == ";" and depth == 0:
                return

    # -- grammar ---------------------------------------------------------

    def parse(self) -> CptNetwork:
        states: dict[str, list[str]] = {}
        order: list[str] = []
        blocks: dict[str, tuple[_Token, list[str], dict]] = {}
        while self.peek().kind != "eof":
            tok = self.next()
            if tok.kind != "word":
                self.fail("expected a block keyword", tok)
            if tok.text == "network":
                self.parse_network()
            elif tok.text == "variable":
                name, vals = self.parse_variable()
                if name in states:
                    self.fail(f"variable {name!r} declared twice", tok)
                states[name] = vals
                order.append(name)
            elif tok.text == "probability":
                head, child, parents, rows = self.parse_probability(states)
                if child in blocks:
                    self.fail(f"second probability block for {child!r}", head)
                blocks[child] = (head, parents, rows)
            else:
                self.fail(f"unknown block {tok.text!r}", tok)
        return self.assemble(order, states, blocks)

    def parse_network(self):
        self.next()  # network name (word or string)
        self.expect("punct", "{")
        while self.peek().text != "}":
            if self.peek().kind == "eof":
                self.fail("unterminated network block")
            self.skip_statement()
        self.expect("punct", "}")

    def parse_variable(self) -> tuple[str, list[str]]:
        name_tok = self.next()
        if name_tok.kind not in ("word", "string"):
            self.fail("expected a variable name", name_tok)
        self.expect("punct", "{")
        values: list[str] | None = None
        while self.peek().text != "}":
            tok = self.next()
            if tok.kind == "eof":
                self.fail("unterminated variable block", tok)
            if tok.kind == "word" and tok.text == "type":
                kind = self.next()
                if kind.text != "discrete":
                    self.fail(f"unsupported variable type {kind.text!r} "
                              "(only discrete is accepted)", kind)
                self.expect("punct", "[")
                count_tok = self.expect("number")
                self.expect("punct", "]")
                self.expect("punct", "{")
                vals = []
                while True:
                    v = self.next()
                    if v.kind not in ("word", "number", "string"):
                        self.fail("expected a state name", v)
                    vals.append(v.text)
                    sep = self.next()
                    if sep.text == "}":
                        break
                    if sep.text != ",":
                        self.fail("expected ',' or '}' in state list", sep)
                    if self.peek().text == "}":  # tolerate trailing comma
                        self.next()
                        break
                self.expect("punct", ";")
                try:
                    declared = int(count_tok.text)
                except ValueError:
                    self.fail("state count must be an integer", count_tok)
                if declared != len(vals):
                    self.fail(f"declared {declared} states but listed {len(vals)}",
                              count_tok)
                if len(set(vals)) != len(vals):
                    self.fail("duplicate state name", count_tok)
                values = vals
            elif tok.kind == "word" and tok.text == "property":
                self.skip_statement()
            else:
                self.fail(f"unexpected token {tok.text!r} in variable block", tok)
        self.expect("punct", "}")
        if values is None:
            self.fail(f"variable {name_tok.text!r} has no type declaration",
                      name_tok)
        return name_tok.text, values

    def parse_probability(self, states) -> tuple[_Token, str, list[str], dict]:
        head = self.expect("punct", "(")
        child_tok = self.next()
        if child_tok.kind not in ("word", "string"):
            self.fail("expected a variable name", child_tok)
        if child_tok.text not in states:
            self.fail(f"unknown variable {child_tok.text!r}", child_tok)
        parents: list[str] = []
        tok = self.next()
        if tok.text == "|":
            while True:
                p = self.next()
                if p.kind not in ("word", "string"):
                    self.fail("expected a parent name", p)
                if p.text not in states:
                    self.fail(f"unknown variable {p.text!r}", p)
                if p.text == child_tok.text or p.text in parents:
                    self.fail(f"repeated variable {p.text!r} in header", p)
                parents.append(p.text)
                sep = self.next()
                if sep.text == ")":
                    break
                if sep.text != ",":
                    self.fail("expected ',' or ')' in parent list", sep)
        elif tok.text != ")":
            self.fail("expected '|' or ')'", tok)
        self.expect("punct", "{")
        rows: dict[tuple[str, ...] | None, tuple[list[float], _Token]] = {}
        while self.peek().text != "}":
            tok = self.peek()
            if tok.kind == "eof":
                self.fail("unterminated probability block")
            if tok.kind == "word" and tok.text == "table":
                self.next()
                if None in rows:
                    self.fail("second table row", tok)
                if parents:
                    self.fail("'table' rows are only valid for parentless "
                              "variables; use '( states ) ...' rows", tok)
                rows[None] = (self.parse_numbers(), tok)
            elif tok.kind == "word" and tok.text == "property":
                self.next()
                self.skip_statement()
            elif tok.text == "(":
                self.next()
                key = []
                while True:
                    v = self.next()
                    if v.kind not in ("word", "number", "string"):
                        self.fail("expected a state name", v)
                    key.append(v.text)
                    sep = self.next()
                    if sep.text == ")":
                        break
                    if sep.text != ",":
                        self.fail("expected ',' or ')' in state tuple", sep)
                if not parents:
                    self.fail("state-tuple row in a parentless block", tok)
                if len(key) != len(parents):
                    self.fail(f"row names {len(key)} states for {len(parents)} "
                              "parents", tok)
                for name, val in zip(parents, key):
                    if val not in states[name]:
                        self.fail(f"{val!r} is not a state of {name!r}", tok)
                tkey = tuple(key)
                if tkey in rows:
                    self.fail(f"duplicate row for {tkey}", tok)
                rows[tkey] = (self.parse_numbers(), tok)
            else:
                self.fail(f"unexpected token {tok.text!r} in probability block",
                          tok)
        self.expect("punct", "}")
        return head, child_tok.text, parents, rows

    def parse_numbers(self) -> list[float]:
        vals = []
        while True:
            tok = self.next()
            if tok.kind != "number":
                self.fail("expected a probability", tok)
            try:
                vals.append(float(tok.text))
            except ValueError:
                self.fail(f"bad number {tok.text!r}", tok)
            sep = self.next()
            if sep.text == ";":
                return vals
            if sep.text != ",":
                self.fail("expected ',' or ';' after a probability", sep)

    # -- assembly --------------------------------------------------------

    def assemble(self, order, states, blocks) -> CptNetwork:
        if not order:
            raise BifParseError("no variables declared", 1, 1)
        index = {nm: i for i, nm in enumerate(order)}
        cards = tuple(len(states[nm]) for nm in order)
        parents_by_var: list[frozenset[int]] = []
        head_by_var: list[_Token | None] = []
        for nm in order:
            if nm not in blocks:
                raise BifParseError(
                    f"missing probability block for variable {nm!r}", 1, 1)
            head, parents, _rows = blocks[nm]
            parents_by_var.append(frozenset(index[p] for p in parents))
            head_by_var.append(head)
        try:
            dag = Dag(tuple(order), tuple(parents_by_var))
        except CycleError as exc:
            head = head_by_var[0]
            raise BifParseError(str(exc), head.line, head.col) from exc

        cpts = []
        for v, nm in enumerate(order):
            head, parents, rows = blocks[nm]
            r = cards[v]
            state_code = {s: k for k, s in enumerate(states[nm])}
            if not parents:
                if None not in rows:
                    raise BifParseError(
                        f"missing 'table' row for {nm!r}", head.line, head.col)
                table = np.zeros((1, r))
                table[0] = self.check_row(rows[None], nm, r)
                cpts.append(table)
                continue
            pidx = [index[p] for p in parents]
            canon = sorted(pidx)
            table = np.full((int(np.prod([cards[i] for i in canon])), r), -1.0)
            for key, payload in rows.items():
                codes = tuple(states[p].index(val) for p, val in zip(parents, key))
                header_cfg = dict(zip(pidx, codes))
                canon_tuple = tuple(header_cfg[i] for i in canon)
                row_i = int(np.ravel_multi_index(
                    canon_tuple, tuple(cards[i] for i in canon)))
                table[row_i] = self.check_row(payload, nm, r)
            if (table < 0).any():
                missing_row = int(np.argmax((table < 0).any(axis=1)))
                cfg = np.unravel_index(missing_row,
                                       tuple(cards[i] for i in canon))
                desc = ", ".join(
                    f"{order[i]}={states[order[i]][k]}"
                    for i, k in zip(canon, cfg))
                raise BifParseError(
                    f"missing CPT row for {nm!r} at ({desc})",
                    head.line, head.col)
            cpts.append(table)
        return CptNetwork(dag, cards, tuple(cpts))

    def check_row(self, payload, nm, r) -> np.ndarray:
        vals, tok = payload
        if len(vals) != r:
            raise BifParseError(
                f"{nm!r} row lists {len(vals)} probabilities, expected {r}",
                tok.line, tok.col)
        arr = np.asarray(vals, dtype=np.float64)
        if (arr < 0).any():
            raise BifParseError(f"negative probability in {nm!r}",
                                tok.line, tok.col)
        total = float(arr.sum())
        if abs(total - 1.0) > 1e-6:
            raise BifParseError(
                f"{nm!r} row sums to {total:.8f}, expected 1 within 1e-6",
                tok.line, tok.col)
        return arr / total  # renormalize residual rounding


def parse_bif(text: str) -> CptNetwork:
    """Parse BIF text into a :class:`CptNetwork`.

    Raises :class:`BifParseError` (with line and column) on syntax
    errors, unknown variables, continuous types, missing or duplicate
    CPT rows, rows that do not sum to 1 within 1e-6, and cycles.
    """
    return _Parser(text).parse()


def load_bif(path) -> CptNetwork:
    return parse_bif(Path(path).read_text(encoding="utf-8"))
