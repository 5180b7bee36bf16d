"""Parser and renderer for the `.pcp` polycyclic presentation format.

Statements, each terminated by `;`:

    group NAME;
    gen NAME ORDER;
    pow NAME = WORD;
    swap NAME NAME = WORD;
    tower U: NAMES | W: NAMES | ... ;

WORD is `1` or a product of `gen` / `gen^k` factors in normal form (strictly
ascending declaration order, exponents in [1, order)).  `swap a b = ...`
states a*b = WORD and requires a to be declared after b.  A missing swap rule
means the pair commutes.  `#` starts a comment.  Parsing never raises on bad
input text; all problems are reported together as ParseError values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .pcgroup import PcGroup

KIND_UNKNOWN_GEN = "unknown-generator"
KIND_DUPLICATE_GEN = "duplicate-generator"
KIND_BAD_EXPONENT = "bad-exponent"
KIND_NOT_NORMAL = "rule-not-normal-form"
KIND_SYNTAX = "syntax"


@dataclass(frozen=True)
class SourceSpan:
    line: int
    col_start: int
    col_end: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col_start}-{self.col_end}"


@dataclass(frozen=True)
class ParseError:
    span: SourceSpan
    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.span}: {self.kind}: {self.message}"


class PresentationError(ValueError):
    """Raised by parse() with the full list of errors found."""

    def __init__(self, errors: list[ParseError]):
        self.errors = list(errors)
        super().__init__("\n".join(str(e) for e in errors))


@dataclass(frozen=True)
class _Token:
    kind: str  # "name" | "int" | "sym" | "end"
    text: str
    line: int
    col: int

    @property
    def span(self) -> SourceSpan:
        return SourceSpan(self.line, self.col, self.col + max(len(self.text), 1) - 1)


_SYMBOLS = ";=^|:"


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    for ln, line in enumerate(source.splitlines(), start=1):
        i = 0
        while i < len(line):
            c = line[i]
            if c == "#":
                break
            if c.isspace():
                i += 1
                continue
            if c in _SYMBOLS:
                tokens.append(_Token("sym", c, ln, i + 1))
                i += 1
                continue
            if c.isdigit():
                j = i
                while j < len(line) and line[j].isdigit():
                    j += 1
                tokens.append(_Token("int", line[i:j], ln, i + 1))
                i = j
                continue
            if c.isalpha() or c == "_":
                j = i
                while j < len(line) and (line[j].isalnum() or line[j] == "_"):
                    j += 1
                tokens.append(_Token("name", line[i:j], ln, i + 1))
                i = j
                continue
            tokens.append(_Token("sym", c, ln, i + 1))
            i += 1
    last_line = source.count("\n") + 1
    tokens.append(_Token("end", "", last_line, 1))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.pos = 0
        self.errors: list[ParseError] = []
        self.group_name: Optional[str] = None
        self.gen_names: list[str] = []
        self.gen_orders: list[int] = []
        self.power_rules: dict[int, tuple[int, ...]] = {}
        self.swap_rules: dict[tuple[int, int], tuple[int, ...]] = {}
        self.tower: Optional[tuple[tuple[str, ...], ...]] = None

    # -- token plumbing --

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def error(self, span: SourceSpan, kind: str, message: str) -> None:
        self.errors.append(ParseError(span, kind, message))

    def skip_statement(self) -> None:
        while True:
            tok = self.take()
            if tok.kind == "end" or (tok.kind == "sym" and tok.text == ";"):
                return

    def expect_sym(self, text: str) -> Optional[_Token]:
        tok = self.peek()
        if tok.kind == "sym" and tok.text == text:
            return self.take()
        self.error(tok.span, KIND_SYNTAX, f"expected '{text}'")
        return None

    def expect_name(self, what: str) -> Optional[_Token]:
        tok = self.peek()
        if tok.kind == "name":
            return self.take()
        self.error(tok.span, KIND_SYNTAX, f"expected {what}")
        return None

    # -- grammar --

    def run(self) -> None:
        while True:
            tok = self.peek()
            if tok.kind == "end":
                return
            if tok.kind != "name":
                self.error(tok.span, KIND_SYNTAX,
                           f"expected a statement, found {tok.text!r}")
                self.skip_statement()
                continue
            handler = {
                "group": self.stmt_group,
                "gen": self.stmt_gen,
                "pow": self.stmt_pow,
                "swap": self.stmt_swap,
                "tower": self.stmt_tower,
            }.get(tok.text)
            if handler is None:
                self.error(tok.span, KIND_SYNTAX,
                           f"unknown statement {tok.text!r}")
                self.skip_statement()
                continue
            self.take()
            before = len(self.errors)
            handler()
            if len(self.errors) > before:
                self.skip_statement()
            elif self.expect_sym(";") is None:
                self.skip_statement()

    def stmt_group(self) -> None:
        tok = self.expect_name("a group name")
        if tok is None:
            return
        if self.group_name is not None:
            self.error(tok.span, KIND_SYNTAX, "group name already set")
            return
        self.group_name = tok.text

    def stmt_gen(self) -> None:
        name = self.expect_name("a generator name")
        if name is None:
            return
        order = self.peek()
        if order.kind != "int":
            self.error(order.span, KIND_SYNTAX, "expected the relative order")
            return
        self.take()
        if name.text in self.gen_names:
            self.error(name.span, KIND_DUPLICATE_GEN,
                       f"generator {name.text!r} already declared")
            return
        n = int(order.text)
        if n < 2:
            self.error(order.span, KIND_BAD_EXPONENT,
                       f"relative order must be >= 2, got {n}")
            return
        self.gen_names.append(name.text)
        self.gen_orders.append(n)

    def parse_word(self) -> Optional[tuple[int, ...]]:
        """Normal-form word as a full exponent vector."""
        ngens = len(self.gen_names)
        vec = [0] * ngens
        first = self.peek()
        if first.kind == "int" and first.text == "1":
            self.take()
            return tuple(vec)
        last_idx = -1
        got_factor = False
        while True:
            tok = self.peek()
            if tok.kind != "name":
                break
            self.take()
            if tok.text not in self.gen_names:
                self.error(tok.span, KIND_UNKNOWN_GEN,
                           f"unknown generator {tok.text!r}")
                return None
            idx = self.gen_names.index(tok.text)
            exp = 1
            if self.peek().kind == "sym" and self.peek().text == "^":
                self.take()
                etok = self.peek()
                if etok.kind != "int":
                    self.error(etok.span, KIND_SYNTAX, "expected an exponent")
                    return None
                self.take()
                exp = int(etok.text)
            if idx <= last_idx:
                self.error(tok.span, KIND_NOT_NORMAL,
                           f"factor {tok.text!r} out of normal-form order")
                return None
            if not 1 <= exp < self.gen_orders[idx]:
                self.error(tok.span, KIND_NOT_NORMAL,
                           f"exponent {exp} outside [1, {self.gen_orders[idx]}) "
                           f"for {tok.text!r}")
                return None
            vec[idx] = exp
            last_idx = idx
            got_factor = True
        if not got_factor:
            self.error(self.peek().span, KIND_SYNTAX, "expected a word")
            return None
        return tuple(vec)

    def stmt_pow(self) -> None:
        name = self.expect_name("a generator name")
        if name is None:
            return
        if name.text not in self.gen_names:
            self.error(name.span, KIND_UNKNOWN_GEN,
                       f"unknown generator {name.text!r}")
            return
        if self.expect_sym("=") is None:
            return
        vec = self.parse_word()
        if vec is None:
            return
        idx = self.gen_names.index(name.text)
        if idx in self.power_rules:
            self.error(name.span, KIND_SYNTAX,
                       f"duplicate power rule for {name.text!r}")
            return
        self.power_rules[idx] = vec

    def stmt_swap(self) -> None:
        left = self.expect_name("a generator name")
        if left is None:
            return
        right = self.expect_name("a generator name")
        if right is None:
            return
        for tok in (left, right):
            if tok.text not in self.gen_names:
                self.error(tok.span, KIND_UNKNOWN_GEN,
                           f"unknown generator {tok.text!r}")
                return
        j = self.gen_names.index(left.text)
        i = self.gen_names.index(right.text)
        if j <= i:
            self.error(left.span, KIND_SYNTAX,
                       f"swap left generator {left.text!r} must come later "
                       f"in the ordering than {right.text!r}")
            return
        if self.expect_sym("=") is None:
            return
        vec = self.parse_word()
        if vec is None:
            return
        if (j, i) in self.swap_rules:
            self.error(left.span, KIND_SYNTAX,
                       f"duplicate swap rule for ({left.text}, {right.text})")
            return
        self.swap_rules[(j, i)] = vec

    def stmt_tower(self) -> None:
        if self.tower is not None:
            self.error(self.peek().span, KIND_SYNTAX, "duplicate tower")
            return
        layers: list[tuple[str, ...]] = []
        want_label = "U"
        while True:
            label = self.expect_name(f"layer label '{want_label}'")
            if label is None:
                return
            if label.text != want_label:
                self.error(label.span, KIND_SYNTAX,
                           f"expected layer label '{want_label}', "
                           f"got {label.text!r}")
                return
            if self.expect_sym(":") is None:
                return
            names = []
            while self.peek().kind == "name":
                tok = self.take()
                if tok.text not in self.gen_names:
                    self.error(tok.span, KIND_UNKNOWN_GEN,
                               f"unknown generator {tok.text!r}")
                    return
                names.append(tok.text)
            if not names:
                self.error(self.peek().span, KIND_SYNTAX,
                           "expected generator names in tower layer")
                return
            layers.append(tuple(names))
            nxt = self.peek()
            if nxt.kind == "sym" and nxt.text == "|":
                self.take()
                want_label = "W"
                continue
            break
        flat = [g for layer in layers for g in layer]
        if flat != self.gen_names:
            self.error(self.peek().span, KIND_SYNTAX,
                       "tower layers must list every generator once, "
                       "in declaration order")
            return
        self.tower = tuple(layers)

    def build(self) -> Optional[PcGroup]:
        if not self.gen_names:
            span = SourceSpan(1, 1, 1)
            self.error(span, KIND_SYNTAX, "no generators declared")
            return None
        try:
            return PcGroup(self.group_name or "unnamed", self.gen_names,
                           self.gen_orders, self.power_rules, self.swap_rules,
                           tower=self.tower)
        except ValueError as exc:  # defensive; inputs were validated above
            self.error(SourceSpan(1, 1, 1), KIND_SYNTAX, str(exc))
            return None


def parse(source: str) -> PcGroup:
    """Parse `.pcp` text into a PcGroup; raise PresentationError carrying
    every problem found."""
    p = _Parser(source)
    p.run()
    group = None
    if not p.errors:
        group = p.build()
    if p.errors:
        raise PresentationError(p.errors)
    return group


def parse_errors(source: str) -> list[ParseError]:
    """All errors in the source, empty when it parses cleanly."""
    try:
        parse(source)
    except PresentationError as exc:
        return exc.errors
    return []


def _word_str(group: PcGroup, vec) -> str:
    if not any(vec):
        return "1"
    parts = []
    for idx, e in enumerate(vec):
        if e == 1:
            parts.append(group.gens[idx])
        elif e > 1:
            parts.append(f"{group.gens[idx]}^{e}")
    return " ".join(parts)


def render(group: PcGroup) -> str:
    """Canonical source text; parse(render(G)) is structurally equal to G."""
    lines = [f"group {group.name};"]
    for g, n in zip(group.gens, group.orders):
        lines.append(f"gen {g} {n};")
    for i in sorted(group.power_rules):
        lines.append(f"pow {group.gens[i]} = {_word_str(group, group.power_rules[i])};")
    for (j, i) in sorted(group.swap_rules):
        word = _word_str(group, group.swap_rules[(j, i)])
        lines.append(f"swap {group.gens[j]} {group.gens[i]} = {word};")
    if group.tower:
        segs = [f"U: {' '.join(group.tower[0])}"]
        segs += [f"W: {' '.join(layer)}" for layer in group.tower[1:]]
        lines.append(f"tower {' | '.join(segs)};")
    return "\n".join(lines) + "\n"


def parse_tower_spec(spec: str, group: PcGroup) -> tuple[tuple[str, ...], ...]:
    """Parse a CLI tower spec like 'U: z x1 | W: x2 | W: w'."""
    source = f"tower {spec};"
    p = _Parser(source)
    p.gen_names = list(group.gens)
    p.gen_orders = list(group.orders)
    tok = p.take()
    assert tok.text == "tower"
    p.stmt_tower()
    if p.errors:
        raise PresentationError(p.errors)
    return p.tower
