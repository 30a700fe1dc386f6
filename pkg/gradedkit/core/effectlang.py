"""
A register language whose meaning is the graded state monad.

    prog := cmd (';' cmd)*
    cmd  := 'read' NAT | 'write' NAT expr | 'ret' expr
    expr := LIT | 'it'

`it` is the value of the preceding command: the register contents after a
read, the returned value after a ret. A write returns the unit value, so `it`
after a write (or before any command) is rejected by the parser. '#' starts a
comment that runs to the end of the line.

A program's footprint is the set of registers it mentions, numbered in order of
first use. Stores are tuples over the footprint in that order.
"""
from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from gradedkit.core.config import active_config
from gradedkit.core.errors import ProgramSyntaxError, SizeBoundError, TypingError
from gradedkit.core.finsets import FinSet
from gradedkit.core.reports import VALUES, LawReport
from gradedkit.core.statemonads import (
    StateElement,
    StateMonads,
    apply_state,
    build_state_monads,
    eta_element,
    map_element,
    stores,
)

log = logging.getLogger(__name__)

UNIT = "()"


# ---------- Syntax ----------


@dataclass(frozen=True)
class Lit:
    value: int

    def label(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class It:
    def label(self) -> str:
        return "it"


Expr = Union[Lit, It]


@dataclass(frozen=True)
class Read:
    register: int
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def label(self) -> str:
        return f"read {self.register}"


@dataclass(frozen=True)
class Write:
    register: int
    expr: Expr
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def label(self) -> str:
        return f"write {self.register} {self.expr.label()}"


@dataclass(frozen=True)
class Ret:
    expr: Expr
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def label(self) -> str:
        return f"ret {self.expr.label()}"


Command = Union[Read, Write, Ret]


@dataclass(frozen=True)
class Program:
    commands: Tuple[Command, ...]
    name: str = field(default="", compare=False)

    def registers(self) -> Tuple[int, ...]:
        return tuple(dict.fromkeys(c.register for c in self.commands if not isinstance(c, Ret)))

    def label(self) -> str:
        return "; ".join(c.label() for c in self.commands)


@dataclass(frozen=True)
class EffectGrade:
    footprint: int
    injection: Tuple[Tuple[int, int], ...]

    def position(self, register: int) -> int:
        for r, i in self.injection:
            if r == register:
                return i
        raise TypingError(f"register {register} is outside the footprint")

    def as_dict(self) -> Dict[int, int]:
        return dict(self.injection)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


_TOKEN = re.compile(r"(?P<nat>\d+)|(?P<word>[A-Za-z_]\w*)|(?P<semi>;)|(?P<space>[ \t\r]+)|(?P<newline>\n)|(?P<comment>#[^\n]*)")

KEYWORDS = ("read", "write", "ret", "it")


def _tokens(text: str) -> Iterator[_Token]:
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ProgramSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind == "newline":
            line, col = line + 1, 1
        else:
            if kind not in ("space", "comment"):
                yield _Token(kind, chunk, line, col)
            col += len(chunk)
        pos = m.end()
    yield _Token("eof", "", line, col)


class _Parser:
    def __init__(self, text: str, values: Optional[int]):
        self.tokens = list(_tokens(text))
        self.pos = 0
        self.values = values
        self.previous: Optional[Command] = None

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok: _Token):
        raise ProgramSyntaxError(message, tok.line, tok.column)

    def nat(self, what: str) -> int:
        tok = self.take()
        if tok.kind != "nat":
            self.fail(f"expected {what}, found {tok.text or 'end of input'!r}", tok)
        return int(tok.text)

    def expr(self) -> Expr:
        tok = self.peek()
        if tok.kind == "word" and tok.text == "it":
            self.take()
            if self.previous is None:
                self.fail("'it' before any command", tok)
            if isinstance(self.previous, Write):
                self.fail("'it' after a write has no value", tok)
            return It()
        v = self.nat("a literal or 'it'")
        if self.values is not None and not 0 <= v < self.values:
            self.fail(f"literal {v} outside 0..{self.values - 1}", tok)
        return Lit(v)

    def command(self) -> Command:
        tok = self.take()
        if tok.kind != "word" or tok.text not in ("read", "write", "ret"):
            self.fail(f"expected 'read', 'write' or 'ret', found {tok.text or 'end of input'!r}", tok)
        if tok.text == "read":
            return Read(self.nat("a register"), tok.line, tok.column)
        if tok.text == "write":
            r = self.nat("a register")
            return Write(r, self.expr(), tok.line, tok.column)
        return Ret(self.expr(), tok.line, tok.column)

    def program(self, name: str) -> Program:
        commands: List[Command] = []
        while True:
            cmd = self.command()
            commands.append(cmd)
            self.previous = cmd
            tok = self.take()
            if tok.kind == "eof":
                return Program(tuple(commands), name)
            if tok.kind != "semi":
                self.fail(f"expected ';' or end of input, found {tok.text!r}", tok)


def parse_program(text: str, values: Optional[int] = None, name: str = "") -> Program:
    return _Parser(text, values).program(name)


def load_program(path: Path, values: Optional[int] = None) -> Program:
    return parse_program(Path(path).read_text(encoding="utf-8"), values, name=Path(path).stem)


def load_corpus(directory: Path, values: Optional[int] = None) -> List[Program]:
    return [load_program(p, values) for p in sorted(Path(directory).glob("*.efl"))]


# ---------- Effects ----------


def infer_effect(p: Program) -> EffectGrade:
    regs = p.registers()
    return EffectGrade(len(regs), tuple((r, i) for i, r in enumerate(regs)))


def rename_program(p: Program, mapping: Dict[int, int]) -> Program:
    used = p.registers()
    if len({mapping[r] for r in used}) != len(used):
        raise TypingError("register renaming is not injective")
    out: List[Command] = []
    for c in p.commands:
        if isinstance(c, Read):
            out.append(Read(mapping[c.register], c.line, c.column))
        elif isinstance(c, Write):
            out.append(Write(mapping[c.register], c.expr, c.line, c.column))
        else:
            out.append(c)
    return Program(tuple(out), p.name)


# ---------- Semantics ----------


def result_set(V: FinSet) -> FinSet:
    return FinSet(f"{V.name}+1", tuple(V.elements) + (UNIT,))


@lru_cache(maxsize=8)
def _monads(v_size: int, bound: int) -> StateMonads:
    return build_state_monads(v_size=v_size, bound=bound, probe_max_size=0)


def state_monads_for(v_size: Optional[int] = None, bound: Optional[int] = None) -> StateMonads:
    cfg = active_config()
    return _monads(cfg.state_values if v_size is None else v_size, cfg.max_grade if bound is None else bound)


def _value(V: FinSet, e: Expr, it: Any) -> Any:
    if isinstance(e, It):
        return it
    if not V.contains(e.value):
        raise TypingError(f"literal {e.value} is not a value in {V.name}")
    return e.value


def _step(V: FinSet, c: Command, it: Any) -> StateElement:
    if isinstance(c, Read):
        return StateElement(1, tuple((v,) for v in V.elements), tuple(V.elements))
    if isinstance(c, Write):
        x = _value(V, c.expr, it)
        return StateElement(1, tuple((x,) for _ in V.elements), tuple(UNIT for _ in V.elements))
    raise TypingError(f"{c.label()} does not touch a register")


def _require_grade(sm: StateMonads, m: int):
    if m > sm.grading.bound:
        raise SizeBoundError(f"footprint {m} exceeds the Inj bound {sm.grading.bound}")


def denote(p: Program, monads: Optional[StateMonads] = None) -> StateElement:
    sm = monads or state_monads_for()
    V, M, gm, im = sm.values, sm.grading, sm.graded, sm.indexed
    _require_grade(sm, infer_effect(p).footprint)
    R = result_set(V)
    e = gm.eta(R)(UNIT)
    g = 0
    where: Dict[int, int] = {}
    for c in p.commands:
        if isinstance(c, Ret):
            e = gm.mu(str(g), "0", R)(map_element(e, lambda x, c=c: eta_element(V, 0, _value(V, c.expr, x))))
        elif c.register not in where:
            where[c.register] = g
            e = gm.mu(str(g), "1", R)(map_element(e, lambda x, c=c: _step(V, c, x)))
            g += 1
        else:
            lift = gm.T_u(M.morphism(1, g, (where[c.register],)), R)
            e = im.mu(str(g), R)(map_element(e, lambda x, c=c, lift=lift: lift(_step(V, c, x))))
    return e


def denote_layout(p: Program, layout: Dict[int, int], width: int, monads: Optional[StateMonads] = None) -> StateElement:
    """The meaning of p at grade `width`, registers placed by `layout`, using only the indexed monad at that grade."""
    sm = monads or state_monads_for()
    _require_grade(sm, width)
    V, M, im = sm.values, sm.grading, sm.indexed
    b = str(width)
    R = result_set(V)
    placed = [layout[r] for r in p.registers()]
    if len(set(placed)) != len(placed) or any(not 0 <= i < width for i in placed):
        raise TypingError(f"layout {layout} is not an injection into {width}")
    e = im.eta(b, R)(UNIT)
    for c in p.commands:
        if isinstance(c, Ret):
            k = lambda x, c=c: im.eta(b, R)(_value(V, c.expr, x))  # noqa: E731
        else:
            lift = im.T_u(M.morphism(1, width, (layout[c.register],)), R)
            k = lambda x, c=c, lift=lift: lift(_step(V, c, x))  # noqa: E731
        e = im.mu(b, R)(map_element(e, k))
    return e


def widen(p: Program, layout: Dict[int, int], width: int, monads: Optional[StateMonads] = None) -> StateElement:
    sm = monads or state_monads_for()
    _require_grade(sm, width)
    grade = infer_effect(p)
    images = tuple(layout[r] for r, _ in grade.injection)
    u = sm.grading.morphism(grade.footprint, width, images)
    return sm.graded.T_u(u, result_set(sm.values))(denote(p, sm))


def sequence(monads: StateMonads, first: StateElement, second: StateElement) -> StateElement:
    """first ; second on disjoint footprints: mu_{m,n} of first with constant continuation."""
    R = result_set(monads.values)
    return monads.graded.mu(str(first.grade), str(second.grade), R)(map_element(first, lambda _: second))


def run(p: Program, store: Sequence[Any], values: Optional[FinSet] = None) -> Tuple[Tuple[Any, ...], Any]:
    grade = infer_effect(p)
    if len(store) != grade.footprint:
        raise TypingError(f"store of length {len(store)} for a footprint of {grade.footprint}")
    if values is not None:
        for v in store:
            if not values.contains(v):
                raise TypingError(f"{v!r} is not a value in {values.name}")
    mem = list(store)
    it: Any = UNIT
    for c in p.commands:
        if isinstance(c, Read):
            it = mem[grade.position(c.register)]
        elif isinstance(c, Write):
            mem[grade.position(c.register)] = it if isinstance(c.expr, It) else c.expr.value
            it = UNIT
        else:
            it = it if isinstance(c.expr, It) else c.expr.value
    return tuple(mem), it


# ---------- Checks ----------


def check_adequacy(programs: Sequence[Program], monads: Optional[StateMonads] = None) -> LawReport:
    sm = monads or state_monads_for()
    V = sm.values
    rep = LawReport(f"adequacy over |V|={len(V)}")
    for p in programs:
        e = denote(p, sm)
        for w in stores(V, e.grade):
            rep.check("adequacy", VALUES, lambda p=p, e=e, w=w: (apply_state(V, e, w), run(p, w, V)), program=p.name or p.label(), store=w)
    log.info("adequacy: %s", rep.counts())
    return rep


def check_layouts(p: Program, width: int, monads: Optional[StateMonads] = None) -> LawReport:
    sm = monads or state_monads_for()
    regs = p.registers()
    rep = LawReport(f"layouts of {p.name or p.label()}")
    for images in itertools.permutations(range(width), len(regs)):
        layout = dict(zip(regs, images))
        rep.check(
            "layout agreement",
            VALUES,
            lambda layout=layout: (denote_layout(p, layout, width, sm), widen(p, layout, width, sm)),
            program=p.name or p.label(), layout=layout,
        )
        renamed = rename_program(p, layout)
        rep.check(
            "grade monotonicity",
            VALUES,
            lambda renamed=renamed, layout=layout: (
                denote_layout(renamed, {r: r for r in renamed.registers()}, width, sm),
                widen(p, layout, width, sm),
            ),
            program=p.name or p.label(), layout=layout,
        )
    return rep
