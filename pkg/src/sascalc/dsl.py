"""The .sas text format: parser, link pass, canonical serializer.

The language is line-oriented and declarative. Five declaration forms
exist, keywords are case-sensitive, and `#` starts a comment anywhere:

    system NAME {
      components: a, b, c
      behaviors: f[level=2, type=Time-driven], g
      relations: a -> b, f -> g, f -> a
      inputs: ext -> f
      outputs: g -> ext
      env: Peer
    }

    concept NAME {
      attrs: color, size
      objects: sedan
      internal: sedan -> color
      inputs: Vehicle
      outputs: Wheel
    }

    knowledge k1 : Car x Wheel
    event tick type timer
    bind tick -> poll level 2 taxon Time-driven pm poll_proc

Section order inside a block is free on input; the canonical form emits
the order shown above. Relation pairs carry no kind marker: a pair whose
endpoints are both components is a component relation, both behaviors a
behavioral relation, behavior-to-component a functional relation. A name
that is simultaneously a component and a behavior resolves in that same
priority order, so re-parsing a canonical file reproduces the kinds.

Problems never raise: parsing returns diagnostics with 1-based line and
column, and any error-severity diagnostic means no model is produced.
Environment names and concept input/output peers may reference things
outside the file; they are treated as opaque externals. Boundary pairs
(inputs/outputs) are checked against environment behaviors only when every
environment peer is declared in the file, since an undeclared peer could
supply anything.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable

from . import him
from .errors import SasError
from .him import BehaviorBinding, Dispatcher, EventSpec, EventType
from .knowledge import Concept, KnowledgeBase, KnowledgeItem
from .model import (
    Behavior,
    RelationKind,
    RelationSet,
    System,
    is_identifier,
)

SAS_EXTENSION = ".sas"

ERROR = "error"
WARNING = "warning"

E_SYNTAX = "E_SYNTAX"
E_INVALID_IDENT = "E_INVALID_IDENT"
E_UNKNOWN_KEY = "E_UNKNOWN_KEY"
E_DUPLICATE_SECTION = "E_DUPLICATE_SECTION"
E_DUPLICATE_MEMBER = "E_DUPLICATE_MEMBER"
E_DUPLICATE_DECL = "E_DUPLICATE_DECL"
E_LEVEL_RANGE = "E_LEVEL_RANGE"
E_UNKNOWN_TAXON = "E_UNKNOWN_TAXON"
E_TAXON_LEVEL = "E_TAXON_LEVEL"
E_UNKNOWN_EVENT_TYPE = "E_UNKNOWN_EVENT_TYPE"
E_UNRESOLVED_REF = "E_UNRESOLVED_REF"
E_RELATION_ENDPOINTS = "E_RELATION_ENDPOINTS"
W_UNBOUND_EVENT = "W_UNBOUND_EVENT"

ALL_CODES = (
    E_SYNTAX,
    E_INVALID_IDENT,
    E_UNKNOWN_KEY,
    E_DUPLICATE_SECTION,
    E_DUPLICATE_MEMBER,
    E_DUPLICATE_DECL,
    E_LEVEL_RANGE,
    E_UNKNOWN_TAXON,
    E_TAXON_LEVEL,
    E_UNKNOWN_EVENT_TYPE,
    E_UNRESOLVED_REF,
    E_RELATION_ENDPOINTS,
    W_UNBOUND_EVENT,
)


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    line: int
    column: int
    code: str
    message: str

    def is_error(self) -> bool:
        return self.severity == ERROR


def format_diagnostic(diag: Diagnostic, path: str | None = None, color: bool = False) -> str:
    where = f"{path or '<source>'}:{diag.line}:{diag.column}"
    body = f"{diag.severity}[{diag.code}]: {diag.message}"
    if color:
        tint = "\x1b[31m" if diag.is_error() else "\x1b[33m"
        body = f"{tint}{body}\x1b[0m"
    return f"{where}: {body}"


@dataclass(eq=True)
class SourceModel:
    """Everything one .sas file declares, link-checked.

    Equality ignores provenance (path and line spans): two files with the
    same declarations in the same order are the same model.
    """

    path: str | None = field(default=None, compare=False)
    systems: dict[str, System] = field(default_factory=dict)
    concepts: dict[str, Concept] = field(default_factory=dict)
    knowledge: dict[str, KnowledgeItem] = field(default_factory=dict)
    events: dict[str, EventSpec] = field(default_factory=dict)
    bindings: list[BehaviorBinding] = field(default_factory=list)
    decl_order: tuple[tuple[str, str], ...] = ()
    spans: dict[tuple[str, str], tuple[int, int]] = field(default_factory=dict, compare=False)

    def knowledge_base(self) -> KnowledgeBase:
        return KnowledgeBase(
            concepts=tuple(self.concepts.values()),
            items=tuple(self.knowledge.values()),
        )

    def dispatcher(self) -> Dispatcher:
        d = Dispatcher()
        for spec in self.events.values():
            d.register_event(spec)
        for binding in self.bindings:
            d.register(binding)
        return d


@dataclass(frozen=True)
class ParseResult:
    model: SourceModel | None
    diagnostics: tuple[Diagnostic, ...]

    @property
    def ok(self) -> bool:
        return self.model is not None

    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.is_error()]

    def warnings(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if not d.is_error()]


# --- tokens --------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<WS>[ \t]+)"
    r"|(?P<WORD>[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*)"
    r"|(?P<NUMBER>[0-9]+)"
    r"|(?P<ARROW>->)"
    r"|(?P<LBRACE>\{)"
    r"|(?P<RBRACE>\})"
    r"|(?P<LBRACKET>\[)"
    r"|(?P<RBRACKET>\])"
    r"|(?P<COLON>:)"
    r"|(?P<COMMA>,)"
    r"|(?P<EQUALS>=)"
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(line: str) -> tuple[list[_Tok], int | None]:
    """Tokens of one line (comment stripped); second value is the column
    of the first unrecognizable character, if any."""

    hash_at = line.find("#")
    if hash_at >= 0:
        line = line[:hash_at]
    toks: list[_Tok] = []
    pos = 0
    while pos < len(line):
        m = _TOKEN_RE.match(line, pos)
        if m is None:
            return toks, pos + 1
        if m.lastgroup != "WS":
            toks.append(_Tok(m.lastgroup or "", m.group(), pos + 1))
        pos = m.end()
    return toks, None


# --- raw declarations ----------------------------------------------------

_DECL_KEYWORDS = ("system", "concept", "knowledge", "event", "bind")

_SYSTEM_SECTIONS = ("components", "behaviors", "relations", "inputs", "outputs", "env")
_CONCEPT_SECTIONS = ("attrs", "objects", "internal", "inputs", "outputs")

_EVENT_KEYWORDS: dict[str, EventType] = {
    "stimulus": EventType.EXTERNAL_STIMULUS,
    "timer": EventType.TIMER,
    "interrupt": EventType.INTERRUPT,
    "internal": EventType.INTERNAL,
}
_EVENT_KEYWORD_OF: dict[EventType, str] = {v: k for k, v in _EVENT_KEYWORDS.items()}


@dataclass
class _Name:
    text: str
    line: int
    col: int


@dataclass
class _BSpec:
    name: _Name
    level: int | None = None
    level_pos: tuple[int, int] | None = None
    taxon: str | None = None
    taxon_pos: tuple[int, int] | None = None


@dataclass
class _Section:
    key: str
    line: int
    col: int
    names: list[_Name] = field(default_factory=list)
    pairs: list[tuple[_Name, _Name]] = field(default_factory=list)
    bspecs: list[_BSpec] = field(default_factory=list)


@dataclass
class _Block:
    kind: str  # "system" | "concept"
    name: _Name
    sections: dict[str, _Section] = field(default_factory=dict)
    span: tuple[int, int] = (0, 0)


@dataclass
class _Knowledge:
    name: _Name
    left: _Name
    right: _Name
    line: int = 0


@dataclass
class _Event:
    name: _Name
    kind: _Name


@dataclass
class _Bind:
    line: int
    event: _Name
    behavior: _Name
    level: int
    level_pos: tuple[int, int]
    taxon: _Name
    pm: _Name | None


class _Parser:
    def __init__(self, text: str, path: str | None) -> None:
        self.lines = text.split("\n")
        self.path = path
        self.diags: list[Diagnostic] = []
        self.decls: list[tuple[str, object]] = []
        self.index = 0

    # diagnostics ----------------------------------------------------

    def error(self, line: int, col: int, code: str, message: str) -> None:
        self.diags.append(Diagnostic(ERROR, line, col, code, message))

    def warn(self, line: int, col: int, code: str, message: str) -> None:
        self.diags.append(Diagnostic(WARNING, line, col, code, message))

    # scanning -------------------------------------------------------

    def run(self) -> None:
        while self.index < len(self.lines):
            lineno = self.index + 1
            toks, bad_col = _tokenize(self.lines[self.index])
            self.index += 1
            if bad_col is not None:
                self.error(lineno, bad_col, E_SYNTAX, "unrecognizable character")
                continue
            if not toks:
                continue
            head = toks[0]
            if head.kind != "WORD" or head.text not in _DECL_KEYWORDS:
                self.error(
                    lineno,
                    head.col,
                    E_SYNTAX,
                    f"expected a declaration keyword, got {head.text!r}",
                )
                continue
            if head.text in ("system", "concept"):
                self._block_decl(head.text, toks, lineno)
            elif head.text == "knowledge":
                self._knowledge_decl(toks, lineno)
            elif head.text == "event":
                self._event_decl(toks, lineno)
            else:
                self._bind_decl(toks, lineno)

    def _take_name(self, toks: list[_Tok], at: int, lineno: int, role: str) -> _Name | None:
        if at >= len(toks):
            col = toks[-1].col + len(toks[-1].text) if toks else 1
            self.error(lineno, col, E_SYNTAX, f"expected {role}")
            return None
        tok = toks[at]
        if tok.kind != "WORD":
            self.error(lineno, tok.col, E_SYNTAX, f"expected {role}, got {tok.text!r}")
            return None
        return _Name(tok.text, lineno, tok.col)

    def _require(self, toks: list[_Tok], at: int, kind: str, text: str, lineno: int) -> bool:
        if at < len(toks) and toks[at].kind == kind:
            return True
        col = toks[at].col if at < len(toks) else (toks[-1].col + len(toks[-1].text) if toks else 1)
        got = toks[at].text if at < len(toks) else "end of line"
        self.error(lineno, col, E_SYNTAX, f"expected {text!r}, got {got!r}")
        return False

    def _no_trailing(self, toks: list[_Tok], at: int, lineno: int) -> bool:
        if at < len(toks):
            self.error(
                lineno,
                toks[at].col,
                E_SYNTAX,
                f"unexpected trailing input {toks[at].text!r}",
            )
            return False
        return True

    # block declarations ----------------------------------------------

    def _block_decl(self, kind: str, toks: list[_Tok], lineno: int) -> None:
        name = self._take_name(toks, 1, lineno, f"{kind} name")
        if name is None:
            if any(t.kind == "LBRACE" for t in toks):
                self._skip_to_rbrace()
            return
        if not self._require(toks, 2, "LBRACE", "{", lineno):
            return
        self._no_trailing(toks, 3, lineno)  # recoverable: the block still parses
        block = _Block(kind=kind, name=name)
        sections = _SYSTEM_SECTIONS if kind == "system" else _CONCEPT_SECTIONS
        closed = False
        while self.index < len(self.lines):
            body_no = self.index + 1
            toks, bad_col = _tokenize(self.lines[self.index])
            self.index += 1
            if bad_col is not None:
                self.error(body_no, bad_col, E_SYNTAX, "unrecognizable character")
                continue
            if not toks:
                continue
            first = toks[0]
            if first.kind == "RBRACE":
                self._no_trailing(toks, 1, body_no)
                closed = True
                block.span = (lineno, body_no)
                break
            if first.kind == "WORD" and first.text in _DECL_KEYWORDS and not (
                len(toks) > 1 and toks[1].kind == "COLON"
            ):
                # A new declaration header: this block was never closed.
                # Hand the line back so it parses as the declaration it is.
                self.error(
                    body_no,
                    first.col,
                    E_SYNTAX,
                    f"missing '}}' closing the {kind} block opened at line {lineno}",
                )
                self.index -= 1
                break
            self._section_line(block, sections, toks, body_no)
        if not closed:
            block.span = (lineno, len(self.lines))
            if self.index >= len(self.lines):
                self.error(
                    lineno,
                    1,
                    E_SYNTAX,
                    f"missing '}}' closing the {kind} block opened at line {lineno}",
                )
        self.decls.append((kind, block))

    def _skip_to_rbrace(self) -> None:
        while self.index < len(self.lines):
            toks, _ = _tokenize(self.lines[self.index])
            self.index += 1
            if toks and toks[0].kind == "RBRACE":
                return

    def _section_line(
        self, block: _Block, sections: tuple[str, ...], toks: list[_Tok], lineno: int
    ) -> None:
        head = toks[0]
        if head.kind != "WORD":
            self.error(lineno, head.col, E_SYNTAX, f"expected a section key, got {head.text!r}")
            return
        if not self._require(toks, 1, "COLON", ":", lineno):
            return
        if head.text not in sections:
            self.error(
                lineno,
                head.col,
                E_UNKNOWN_KEY,
                f"unknown key {head.text!r} in {block.kind} block "
                f"(expected one of: {', '.join(sections)})",
            )
            return
        section = _Section(key=head.text, line=lineno, col=head.col)
        payload = toks[2:]
        if not payload:
            self.error(lineno, head.col + len(head.text) + 1, E_SYNTAX, f"empty {head.text!r} section")
            return
        if block.kind == "system" and head.text == "behaviors":
            ok = self._parse_bspecs(section, payload, lineno)
        elif head.text in ("relations", "inputs", "outputs", "internal") and not (
            block.kind == "concept" and head.text in ("inputs", "outputs")
        ):
            ok = self._parse_pairs(section, payload, lineno)
        else:
            ok = self._parse_names(section, payload, lineno)
        if not ok:
            return
        if head.text in block.sections:
            self.error(
                lineno,
                head.col,
                E_DUPLICATE_SECTION,
                f"section {head.text!r} already given in this {block.kind} block",
            )
            return
        block.sections[head.text] = section

    def _parse_names(self, section: _Section, toks: list[_Tok], lineno: int) -> bool:
        at = 0
        while True:
            name = self._take_name(toks, at, lineno, "a name")
            if name is None:
                return False
            section.names.append(name)
            at += 1
            if at >= len(toks):
                return True
            if toks[at].kind != "COMMA":
                self.error(lineno, toks[at].col, E_SYNTAX, f"expected ',', got {toks[at].text!r}")
                return False
            at += 1

    def _parse_pairs(self, section: _Section, toks: list[_Tok], lineno: int) -> bool:
        at = 0
        while True:
            left = self._take_name(toks, at, lineno, "a name")
            if left is None:
                return False
            if not self._require(toks, at + 1, "ARROW", "->", lineno):
                return False
            right = self._take_name(toks, at + 2, lineno, "a name")
            if right is None:
                return False
            section.pairs.append((left, right))
            at += 3
            if at >= len(toks):
                return True
            if toks[at].kind != "COMMA":
                self.error(lineno, toks[at].col, E_SYNTAX, f"expected ',', got {toks[at].text!r}")
                return False
            at += 1

    def _parse_bspecs(self, section: _Section, toks: list[_Tok], lineno: int) -> bool:
        at = 0
        while True:
            name = self._take_name(toks, at, lineno, "a behavior name")
            if name is None:
                return False
            spec = _BSpec(name=name)
            at += 1
            if at < len(toks) and toks[at].kind == "LBRACKET":
                at += 1
                if not (
                    at < len(toks)
                    and toks[at].kind == "WORD"
                    and toks[at].text == "level"
                ):
                    col = toks[at].col if at < len(toks) else toks[-1].col
                    self.error(lineno, col, E_SYNTAX, "expected 'level=' inside '[]'")
                    return False
                at += 1
                if not self._require(toks, at, "EQUALS", "=", lineno):
                    return False
                at += 1
                if not (at < len(toks) and toks[at].kind == "NUMBER"):
                    col = toks[at].col if at < len(toks) else toks[-1].col
                    self.error(lineno, col, E_SYNTAX, "expected a level digit")
                    return False
                spec.level = int(toks[at].text)
                spec.level_pos = (lineno, toks[at].col)
                at += 1
                if at < len(toks) and toks[at].kind == "COMMA" and (
                    at + 1 < len(toks)
                    and toks[at + 1].kind == "WORD"
                    and toks[at + 1].text == "type"
                ):
                    at += 2
                    if not self._require(toks, at, "EQUALS", "=", lineno):
                        return False
                    at += 1
                    if not (at < len(toks) and toks[at].kind == "WORD"):
                        col = toks[at].col if at < len(toks) else toks[-1].col
                        self.error(lineno, col, E_SYNTAX, "expected a taxon tag")
                        return False
                    spec.taxon = toks[at].text
                    spec.taxon_pos = (lineno, toks[at].col)
                    at += 1
                if not self._require(toks, at, "RBRACKET", "]", lineno):
                    return False
                at += 1
            section.bspecs.append(spec)
            if at >= len(toks):
                return True
            if toks[at].kind != "COMMA":
                self.error(lineno, toks[at].col, E_SYNTAX, f"expected ',', got {toks[at].text!r}")
                return False
            at += 1

    # one-line declarations --------------------------------------------

    def _knowledge_decl(self, toks: list[_Tok], lineno: int) -> None:
        name = self._take_name(toks, 1, lineno, "knowledge item name")
        if name is None:
            return
        if not self._require(toks, 2, "COLON", ":", lineno):
            return
        left = self._take_name(toks, 3, lineno, "a concept name")
        if left is None:
            return
        if not (len(toks) > 4 and toks[4].kind == "WORD" and toks[4].text == "x"):
            col = toks[4].col if len(toks) > 4 else toks[-1].col + len(toks[-1].text)
            self.error(lineno, col, E_SYNTAX, "expected 'x' between the concept names")
            return
        right = self._take_name(toks, 5, lineno, "a concept name")
        if right is None:
            return
        if not self._no_trailing(toks, 6, lineno):
            return
        self.decls.append(("knowledge", _Knowledge(name=name, left=left, right=right, line=lineno)))

    def _event_decl(self, toks: list[_Tok], lineno: int) -> None:
        name = self._take_name(toks, 1, lineno, "event name")
        if name is None:
            return
        if not (len(toks) > 2 and toks[2].kind == "WORD" and toks[2].text == "type"):
            col = toks[2].col if len(toks) > 2 else toks[-1].col + len(toks[-1].text)
            self.error(lineno, col, E_SYNTAX, "expected 'type'")
            return
        kind = self._take_name(toks, 3, lineno, "an event type")
        if kind is None:
            return
        if not self._no_trailing(toks, 4, lineno):
            return
        self.decls.append(("event", _Event(name=name, kind=kind)))

    def _bind_decl(self, toks: list[_Tok], lineno: int) -> None:
        event = self._take_name(toks, 1, lineno, "event name")
        if event is None:
            return
        if not self._require(toks, 2, "ARROW", "->", lineno):
            return
        behavior = self._take_name(toks, 3, lineno, "behavior name")
        if behavior is None:
            return
        if not (len(toks) > 4 and toks[4].kind == "WORD" and toks[4].text == "level"):
            col = toks[4].col if len(toks) > 4 else toks[-1].col + len(toks[-1].text)
            self.error(lineno, col, E_SYNTAX, "expected 'level'")
            return
        if not (len(toks) > 5 and toks[5].kind == "NUMBER"):
            col = toks[5].col if len(toks) > 5 else toks[-1].col + len(toks[-1].text)
            self.error(lineno, col, E_SYNTAX, "expected a level digit")
            return
        level = int(toks[5].text)
        level_pos = (lineno, toks[5].col)
        if not (len(toks) > 6 and toks[6].kind == "WORD" and toks[6].text == "taxon"):
            col = toks[6].col if len(toks) > 6 else toks[-1].col + len(toks[-1].text)
            self.error(lineno, col, E_SYNTAX, "expected 'taxon'")
            return
        taxon = self._take_name(toks, 7, lineno, "a taxon tag")
        if taxon is None:
            return
        pm: _Name | None = None
        at = 8
        if len(toks) > at and toks[at].kind == "WORD" and toks[at].text == "pm":
            pm = self._take_name(toks, at + 1, lineno, "a process model name")
            if pm is None:
                return
            at += 2
        if not self._no_trailing(toks, at, lineno):
            return
        self.decls.append(
            ("bind", _Bind(lineno, event, behavior, level, level_pos, taxon, pm))
        )


# --- link pass -------------------------------------------------------------


class _Linker:
    def __init__(self, decls: list[tuple[str, object]], diags: list[Diagnostic]) -> None:
        self.decls = decls
        self.diags = diags

    def error(self, line: int, col: int, code: str, message: str) -> None:
        self.diags.append(Diagnostic(ERROR, line, col, code, message))

    def warn(self, line: int, col: int, code: str, message: str) -> None:
        self.diags.append(Diagnostic(WARNING, line, col, code, message))

    def _check_ident(self, name: _Name, role: str) -> bool:
        if not is_identifier(name.text):
            self.error(
                name.line,
                name.col,
                E_INVALID_IDENT,
                f"{role} {name.text!r} is not a valid identifier",
            )
            return False
        return True

    def _names(
        self, section: _Section | None, role: str
    ) -> list[str]:
        out: list[str] = []
        if section is None:
            return out
        for n in section.names:
            if not self._check_ident(n, role):
                continue
            if n.text in out:
                self.error(
                    n.line, n.col, E_DUPLICATE_MEMBER, f"{role} {n.text!r} already listed"
                )
                continue
            out.append(n.text)
        return out

    def _pairs(
        self, section: _Section | None, role: str
    ) -> list[tuple[_Name, _Name]]:
        out: list[tuple[_Name, _Name]] = []
        seen: set[tuple[str, str]] = set()
        if section is None:
            return out
        for a, b in section.pairs:
            ok = self._check_ident(a, f"{role} endpoint")
            ok = self._check_ident(b, f"{role} endpoint") and ok
            if not ok:
                continue
            key = (a.text, b.text)
            if key in seen:
                self.error(
                    a.line,
                    a.col,
                    E_DUPLICATE_MEMBER,
                    f"pair {a.text} -> {b.text} already listed",
                )
                continue
            seen.add(key)
            out.append((a, b))
        return out

    # systems --------------------------------------------------------

    def _link_system(self, block: _Block) -> dict | None:
        if not self._check_ident(block.name, "system name"):
            return None
        comps = self._names(block.sections.get("components"), "component name")

        behaviors: list[Behavior] = []
        bnames: list[str] = []
        sec = block.sections.get("behaviors")
        if sec is not None:
            for spec in sec.bspecs:
                if not self._check_ident(spec.name, "behavior name"):
                    continue
                if spec.name.text in bnames:
                    self.error(
                        spec.name.line,
                        spec.name.col,
                        E_DUPLICATE_MEMBER,
                        f"behavior {spec.name.text!r} already listed",
                    )
                    continue
                level = spec.level
                if level is not None and not 1 <= level <= 5:
                    assert spec.level_pos is not None
                    self.error(
                        *spec.level_pos,
                        E_LEVEL_RANGE,
                        f"level {level} is outside 1..5",
                    )
                if spec.taxon is not None:
                    assert spec.taxon_pos is not None
                    tx = him.find_taxon(spec.taxon)
                    if tx is None:
                        self.error(
                            *spec.taxon_pos,
                            E_UNKNOWN_TAXON,
                            f"unknown taxon tag {spec.taxon!r}",
                        )
                    elif level is not None and tx.level != level:
                        self.error(
                            *spec.taxon_pos,
                            E_TAXON_LEVEL,
                            f"taxon {spec.taxon!r} sits at level {tx.level}, not {level}",
                        )
                bnames.append(spec.name.text)
                behaviors.append(Behavior(spec.name.text, level, spec.taxon))

        rc: list[tuple[str, str]] = []
        rb: list[tuple[str, str]] = []
        rf: list[tuple[str, str]] = []
        for a, b in self._pairs(block.sections.get("relations"), "relation"):
            if a.text in comps and b.text in comps:
                rc.append((a.text, b.text))
            elif a.text in bnames and b.text in bnames:
                rb.append((a.text, b.text))
            elif a.text in bnames and b.text in comps:
                rf.append((a.text, b.text))
            else:
                self.error(
                    a.line,
                    a.col,
                    E_RELATION_ENDPOINTS,
                    f"relation {a.text} -> {b.text} fits no kind: expected "
                    "component -> component, behavior -> behavior, or "
                    "behavior -> component of this system",
                )

        ri: list[tuple[_Name, _Name]] = []
        for ext, own in self._pairs(block.sections.get("inputs"), "input"):
            if own.text not in bnames:
                self.error(
                    own.line,
                    own.col,
                    E_RELATION_ENDPOINTS,
                    f"input target {own.text!r} is not a behavior of {block.name.text!r}",
                )
                continue
            ri.append((ext, own))

        ro: list[tuple[_Name, _Name]] = []
        for own, ext in self._pairs(block.sections.get("outputs"), "output"):
            if own.text not in bnames:
                self.error(
                    own.line,
                    own.col,
                    E_RELATION_ENDPOINTS,
                    f"output source {own.text!r} is not a behavior of {block.name.text!r}",
                )
                continue
            ro.append((own, ext))

        env = self._names(block.sections.get("env"), "environment name")

        return {
            "name": block.name.text,
            "components": comps,
            "behaviors": behaviors,
            "rc": rc,
            "rb": rb,
            "rf": rf,
            "ri": ri,
            "ro": ro,
            "env": env,
            "span": block.span,
        }

    # concepts -------------------------------------------------------

    def _link_concept(self, block: _Block) -> dict | None:
        if not self._check_ident(block.name, "concept name"):
            return None
        attrs = self._names(block.sections.get("attrs"), "attribute name")
        objects = self._names(block.sections.get("objects"), "object name")
        internal: list[tuple[str, str]] = []
        for obj, attr in self._pairs(block.sections.get("internal"), "internal"):
            bad = False
            if obj.text not in objects:
                self.error(
                    obj.line,
                    obj.col,
                    E_RELATION_ENDPOINTS,
                    f"internal source {obj.text!r} is not an object of {block.name.text!r}",
                )
                bad = True
            if attr.text not in attrs:
                self.error(
                    attr.line,
                    attr.col,
                    E_RELATION_ENDPOINTS,
                    f"internal target {attr.text!r} is not an attribute of {block.name.text!r}",
                )
                bad = True
            if not bad:
                internal.append((obj.text, attr.text))
        inputs = self._names(block.sections.get("inputs"), "input concept name")
        outputs = self._names(block.sections.get("outputs"), "output concept name")
        return {
            "name": block.name.text,
            "attrs": attrs,
            "objects": objects,
            "internal": internal,
            "inputs": inputs,
            "outputs": outputs,
            "span": block.span,
        }

    # whole model ------------------------------------------------------

    def link(self, path: str | None) -> SourceModel | None:
        sys_parts: dict[str, dict] = {}
        con_parts: dict[str, dict] = {}
        know_parts: dict[str, _Knowledge] = {}
        event_parts: dict[str, _Event] = {}
        bind_parts: list[_Bind] = []
        order: list[tuple[str, str]] = []
        spans: dict[tuple[str, str], tuple[int, int]] = {}

        for kind, decl in self.decls:
            if kind in ("system", "concept"):
                block = decl  # type: ignore[assignment]
                assert isinstance(block, _Block)
                parts = (
                    self._link_system(block)
                    if kind == "system"
                    else self._link_concept(block)
                )
                if parts is None:
                    continue
                store = sys_parts if kind == "system" else con_parts
                if parts["name"] in store:
                    self.error(
                        block.name.line,
                        block.name.col,
                        E_DUPLICATE_DECL,
                        f"{kind} {parts['name']!r} already declared",
                    )
                    continue
                store[parts["name"]] = parts
                order.append((kind, parts["name"]))
                spans[(kind, parts["name"])] = parts["span"]
            elif kind == "knowledge":
                assert isinstance(decl, _Knowledge)
                if not self._check_ident(decl.name, "knowledge item name"):
                    continue
                if decl.name.text in know_parts:
                    self.error(
                        decl.name.line,
                        decl.name.col,
                        E_DUPLICATE_DECL,
                        f"knowledge item {decl.name.text!r} already declared",
                    )
                    continue
                self._check_ident(decl.left, "concept name")
                self._check_ident(decl.right, "concept name")
                know_parts[decl.name.text] = decl
                order.append((kind, decl.name.text))
                spans[(kind, decl.name.text)] = (decl.name.line, decl.name.line)
            elif kind == "event":
                assert isinstance(decl, _Event)
                if not self._check_ident(decl.name, "event name"):
                    continue
                if decl.name.text in event_parts:
                    self.error(
                        decl.name.line,
                        decl.name.col,
                        E_DUPLICATE_DECL,
                        f"event {decl.name.text!r} already declared",
                    )
                    continue
                if decl.kind.text not in _EVENT_KEYWORDS:
                    self.error(
                        decl.kind.line,
                        decl.kind.col,
                        E_UNKNOWN_EVENT_TYPE,
                        f"unknown event type {decl.kind.text!r} "
                        f"(expected one of: {', '.join(_EVENT_KEYWORDS)})",
                    )
                    continue
                event_parts[decl.name.text] = decl
                order.append((kind, decl.name.text))
                spans[(kind, decl.name.text)] = (decl.name.line, decl.name.line)
            else:
                assert isinstance(decl, _Bind)
                ok = self._check_ident(decl.event, "event name")
                ok = self._check_ident(decl.behavior, "behavior name") and ok
                if decl.pm is not None:
                    ok = self._check_ident(decl.pm, "process model name") and ok
                if not 1 <= decl.level <= 5:
                    self.error(
                        *decl.level_pos,
                        E_LEVEL_RANGE,
                        f"level {decl.level} is outside 1..5",
                    )
                    ok = False
                tx = him.find_taxon(decl.taxon.text)
                if tx is None:
                    self.error(
                        decl.taxon.line,
                        decl.taxon.col,
                        E_UNKNOWN_TAXON,
                        f"unknown taxon tag {decl.taxon.text!r}",
                    )
                    ok = False
                elif 1 <= decl.level <= 5 and tx.level != decl.level:
                    self.error(
                        decl.taxon.line,
                        decl.taxon.col,
                        E_TAXON_LEVEL,
                        f"taxon {decl.taxon.text!r} sits at level {tx.level}, not {decl.level}",
                    )
                    ok = False
                if ok:
                    bind_parts.append(decl)
                    index = len(bind_parts) - 1
                    order.append(("bind", str(index)))
                    spans[("bind", str(index))] = (decl.line, decl.line)

        # Cross-declaration references.
        for know in know_parts.values():
            for end in (know.left, know.right):
                if is_identifier(end.text) and end.text not in con_parts:
                    self.error(
                        end.line,
                        end.col,
                        E_UNRESOLVED_REF,
                        f"knowledge item references undeclared concept {end.text!r}",
                    )
        for bind in bind_parts:
            if is_identifier(bind.event.text) and bind.event.text not in event_parts:
                self.error(
                    bind.event.line,
                    bind.event.col,
                    E_UNRESOLVED_REF,
                    f"binding references undeclared event {bind.event.text!r}",
                )

        # Boundary pairs are checkable only against a fully declared
        # environment; one opaque peer suppresses the check.
        for parts in sys_parts.values():
            env = parts["env"]
            complete = all(e in sys_parts for e in env)
            if not complete:
                continue
            visible: set[str] = set()
            for e in env:
                visible.update(b.name for b in sys_parts[e]["behaviors"])
            for ext, own in parts["ri"]:
                if ext.text not in visible:
                    self.error(
                        ext.line,
                        ext.col,
                        E_UNRESOLVED_REF,
                        f"input source {ext.text!r} is not a behavior of any "
                        f"declared environment peer of {parts['name']!r}",
                    )
            for own, ext in parts["ro"]:
                if ext.text not in visible:
                    self.error(
                        ext.line,
                        ext.col,
                        E_UNRESOLVED_REF,
                        f"output target {ext.text!r} is not a behavior of any "
                        f"declared environment peer of {parts['name']!r}",
                    )

        # Unbound events are legal but usually an oversight.
        bound = {b.event.text for b in bind_parts}
        for name, ev in event_parts.items():
            if name not in bound:
                self.warn(
                    ev.name.line,
                    ev.name.col,
                    W_UNBOUND_EVENT,
                    f"event {name!r} has no binding; occurrences will be unhandled",
                )

        if any(d.is_error() for d in self.diags):
            return None

        model = SourceModel(path=path)
        for kind, name in order:
            if kind == "system":
                parts = sys_parts[name]
                model.systems[name] = System(
                    name=name,
                    components=frozenset(parts["components"]),
                    behaviors=frozenset(parts["behaviors"]),
                    rc=RelationSet.of(RelationKind.COMPONENT, parts["rc"]),
                    rb=RelationSet.of(RelationKind.BEHAVIORAL, parts["rb"]),
                    rf=RelationSet.of(RelationKind.FUNCTIONAL, parts["rf"]),
                    ri=RelationSet.of(
                        RelationKind.INPUT,
                        [(a.text, b.text) for a, b in parts["ri"]],
                    ),
                    ro=RelationSet.of(
                        RelationKind.OUTPUT,
                        [(a.text, b.text) for a, b in parts["ro"]],
                    ),
                    environment=frozenset(parts["env"]),
                )
            elif kind == "concept":
                parts = con_parts[name]
                model.concepts[name] = Concept(
                    name=name,
                    attributes=frozenset(parts["attrs"]),
                    objects=frozenset(parts["objects"]),
                    internal=frozenset(parts["internal"]),
                    inputs=frozenset(parts["inputs"]),
                    outputs=frozenset(parts["outputs"]),
                )
            elif kind == "knowledge":
                know = know_parts[name]
                model.knowledge[name] = KnowledgeItem(know.left.text, know.right.text)
            elif kind == "event":
                ev = event_parts[name]
                model.events[name] = EventSpec(name, _EVENT_KEYWORDS[ev.kind.text])
            else:
                bind = bind_parts[int(name)]
                model.bindings.append(
                    BehaviorBinding(
                        event=bind.event.text,
                        behavior=bind.behavior.text,
                        taxon=him.taxon_by_tag(bind.taxon.text),
                        process_model=bind.pm.text if bind.pm else None,
                    )
                )
        model.decl_order = tuple(order)
        model.spans = spans
        return model


# --- entry points ----------------------------------------------------------


def parse(text: str, path: str | None = None) -> ParseResult:
    """Parse .sas source. Diagnostics are returned, never raised; any
    error-severity diagnostic means the model is None."""

    parser = _Parser(text, path)
    parser.run()
    linker = _Linker(parser.decls, parser.diags)
    model = linker.link(path)
    diags = tuple(sorted(parser.diags, key=lambda d: (d.line, d.column, d.code)))
    if any(d.is_error() for d in diags):
        return ParseResult(None, diags)
    return ParseResult(model, diags)


def parse_file(path: str) -> ParseResult:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read(), path=path)


# --- canonical serialization ------------------------------------------------


def _bspec_text(b: Behavior) -> str:
    if b.level is None and b.taxon is None:
        return b.name
    level = b.level
    if level is None and b.taxon is not None:
        level = him.taxon_by_tag(b.taxon).level
    if b.taxon is None:
        return f"{b.name}[level={level}]"
    return f"{b.name}[level={level}, type={b.taxon}]"


def _pair_list(pairs: Iterable[tuple[str, str]]) -> str:
    return ", ".join(f"{a} -> {b}" for a, b in sorted(pairs))


def _serialize_system(s: System) -> str:
    lines = [f"system {s.name} {{"]
    if s.components:
        lines.append(f"  components: {', '.join(sorted(s.components))}")
    if s.behaviors:
        specs = [_bspec_text(b) for b in sorted(s.behaviors, key=lambda b: b.name)]
        lines.append(f"  behaviors: {', '.join(specs)}")
    internal = s.rc.pairs | s.rb.pairs | s.rf.pairs
    if internal:
        lines.append(f"  relations: {_pair_list(internal)}")
    if s.ri.pairs:
        lines.append(f"  inputs: {_pair_list(s.ri.pairs)}")
    if s.ro.pairs:
        lines.append(f"  outputs: {_pair_list(s.ro.pairs)}")
    if s.environment:
        lines.append(f"  env: {', '.join(sorted(s.environment))}")
    lines.append("}")
    return "\n".join(lines)


def _serialize_concept(c: Concept) -> str:
    lines = [f"concept {c.name} {{"]
    if c.attributes:
        lines.append(f"  attrs: {', '.join(sorted(c.attributes))}")
    if c.objects:
        lines.append(f"  objects: {', '.join(sorted(c.objects))}")
    if c.internal:
        lines.append(f"  internal: {_pair_list(c.internal)}")
    if c.inputs:
        lines.append(f"  inputs: {', '.join(sorted(c.inputs))}")
    if c.outputs:
        lines.append(f"  outputs: {', '.join(sorted(c.outputs))}")
    lines.append("}")
    return "\n".join(lines)


def serialize(model: SourceModel) -> str:
    """Canonical text: declarations in first-appearance order, list members
    lexicographic, two-space indent, LF endings, one blank line between
    declarations. An empty model is the empty string."""

    chunks: list[str] = []
    for kind, name in model.decl_order:
        if kind == "system":
            chunks.append(_serialize_system(model.systems[name]))
        elif kind == "concept":
            chunks.append(_serialize_concept(model.concepts[name]))
        elif kind == "knowledge":
            item = model.knowledge[name]
            chunks.append(f"knowledge {name} : {item.source} x {item.target}")
        elif kind == "event":
            spec = model.events[name]
            chunks.append(f"event {spec.name} type {_EVENT_KEYWORD_OF[spec.event_type]}")
        else:
            b = model.bindings[int(name)]
            pm = f" pm {b.process_model}" if b.process_model else ""
            chunks.append(
                f"bind {b.event} -> {b.behavior} level {b.taxon.level} "
                f"taxon {b.taxon.type_tag}{pm}"
            )
    if not chunks:
        return ""
    return "\n\n".join(chunks) + "\n"
