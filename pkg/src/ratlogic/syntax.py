"""Text syntax for formulas, equations, rules, skeletons, tests and derivations.

Bracket syntax (finite formulas)::

    v0   ~v3   or[v0, ~v0]   and[]   v0 := or[~v0, v0]

Node syntax (rational trees; ``;`` or newlines separate statements)::

    node n0 = or(0->n0, 1->n0); root n0

Rule labels are ``ax(v0,0,1)``, ``or(k,i0)`` and ``and(k)``; in a skeleton a
node with children reads ``node s = or(0,0)(0->s)``.  Tests may add a default
edge ``*->name`` taken for every index without an explicit edge.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Hashable

from .formula import Atom, Conn, Equation, Formula, validate_equation
from .interaction import Test, complete_skeleton
from .proof import Axiom, Conj, DerivationCandidate, Disj, Rule, Sequent
from .tree import RationalTree, is_well_founded, to_node_text


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", offset: int = 0):
        line = text.count("\n", 0, offset) + 1
        col = offset - (text.rfind("\n", 0, offset) + 1) + 1
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.offset = offset
        self.line = line
        self.column = col


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>->)
  | (?P<defeq>:=)
  | (?P<nat>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[\[\](),;=~*])
    """,
    re.VERBOSE,
)

_VAR = re.compile(r"v(\d+)$")


@dataclass
class _Tok:
    kind: str
    text: str
    offset: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind if kind != "punct" else m.group(), m.group(), pos))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def peek(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, tok: _Tok | None = None):
        tok = tok or self.peek
        found = tok.text or "end of input"
        raise ParseError(f"{message} (found {found!r})", self.text, tok.offset)

    def take(self, kind: str, what: str | None = None) -> _Tok:
        tok = self.peek
        if tok.kind != kind:
            self.error(f"expected {what or kind}")
        self.i += 1
        return tok

    def accept(self, kind: str) -> _Tok | None:
        if self.peek.kind == kind:
            return self.take(kind)
        return None

    def nat(self) -> int:
        return int(self.take("nat", "a natural number").text)

    def var(self) -> Atom:
        tok = self.take("ident", "a variable v<n>")
        m = _VAR.match(tok.text)
        if not m:
            self.error("expected a variable v<n>", tok)
        return Atom(int(m.group(1)))

    def end(self):
        if self.peek.kind != "eof":
            self.error("unexpected trailing input")

    # -- bracket formulas

    def bracket_formula(self) -> Formula:
        if self.accept("~"):
            return Formula.leaf(~self.var())
        tok = self.peek
        if tok.kind == "ident" and tok.text in ("or", "and"):
            self.i += 1
            conn = Conn(tok.text)
            self.take("[", "'['")
            subs = []
            if not self.accept("]"):
                subs.append(self.bracket_formula())
                while self.accept(","):
                    subs.append(self.bracket_formula())
                self.take("]", "',' or ']'")
            return Formula.compound(conn, subs)
        return Formula.leaf(self.var())

    # -- node syntax

    def formula_label(self) -> Hashable:
        if self.accept("~"):
            return ~self.var()
        tok = self.peek
        if tok.kind == "ident" and tok.text in ("or", "and"):
            self.i += 1
            return Conn(tok.text)
        return self.var()

    def rule(self) -> Rule:
        tok = self.take("ident", "a rule ax(..)/or(..)/and(..)")
        if tok.text not in ("ax", "or", "and"):
            self.error("expected a rule ax(..)/or(..)/and(..)", tok)
        self.take("(", "'('")
        if tok.text == "ax":
            v = self.var()
            self.take(",", "','")
            k = self.nat()
            self.take(",", "','")
            rule: Rule = Axiom(v, k, self.nat())
        elif tok.text == "or":
            k = self.nat()
            self.take(",", "','")
            rule = Disj(k, self.nat())
        else:
            rule = Conj(self.nat())
        self.take(")", "')'")
        return rule

    def node_doc(self, label: Callable[[], Hashable], allow_default: bool):
        labels: dict[str, Hashable] = {}
        children: dict[str, dict[int, str]] = {}
        defaults: dict[str, str] = {}
        refs: list[tuple[str, _Tok]] = []
        root = None
        while self.peek.kind != "eof":
            if self.accept(";"):
                continue
            kw = self.take("ident", "'node' or 'root'")
            if kw.text == "root":
                tok = self.take("ident", "a node name")
                if root is not None:
                    self.error("duplicate root declaration", tok)
                root = tok
                continue
            if kw.text != "node":
                self.error("expected 'node' or 'root'", kw)
            name_tok = self.take("ident", "a node name")
            name = name_tok.text
            if name in labels:
                self.error(f"node {name} defined twice", name_tok)
            self.take("=", "'='")
            labels[name] = label()
            kids: dict[int, str] = {}
            if self.accept("("):
                if not self.accept(")"):
                    while True:
                        if self.peek.kind == "*":
                            star = self.take("*")
                            if not allow_default:
                                self.error("default edges are only allowed in tests", star)
                            self.take("arrow", "'->'")
                            target = self.take("ident", "a node name")
                            defaults[name] = target.text
                        else:
                            idx_tok = self.peek
                            i = self.nat()
                            if i in kids:
                                self.error(f"child {i} given twice", idx_tok)
                            self.take("arrow", "'->'")
                            target = self.take("ident", "a node name")
                            kids[i] = target.text
                        refs.append((target.text, target))
                        if self.accept(")"):
                            break
                        self.take(",", "',' or ')'")
            children[name] = kids
        if root is None:
            self.error("missing 'root <name>'")
        for target, tok in refs + [(root.text, root)]:
            if target not in labels:
                self.error(f"unknown node {target}", tok)
        return labels, children, defaults, root.text


def _is_node_syntax(text: str) -> bool:
    return text.lstrip().startswith("node")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    if _is_node_syntax(text):
        labels, children, _, root = p.node_doc(p.formula_label, allow_default=False)
        try:
            return Formula.build(labels, children, root)
        except ValueError as exc:
            raise ParseError(str(exc), text, 0) from None
    f = p.bracket_formula()
    p.end()
    return f


def parse_equation(text: str) -> Equation:
    p = _Parser(text)
    v = p.var()
    p.take("defeq", "':='")
    rest = text[p.peek.offset:]
    body = parse_formula(rest)
    return validate_equation(v, body)


def parse_rule(text: str) -> Rule:
    p = _Parser(text)
    r = p.rule()
    p.end()
    return r


def parse_sequent(text: str) -> Sequent:
    f = parse_formula(text)
    try:
        return Sequent.from_formula(f)
    except ValueError as exc:
        raise ParseError(str(exc), text, 0) from None


def parse_skeleton(text: str) -> RationalTree:
    p = _Parser(text)
    labels, children, _, root = p.node_doc(p.rule, allow_default=False)
    return RationalTree.build(labels, children, root)


def parse_test(text: str, default_rule: Rule = Conj(0)) -> Test:
    """Parse a test; states without a ``*->`` edge fall through to an absorbing ``default_rule`` state."""
    p = _Parser(text)
    labels, children, defaults, root = p.node_doc(p.rule, allow_default=True)
    if not defaults:
        return complete_skeleton(RationalTree.build(labels, children, root), default_rule)
    if any(name not in defaults for name in labels):
        sink = "__default__"
        labels = {**labels, sink: default_rule}
        defaults = {name: defaults.get(name, sink) for name in labels}
        defaults[sink] = sink
    return Test.build(labels, children, defaults, root)


def parse_derivation(text: str) -> DerivationCandidate:
    """First non-blank line: the root sequent; the rest: the skeleton."""
    lines = text.splitlines(keepends=True)
    for j, line in enumerate(lines):
        if line.strip() and not line.lstrip().startswith("#"):
            break
    else:
        raise ParseError("empty derivation file", text, 0)
    start = sum(len(l) for l in lines[:j])
    offset = start + len(lines[j])
    try:
        seq = parse_sequent(lines[j])
    except ParseError as exc:
        raise ParseError(f"in the sequent: {exc.message}", text, start + exc.offset) from None
    try:
        skel = parse_skeleton(text[offset:])
    except ParseError as exc:
        raise ParseError(f"in the skeleton: {exc.message}", text, offset + exc.offset) from None
    return DerivationCandidate(seq, skel)


# -- printing --------------------------------------------------------------


def _bracketable(f: RationalTree) -> bool:
    if not is_well_founded(f):
        return False
    return all(tuple(f.node_children(n)) == tuple(range(len(f.node_children(n)))) for n in f.nodes)


def _bracket(f: RationalTree, node: int) -> str:
    label = f.node_label(node)
    if isinstance(label, Atom):
        return str(label)
    kids = f.node_children(node)
    return f"{label}[" + ", ".join(_bracket(f, kids[i]) for i in sorted(kids)) + "]"


def format_formula(f: Formula) -> str:
    """Bracket syntax when the formula is finite with arities 0..n-1, node syntax otherwise."""
    if _bracketable(f):
        return _bracket(f, f._root)
    return to_node_text(f)


def format_equation(e: Equation) -> str:
    return f"{e.variable} := {format_formula(e.body)}"


def format_sequent(s: Sequent) -> str:
    return format_formula(s.as_formula())


def format_skeleton(sk: RationalTree) -> str:
    return to_node_text(sk, prefix="s")


def format_test(t: Test) -> str:
    names = {s: f"t{j}" for j, s in enumerate(t.states)}
    parts = []
    for s, name in names.items():
        edges = [f"{i}->{names[c]}" for i, c in t.kids[s].items()] + [f"*->{names[t.defaults[s]]}"]
        parts.append(f"node {name} = {t.rules[s]}({', '.join(edges)})")
    parts.append(f"root {names[t.root]}")
    return "; ".join(parts)


def format_derivation(d: DerivationCandidate) -> str:
    body = format_skeleton(d.skeleton).replace("; ", "\n")
    return format_sequent(d.root) + "\n" + body + "\n"
