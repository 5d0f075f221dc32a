"""Formulas of infinitary classical logic and recursive formula equations.

A formula is a rational tree labeled by the connectives ``OR``/``AND`` and by
signed propositional variables, where variables only label leaves.  Ill-founded
formulas are allowed; the solution of every recursive equation is one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .position import Position
from .tree import RationalTree, _Builder, _Graph


class Conn(enum.Enum):
    OR = "or"
    AND = "and"

    @property
    def dual(self) -> Conn:
        return Conn.AND if self is Conn.OR else Conn.OR

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, order=True)
class Atom:
    """Propositional variable ``v<index>``, or its negation ``~v<index>``."""

    index: int
    negated: bool = False

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 0:
            raise ValueError(f"variable index must be a natural, got {self.index!r}")

    @property
    def positive(self) -> bool:
        return not self.negated

    def __invert__(self) -> Atom:
        return Atom(self.index, not self.negated)

    def __str__(self) -> str:
        return ("~v" if self.negated else "v") + str(self.index)


Label = Conn | Atom


def dual_label(label: Label) -> Label:
    """Label-wise negation: OR and AND swap, atoms flip polarity."""
    if isinstance(label, Conn):
        return label.dual
    return ~label


class Formula(RationalTree):
    """A rational formula; leaves may be atoms or empty compounds."""

    __slots__ = ()

    @classmethod
    def _validate_graph(cls, graph: _Graph) -> None:
        for n, (label, kids) in enumerate(zip(graph.labels, graph.kids)):
            if isinstance(label, Atom):
                if kids:
                    raise ValueError(f"atom {label} must label a leaf (node {n} has children)")
            elif not isinstance(label, Conn):
                raise ValueError(f"not a formula label: {label!r}")

    @property
    def is_atom(self) -> bool:
        return isinstance(self.label, Atom)

    @property
    def is_compound(self) -> bool:
        return isinstance(self.label, Conn)

    @property
    def is_disjunctive(self) -> bool:
        return self.label is Conn.OR

    @property
    def is_conjunctive(self) -> bool:
        return self.label is Conn.AND

    def __invert__(self) -> Formula:
        return negate(self)

    def __str__(self) -> str:
        from .syntax import format_formula

        return format_formula(self)

    def __repr__(self) -> str:
        return f"Formula({str(self)!r})"


def atom(index: int, negated: bool = False) -> Formula:
    return Formula.leaf(Atom(index, negated))


def var(index: int) -> Formula:
    return atom(index)


def neg_var(index: int) -> Formula:
    return atom(index, negated=True)


def disj(*subformulas: Formula) -> Formula:
    return Formula.compound(Conn.OR, list(subformulas))


def conj(*subformulas: Formula) -> Formula:
    return Formula.compound(Conn.AND, list(subformulas))


def compound(conn: Conn, subformulas: Mapping[int, Formula] | Sequence[Formula]) -> Formula:
    """A compound formula with an arbitrary finite arity."""
    return Formula.compound(conn, subformulas)


BOTTOM = disj()
TOP = conj()


def _as_formula(t: RationalTree) -> Formula:
    if isinstance(t, Formula):
        return t
    Formula._validate_graph(t._g)
    return Formula._from_graph(t._g, t._root)


def negate(f: Formula) -> Formula:
    """Same domain, every label dualized.

    The dual graph is built once per graph and linked both ways, so double
    negation returns a tree presented by the very same node.
    """
    g = f._g
    ng = g.cache.get("negation")
    if ng is None:
        ng = _Graph([dual_label(lab) for lab in g.labels], g.kids)
        ng.cache["negation"] = g
        g.cache["negation"] = ng
    return Formula._from_graph(ng, f._root)


def occurs(f: Formula, v: Atom) -> bool:
    """Whether ``v`` or its negation labels some position of ``f``."""
    pair = {Atom(v.index, False), Atom(v.index, True)}
    return any(f.node_label(n) in pair for n in f.nodes)


def _positive(v: Atom | int) -> Atom:
    if isinstance(v, int):
        return Atom(v)
    if v.negated:
        raise ValueError(f"substitution needs a positive variable, got {v}")
    return v


def substitute(f: Formula, g: Formula, v: Atom | int) -> Formula:
    """Replace ``v``-leaves of ``f`` by ``g`` and ``~v``-leaves by ``negate(g)``."""
    v = _positive(v)
    if f.label == v:
        return _as_formula(g)
    if f.label == ~v:
        return negate(g)
    b = _Builder()
    own = b.import_graph(f._g, fresh=True)
    g_root = b.import_tree(g)
    ng_root = b.import_tree(negate(g))
    labels = f._g.labels
    for n, kids in enumerate(f._g.kids):
        for i, c in kids.items():
            if labels[c] == v:
                b.kids[own[n]][i] = g_root
            elif labels[c] == ~v:
                b.kids[own[n]][i] = ng_root
    return b.finish(own[f._root], Formula)


# -- recursive equations ---------------------------------------------------


class EquationError(ValueError):
    """A pair ``(v, F)`` fails one of the conditions for a recursive equation."""

    def __init__(self, clause: str, message: str):
        super().__init__(f"{clause}: {message}")
        self.clause = clause


@dataclass(frozen=True, eq=False)
class Equation:
    variable: Atom
    body: Formula

    def __post_init__(self):
        if self.variable.negated:
            raise EquationError("R1", f"the variable {self.variable} is negated")
        if not self.body.is_compound:
            raise EquationError("R2", f"the body {self.body} is atomic")
        if not occurs(self.body, self.variable):
            raise EquationError("R3", f"neither {self.variable} nor {~self.variable} occurs in the body")

    def __str__(self) -> str:
        return f"{self.variable} := {self.body}"


def validate_equation(v: Atom | Formula, body: Formula) -> Equation:
    """Return the equation ``v := body``, raising :class:`EquationError` naming the violated condition."""
    if isinstance(v, RationalTree):
        if not isinstance(v.label, Atom):
            raise EquationError("R1", f"{v} is not a variable")
        v = v.label
    return Equation(v, _as_formula(body))


def solve(e: Equation) -> Formula:
    """The unique solution ``G`` with ``G == substitute(e.body, G, e.variable)``.

    Built from two copies of the body graph, one as is and one negated.  In
    the positive copy ``v``-leaves point back to the positive root and
    ``~v``-leaves to the negated root; the negated copy is wired dually.
    """
    v, body = e.variable, e.body
    b = _Builder()
    pos = b.import_graph(body._g, fresh=True)
    neg = b.import_graph(body._g, relabel=dual_label, fresh=True)
    rp, rn = pos[body._root], neg[body._root]
    labels = body._g.labels
    for n, kids in enumerate(body._g.kids):
        for i, c in kids.items():
            if labels[c] == v:
                b.kids[pos[n]][i] = rp
                b.kids[neg[n]][i] = rn
            elif labels[c] == ~v:
                b.kids[pos[n]][i] = rn
                b.kids[neg[n]][i] = rp
    return b.finish(rp, Formula)


def split_positions(e: Equation) -> tuple[set[Position], set[Position]]:
    """The sets ``R`` (positions of ``v``/``~v`` in the body) and ``S`` (all the others).

    Only defined for well-founded bodies, whose domain is finite.
    """
    from .tree import is_well_founded

    if not is_well_founded(e.body):
        raise ValueError("the body is ill-founded; its positions cannot be enumerated")
    pair = (e.variable, ~e.variable)
    r, s = set(), set()
    stack = [(Position(), e.body._root)]
    g = e.body._g
    while stack:
        p, n = stack.pop()
        (r if g.labels[n] in pair else s).add(p)
        stack.extend((p.child(i), c) for i, c in g.kids[n].items())
    return r, s


@dataclass(frozen=True)
class Factorization:
    """``p == r_parts[0] + ... + r_parts[n-1] + s_part`` with each r in R and s in S."""

    r_parts: tuple[Position, ...]
    s_part: Position
    negation_count: int

    @property
    def n(self) -> int:
        return len(self.r_parts)


def _cut_points(e: Equation, p: tuple[int, ...]) -> tuple[list[int], int] | None:
    """End offsets of the R-parts of ``p`` and the number of them labeled ``~v``."""
    g, root = e.body._g, e.body._root
    v, nv = e.variable, ~e.variable
    # node -> 1 for a ~v leaf, 0 for a v leaf
    cuts = g.cache.get(("cuts", v))
    if cuts is None:
        cuts = {n: int(lab == nv) for n, lab in enumerate(g.labels) if lab == v or lab == nv}
        g.cache[("cuts", v)] = cuts
    kids = g.kids
    ends: list[int] = []
    negations = 0
    n = root
    for j, i in enumerate(p):
        n = kids[n].get(i)
        if n is None:
            return None
        cut = cuts.get(n)
        if cut is not None:
            ends.append(j + 1)
            negations += cut
            n = root
    return ends, negations


def factorize(e: Equation, p: Iterable[int]) -> Factorization | None:
    """Decompose ``p`` against the body, or ``None`` when ``p`` is outside the solution's domain.

    Walks the body graph along ``p`` and cuts each time a ``v``/``~v`` leaf is
    reached.  Greedy cutting is correct because members of R are leaves, so
    no member of R is a proper prefix of another.
    """
    p = tuple(p)
    found = _cut_points(e, p)
    if found is None:
        return None
    ends, negations = found
    starts = [0] + ends
    parts = tuple(Position._trusted(p[a:b]) for a, b in zip(starts, ends))
    return Factorization(parts, Position(p[starts[-1]:]), negations)


def solution_label_oracle(e: Equation, p: Iterable[int]) -> Label | None:
    """Label of the solution at ``p`` from the parity construction (independent of :func:`solve`)."""
    p = tuple(p)
    found = _cut_points(e, p)
    if found is None:
        return None
    ends, negations = found
    label = e.body.label_at(p[ends[-1] if ends else 0 :])
    return dual_label(label) if negations % 2 else label


class FormulaSeq:
    """Persistent finite sequence of formulas; extending shares the prefix."""

    __slots__ = ("_prev", "_last", "_len", "_items")

    def __init__(self, formulas: Iterable[Formula] = ()):
        items = tuple(_as_formula(f) for f in formulas)
        self._prev = None
        self._last = items[-1] if items else None
        self._len = len(items)
        self._items: tuple[Formula, ...] | None = items

    def extended(self, f: Formula):
        """This sequence with ``f`` appended at index ``len(self)``."""
        out = object.__new__(type(self))
        out._prev = self
        out._last = _as_formula(f)
        out._len = self._len + 1
        out._items = None
        return out

    def _materialize(self) -> tuple[Formula, ...]:
        if self._items is None:
            tail = []
            node = self
            while node._items is None:
                tail.append(node._last)
                node = node._prev
            self._items = node._items + tuple(reversed(tail))
        return self._items

    def __len__(self) -> int:
        return self._len

    def __getitem__(self, k: int) -> Formula:
        return self._materialize()[k]

    def __iter__(self) -> Iterator[Formula]:
        return iter(self._materialize())

    def get(self, k: int) -> Formula | None:
        return self[k] if 0 <= k < self._len else None

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return len(self) == len(other) and all(a == b for a, b in zip(self, other))

    def __hash__(self) -> int:
        return hash((type(self).__name__, tuple(self)))

    def __repr__(self) -> str:
        return f"{type(self).__name__}([{', '.join(map(str, self))}])"
