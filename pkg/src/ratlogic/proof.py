"""Sequents, rules and (possibly ill-founded) derivations.

A derivation is stored as its root sequent plus a rational skeleton labeled by
rules.  The sequent at any other position is forced by the rules above it:
every step appends one immediate subformula of a referenced disjunct.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable

from .formula import Atom, Conn, Formula, FormulaSeq, disj, solve, Equation
from .position import Position
from .tree import RationalTree, _Graph


# -- rules -----------------------------------------------------------------


@dataclass(frozen=True)
class Axiom:
    """``ax(v, k, l)``: disjunct ``k`` is ``v`` and disjunct ``l`` is ``~v``."""

    var: Atom
    k: int
    l: int

    def __post_init__(self):
        if self.var.negated:
            raise ValueError(f"axiom rules name a positive variable, got {self.var}")

    def __str__(self) -> str:
        return f"ax({self.var},{self.k},{self.l})"


@dataclass(frozen=True)
class Disj:
    """``or(k, i0)``: continue with immediate subformula ``i0`` of disjunct ``k``."""

    k: int
    i0: int

    def __str__(self) -> str:
        return f"or({self.k},{self.i0})"


@dataclass(frozen=True)
class Conj:
    """``and(k)``: one premise per immediate subformula of disjunct ``k``."""

    k: int

    def __str__(self) -> str:
        return f"and({self.k})"


Rule = Axiom | Disj | Conj


def referenced_indices(rule: Rule) -> tuple[int, ...]:
    if isinstance(rule, Axiom):
        return (rule.k, rule.l)
    return (rule.k,)


def indices_below(labels: tuple, succ: list[Iterable[int]], cache: dict, cache_key: str) -> list[frozenset[int]]:
    """For every node, the indices referenced by rules on nodes reachable from it."""
    if cache_key in cache:
        return cache[cache_key]
    refs = [set(referenced_indices(lab)) for lab in labels]
    succ = [list(s) for s in succ]
    changed = True
    while changed:
        changed = False
        for n, cs in enumerate(succ):
            before = len(refs[n])
            for c in cs:
                refs[n] |= refs[c]
            changed |= len(refs[n]) != before
    out = [frozenset(r) for r in refs]
    cache[cache_key] = out
    return out


def memo_key(owner: int, node: int, refs: frozenset[int], seq: FormulaSeq) -> tuple:
    """State identity for periodicity detection.

    Two states with equal keys behave identically from then on: same rule
    graph node, the same formulas at every index any rule below can
    reference, and (when some such index is still unfilled) the same length,
    so future appends land on the same indices.
    """
    n = len(seq)
    items = seq._materialize()
    formulas = tuple((j, items[j].key if j < n else None) for j in sorted(refs))
    pending = any(j >= n for j in refs)
    return (owner, node, formulas, n if pending else -1)


def _has_cycle(edges: dict[Hashable, set[Hashable]], start: Hashable) -> bool:
    state = {start: 1}
    stack = [(start, iter(edges.get(start, ())))]
    while stack:
        node, it = stack[-1]
        for c in it:
            s = state.get(c)
            if s == 1:
                return True
            if s is None:
                state[c] = 1
                stack.append((c, iter(edges.get(c, ()))))
                break
        else:
            state[node] = 2
            stack.pop()
    return False


# -- sequents and derivations ----------------------------------------------


class Sequent(FormulaSeq):
    """The disjunctive formula ``or[F0, ..., F(n-1)]``, kept as a persistent list."""

    __slots__ = ()

    def as_formula(self) -> Formula:
        return disj(*self)

    @classmethod
    def from_formula(cls, f: Formula) -> Sequent:
        if not f.is_disjunctive or f.arity != tuple(range(len(f.arity))):
            raise ValueError(f"{f} is not a sequent (needs a disjunction of arity 0..n-1)")
        return cls(t for _, t in f.children())

    def __str__(self) -> str:
        return "or[" + ", ".join(map(str, self)) + "]"


def append_disjunct(s: Sequent, g: Formula) -> Sequent:
    return s.extended(g)


@dataclass(frozen=True, eq=False)
class DerivationCandidate:
    root: Sequent
    skeleton: RationalTree

    def __post_init__(self):
        for n in self.skeleton.nodes:
            if not isinstance(self.skeleton.node_label(n), (Axiom, Disj, Conj)):
                raise ValueError(f"skeleton node labeled {self.skeleton.node_label(n)!r} is not a rule")


def skeleton_of(d: DerivationCandidate) -> RationalTree:
    return d.skeleton


class MalformedStep(ValueError):
    """The rule at ``position`` cannot produce the child sequent that was asked for."""

    def __init__(self, position: Position, reason: str, partial: Sequent):
        super().__init__(f"at {position}: {reason}")
        self.position = position
        self.reason = reason
        self.partial = partial


def _premise_formula(rule: Rule, seq: Sequent, i: int) -> Formula | str:
    """The formula appended when moving to child ``i``, or a reason why none exists."""
    if isinstance(rule, Axiom):
        return "axiom positions have no premises"
    f = seq.get(rule.k)
    if f is None:
        return f"index {rule.k} out of range for a sequent of length {len(seq)}"
    want = Conn.OR if isinstance(rule, Disj) else Conn.AND
    if f.label is not want:
        return f"disjunct {rule.k} is {f.label}, not {want}"
    if isinstance(rule, Disj) and i != rule.i0:
        return f"disjunctive rule continues at {rule.i0} only, not {i}"
    sub = f.child(i)
    if sub is None:
        return f"disjunct {rule.k} has no immediate subformula {i}"
    return sub


def expand_sequent(d: DerivationCandidate, p: Iterable[int]) -> Sequent | None:
    """The sequent forced at ``p``, or ``None`` when ``p`` is outside the skeleton.

    Raises :class:`MalformedStep` when an ancestor's rule cannot account for
    the step taken.
    """
    sk = d.skeleton
    kids, labels = sk._g.kids, sk._g.labels
    node, seq = sk._root, d.root
    walked: list[int] = []
    for i in p:
        nxt = kids[node].get(i)
        if nxt is None:
            return None
        sub = _premise_formula(labels[node], seq, i)
        if isinstance(sub, str):
            raise MalformedStep(Position(walked), sub, seq)
        seq = seq.extended(sub)
        node = nxt
        walked.append(i)
    return seq


# -- checking --------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    position: Position
    clause: str

    ok = False

    def __str__(self) -> str:
        return f"Violation at {self.position}: {self.clause}"


@dataclass(frozen=True)
class ValidClosed:
    ok = True

    def __str__(self) -> str:
        return "ValidClosed"


@dataclass(frozen=True)
class ValidUpToDepth:
    depth: int

    ok = True

    def __str__(self) -> str:
        return f"ValidUpToDepth({self.depth})"


@dataclass(frozen=True)
class ValidPeriodic:
    certificate: frozenset = field(default_factory=frozenset)

    ok = True

    def __str__(self) -> str:
        return f"ValidPeriodic({len(self.certificate)} revisited states)"


CheckVerdict = Violation | ValidClosed | ValidUpToDepth | ValidPeriodic

DEFAULT_DEPTH = 64


def check_clause(rule: Rule, seq: Sequent, child_indices: Iterable[int]) -> str | None:
    """Why ``rule`` fails the derivation clause at a node with sequent ``seq``; ``None`` if it holds."""
    n = len(seq)
    kids = set(child_indices)
    if isinstance(rule, Axiom):
        if rule.k >= n or rule.l >= n:
            return f"(ax) index out of range for a sequent of length {n}"
        if seq[rule.k].label != rule.var:
            return f"(ax) disjunct {rule.k} is not {rule.var}"
        if seq[rule.l].label != ~rule.var:
            return f"(ax) disjunct {rule.l} is not {~rule.var}"
        if kids:
            return "(ax) an axiom position must be a leaf"
        return None
    if rule.k >= n:
        return f"index {rule.k} out of range for a sequent of length {n}"
    f = seq[rule.k]
    if isinstance(rule, Disj):
        if f.label is not Conn.OR:
            return f"(or) disjunct {rule.k} is not disjunctive"
        if rule.i0 not in f.arity:
            return f"(or) {rule.i0} is not in the arity of disjunct {rule.k}"
        if kids != {rule.i0}:
            return f"(or) premises must be exactly {{{rule.i0}}}, found {sorted(kids)}"
        return None
    if f.label is not Conn.AND:
        return f"(and) disjunct {rule.k} is not conjunctive"
    if kids != set(f.arity):
        return f"(and) premises must be exactly {sorted(f.arity)}, found {sorted(kids)}"
    return None


def check_derivation(d: DerivationCandidate, depth: int = DEFAULT_DEPTH, memo: bool = True) -> CheckVerdict:
    """Check the local derivation clauses at every skeleton position, breadth-first.

    With ``memo``, states whose :func:`memo_key` was already expanded are not
    expanded again; the state graph is finite for rational skeletons, so
    exploration then ends with ``ValidClosed`` (acyclic state graph) or
    ``ValidPeriodic`` (cyclic) unless ``depth`` cuts it short.
    """
    sk = d.skeleton
    g: _Graph = sk._g
    refs = indices_below(g.labels, [k.values() for k in g.kids], g.cache, "refs")
    expanded: set[tuple] = set()
    edges: dict[tuple, set[tuple]] = defaultdict(set)
    revisits: set[tuple] = set()
    truncated = False
    root_key = None
    queue = deque([(Position(), sk._root, d.root, None)])
    while queue:
        p, node, seq, parent_key = queue.popleft()
        key = memo_key(g.uid, node, refs[node], seq) if memo else None
        if memo:
            if parent_key is None:
                root_key = key
            else:
                edges[parent_key].add(key)
            if key in expanded:
                revisits.add(key)
                continue
            expanded.add(key)
        rule = g.labels[node]
        kids = g.kids[node]
        problem = check_clause(rule, seq, kids)
        if problem is not None:
            return Violation(p, problem)
        if not kids:
            continue
        if len(p) >= depth:
            truncated = True
            continue
        for i, c in kids.items():
            queue.append((p.child(i), c, seq.extended(seq[rule.k].child(i)), key))
    if truncated:
        return ValidUpToDepth(depth)
    if memo and _has_cycle(edges, root_key):
        return ValidPeriodic(frozenset(revisits))
    return ValidClosed()


# -- builders --------------------------------------------------------------


class PreconditionError(ValueError):
    pass


def _self_loop(rule: Rule, indices: Iterable[int]) -> RationalTree:
    return RationalTree.build({"s": rule}, {"s": {i: "s" for i in indices}}, "s")


def build_repetition_derivation(s: Sequent, k: int, i0: int | None = None) -> DerivationCandidate:
    """A derivation of ``s`` that applies the same rule to disjunct ``k`` forever.

    For a disjunctive ``s[k]`` the skeleton is a single ``or(k, i0)`` node
    looping on edge ``i0`` (least index by default); for a conjunctive one it
    is a single ``and(k)`` node looping on every index of the arity.
    """
    if not 0 <= k < len(s):
        raise PreconditionError(f"index {k} out of range for a sequent of length {len(s)}")
    f = s[k]
    if f.is_disjunctive:
        if not f.arity:
            raise PreconditionError(f"disjunct {k} has empty arity; no index to continue with")
        if i0 is None:
            i0 = min(f.arity)
        if i0 not in f.arity:
            raise PreconditionError(f"{i0} is not in the arity {list(f.arity)} of disjunct {k}")
        return DerivationCandidate(s, _self_loop(Disj(k, i0), [i0]))
    if f.is_conjunctive:
        if i0 is not None:
            raise PreconditionError("conjunctive repetition takes no continuation index")
        return DerivationCandidate(s, _self_loop(Conj(k), f.arity))
    raise PreconditionError(f"disjunct {k} is the atom {f.label}")


def build_solution_derivation(e: Equation) -> DerivationCandidate:
    """A derivation of ``or[G]`` for the solution ``G`` of ``e``."""
    g = solve(e)
    return build_repetition_derivation(Sequent([g]), 0)


def no_rule_applicable(s: Sequent) -> bool:
    """True when ``s`` is stuck: it can never be derived.

    Holds when every disjunct is an atom or the empty disjunction and no two
    disjuncts form a complementary pair.  Such a sequent admits no rule now,
    and since only rules extend sequents, it never will.
    """
    positive, negated = set(), set()
    for f in s:
        if isinstance(f.label, Atom):
            (negated if f.label.negated else positive).add(f.label.index)
        elif not (f.is_disjunctive and not f.arity):
            return False
    return not positive & negated
