"""Tests, environments and their interaction trees.

A test is a total rule-labeled tree (Proponent); an environment is the
negation of a sequent (Opponent).  The interaction tree of ``(T, E)`` unfolds
a deterministic transition system whose only failure state is ``ERROR``.  The
interaction produces no error exactly when ``T`` comes from a derivation of
the sequent ``negate(E)``.
"""

from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Mapping

from .formula import Conn, Formula, FormulaSeq, negate
from .position import Position
from .proof import (
    DEFAULT_DEPTH,
    Axiom,
    Conj,
    DerivationCandidate,
    Disj,
    PreconditionError,
    Rule,
    Sequent,
    _has_cycle,
    check_derivation,
    indices_below,
    memo_key,
)
from .tree import RationalTree

_test_uids = itertools.count()

DEFAULT_TRACE_CAP = 10_000


class Test:
    """A rule-labeled tree with domain all of N*.

    Finitely presented as states with a rule, explicit child edges, and a
    default successor used for every index without an explicit edge.
    """

    __slots__ = ("uid", "rules", "kids", "defaults", "root", "_cache")

    def __init__(self, rules, kids, defaults, root: int = 0):
        self.rules: tuple[Rule, ...] = tuple(rules)
        self.kids: tuple[dict[int, int], ...] = tuple(dict(sorted(k.items())) for k in kids)
        self.defaults: tuple[int, ...] = tuple(defaults)
        n = len(self.rules)
        if not (len(self.kids) == len(self.defaults) == n) or not 0 <= root < n:
            raise ValueError("inconsistent test presentation")
        for s in range(n):
            if not isinstance(self.rules[s], (Axiom, Disj, Conj)):
                raise ValueError(f"state {s} is labeled {self.rules[s]!r}, not a rule")
            targets = list(self.kids[s].values()) + [self.defaults[s]]
            if any(not 0 <= t < n for t in targets):
                raise ValueError(f"state {s} has an edge to an unknown state")
        self.root = root
        self.uid = next(_test_uids)
        self._cache: dict = {}

    @classmethod
    def build(
        cls,
        rules: Mapping[Hashable, Rule],
        children: Mapping[Hashable, Mapping[int, Hashable]],
        defaults: Mapping[Hashable, Hashable],
        root: Hashable,
    ) -> Test:
        names = list(rules)
        ids = {name: j for j, name in enumerate(names)}
        missing = [name for name in names if name not in defaults]
        if missing:
            raise ValueError(f"states without a default successor: {missing}")
        return cls(
            [rules[name] for name in names],
            [{i: ids[t] for i, t in children.get(name, {}).items()} for name in names],
            [ids[defaults[name]] for name in names],
            ids[root],
        )

    def rule(self, state: int) -> Rule:
        return self.rules[state]

    def successor(self, state: int, i: int) -> int:
        return self.kids[state].get(i, self.defaults[state])

    def state_at(self, p: Iterable[int]) -> int:
        s = self.root
        for i in p:
            s = self.successor(s, i)
        return s

    def label_at(self, p: Iterable[int]) -> Rule:
        return self.rules[self.state_at(p)]

    def subtest(self, p: Iterable[int]) -> Test:
        """The test above ``p`` (shares the presentation)."""
        out = object.__new__(Test)
        out.rules, out.kids, out.defaults = self.rules, self.kids, self.defaults
        out.root, out.uid, out._cache = self.state_at(p), self.uid, self._cache
        return out

    def successors(self, state: int) -> list[int]:
        return list(self.kids[state].values()) + [self.defaults[state]]

    @property
    def states(self) -> list[int]:
        seen, order, queue = {self.root}, [self.root], deque([self.root])
        while queue:
            s = queue.popleft()
            for t in self.successors(s):
                if t not in seen:
                    seen.add(t)
                    order.append(t)
                    queue.append(t)
        return order

    def unfold(self, depth: int, width: int) -> dict[Position, Rule]:
        out = {}
        level = [(Position(), self.root)]
        for d in range(depth + 1):
            for p, s in level:
                out[p] = self.rules[s]
            if d < depth:
                level = [(p.child(i), self.successor(s, i)) for p, s in level for i in range(width)]
        return out

    def __repr__(self) -> str:
        from .syntax import format_test

        return f"Test({format_test(self)!r})"


def complete_skeleton(sk: RationalTree, default_rule: Rule = Conj(0)) -> Test:
    """Extend a partial skeleton to a test: every missing position gets ``default_rule``."""
    nodes = sk.nodes
    index = {n: j for j, n in enumerate(nodes)}
    sink = len(nodes)
    rules = [sk.node_label(n) for n in nodes] + [default_rule]
    kids = [{i: index[c] for i, c in sk.node_children(n).items()} for n in nodes] + [{}]
    return Test(rules, kids, [sink] * (len(nodes) + 1), 0)


# -- environments and configurations ---------------------------------------


class Environment(FormulaSeq):
    """The conjunctive formula ``and[G0, ..., G(m-1)]``: the negation of a sequent."""

    __slots__ = ()

    def __str__(self) -> str:
        return "and[" + ", ".join(map(str, self)) + "]"


def conjoin(e: Environment, h: Formula) -> Environment:
    return e.extended(h)


def negate_sequent(s: Sequent) -> Environment:
    return Environment(negate(f) for f in s)


def sequent_of(e: Environment) -> Sequent:
    return Sequent(negate(g) for g in e)


class _Error:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ERROR"

    def __str__(self) -> str:
        return "⇑"


ERROR = _Error()


@dataclass(frozen=True, eq=False)
class Config:
    test: Test
    state: int
    env: Environment

    @property
    def rule(self) -> Rule:
        return self.test.rules[self.state]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Config):
            return NotImplemented
        return self.test.uid == other.test.uid and self.state == other.state and self.env == other.env

    def __hash__(self) -> int:
        return hash((self.test.uid, self.state, len(self.env)))


Configuration = Config | _Error


def respond(rule: Rule, env: Environment) -> tuple[str, list[tuple[int, Formula]] | None]:
    """Opponent's answer to ``rule``: the fired clause and the formulas to conjoin per child.

    Returns ``("err", None)`` when no clause matches.
    """
    m = len(env)
    if isinstance(rule, Axiom):
        if rule.k < m and rule.l < m and env[rule.k].label == ~rule.var and env[rule.l].label == rule.var:
            return "ax", []
        return "err", None
    if rule.k >= m:
        return "err", None
    g = env[rule.k]
    if isinstance(rule, Disj):
        if g.label is Conn.AND and rule.i0 in g.arity:
            return "or", [(rule.i0, g.child(rule.i0))]
        return "err", None
    if g.label is Conn.OR:
        return "and", g.children()
    return "err", None


def step(c: Configuration) -> list[tuple[int, Configuration]]:
    """Immediate extensions of a node labeled ``c`` in an interaction tree."""
    if c is ERROR:
        return []
    clause, succ = respond(c.rule, c.env)
    if succ is None:
        return [(0, ERROR)]
    return [(i, Config(c.test, c.test.successor(c.state, i), c.env.extended(h))) for i, h in succ]


def configuration_at(t: Test, e: Environment, p: Iterable[int]) -> Configuration | None:
    """Replay ``step`` along ``p`` from ``(t, e)``; ``None`` when ``p`` leaves the interaction tree."""
    c: Configuration = Config(t, t.root, e)
    for i in p:
        nxt = dict(step(c))
        if i not in nxt:
            return None
        c = nxt[i]
    return c


def interaction_tree(t: Test, e: Environment, depth: int) -> dict[Position, Configuration]:
    """Explicit interaction tree restricted to positions of length <= depth (no memo)."""
    out: dict[Position, Configuration] = {}
    level = [(Position(), Config(t, t.root, e))]
    for d in range(depth + 1):
        for p, c in level:
            out[p] = c
        if d < depth:
            level = [(p.child(i), c2) for p, c in level for i, c2 in step(c)]
    return out


# -- exploration -----------------------------------------------------------


@dataclass(frozen=True)
class TraceRecord:
    position: Position
    state: int | None
    env_length: int | None
    clause: str  # ax / or / and / err / error
    verdict: str  # success / expanded / error / revisit / truncated

    def __str__(self) -> str:
        state = "-" if self.state is None else str(self.state)
        env = "-" if self.env_length is None else str(self.env_length)
        return f"{self.position}\tstate={state}\tenv={env}\tclause={self.clause}\t{self.verdict}"


@dataclass(frozen=True)
class ErrorAt:
    position: Position
    trace: tuple[tuple[Position, str], ...] = ()
    records: tuple[TraceRecord, ...] = field(default=(), repr=False, compare=False)

    no_error = False

    def __str__(self) -> str:
        return f"ErrorAt({self.position})"


@dataclass(frozen=True)
class ClosedNoError:
    records: tuple[TraceRecord, ...] = field(default=(), repr=False, compare=False)

    no_error = True

    def __str__(self) -> str:
        return "ClosedNoError"


@dataclass(frozen=True)
class OpenNoError:
    depth: int
    records: tuple[TraceRecord, ...] = field(default=(), repr=False, compare=False)

    no_error = True

    def __str__(self) -> str:
        return f"OpenNoError({self.depth})"


@dataclass(frozen=True)
class PeriodicNoError:
    certificate: frozenset = frozenset()
    records: tuple[TraceRecord, ...] = field(default=(), repr=False, compare=False)

    no_error = True

    def __str__(self) -> str:
        return f"PeriodicNoError({len(self.certificate)} revisited states)"


InteractionVerdict = ErrorAt | ClosedNoError | OpenNoError | PeriodicNoError


@dataclass
class _Exploration:
    verdict: InteractionVerdict
    # memo state graph: key -> (test state, env), key -> {child index: key}
    states: dict[tuple, tuple[int, Environment]]
    edges: dict[tuple, dict[int, tuple]]
    root_key: tuple | None


def _explore(t: Test, e: Environment, depth: int, memo: bool, trace_cap: int) -> _Exploration:
    refs = indices_below(t.rules, [t.successors(s) for s in range(len(t.rules))], t._cache, "refs")
    records: list[TraceRecord] = []

    def record(*args):
        if len(records) < trace_cap:
            records.append(TraceRecord(*args))

    states: dict[tuple, tuple[int, Environment]] = {}
    edges: dict[tuple, dict[int, tuple]] = defaultdict(dict)
    revisits: set[tuple] = set()
    truncated = False
    parents: dict[Position, Position] = {}
    configs: dict[Position, str] = {}
    root_key = None
    counter = itertools.count()

    queue = deque([(Position(), t.root, e, None)])
    while queue:
        p, s, env, parent_key = queue.popleft()
        key = memo_key(t.uid, s, refs[s], env) if memo else (next(counter),)
        if parent_key is None:
            root_key = key
        else:
            edges[parent_key][p[-1]] = key
        if memo and key in states:
            revisits.add(key)
            record(p, s, len(env), "-", "revisit")
            continue
        states[key] = (s, env)
        rule = t.rules[s]
        clause, succ = respond(rule, env)
        if succ is None:
            err = p.child(0)
            record(p, s, len(env), "err", "expanded")
            record(err, None, None, "error", "error")
            path = []
            q = p
            while q is not None:
                path.append((q, configs.get(q, f"state {s}, asks {rule}, env length {len(env)}")))
                q = parents.get(q)
            path.reverse()
            path.append((err, "⇑"))
            return _Exploration(ErrorAt(err, tuple(path), tuple(records)), states, edges, root_key)
        if not succ:
            record(p, s, len(env), clause, "success")
            continue
        if len(p) >= depth:
            truncated = True
            record(p, s, len(env), clause, "truncated")
            continue
        record(p, s, len(env), clause, "expanded")
        for i, h in succ:
            q = p.child(i)
            s2 = t.successor(s, i)
            parents[q] = p
            configs[q] = f"state {s2}, asks {t.rules[s2]}, env length {len(env) + 1}"
            queue.append((q, s2, env.extended(h), key))
    if truncated:
        verdict: InteractionVerdict = OpenNoError(depth, tuple(records))
    elif memo and _has_cycle({k: set(v.values()) for k, v in edges.items()}, root_key):
        verdict = PeriodicNoError(frozenset(revisits), tuple(records))
    else:
        verdict = ClosedNoError(tuple(records))
    return _Exploration(verdict, states, edges, root_key)


def explore(
    t: Test,
    e: Environment,
    depth: int = DEFAULT_DEPTH,
    memo: bool = True,
    trace_cap: int = DEFAULT_TRACE_CAP,
) -> InteractionVerdict:
    """Unfold the interaction tree of ``(t, e)`` breadth-first.

    The first error found is at the length-lexicographically least error
    position.  With ``memo`` a state equal (by :func:`memo_key`) to one
    already expanded is not expanded again; no least error can lie below such
    a repeat, since the earlier copy would show a smaller one.
    """
    return _explore(t, e, depth, memo, trace_cap).verdict


# -- completeness ----------------------------------------------------------


def comes_from_check(t: Test, d: DerivationCandidate, depth: int = DEFAULT_DEPTH) -> bool:
    """Whether ``t`` agrees with the skeleton of ``d`` on the skeleton's whole domain.

    Exact on rational presentations: every reachable (skeleton node, test
    state) pair must carry the same rule.
    """
    verdict = check_derivation(d, depth)
    if not verdict.ok:
        raise PreconditionError(f"not a derivation: {verdict}")
    sk = d.skeleton
    start = (sk._root, t.root)
    seen = {start}
    stack = [start]
    while stack:
        n, s = stack.pop()
        if sk.node_label(n) != t.rules[s]:
            return False
        for i, c in sk.node_children(n).items():
            pair = (c, t.successor(s, i))
            if pair not in seen:
                seen.add(pair)
                stack.append(pair)
    return True


class ReconstructionError(Exception):
    def __init__(self, kind: str, verdict: InteractionVerdict):
        where = f" at {verdict.position}" if isinstance(verdict, ErrorAt) else ""
        super().__init__(f"reconstruction failed ({kind}{where}): {verdict}")
        self.kind = kind  # "error" or "open"
        self.verdict = verdict
        self.position = getattr(verdict, "position", None)


def reconstruct_derivation(
    t: Test, s: Sequent, depth: int = DEFAULT_DEPTH, memo: bool = True
) -> DerivationCandidate:
    """Turn an error-free interaction of ``t`` with ``negate(s)`` into a derivation of ``s``.

    The skeleton is the rule-labeling of the interaction tree's domain by
    ``t``; it is read off the explored state graph, so periodic interactions
    give rational skeletons.
    """
    run = _explore(t, negate_sequent(s), depth, memo, trace_cap=0)
    if isinstance(run.verdict, ErrorAt):
        raise ReconstructionError("error", run.verdict)
    if isinstance(run.verdict, OpenNoError):
        raise ReconstructionError("open", run.verdict)
    labels = {key: t.rules[state] for key, (state, _) in run.states.items()}
    skeleton = RationalTree.build(labels, run.edges, run.root_key)
    return DerivationCandidate(s, skeleton)


# -- interactive play ------------------------------------------------------


class SessionAbort(Exception):
    """Raised by a Proponent to stop a session."""


@dataclass(frozen=True)
class Move:
    position: Position
    env: Environment
    rule: Rule
    clause: str
    children: tuple[Position, ...]  # empty on success; (p.0,) with error=True on failure
    error: bool = False

    def __str__(self) -> str:
        if self.error:
            answer = f"⇑ at {self.children[0]}"
        elif not self.children:
            answer = "closed"
        else:
            answer = ", ".join(map(str, self.children))
        return f"{self.position}: P asks {self.rule} -> O answers {answer}"


@dataclass(frozen=True)
class SessionEnd:
    winner: str  # proponent / opponent / aborted / unfinished
    moves: int

    def __str__(self) -> str:
        return f"session over: {self.winner} ({self.moves} moves)"


Proponent = Callable[[Position, Environment], Rule]


def play_session(
    e: Environment, proponent: Proponent, max_moves: int | None = None
) -> Iterator[Move | SessionEnd]:
    """Play the debate against ``e`` with Proponent's rules supplied on demand.

    Open configurations are served in length-lexicographic order.  Yields one
    :class:`Move` per answered question and a final :class:`SessionEnd`.
    """
    queue = deque([(Position(), e)])
    moves = 0
    while queue:
        if max_moves is not None and moves >= max_moves:
            yield SessionEnd("unfinished", moves)
            return
        p, env = queue.popleft()
        try:
            rule = proponent(p, env)
        except SessionAbort:
            yield SessionEnd("aborted", moves)
            return
        if rule is None:
            yield SessionEnd("aborted", moves)
            return
        moves += 1
        clause, succ = respond(rule, env)
        if succ is None:
            yield Move(p, env, rule, "err", (p.child(0),), error=True)
            yield SessionEnd("opponent", moves)
            return
        yield Move(p, env, rule, clause, tuple(p.child(i) for i, _ in succ))
        queue.extend((p.child(i), env.extended(h)) for i, h in succ)
    yield SessionEnd("proponent", moves)


def skeleton_player(sk: RationalTree | Test) -> Proponent:
    """A scripted Proponent replaying a skeleton or test."""

    def play(p: Position, env: Environment) -> Rule:
        rule = sk.label_at(p)
        if rule is None:
            raise SessionAbort(f"skeleton has no rule at {p}")
        return rule

    return play


# -- trace export ----------------------------------------------------------


def format_trace(verdict: InteractionVerdict) -> str:
    lines = ["position\tstate\tenv\tclause\tverdict"]
    lines.extend(str(r) for r in verdict.records)
    lines.append(f"verdict: {verdict}")
    return "\n".join(lines)


def trace_to_kv(verdict: InteractionVerdict) -> dict:
    """Hierarchical key-value document (JSON-ready) mirroring the trace records."""
    doc: dict = {"verdict": type(verdict).__name__}
    if isinstance(verdict, ErrorAt):
        doc["error_position"] = str(verdict.position)
        doc["path"] = [{"position": str(p), "configuration": c} for p, c in verdict.trace]
    if isinstance(verdict, OpenNoError):
        doc["depth"] = verdict.depth
    if isinstance(verdict, PeriodicNoError):
        doc["revisited_states"] = len(verdict.certificate)
    doc["records"] = [
        {
            "position": str(r.position),
            "state": r.state,
            "env_length": r.env_length,
            "clause": r.clause,
            "verdict": r.verdict,
        }
        for r in verdict.records
    ]
    return doc
