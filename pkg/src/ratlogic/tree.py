"""Rational labeled trees.

A :class:`RationalTree` is a finite rooted graph whose nodes carry labels and
whose edges carry natural-number indices.  It stands for its (possibly
infinite) unfolding: the labeled tree that maps a position ``p`` to the label
of the node reached by following the edges named by ``p`` from the root.

Graphs are immutable and may be shared between trees; a tree is a
``(graph, root)`` pair, so taking a subtree is O(1).  Equality of trees is
equality of unfoldings, i.e. bisimilarity.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from .position import Position

_uids = itertools.count()


class MalformedTreeError(ValueError):
    """A label function violates the prefix-closure conditions of labeled trees."""

    def __init__(self, message: str, position: Position | None = None):
        super().__init__(message)
        self.position = position


class _Graph:
    __slots__ = ("uid", "labels", "kids", "cache", "__weakref__")

    def __init__(self, labels: Sequence[Hashable], kids: Sequence[Mapping[int, int]]):
        self.uid = next(_uids)
        self.labels = tuple(labels)
        self.kids = tuple(dict(sorted(k.items())) for k in kids)
        # per-graph memo for derived graphs (negation, ...)
        self.cache: dict[str, Any] = {}


class _Builder:
    """Accumulates nodes and edges, then freezes them into a pruned, hash-consed graph."""

    def __init__(self):
        self.labels: list[Hashable] = []
        self.kids: list[dict[int, int]] = []
        self._imported: dict[tuple[int, Any], dict[int, int]] = {}

    def add(self, label: Hashable, children: Mapping[int, int] | None = None) -> int:
        self.labels.append(label)
        self.kids.append(dict(children or {}))
        return len(self.labels) - 1

    def import_graph(
        self,
        graph: _Graph,
        relabel: Callable[[Hashable], Hashable] | None = None,
        fresh: bool = False,
    ) -> dict[int, int]:
        """Copy every node of ``graph``; returns the node map old -> new.

        Repeated imports of the same graph share one copy unless ``fresh`` is
        set, which callers need when they go on to rewire the copied edges.
        """
        memo_key = (graph.uid, relabel)
        if not fresh and memo_key in self._imported:
            return self._imported[memo_key]
        base = len(self.labels)
        for label, kids in zip(graph.labels, graph.kids):
            self.labels.append(relabel(label) if relabel else label)
            self.kids.append({i: base + c for i, c in kids.items()})
        mapping = {n: base + n for n in range(len(graph.labels))}
        if not fresh:
            self._imported[memo_key] = mapping
        return mapping

    def import_tree(self, tree: RationalTree) -> int:
        return self.import_graph(tree._g)[tree._root]

    def finish(self, root: int, cls: type[RationalTree] | None = None) -> RationalTree:
        cls = cls or RationalTree
        labels, kids, root = _hash_cons(self.labels, self.kids, root)
        graph = _Graph(labels, kids)
        cls._validate_graph(graph)
        return cls._from_graph(graph, root)


def _bfs_order(kids: Sequence[Mapping[int, int]], root: int) -> list[int]:
    seen = {root}
    order = [root]
    queue = deque([root])
    while queue:
        n = queue.popleft()
        for c in kids[n].values():
            if c not in seen:
                seen.add(c)
                order.append(c)
                queue.append(c)
    return order


def _hash_cons(labels, kids, root):
    """Prune unreachable nodes and merge nodes with identical (label, children) signatures.

    Merging is repeated until no two nodes share a signature.  This shares
    structurally identical acyclic parts; it does not minimize cycles.
    """
    order = _bfs_order(kids, root)
    rep = {n: n for n in order}
    n_classes = len(order)
    while True:
        classes: dict[tuple, int] = {}
        for n in order:
            sig = (labels[n], tuple((i, rep[c]) for i, c in sorted(kids[n].items())))
            classes.setdefault(sig, n)
        new_rep = {
            n: classes[(labels[n], tuple((i, rep[c]) for i, c in sorted(kids[n].items())))]
            for n in order
        }
        rep = new_rep
        if len(classes) == n_classes:
            break
        n_classes = len(classes)
    rkids = {n: {i: rep[c] for i, c in sorted(kids[n].items())} for n in set(rep.values())}
    final = _bfs_order(rkids, rep[root])
    index = {n: j for j, n in enumerate(final)}
    out_labels = [labels[n] for n in final]
    out_kids = [{i: index[c] for i, c in rkids[n].items()} for n in final]
    return out_labels, out_kids, 0


class RationalTree:
    """A finite graph presentation of a possibly infinite labeled tree."""

    __slots__ = ("_g", "_root")

    def __init__(self, *args, **kwargs):
        raise TypeError(f"use {type(self).__name__}.build(...) or the module constructors")

    @classmethod
    def _from_graph(cls, graph: _Graph, root: int):
        self = object.__new__(cls)
        self._g = graph
        self._root = root
        return self

    @classmethod
    def _validate_graph(cls, graph: _Graph) -> None:
        pass

    # -- construction ------------------------------------------------------

    @classmethod
    def build(
        cls,
        labels: Mapping[Hashable, Hashable],
        children: Mapping[Hashable, Mapping[int, Hashable]],
        root: Hashable,
    ):
        """Build from named nodes: ``labels[name]`` and ``children[name][i] = target``."""
        if root not in labels:
            raise ValueError(f"root {root!r} has no label")
        b = _Builder()
        ids = {name: b.add(label) for name, label in labels.items()}
        for name, kids in children.items():
            if name not in ids:
                raise ValueError(f"node {name!r} has children but no label")
            for i, target in kids.items():
                if not isinstance(i, int) or i < 0:
                    raise ValueError(f"child index must be a natural, got {i!r}")
                if target not in ids:
                    raise ValueError(f"edge {name!r} -{i}-> {target!r}: unknown target")
                b.kids[ids[name]][i] = ids[target]
        return b.finish(ids[root], cls)

    @classmethod
    def leaf(cls, label: Hashable):
        b = _Builder()
        return b.finish(b.add(label), cls)

    @classmethod
    def compound(cls, label: Hashable, subtrees: Mapping[int, RationalTree] | Sequence[RationalTree]):
        """A root labeled ``label`` whose child ``i`` is ``subtrees[i]``."""
        if not isinstance(subtrees, Mapping):
            subtrees = dict(enumerate(subtrees))
        b = _Builder()
        kids = {i: b.import_tree(t) for i, t in subtrees.items()}
        return b.finish(b.add(label, kids), cls)

    # -- node-level access -------------------------------------------------

    @property
    def key(self) -> tuple[int, int]:
        """Identity of the presenting node; equal keys imply equal trees."""
        return (self._g.uid, self._root)

    @property
    def label(self) -> Hashable:
        return self._g.labels[self._root]

    @property
    def arity(self) -> tuple[int, ...]:
        return tuple(self._g.kids[self._root])

    def is_leaf(self) -> bool:
        return not self._g.kids[self._root]

    def child(self, i: int):
        c = self._g.kids[self._root].get(i)
        return None if c is None else self._from_graph(self._g, c)

    def children(self) -> list[tuple[int, RationalTree]]:
        return [(i, self._from_graph(self._g, c)) for i, c in self._g.kids[self._root].items()]

    @property
    def nodes(self) -> list[int]:
        """Graph nodes reachable from the root, in BFS order."""
        return _bfs_order(self._g.kids, self._root)

    def node_label(self, node: int) -> Hashable:
        return self._g.labels[node]

    def node_children(self, node: int) -> dict[int, int]:
        return dict(self._g.kids[node])

    def at_node(self, node: int):
        return self._from_graph(self._g, node)

    def __len__(self) -> int:
        return len(self.nodes)

    # -- tree-level access -------------------------------------------------

    def _walk(self, p: Iterable[int]) -> int | None:
        kids = self._g.kids
        n = self._root
        for i in p:
            n = kids[n].get(i)
            if n is None:
                return None
        return n

    def label_at(self, p: Iterable[int]) -> Hashable | None:
        n = self._walk(p)
        return None if n is None else self._g.labels[n]

    def subtree_at(self, p: Iterable[int]):
        n = self._walk(p)
        return None if n is None else self._from_graph(self._g, n)

    def __contains__(self, p) -> bool:
        return self._walk(p) is not None

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalTree):
            return NotImplemented
        return bisimilar(self, other)

    def __hash__(self) -> int:
        # bisimilar trees share root label and arity
        return hash((self.label, self.arity))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({to_node_text(self)!r})"


@dataclass(frozen=True)
class OracleTree:
    """A labeled tree given by a label function on positions.

    ``label_fn(p)`` returns a label or ``None`` (outside the domain).  Arity may
    be infinite, so exploration needs a ``width``: only child indices below it
    are probed.
    """

    label_fn: Callable[[Position], Hashable | None]
    width: int | None = None

    def label_at(self, p: Iterable[int]) -> Hashable | None:
        return self.label_fn(Position(p))


Tree = RationalTree | OracleTree


def label_at(t: Tree, p: Iterable[int]) -> Hashable | None:
    return t.label_at(p)


def subtree_at(t: RationalTree, p: Iterable[int]) -> RationalTree | None:
    return t.subtree_at(p)


def bisimilar(t: RationalTree, u: RationalTree) -> bool:
    """Decide equality of unfoldings (union-find closure over node pairs)."""
    parent: dict[tuple[int, int], tuple[int, int]] = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while x != root:
            parent[x], x = root, parent.get(x, x)
        return root

    gt, gu = t._g, u._g
    stack = [(t._root, u._root)]
    while stack:
        a, b = stack.pop()
        ra, rb = find((gt.uid, a)), find((gu.uid, b))
        if ra == rb:
            continue
        ka, kb = gt.kids[a], gu.kids[b]
        if gt.labels[a] != gu.labels[b] or ka.keys() != kb.keys():
            return False
        parent[ra] = rb
        stack.extend((ka[i], kb[i]) for i in ka)
    return True


def is_well_founded(t: RationalTree) -> bool:
    """True iff no cycle is reachable from the root."""
    kids = t._g.kids
    state: dict[int, int] = {}  # 1 = on stack, 2 = done
    stack: list[tuple[int, Iterator[int]]] = [(t._root, iter(kids[t._root].values()))]
    state[t._root] = 1
    while stack:
        n, it = stack[-1]
        for c in it:
            s = state.get(c)
            if s == 1:
                return False
            if s is None:
                state[c] = 1
                stack.append((c, iter(kids[c].values())))
                break
        else:
            state[n] = 2
            stack.pop()
    return True


def domain_up_to(t: RationalTree, depth: int) -> list[Position]:
    """All positions of length <= depth in the domain, length-lexicographically."""
    kids = t._g.kids
    out = []
    frontier = [(Position(), t._root)]
    for d in range(depth + 1):
        out.extend(p for p, _ in frontier)
        if d == depth:
            break
        frontier = [(p.child(i), c) for p, n in frontier for i, c in kids[n].items()]
    return out


def unfold(t: Tree, depth: int, width: int | None = None) -> dict[Position, Hashable]:
    """Explicit map from every domain position of length <= depth to its label."""
    if isinstance(t, RationalTree):
        kids, labels = t._g.kids, t._g.labels
        out = {}
        frontier = [(Position(), t._root)]
        for d in range(depth + 1):
            for p, n in frontier:
                out[p] = labels[n]
            if d == depth:
                break
            frontier = [(p.child(i), c) for p, n in frontier for i, c in kids[n].items()]
        return out
    return _unfold_oracle(t, depth, width if width is not None else t.width)


def _unfold_oracle(t: OracleTree, depth: int, width: int | None) -> dict[Position, Hashable]:
    if width is None:
        raise ValueError("unfolding an oracle tree needs a width bound")
    root = t.label_at(())
    if root is None:
        raise MalformedTreeError("oracle has no label at the root", Position())
    out = {Position(): root}
    # probe every position over {0..width-1} so that labels below holes are noticed
    level = [(Position(), True)]
    for _ in range(depth):
        nxt = []
        for p, present in level:
            for i in range(width):
                q = p.child(i)
                lab = t.label_at(q)
                if lab is not None:
                    if not present:
                        raise MalformedTreeError(f"oracle labels {q} but not its prefix {p}", q)
                    out[q] = lab
                nxt.append((q, lab is not None))
        level = nxt
    return out


def _node_names(t: RationalTree, prefix: str) -> dict[int, str]:
    return {n: f"{prefix}{j}" for j, n in enumerate(t.nodes)}


def to_node_text(t: RationalTree, fmt: Callable[[Hashable], str] = str, prefix: str = "n") -> str:
    """Structured text: ``node n0 = or(0->n0, 1->n0); root n0``."""
    names = _node_names(t, prefix)
    parts = []
    for n, name in names.items():
        kids = t._g.kids[n]
        edges = ", ".join(f"{i}->{names[c]}" for i, c in kids.items())
        body = fmt(t._g.labels[n]) + (f"({edges})" if kids else "")
        parts.append(f"node {name} = {body}")
    parts.append(f"root {names[t._root]}")
    return "; ".join(parts)


def to_dot(t: RationalTree, fmt: Callable[[Hashable], str] = str, name: str = "tree") -> str:
    names = _node_names(t, "n")
    lines = [f"digraph {name} {{"]
    for n, nm in names.items():
        label = fmt(t._g.labels[n]).replace('"', '\\"')
        shape = "doublecircle" if n == t._root else "circle"
        lines.append(f'  {nm} [label="{label}", shape={shape}];')
    for n, nm in names.items():
        for i, c in t._g.kids[n].items():
            lines.append(f'  {nm} -> {names[c]} [label="{i}"];')
    lines.append("}")
    return "\n".join(lines)
