"""Labeled directed graphs over the letters {a, b}.

Only positively labeled edges are stored; walking an edge backwards reads the
inverse letter.  Vertex ids are plain integers and every traversal order is
fixed by ``(letter, neighbour id, edge index)`` so results are reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .exact2 import POSITIVE, reduce_word

Edge = tuple[int, int, str]


@dataclass
class LabeledGraph:
    vertices: list[int]
    edges: list[Edge]
    base: int

    def __post_init__(self) -> None:
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        if self.base not in vs:
            raise ValueError(f"base vertex {self.base} not among the vertices")
        for src, dst, letter in self.edges:
            if letter not in POSITIVE:
                raise ValueError(f"edge label {letter!r} is not a positive letter")
            if src not in vs or dst not in vs:
                raise ValueError(f"edge {src}->{dst} touches an unknown vertex")

    def adjacency(self) -> dict[int, list[tuple[str, int, int, int]]]:
        """Edges at each vertex as (letter, other end, edge index, sign), sorted."""
        adj: dict[int, list[tuple[str, int, int, int]]] = {v: [] for v in self.vertices}
        for i, (src, dst, letter) in enumerate(self.edges):
            adj[src].append((letter, dst, i, 1))
            if dst != src:
                adj[dst].append((letter, src, i, -1))
        for row in adj.values():
            row.sort()
        return adj


@dataclass
class GraphPath:
    """A walk: a start vertex and a list of (edge index, +1 forward / -1 backward)."""

    start: int
    steps: list[tuple[int, int]] = field(default_factory=list)

    def end(self, G: LabeledGraph) -> int:
        v = self.start
        for i, sign in self.steps:
            src, dst, _ = G.edges[i]
            if sign == 1 and src == v:
                v = dst
            elif sign == -1 and dst == v:
                v = src
            else:
                raise ValueError(f"step {(i, sign)} is not incident to vertex {v}")
        return v


def bouquet() -> LabeledGraph:
    """One vertex with an a-loop and a b-loop."""
    return LabeledGraph([0], [(0, 0, "a"), (0, 0, "b")], 0)


def _degree_table(G: LabeledGraph) -> dict[tuple[int, str], list[int]]:
    counts = {(v, key): [0, 0] for v in G.vertices for key in POSITIVE}
    for src, dst, letter in G.edges:
        counts[(src, letter)][0] += 1
        counts[(dst, letter)][1] += 1
    return counts


def is_stallings(G: LabeledGraph) -> bool:
    return all(out <= 1 and into <= 1 for out, into in _degree_table(G).values())


def is_cover(G: LabeledGraph) -> bool:
    return all(out == 1 and into == 1 for out, into in _degree_table(G).values())


def _tree_parents(G: LabeledGraph, tree: set[int]) -> dict[int, tuple[int, int] | None]:
    adj = G.adjacency()
    parent: dict[int, tuple[int, int] | None] = {G.base: None}
    queue = deque([G.base])
    while queue:
        u = queue.popleft()
        for _, w, i, sign in adj[u]:
            if i in tree and w not in parent:
                parent[w] = (i, sign)
                queue.append(w)
    return parent


def spanning_tree(G: LabeledGraph) -> list[int]:
    """Breadth-first spanning tree from the base; returns edge indices in discovery order."""
    adj = G.adjacency()
    seen = {G.base}
    tree = []
    queue = deque([G.base])
    while queue:
        u = queue.popleft()
        for _, w, i, _ in adj[u]:
            if w not in seen:
                seen.add(w)
                tree.append(i)
                queue.append(w)
    if len(seen) != len(G.vertices):
        raise ValueError(f"graph is disconnected: reached {len(seen)} of {len(G.vertices)} vertices")
    return tree


def _path_from_base(G: LabeledGraph, parent, v: int) -> list[tuple[int, int]]:
    steps = []
    while parent[v] is not None:
        i, sign = parent[v]
        steps.append((i, sign))
        src, dst, _ = G.edges[i]
        v = src if sign == 1 else dst
    steps.reverse()
    return steps


def cycle_basis(G: LabeledGraph, T: list[int]) -> list[GraphPath]:
    """One based cycle per non-tree edge, crossing that edge forwards."""
    tree = set(T)
    if len(tree) != len(G.vertices) - 1:
        raise ValueError("edge subset has the wrong size for a spanning tree")
    parent = _tree_parents(G, tree)
    if len(parent) != len(G.vertices):
        raise ValueError("edge subset does not span the graph")
    cycles = []
    for i, (src, dst, _) in enumerate(G.edges):
        if i in tree:
            continue
        back = [(j, -sign) for j, sign in reversed(_path_from_base(G, parent, dst))]
        steps = _path_from_base(G, parent, src) + [(i, 1)] + back
        cycles.append(GraphPath(G.base, steps))
    return cycles


def path_label(G: LabeledGraph, P: GraphPath) -> str:
    P.end(G)  # validates incidence
    letters = []
    for i, sign in P.steps:
        letter = G.edges[i][2]
        letters.append(letter if sign == 1 else letter.upper())
    return reduce_word("".join(letters))


def pi1_basis(G: LabeledGraph) -> list[str]:
    return [path_label(G, C) for C in cycle_basis(G, spanning_tree(G))]


# --- text format ------------------------------------------------------------


def parse_graph(text: str) -> LabeledGraph:
    """Parse ``base <id>`` followed by one ``src dst letter`` line per edge."""
    base = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "base":
            if base is not None or len(parts) != 2:
                raise ValueError(f"line {lineno}: malformed base line")
            base = int(parts[1])
        elif len(parts) == 3:
            edges.append((int(parts[0]), int(parts[1]), parts[2]))
        else:
            raise ValueError(f"line {lineno}: expected 'src dst letter'")
    if base is None:
        raise ValueError("missing 'base <id>' line")
    vertices = sorted({base} | {v for e in edges for v in e[:2]})
    return LabeledGraph(vertices, edges, base)


def format_graph(G: LabeledGraph) -> str:
    lines = [f"base {G.base}"]
    lines += [f"{src} {dst} {letter}" for src, dst, letter in G.edges]
    return "\n".join(lines) + "\n"
