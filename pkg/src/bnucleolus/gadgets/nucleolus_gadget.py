"""The 3-matching gadget graph and its special allocations.

Every vertex ``u`` of a bipartite graph G receives five companions
``v@u, w@u`` (same side as u) and ``x@u, y@u, z@u`` (other side); the
triples ``{u, v@u, w@u}`` and ``{x@u, y@u, z@u}`` are joined completely,
forming the complete gadget ``V_u``.  The game on the result is the
unweighted, simple 3-matching game.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping

from ..game import Allocation, Game, excess
from ..graph import GameGraph

GADGET_SUFFIXES = ("v", "w", "x", "y", "z")
THREE_HALVES = Fraction(3, 2)


class StructuralError(RuntimeError):
    """A generated structure contradicts its own construction rules."""


@dataclass
class GadgetGraph:
    graph: GameGraph
    kind: str  # "nucleolus" or "x3c"
    roles: dict[str, str]
    groups: dict[str, tuple[str, ...]] = field(default_factory=dict)
    stages: dict[str, GameGraph] = field(default_factory=dict)
    base_max_degree: int | None = None

    @property
    def originals(self) -> list[str]:
        return [v for v in self.graph.names if self.roles.get(v) == "original"]

    def complete_gadget(self, u: str) -> tuple[str, ...]:
        return (u,) + self.gadget_vertices(u)

    def gadget_vertices(self, u: str) -> tuple[str, ...]:
        return tuple(f"{s}@{u}" for s in GADGET_SUFFIXES)

    def mask(self, names) -> int:
        return self.graph.mask_of(names)

    def game(self) -> Game:
        if not hasattr(self, "_game"):
            self._game = Game.from_graph(self.graph)
        return self._game

    @classmethod
    def from_graph(cls, graph: GameGraph) -> "GadgetGraph":
        """Recover a nucleolus gadget from a graph whose roles section marks it."""
        roles = dict(graph.roles)
        originals = [v for v in graph.names if roles.get(v) == "original"]
        if not originals:
            raise ValueError("graph carries no gadget roles")
        for u in originals:
            for s in GADGET_SUFFIXES:
                if roles.get(f"{s}@{u}") != s:
                    raise ValueError(f"gadget vertex {s}@{u} missing or mistagged")
        base_deg = [0] * graph.n
        orig = set(originals)
        for e in graph.edges:
            if graph.names[e.u] in orig and graph.names[e.v] in orig:
                base_deg[e.u] += 1
                base_deg[e.v] += 1
        return cls(graph, "nucleolus", roles, base_max_degree=max(base_deg))


def build_nucleolus_gadget(base: GameGraph) -> GadgetGraph:
    """G*: attach a K3,3 complete gadget to every vertex of a bipartite graph.

    The base graph's weights and capacities are ignored; G* is unweighted
    with b = 3 everywhere.  Vertex order is the originals first, then the
    five gadget vertices of each original in turn.  |E*| = |E| + 9|N|.
    """
    if not base.edges:
        raise ValueError("base graph must have at least one edge")
    colour = base.bipartition()
    if colour is None:
        raise ValueError("base graph must be bipartite")
    side_of = {0: "A", 1: "B"}

    names = list(base.names)
    sides = {v: side_of[c] for v, c in zip(base.names, colour)}
    roles = {v: "original" for v in base.names}
    edges = [(base.names[e.u], base.names[e.v], 1) for e in base.edges]
    for u, c in zip(base.names, colour):
        same, other = side_of[c], side_of[1 - c]
        left = [u] + [f"{s}@{u}" for s in ("v", "w")]
        right = [f"{s}@{u}" for s in ("x", "y", "z")]
        for s in GADGET_SUFFIXES:
            name = f"{s}@{u}"
            if name in roles:
                raise ValueError(f"name clash on {name}")
            names.append(name)
            roles[name] = s
            sides[name] = same if s in ("v", "w") else other
        edges += [(a, z, 1) for a in left for z in right]
    graph = GameGraph.build(names, edges, b=3, sides=sides, simple=True, roles=roles)
    return GadgetGraph(graph, "nucleolus", roles, base_max_degree=base.max_degree())


def make_xstar(g: GadgetGraph) -> Allocation:
    """The uniform allocation, 3/2 to everyone."""
    return Allocation.uniform(g.graph.names, THREE_HALVES)


def make_xdelta(g: GadgetGraph, delta: Fraction) -> Allocation:
    """Originals get 3/2 + delta, gadget vertices 3/2 - delta/5 (0 < delta < 1/2)."""
    delta = Fraction(delta)
    if not 0 < delta < Fraction(1, 2):
        raise ValueError(f"delta must lie strictly between 0 and 1/2, got {delta}")
    return Allocation(g.graph.names, tuple(
        THREE_HALVES + delta if g.roles[v] == "original" else THREE_HALVES - delta / 5
        for v in g.graph.names))


# Reference rows for coalitions strictly inside one complete gadget.
# Uniform allocation, keyed by (|S & {u,v,w}|, |S & {x,y,z}|) -> (value, excess).
UNIFORM_TABLE: dict[tuple[int, int], tuple[int, Fraction]] = {
    (0, 1): (0, Fraction(3, 2)),
    (0, 2): (0, Fraction(3)),
    (0, 3): (0, Fraction(9, 2)),
    (1, 0): (0, Fraction(3, 2)),
    (1, 1): (1, Fraction(2)),
    (1, 2): (2, Fraction(5, 2)),
    (1, 3): (3, Fraction(3)),
    (2, 0): (0, Fraction(3)),
    (2, 1): (2, Fraction(5, 2)),
    (2, 2): (4, Fraction(2)),
    (2, 3): (6, Fraction(3, 2)),
    (3, 0): (0, Fraction(9, 2)),
    (3, 1): (3, Fraction(3)),
    (3, 2): (6, Fraction(3, 2)),
}

# Tilted allocation, keyed by (|S & {u}|, |S & {v,w}|, |S & {x,y,z}|)
# -> (value, constant, delta coefficient); excess = constant + coefficient * delta.
TILTED_TABLE: dict[tuple[int, int, int], tuple[int, Fraction, Fraction]] = {
    (0, 0, 1): (0, Fraction(3, 2), Fraction(-1, 5)),
    (0, 0, 2): (0, Fraction(3), Fraction(-2, 5)),
    (0, 0, 3): (0, Fraction(9, 2), Fraction(-3, 5)),
    (0, 1, 0): (0, Fraction(3, 2), Fraction(-1, 5)),
    (0, 1, 1): (1, Fraction(2), Fraction(-2, 5)),
    (0, 1, 2): (2, Fraction(5, 2), Fraction(-3, 5)),
    (0, 1, 3): (3, Fraction(3), Fraction(-4, 5)),
    (0, 2, 0): (0, Fraction(3), Fraction(-2, 5)),
    (0, 2, 1): (2, Fraction(5, 2), Fraction(-2, 5)),
    (0, 2, 2): (4, Fraction(2), Fraction(-4, 5)),
    (0, 2, 3): (6, Fraction(3, 2), Fraction(-1)),
    (1, 0, 0): (0, Fraction(3, 2), Fraction(1)),
    (1, 0, 1): (1, Fraction(2), Fraction(4, 5)),
    (1, 0, 2): (2, Fraction(5, 2), Fraction(3, 5)),
    (1, 0, 3): (3, Fraction(3), Fraction(2, 5)),
    (1, 1, 0): (0, Fraction(3), Fraction(4, 5)),
    (1, 1, 1): (2, Fraction(5, 2), Fraction(3, 5)),
    (1, 1, 2): (4, Fraction(2), Fraction(2, 5)),
    (1, 1, 3): (6, Fraction(3, 2), Fraction(1, 5)),
    (1, 2, 0): (0, Fraction(9, 2), Fraction(3, 5)),
    (1, 2, 1): (3, Fraction(3), Fraction(2, 5)),
    (1, 2, 2): (6, Fraction(3, 2), Fraction(1, 5)),
}


@dataclass(frozen=True)
class TableRow:
    shape: tuple[int, ...]
    value: Fraction
    excess: Fraction
    members: int  # how many concrete coalitions fall in this class


def _shape(which: str, names: set[str], u: str) -> tuple[int, ...]:
    left = len(names & {f"v@{u}", f"w@{u}"})
    right = len(names & {f"x@{u}", f"y@{u}", f"z@{u}"})
    has_u = int(u in names)
    if which == "table1":
        return (has_u + left, right)
    return (has_u, left, right)


def excess_table(g: GadgetGraph, which: str, delta: Fraction | None = None,
                 u: str | None = None) -> list[TableRow]:
    """Excess of every S strictly inside one complete gadget, grouped by shape.

    ``which`` is ``"table1"`` (uniform allocation, shapes by the two triples)
    or ``"table2"`` (tilted allocation at ``delta``, shapes split u from v, w).
    Raises StructuralError when two coalitions of one shape disagree.
    """
    if which not in ("table1", "table2"):
        raise ValueError(f"unknown table {which!r}")
    if which == "table2":
        if delta is None:
            raise ValueError("table2 needs delta")
        alloc = make_xdelta(g, delta)
    else:
        alloc = make_xstar(g)
    u = u or g.originals[0]
    block = g.complete_gadget(u)
    game = g.game()
    classes: dict[tuple[int, ...], list[tuple[Fraction, Fraction]]] = {}
    for bits in product((0, 1), repeat=len(block)):
        chosen = {v for v, bit in zip(block, bits) if bit}
        if not chosen or len(chosen) == len(block):
            continue
        mask = g.mask(chosen)
        classes.setdefault(_shape(which, chosen, u), []).append(
            (game.value(mask), excess(game, mask, alloc)))
    rows = []
    for shape in sorted(classes):
        entries = classes[shape]
        if len(set(entries)) != 1:
            raise StructuralError(f"shape {shape} has non-constant (value, excess): {set(entries)}")
        value, exc = entries[0]
        rows.append(TableRow(shape, value, exc, len(entries)))
    return rows


@dataclass(frozen=True)
class TableCheck:
    shape: tuple[int, ...]
    expected: tuple[Fraction, Fraction] | None
    computed: tuple[Fraction, Fraction] | None

    @property
    def ok(self) -> bool:
        return self.expected == self.computed


def reference_rows(which: str, delta: Fraction | None = None) -> dict[tuple[int, ...], tuple[Fraction, Fraction]]:
    if which == "table1":
        return {s: (Fraction(v), e) for s, (v, e) in UNIFORM_TABLE.items()}
    if delta is None:
        raise ValueError("table2 needs delta")
    delta = Fraction(delta)
    return {s: (Fraction(v), c + k * delta) for s, (v, c, k) in TILTED_TABLE.items()}


def compare_table(g: GadgetGraph, which: str, delta: Fraction | None = None) -> list[TableCheck]:
    """Computed rows against the reference rows, one check per shape."""
    ref = reference_rows(which, delta)
    got = {r.shape: (r.value, r.excess) for r in excess_table(g, which, delta)}
    return [TableCheck(s, ref.get(s), got.get(s)) for s in sorted(set(ref) | set(got))]


def original_excess(g: GadgetGraph, members, allocation: Allocation | None = None) -> Fraction:
    """Excess of a coalition of original vertices, under x* by default."""
    members = list(members)
    bad = [v for v in members if g.roles.get(v) != "original"]
    if bad:
        raise ValueError(f"not original vertices: {bad}")
    alloc = allocation or make_xstar(g)
    return excess(g.game(), g.mask(members), alloc)


def role_counts(roles: Mapping[str, str]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for tag in roles.values():
        counts[tag] = counts.get(tag, 0) + 1
    return dict(sorted(counts.items()))
