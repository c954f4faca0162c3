"""Game graphs and their text file format.

A graph file has up to four sections, each introduced by a line holding only
the section keyword::

    # single edge, unit weight
    game simple
    players
    u A
    v B
    b
    u 1
    v 1
    edges
    u v 1
    roles
    u original

``players`` lines are ``name side`` with side in ``A``, ``B`` or ``-``.
A line holding just a section keyword always starts that section, so a
player called ``b`` must be written with its side (``b -``).
``b`` lines are ``name capacity``; players without a line get capacity 1.
``edges`` lines are ``u v weight [mult_allowed]`` where weight is ``p`` or
``p/q`` and the optional integer caps how often the edge may be used.
``roles`` is optional metadata written by the gadget generators.  The
``game simple|nonsimple`` directive may appear anywhere (default simple).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .rational import format_rational, parse_rational

SIDES = ("A", "B", "-")
_SECTIONS = ("players", "b", "edges", "roles")


class GraphFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    weight: Fraction
    mult_allowed: int | None = None


@dataclass(frozen=True)
class GameGraph:
    names: tuple[str, ...]
    edges: tuple[Edge, ...]
    b: tuple[int, ...]
    sides: tuple[str, ...] = ()
    simple: bool = True
    roles: Mapping[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        n = len(self.names)
        if not self.sides:
            object.__setattr__(self, "sides", ("-",) * n)
        if len(set(self.names)) != n:
            raise ValueError("duplicate player names")
        if len(self.b) != n or len(self.sides) != n:
            raise ValueError("b and sides must have one entry per player")
        for name, cap in zip(self.names, self.b):
            if cap < 1:
                raise ValueError(f"capacity of {name} must be a positive integer")
        for side in self.sides:
            if side not in SIDES:
                raise ValueError(f"unknown side {side!r}")
        for e in self.edges:
            if e.u == e.v:
                raise ValueError(f"loop at {self.names[e.u]}")
            if not (0 <= e.u < n and 0 <= e.v < n):
                raise ValueError("edge endpoint out of range")
            su, sv = self.sides[e.u], self.sides[e.v]
            if su != "-" and sv != "-" and su == sv:
                raise ValueError(
                    f"edge {self.names[e.u]}-{self.names[e.v]} does not cross sides")
            if e.mult_allowed is not None and e.mult_allowed < 0:
                raise ValueError("mult_allowed must be nonnegative")
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.names)})

    @classmethod
    def build(cls, names: Sequence[str],
              edges: Iterable[tuple[str, str, object] | tuple[str, str, object, int]],
              b: Mapping[str, int] | int = 1, sides: Mapping[str, str] | None = None,
              simple: bool = True, roles: Mapping[str, str] | None = None) -> "GameGraph":
        """Convenience constructor working with player names."""
        names = tuple(names)
        index = {v: i for i, v in enumerate(names)}
        caps = tuple(b if isinstance(b, int) else b.get(v, 1) for v in names)
        side_t = tuple((sides or {}).get(v, "-") for v in names)
        elist = []
        for item in edges:
            u, v, w = item[0], item[1], Fraction(item[2])
            mult = item[3] if len(item) > 3 else None
            elist.append(Edge(index[u], index[v], w, mult))
        return cls(names, tuple(elist), caps, side_t, simple, dict(roles or {}))

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown player {name!r}") from None

    def mask_of(self, names: Iterable[str]) -> int:
        mask = 0
        for v in names:
            mask |= 1 << self.index(v)
        return mask

    def names_of(self, mask: int) -> list[str]:
        return [self.names[i] for i in range(self.n) if mask >> i & 1]

    def edge_cap(self, e: Edge) -> int:
        """Largest multiplicity any b-matching may give edge ``e``."""
        cap = min(self.b[e.u], self.b[e.v])
        if self.simple:
            cap = min(cap, 1)
        if e.mult_allowed is not None:
            cap = min(cap, e.mult_allowed)
        return cap

    def induced_edges(self, mask: int) -> list[int]:
        return [k for k, e in enumerate(self.edges) if mask >> e.u & 1 and mask >> e.v & 1]

    def degree(self, i: int) -> int:
        return sum(1 for e in self.edges if i in (e.u, e.v))

    def max_degree(self) -> int:
        deg = [0] * self.n
        for e in self.edges:
            deg[e.u] += 1
            deg[e.v] += 1
        return max(deg, default=0)

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for e in self.edges:
            adj[e.u].add(e.v)
            adj[e.v].add(e.u)
        return adj

    def bipartition(self) -> tuple[int, ...] | None:
        """A 0/1 colouring with every edge bichromatic, or None.

        Labelled sides are respected: the colouring is oriented so that
        ``A`` gets colour 0 wherever a component has labels.
        """
        adj = self.adjacency()
        colour = [-1] * self.n
        for start in range(self.n):
            if colour[start] >= 0:
                continue
            colour[start] = 0
            comp = [start]
            stack = [start]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if colour[y] < 0:
                        colour[y] = 1 - colour[x]
                        comp.append(y)
                        stack.append(y)
                    elif colour[y] == colour[x]:
                        return None
            labelled = [(colour[x], self.sides[x]) for x in comp if self.sides[x] != "-"]
            if labelled:
                flips = {c ^ (s == "B") for c, s in labelled}
                if len(flips) > 1:
                    return None
                if flips == {1}:
                    for x in comp:
                        colour[x] ^= 1
        return tuple(colour)

    def is_bipartite(self) -> bool:
        return self.bipartition() is not None

    def with_b(self, b: int | Mapping[str, int]) -> "GameGraph":
        caps = tuple(b if isinstance(b, int) else b.get(v, c) for v, c in zip(self.names, self.b))
        return GameGraph(self.names, self.edges, caps, self.sides, self.simple, self.roles)

    def with_simple(self, simple: bool) -> "GameGraph":
        return GameGraph(self.names, self.edges, self.b, self.sides, simple, self.roles)

    def with_sides(self, sides: Sequence[str]) -> "GameGraph":
        return GameGraph(self.names, self.edges, self.b, tuple(sides), self.simple, self.roles)


def parse_graph(text: str, source: str = "<graph>") -> GameGraph:
    section = None
    names: list[str] = []
    sides: dict[str, str] = {}
    caps: dict[str, int] = {}
    edges: list[tuple[str, str, Fraction, int | None, int]] = []
    roles: dict[str, str] = {}
    simple = True

    def fail(lineno: int, msg: str):
        raise GraphFormatError(f"{source}:{lineno}: {msg}")

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) == 1 and tokens[0] in _SECTIONS:
            section = tokens[0]
            continue
        if tokens[0] == "game":
            if len(tokens) != 2 or tokens[1] not in ("simple", "nonsimple"):
                fail(lineno, "expected 'game simple' or 'game nonsimple'")
            simple = tokens[1] == "simple"
            continue
        if section is None:
            fail(lineno, f"content before any section header: {line!r}")
        if section == "players":
            if len(tokens) not in (1, 2):
                fail(lineno, "expected 'name side'")
            name = tokens[0]
            side = tokens[1] if len(tokens) == 2 else "-"
            if side not in SIDES:
                fail(lineno, f"side must be one of A, B, -; got {side!r}")
            if name in sides:
                fail(lineno, f"duplicate player {name!r}")
            names.append(name)
            sides[name] = side
        elif section == "b":
            if len(tokens) != 2:
                fail(lineno, "expected 'name integer'")
            if tokens[0] not in sides:
                fail(lineno, f"unknown player {tokens[0]!r}")
            try:
                caps[tokens[0]] = int(tokens[1])
            except ValueError:
                fail(lineno, f"capacity must be an integer, got {tokens[1]!r}")
            if caps[tokens[0]] < 1:
                fail(lineno, "capacity must be positive")
        elif section == "edges":
            if len(tokens) not in (3, 4):
                fail(lineno, "expected 'u v weight [mult_allowed]'")
            for t in tokens[:2]:
                if t not in sides:
                    fail(lineno, f"unknown player {t!r}")
            if tokens[0] == tokens[1]:
                fail(lineno, "loops are not allowed")
            try:
                w = parse_rational(tokens[2])
            except ValueError as exc:
                fail(lineno, str(exc))
            mult = None
            if len(tokens) == 4:
                try:
                    mult = int(tokens[3])
                except ValueError:
                    fail(lineno, f"mult_allowed must be an integer, got {tokens[3]!r}")
            su, sv = sides[tokens[0]], sides[tokens[1]]
            if su != "-" and su == sv:
                fail(lineno, f"edge {tokens[0]}-{tokens[1]} does not cross sides")
            edges.append((tokens[0], tokens[1], w, mult, lineno))
        elif section == "roles":
            if len(tokens) != 2:
                fail(lineno, "expected 'name role'")
            if tokens[0] not in sides:
                fail(lineno, f"unknown player {tokens[0]!r}")
            roles[tokens[0]] = tokens[1]

    if not names:
        raise GraphFormatError(f"{source}: no players")
    built = [(u, v, w) if m is None else (u, v, w, m) for u, v, w, m, _ in edges]
    return GameGraph.build(names, built, caps, sides, simple, roles)


def load_graph(path: str | Path) -> GameGraph:
    path = Path(path)
    return parse_graph(path.read_text(), str(path))


def dump_graph(graph: GameGraph) -> str:
    out = [f"game {'simple' if graph.simple else 'nonsimple'}", "players"]
    out += [f"{v} {s}" for v, s in zip(graph.names, graph.sides)]
    out.append("b")
    out += [f"{v} {c}" for v, c in zip(graph.names, graph.b)]
    out.append("edges")
    for e in graph.edges:
        line = f"{graph.names[e.u]} {graph.names[e.v]} {format_rational(e.weight)}"
        if e.mult_allowed is not None:
            line += f" {e.mult_allowed}"
        out.append(line)
    if graph.roles:
        out.append("roles")
        out += [f"{v} {graph.roles[v]}" for v in graph.names if v in graph.roles]
    return "\n".join(out) + "\n"
