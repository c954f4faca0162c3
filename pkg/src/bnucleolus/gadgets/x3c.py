"""Exact cover by 3-sets and its graph reduction.

An instance has ground set X = {a_1, ..., a_3k} and a list of 3-subsets.
The reduction works in stages:

* ``G0``: the bipartite incidence graph between elements and subsets.
* ``G1``: adds the backbone B = B1 u B2 u B3 with B1 = {b_1..b_3k},
  B2 = {b_3k+1..b_6k}, B3 = {b_6k+1..b_7k}.
* ``G2``: replaces each element a_i by a chain of three "ore" blocks
  O_{i,j} = {u, w, cu, cw}, one per subset containing a_i.
* the final graph: two copies of G2 (the second with primed names and
  opposite sides) joined by the edges cu-cu' and cw-cw' of every ore.

Every vertex has degree 3 except w_{i,1} and w_{i,2} which have degree 4 in
a restricted instance (every element in exactly three subsets).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

from ..graph import GameGraph
from .detect import SubgraphWitness
from .nucleolus_gadget import GadgetGraph, StructuralError


class X3CFormatError(ValueError):
    pass


@dataclass(frozen=True)
class X3CInstance:
    """``subsets`` holds triples of 1-based element indices."""

    k: int
    subsets: tuple[tuple[int, int, int], ...]
    element_names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")
        if not self.element_names:
            object.__setattr__(self, "element_names",
                               tuple(f"a{i}" for i in range(1, 3 * self.k + 1)))
        if len(self.element_names) != 3 * self.k:
            raise ValueError("need exactly 3k element names")
        norm = []
        for s in self.subsets:
            t = tuple(sorted(s))
            if len(set(t)) != 3 or not all(1 <= i <= 3 * self.k for i in t):
                raise ValueError(f"bad subset {s}: need three distinct elements in 1..{3 * self.k}")
            norm.append(t)
        object.__setattr__(self, "subsets", tuple(norm))

    @property
    def size(self) -> int:
        return 3 * self.k

    def containing(self, i: int) -> list[int]:
        """0-based indices of the subsets containing element i, in order."""
        return [j for j, s in enumerate(self.subsets) if i in s]

    def is_restricted(self) -> bool:
        return all(len(self.containing(i)) == 3 for i in range(1, self.size + 1))

    def is_cover(self, chosen) -> bool:
        chosen = list(chosen)
        if len(set(chosen)) != len(chosen) or not all(0 <= j < len(self.subsets) for j in chosen):
            return False
        hit = sorted(i for j in chosen for i in self.subsets[j])
        return hit == list(range(1, self.size + 1))


def parse_x3c(text: str, source: str = "<x3c>") -> X3CInstance:
    """``k N`` (or just ``N``) on the first content line, then one subset per line."""
    k = None
    rows: list[tuple[list[str], int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if k is None:
            if tokens[0] == "k":
                tokens = tokens[1:]
            if len(tokens) != 1 or not tokens[0].isdigit() or int(tokens[0]) < 1:
                raise X3CFormatError(f"{source}:{lineno}: expected 'k <positive integer>'")
            k = int(tokens[0])
            continue
        if len(tokens) != 3:
            raise X3CFormatError(f"{source}:{lineno}: a subset line needs three element names")
        if len(set(tokens)) != 3:
            raise X3CFormatError(f"{source}:{lineno}: repeated element in subset")
        rows.append((tokens, lineno))
    if k is None:
        raise X3CFormatError(f"{source}: empty instance")
    order: list[str] = []
    for tokens, _ in rows:
        for t in tokens:
            if t not in order:
                order.append(t)
    if len(order) != 3 * k:
        raise X3CFormatError(f"{source}: subsets mention {len(order)} elements, expected 3k = {3 * k}")
    # keep a1, a2, ... in numeric order when the names follow that pattern
    if all(re.fullmatch(r"[A-Za-z_]+\d+", t) for t in order):
        order.sort(key=lambda t: (re.sub(r"\d+$", "", t), int(re.search(r"\d+$", t).group())))
    index = {t: i for i, t in enumerate(order, 1)}
    subsets = tuple(tuple(index[t] for t in tokens) for tokens, _ in rows)
    return X3CInstance(k, subsets, tuple(order))


def load_x3c(path: str | Path) -> X3CInstance:
    path = Path(path)
    return parse_x3c(path.read_text(), str(path))


def dump_x3c(inst: X3CInstance) -> str:
    lines = [f"k {inst.k}"]
    lines += [" ".join(inst.element_names[i - 1] for i in s) for s in inst.subsets]
    return "\n".join(lines) + "\n"


def x3c_bruteforce(inst: X3CInstance, max_subsets: int = 20) -> tuple[int, ...] | None:
    """An exact cover (0-based subset indices, lexicographically first) or None."""
    if len(inst.subsets) > max_subsets:
        raise ValueError(f"brute force limited to {max_subsets} subsets")
    for chosen in combinations(range(len(inst.subsets)), inst.k):
        if inst.is_cover(chosen):
            return chosen
    return None


# --- the reduction ------------------------------------------------------------

def _ore(i: int, j: int, prime: str = "") -> dict[str, str]:
    return {t: f"{t}{prime}[{i},{j}]" for t in ("u", "w", "cu", "cw")}


class _Builder:
    def __init__(self):
        self.names: list[str] = []
        self.edges: list[tuple[str, str]] = []
        self.roles: dict[str, str] = {}

    def vertex(self, name: str, role: str) -> str:
        if name in self.roles:
            raise StructuralError(f"vertex {name} created twice")
        self.names.append(name)
        self.roles[name] = role
        return name

    def edge(self, a: str, b: str) -> None:
        self.edges.append((a, b))

    def graph(self) -> GameGraph:
        return _oriented(self.names, self.edges, self.roles)


def _oriented(names, edges, roles) -> GameGraph:
    """Unit-weight graph with b = 3 and sides from a 2-colouring (b_1 on side A)."""
    raw = GameGraph.build(names, [(a, b, 1) for a, b in edges], b=3, roles=roles)
    colour = raw.bipartition()
    if colour is None:
        return raw
    anchor = colour[0]
    sides = {v: "A" if c == anchor else "B" for v, c in zip(names, colour)}
    return raw.with_sides([sides[v] for v in names])


def _stage0(inst: X3CInstance, bld: _Builder) -> None:
    for i in range(1, inst.size + 1):
        bld.vertex(f"a{i}", "element")
    for j, s in enumerate(inst.subsets, 1):
        bld.vertex(f"S{j}", "S")
        for i in s:
            bld.edge(f"a{i}", f"S{j}")


def _backbone(k: int, bld: _Builder, prime: str = "") -> None:
    b = lambda i: f"b{i}{prime}"  # noqa: E731
    for i in range(1, 7 * k + 1):
        role = "B1" if i <= 3 * k else "B2" if i <= 6 * k else "B3"
        bld.vertex(b(i), role + prime)
    for i in range(1, 3 * k + 1):
        bld.edge(b(i), b(3 * k + i))
        bld.edge(b(i), b(3 * k + i - 1) if i > 1 else b(6 * k))
    for j in range(1, k + 1):
        for t in (3 * j - 2, 3 * j - 1, 3 * j):
            bld.edge(b(6 * k + j), b(3 * k + t))


def _stage1(inst: X3CInstance) -> _Builder:
    bld = _Builder()
    _stage0(inst, bld)
    _backbone(inst.k, bld)
    for i in range(1, inst.size + 1):
        bld.edge(f"b{i}", f"a{i}")
    return bld


def _ore_copy(inst: X3CInstance, bld: _Builder, prime: str = "") -> None:
    """Backbone, subset vertices and ore chains of one copy of G2."""
    _backbone(inst.k, bld, prime)
    for j in range(1, len(inst.subsets) + 1):
        bld.vertex(f"S{j}{prime}", "S" + prime)
    for i in range(1, inst.size + 1):
        containing = inst.containing(i)
        prev = f"b{i}{prime}"
        for j, s_idx in enumerate(containing, 1):
            o = _ore(i, j, prime)
            for t in ("u", "w", "cu", "cw"):
                bld.vertex(o[t], "ore-" + t + prime)
            bld.edge(prev, o["u"])
            bld.edge(o["u"], o["w"])
            bld.edge(o["w"], f"S{s_idx + 1}{prime}")
            bld.edge(o["u"], o["cu"])
            bld.edge(o["w"], o["cw"])
            bld.edge(o["cu"], o["cw"])
            prev = o["w"]


def build_x3c_graph(inst: X3CInstance) -> GadgetGraph:
    """The reduction graph with stages G0, G1, G2 attached.

    Only restricted instances (every element in exactly three subsets) are
    accepted.
    """
    if not inst.is_restricted():
        raise ValueError("instance is not restricted: every element must lie in exactly three subsets")
    g0 = _Builder()
    _stage0(inst, g0)
    g1 = _stage1(inst)
    g2 = _Builder()
    _ore_copy(inst, g2)
    final = _Builder()
    _ore_copy(inst, final)
    _ore_copy(inst, final, "'")
    groups: dict[str, tuple[str, ...]] = {}
    for prime in ("", "'"):
        groups["B" + prime] = tuple(f"b{i}{prime}" for i in range(1, 7 * inst.k + 1))
    for i in range(1, inst.size + 1):
        for j in range(1, len(inst.containing(i)) + 1):
            o, p = _ore(i, j), _ore(i, j, "'")
            final.edge(o["cu"], p["cu"])
            final.edge(o["cw"], p["cw"])
            groups[f"O[{i},{j}]"] = tuple(o.values())
            groups[f"O'[{i},{j}]"] = tuple(p.values())
    graph = final.graph()
    return GadgetGraph(graph, "x3c", dict(final.roles), groups,
                       {"G0": g0.graph(), "G1": g1.graph(), "G2": g2.graph()})


def cover_to_cubic(g: GadgetGraph, inst: X3CInstance, cover) -> SubgraphWitness:
    """The cubic subgraph induced by an exact cover (0-based subset indices).

    Per copy it keeps B, the chosen subsets Y and, for each element, the ore
    blocks up to the one attached to the chosen subset containing it.
    """
    cover = list(cover)
    if not inst.is_cover(cover):
        raise ValueError(f"{[j + 1 for j in cover]} is not an exact cover")
    keep: set[str] = set()
    for prime in ("", "'"):
        keep.update(g.groups["B" + prime])
        keep.update(f"S{j + 1}{prime}" for j in cover)
    for i in range(1, inst.size + 1):
        containing = inst.containing(i)
        stop = next(pos for pos, s in enumerate(containing, 1) if s in cover)
        for j in range(1, stop + 1):
            keep.update(g.groups[f"O[{i},{j}]"])
            keep.update(g.groups[f"O'[{i},{j}]"])
    graph = g.graph
    names = [v for v in graph.names if v in keep]
    mask = graph.mask_of(names)
    edges = [(graph.names[graph.edges[k].u], graph.names[graph.edges[k].v], 1)
             for k in graph.induced_edges(mask)]
    witness = SubgraphWitness("cubic", tuple((a, b) for a, b, _ in edges))
    bad = sorted(v for v, d in witness.degrees().items() if d != 3)
    missing = sorted(keep - set(witness.degrees()))
    if bad or missing:
        raise StructuralError(f"cover subgraph is not cubic at {(bad + missing)[:5]}")
    return witness


def expected_size(inst: X3CInstance) -> tuple[int, int]:
    """(vertices, edges) of the final graph for a restricted instance: (92k, 144k)."""
    return 92 * inst.k, 144 * inst.k
