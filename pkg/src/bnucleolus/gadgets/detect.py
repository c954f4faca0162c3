"""Exhaustive search for cubic and two-from-cubic subgraphs.

A cubic subgraph is a nonempty edge set H with every touched vertex of
degree exactly 3.  A two-from-cubic (2FC) subgraph has exactly two touched
vertices of degree 2 and all others of degree 3; it is *trivial* when those
two are adjacent in G through an edge outside H (adding it would give a
cubic subgraph).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..bmatching import RefusalError
from ..graph import GameGraph

DETECT_EDGE_CAP = 22


@dataclass(frozen=True)
class SubgraphWitness:
    kind: str  # "cubic" or "2fc"
    edges: tuple[tuple[str, str], ...]
    special: tuple[str, ...] = ()
    trivial: bool = False

    @property
    def vertices(self) -> tuple[str, ...]:
        seen: list[str] = []
        for a, b in self.edges:
            for x in (a, b):
                if x not in seen:
                    seen.append(x)
        return tuple(seen)

    def degrees(self) -> dict[str, int]:
        deg: dict[str, int] = {}
        for a, b in self.edges:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        return deg

    def describe(self) -> str:
        body = " ".join(f"{a}-{b}" for a, b in self.edges)
        if self.kind == "2fc":
            tag = "trivial" if self.trivial else "nontrivial"
            return f"2fc ({tag}; degree-2 at {', '.join(self.special)}): {body}"
        return f"cubic: {body}"


def _search(graph: GameGraph, want_2fc: bool, nontrivial_only: bool, cap: int):
    m = len(graph.edges)
    if m > cap:
        raise RefusalError(f"graph has {m} edges; exhaustive subgraph search is capped at {cap}")
    ends = [(e.u, e.v) for e in graph.edges]
    rem = [0] * graph.n
    for u, v in ends:
        rem[u] += 1
        rem[v] += 1
    deg = [0] * graph.n
    adjacent = {frozenset(p) for p in ends}
    chosen: list[int] = []
    twos = [0]  # count of finished vertices with degree 2

    def settle_ok(x: int) -> bool:
        """Constraint on vertex x once all its edges are decided."""
        d = deg[x]
        if d in (0, 3):
            return True
        return want_2fc and d == 2 and twos[0] < 2

    def alive(x: int) -> bool:
        d = deg[x]
        if d == 0 or rem[x] == 0:
            return True
        low = 2 if want_2fc else 3
        return d + rem[x] >= low

    def finish():
        if not chosen:
            return None
        if want_2fc:
            special = [x for x in range(graph.n) if deg[x] == 2]
            if len(special) != 2:
                return None
            a, b = special
            used = {frozenset(ends[k]) for k in chosen}
            pair = frozenset((a, b))
            trivial = pair in adjacent and pair not in used
            if nontrivial_only and trivial:
                return None
            return ("2fc", tuple(graph.names[x] for x in special), trivial)
        return ("cubic", (), False)

    def rec(i: int):
        if i == m:
            return finish()
        u, v = ends[i]
        rem[u] -= 1
        rem[v] -= 1
        options = []
        if deg[u] < 3 and deg[v] < 3:
            options.append(True)
        options.append(False)
        for take in options:
            if take:
                deg[u] += 1
                deg[v] += 1
                chosen.append(i)
            ok = True
            settled = []
            for x in (u, v):
                if rem[x] == 0:
                    if not settle_ok(x):
                        ok = False
                        break
                    if deg[x] == 2:
                        twos[0] += 1
                        settled.append(x)
                elif not alive(x):
                    ok = False
                    break
            if ok:
                got = rec(i + 1)
                if got is not None:
                    return got
            twos[0] -= len(settled)
            if take:
                deg[u] -= 1
                deg[v] -= 1
                chosen.pop()
        rem[u] += 1
        rem[v] += 1
        return None

    found = rec(0)
    if found is None:
        return None
    kind, special, trivial = found
    edges = tuple((graph.names[ends[k][0]], graph.names[ends[k][1]]) for k in chosen)
    return SubgraphWitness(kind, edges, special, trivial)


def detect_cubic(graph: GameGraph, cap: int = DETECT_EDGE_CAP) -> SubgraphWitness | None:
    return _search(graph, False, False, cap)


def detect_2fc(graph: GameGraph, cap: int = DETECT_EDGE_CAP,
               nontrivial: bool = False) -> SubgraphWitness | None:
    return _search(graph, True, nontrivial, cap)


def delta_parameter(graph: GameGraph, cap: int = DETECT_EDGE_CAP) -> tuple[int | None, SubgraphWitness | None]:
    """0 with a cubic witness, 1 with a 2FC witness, otherwise (None, None)."""
    cubic = detect_cubic(graph, cap)
    if cubic is not None:
        return 0, cubic
    fc = detect_2fc(graph, cap)
    if fc is not None:
        return 1, fc
    return None, None


def classify_subgraph(graph: GameGraph, edges) -> SubgraphWitness | None:
    """Witness for an explicit edge set when it is cubic or 2FC, else None."""
    pairs = tuple((a, b) for a, b in edges)
    for a, b in pairs:
        graph.index(a), graph.index(b)
    if not pairs or len({frozenset(p) for p in pairs}) != len(pairs):
        return None
    probe = SubgraphWitness("cubic", pairs)
    deg = probe.degrees()
    twos = sorted((v for v, d in deg.items() if d == 2), key=graph.index)
    if any(d not in (2, 3) for d in deg.values()):
        return None
    if not twos:
        return probe
    if len(twos) != 2:
        return None
    a, b = twos
    adj = graph.adjacency()
    trivial = graph.index(b) in adj[graph.index(a)] and frozenset((a, b)) not in {frozenset(p) for p in pairs}
    return SubgraphWitness("2fc", pairs, tuple(twos), trivial)
