"""Maximum-weight b-matchings on induced subgraphs.

The value of a coalition is the best total weight of an edge multiset inside
the coalition that uses every vertex at most ``b`` times.  The solver is an
exact exhaustive search over edge multiplicity vectors, organised as a
dynamic program over the edge sequence: the state after deciding a prefix of
edges is the residual capacity of the "frontier" vertices (those touched by
both the decided prefix and the remaining suffix).  Memoising on that state
is what keeps the exhaustive search cheap at desk scale.

Induced subgraphs with more than ``edge_cap`` usable edges are refused rather
than attempted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .graph import GameGraph

DEFAULT_EDGE_CAP = 24
_ZERO = Fraction(0)


class RefusalError(RuntimeError):
    """A desk-scale cap was exceeded; no answer is given."""


@dataclass(frozen=True)
class Matching:
    """Multiplicity of every edge of the graph (index-aligned with graph.edges)."""

    mult: tuple[int, ...]

    def weight(self, graph: GameGraph) -> Fraction:
        return sum((m * graph.edges[k].weight for k, m in enumerate(self.mult) if m), _ZERO)

    def support(self) -> list[int]:
        return [k for k, m in enumerate(self.mult) if m]

    def degrees(self, graph: GameGraph) -> list[int]:
        deg = [0] * graph.n
        for k, m in enumerate(self.mult):
            if m:
                e = graph.edges[k]
                deg[e.u] += m
                deg[e.v] += m
        return deg

    def is_feasible(self, graph: GameGraph, mask: int | None = None) -> bool:
        if len(self.mult) != len(graph.edges) or any(m < 0 for m in self.mult):
            return False
        for k, m in enumerate(self.mult):
            if not m:
                continue
            e = graph.edges[k]
            if m > graph.edge_cap(e):
                return False
            if mask is not None and not (mask >> e.u & 1 and mask >> e.v & 1):
                return False
        return all(d <= cap for d, cap in zip(self.degrees(graph), graph.b))


class _FrontierDP:
    """Exact max-weight multiplicity assignment for a fixed edge order."""

    def __init__(self, graph: GameGraph, edge_ids: Sequence[int]):
        self.graph = graph
        self.edge_ids = list(edge_ids)
        self.ends = [(graph.edges[k].u, graph.edges[k].v) for k in self.edge_ids]
        self.weights = [graph.edges[k].weight for k in self.edge_ids]
        self.caps = [graph.edge_cap(graph.edges[k]) for k in self.edge_ids]
        n_e = len(self.edge_ids)
        last = {}
        for i, (u, v) in enumerate(self.ends):
            last[u] = i
            last[v] = i
        seen: set[int] = set()
        self.frontier: list[tuple[int, ...]] = []
        for i in range(n_e):
            self.frontier.append(tuple(sorted(x for x in seen if last[x] >= i)))
            seen.update(self.ends[i])
        self.res = list(graph.b)
        self.memo: dict[tuple, Fraction] = {}

    def best(self, i: int = 0) -> Fraction:
        if i == len(self.edge_ids):
            return _ZERO
        key = (i,) + tuple(self.res[x] for x in self.frontier[i])
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        u, v = self.ends[i]
        w = self.weights[i]
        top = min(self.caps[i], self.res[u], self.res[v])
        value = None
        for m in range(top + 1):
            self.res[u] -= m
            self.res[v] -= m
            cand = m * w + self.best(i + 1)
            self.res[u] += m
            self.res[v] += m
            if value is None or cand > value:
                value = cand
        self.memo[key] = value
        return value

    def lex_smallest_optimum(self) -> list[int]:
        """Lexicographically smallest optimal multiplicity vector (in edge order)."""
        target = self.best(0)
        chosen = []
        for i in range(len(self.edge_ids)):
            u, v = self.ends[i]
            top = min(self.caps[i], self.res[u], self.res[v])
            for m in range(top + 1):
                self.res[u] -= m
                self.res[v] -= m
                if m * self.weights[i] + self.best(i + 1) == target:
                    chosen.append(m)
                    target -= m * self.weights[i]
                    break
                self.res[u] += m
                self.res[v] += m
        self.res = list(self.graph.b)
        return chosen

    def all_optima(self) -> Iterator[list[int]]:
        target = self.best(0)

        def rec(i: int, remaining: Fraction) -> Iterator[list[int]]:
            if i == len(self.edge_ids):
                yield []
                return
            u, v = self.ends[i]
            top = min(self.caps[i], self.res[u], self.res[v])
            for m in range(top + 1):
                self.res[u] -= m
                self.res[v] -= m
                if m * self.weights[i] + self.best(i + 1) == remaining:
                    for tail in rec(i + 1, remaining - m * self.weights[i]):
                        yield [m] + tail
                self.res[u] += m
                self.res[v] += m

        yield from rec(0, target)


def _usable_edges(graph: GameGraph, mask: int, keep_zero: bool = False) -> list[int]:
    """Edges of G[S] that a maximum matching might use (negative weights never)."""
    return [k for k in graph.induced_edges(mask)
            if graph.edges[k].weight > 0 or (keep_zero and graph.edges[k].weight == 0)]


def _check_cap(edge_ids: Sequence[int], cap: int) -> None:
    if len(edge_ids) > cap:
        raise RefusalError(
            f"induced subgraph has {len(edge_ids)} usable edges; exhaustive cap is {cap}")


def _components(graph: GameGraph, edge_ids: Sequence[int]) -> list[list[int]]:
    """Edge ids grouped by connected component, each group in BFS vertex order."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for k in edge_ids:
        e = graph.edges[k]
        adj.setdefault(e.u, []).append((e.v, k))
        adj.setdefault(e.v, []).append((e.u, k))
    seen: set[int] = set()
    groups = []
    for start in sorted(adj):
        if start in seen:
            continue
        seen.add(start)
        order = [start]
        pos = {start: 0}
        head = 0
        while head < len(order):
            x = order[head]
            head += 1
            for y, _ in sorted(adj[x]):
                if y not in seen:
                    seen.add(y)
                    pos[y] = len(order)
                    order.append(y)
        group = sorted({k for x in order for _, k in adj[x]},
                       key=lambda k: (max(pos[graph.edges[k].u], pos[graph.edges[k].v]), k))
        groups.append(group)
    return groups


def value(graph: GameGraph, coalition: int, edge_cap: int = DEFAULT_EDGE_CAP) -> Fraction:
    """Maximum weight of a b-matching in the subgraph induced by ``coalition`` (a bitmask)."""
    edge_ids = _usable_edges(graph, coalition)
    _check_cap(edge_ids, edge_cap)
    total = _ZERO
    for group in _components(graph, edge_ids):
        total += _FrontierDP(graph, group).best()
    return total


def max_matching(graph: GameGraph, coalition: int,
                 edge_cap: int = DEFAULT_EDGE_CAP) -> Matching:
    """An optimal b-matching of G[S]: the lexicographically smallest optimal
    multiplicity vector with edges in graph order."""
    edge_ids = _usable_edges(graph, coalition)
    _check_cap(edge_ids, edge_cap)
    mult = [0] * len(graph.edges)
    for k, m in zip(edge_ids, _FrontierDP(graph, edge_ids).lex_smallest_optimum()):
        mult[k] = m
    return Matching(tuple(mult))


def parallel_only_value(graph: GameGraph, coalition: int,
                        edge_cap: int = DEFAULT_EDGE_CAP) -> Fraction:
    """Twice the maximum weight of a 1-matching of G[S].

    This is the best a 2-matching can do when it may only double edges.
    """
    ones = GameGraph(graph.names, graph.edges, (1,) * graph.n, graph.sides, True)
    return 2 * value(ones, coalition, edge_cap)


def nonsimple2_value_fast(graph: GameGraph, coalition: int,
                          edge_cap: int = DEFAULT_EDGE_CAP) -> Fraction:
    """Value of a bipartite non-simple 2-matching game via doubled 1-matchings.

    On bipartite graphs some maximum non-simple 2-matching consists of
    doubled edges only; on odd cycles that fails (a triangle has value 3 but
    doubled edges reach only 2), so non-bipartite input is rejected.
    """
    if graph.simple or any(c != 2 for c in graph.b):
        raise ValueError("fast path needs a non-simple game with b == 2 everywhere")
    if any(e.mult_allowed is not None and e.mult_allowed < 2 for e in graph.edges):
        raise ValueError("fast path needs every edge to be usable twice")
    if not graph.is_bipartite():
        raise ValueError("fast path is only valid on bipartite graphs")
    return parallel_only_value(graph, coalition, edge_cap)


def matching_components(graph: GameGraph, coalition: int, matching: Matching) -> list[int]:
    """Vertex sets (bitmasks) of the components spanned by the matching's edges.

    Vertices of the coalition not covered by the matching are left out.
    Components are listed by their lowest vertex index.
    """
    if not matching.is_feasible(graph, coalition):
        raise ValueError("matching is not a feasible b-matching of the coalition")
    parent = list(range(graph.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    covered = 0
    for k in matching.support():
        e = graph.edges[k]
        covered |= 1 << e.u | 1 << e.v
        parent[find(e.u)] = find(e.v)
    comps: dict[int, int] = {}
    for i in range(graph.n):
        if covered >> i & 1:
            r = find(i)
            comps[r] = comps.get(r, 0) | 1 << i
    return sorted(comps.values(), key=lambda m: (m & -m))


def _spans_connected(graph: GameGraph, coalition: int, mult: Sequence[int],
                     edge_ids: Sequence[int]) -> bool:
    size = bin(coalition).count("1")
    if size <= 1:
        return True
    used = [0] * len(graph.edges)
    for k, m in zip(edge_ids, mult):
        used[k] = m
    comps = matching_components(graph, coalition, Matching(tuple(used)))
    return len(comps) == 1 and comps[0] == coalition


def all_max_matchings_connected(graph: GameGraph, coalition: int, cap: int = 10_000,
                                edge_cap: int = DEFAULT_EDGE_CAP) -> bool:
    """Whether every maximum b-matching M of G[S] leaves G[S][M] connected.

    G[S][M] has vertex set S, so an uncovered vertex disconnects it; in
    particular the empty matching counts as disconnected once |S| >= 2.
    Zero-weight edges are part of the enumeration since they can appear in
    maximum matchings.  More than ``cap`` maximum matchings is a refusal.
    """
    edge_ids = _usable_edges(graph, coalition, keep_zero=True)
    _check_cap(edge_ids, edge_cap)
    dp = _FrontierDP(graph, edge_ids)
    for count, mult in enumerate(dp.all_optima(), 1):
        if count > cap:
            raise RefusalError(f"more than {cap} maximum matchings")
        if not _spans_connected(graph, coalition, mult, edge_ids):
            return False
    return True
