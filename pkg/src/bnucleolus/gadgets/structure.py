"""Structural reports for generated gadget graphs."""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from ..graph import GameGraph
from .nucleolus_gadget import GadgetGraph, role_counts


@dataclass
class StructureReport:
    vertices: int
    edges: int
    bipartite: bool
    max_degree: int
    roles: dict[str, int]
    checks: list[tuple[str, bool]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.bipartite and all(passed for _, passed in self.checks)

    def lines(self) -> list[str]:
        out = [f"vertices\t{self.vertices}", f"edges\t{self.edges}",
               f"bipartite\t{'yes' if self.bipartite else 'no'}",
               f"max_degree\t{self.max_degree}"]
        out += [f"role\t{tag}\t{count}" for tag, count in self.roles.items()]
        out += [f"check\t{name}\t{'ok' if passed else 'FAIL'}" for name, passed in self.checks]
        return out


def to_networkx(graph: GameGraph, names=None) -> nx.Graph:
    keep = set(graph.names if names is None else names)
    h = nx.Graph()
    h.add_nodes_from(v for v in graph.names if v in keep)
    for e in graph.edges:
        a, b = graph.names[e.u], graph.names[e.v]
        if a in keep and b in keep:
            h.add_edge(a, b)
    return h


def _complete_between(graph: GameGraph, left, right) -> bool:
    adj = graph.adjacency()
    return all(graph.index(b) in adj[graph.index(a)] for a in left for b in right)


def structural_check(g: GadgetGraph) -> StructureReport:
    graph = g.graph
    report = StructureReport(graph.n, len(graph.edges), graph.is_bipartite(),
                             graph.max_degree(), role_counts(g.roles))
    if g.kind == "nucleolus":
        originals = g.originals
        base_edges = sum(1 for e in graph.edges
                         if g.roles[graph.names[e.u]] == "original"
                         and g.roles[graph.names[e.v]] == "original")
        report.checks.append(("vertex count 6|N|", graph.n == 6 * len(originals)))
        report.checks.append(("edge count |E|+9|N|", len(graph.edges) == base_edges + 9 * len(originals)))
        for u in originals:
            left = [u, f"v@{u}", f"w@{u}"]
            right = [f"x@{u}", f"y@{u}", f"z@{u}"]
            report.checks.append((f"K33 at {u}", _complete_between(graph, left, right)))
        if g.base_max_degree is not None:
            report.checks.append(("max degree = base + 3", graph.max_degree() == g.base_max_degree + 3))
    elif g.kind == "x3c":
        for name, members in sorted(g.groups.items()):
            h = to_networkx(graph, members)
            report.checks.append((f"2-connected {name}", nx.is_biconnected(h)))
        deg = {v: graph.degree(i) for i, v in enumerate(graph.names)}
        heavy = sorted(v for v, d in deg.items() if d > 3)
        ok_heavy = all(g.roles[v] == "ore-w" + ("'" if "'" in v else "")
                       and v.split("[")[1].split(",")[1] in ("1]", "2]") for v in heavy)
        report.checks.append(("degree > 3 only at w[i,1], w[i,2]", ok_heavy))
        report.checks.append(("no vertex of degree < 3", min(deg.values()) >= 3))
    return report
