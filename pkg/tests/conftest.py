from __future__ import annotations

from itertools import product
from pathlib import Path

import pytest

from bnucleolus.gadgets import build_nucleolus_gadget
from bnucleolus.graph import GameGraph, load_graph
from bnucleolus.nucleolus import kopelowitz

DATA = Path(__file__).parent / "data"


def data_graph(name: str) -> GameGraph:
    return load_graph(DATA / f"{name}.graph")


def brute_value(graph: GameGraph, mask: int) -> int:
    """Reference oracle: try every multiplicity vector on the induced edges."""
    ids = graph.induced_edges(mask)
    best = 0
    for mult in product(*(range(graph.edge_cap(graph.edges[k]) + 1) for k in ids)):
        deg = [0] * graph.n
        for k, m in zip(ids, mult):
            deg[graph.edges[k].u] += m
            deg[graph.edges[k].v] += m
        if all(d <= c for d, c in zip(deg, graph.b)):
            best = max(best, sum(m * graph.edges[k].weight for k, m in zip(ids, mult)))
    return best


@pytest.fixture(scope="session")
def gstar_k2():
    return build_nucleolus_gadget(GameGraph.build(["u", "v"], [("u", "v", 1)]))


@pytest.fixture(scope="session")
def gstar_k2_trace(gstar_k2):
    """The full brute-force scheme on the 12-player gadget game (about 10 s)."""
    game = gstar_k2.game()
    return game, kopelowitz(game)
