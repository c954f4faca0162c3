"""Seeded random bipartite instances for the equivalence suites."""

from __future__ import annotations

import random

from .graph import GameGraph

MAX_PLAYERS = 10
MAX_EDGES = 24


def random_bipartite(rng: random.Random, kind: str, max_players: int = MAX_PLAYERS,
                     max_edges: int = MAX_EDGES, max_weight: int = 4,
                     b2_on_b_side: int = 2) -> GameGraph:
    """A random bipartite graph with integer weights in 1..max_weight.

    ``kind`` selects the capacities:

    * ``"charset-i"``: simple game, b = 2 on side A, b = 2 on at most
      ``b2_on_b_side`` vertices of side B and b = 1 elsewhere;
    * ``"charset-ii"``: non-simple game with b = 2 everywhere.
    """
    if kind not in ("charset-i", "charset-ii"):
        raise ValueError(f"unknown instance kind {kind!r}")
    n = rng.randint(3, max_players)
    n_a = rng.randint(1, n - 1)
    left = [f"a{i}" for i in range(1, n_a + 1)]
    right = [f"b{i}" for i in range(1, n - n_a + 1)]
    pairs = [(a, b) for a in left for b in right]
    rng.shuffle(pairs)
    density = rng.uniform(0.3, 0.9)
    chosen = [p for p in pairs if rng.random() < density][:max_edges]
    if not chosen:
        chosen = pairs[:1]
    chosen.sort(key=lambda p: (left.index(p[0]), right.index(p[1])))
    edges = [(a, b, rng.randint(1, max_weight)) for a, b in chosen]
    sides = {v: "A" for v in left} | {v: "B" for v in right}
    if kind == "charset-ii":
        caps = {v: 2 for v in left + right}
        simple = False
    else:
        twos = set(rng.sample(right, rng.randint(0, min(b2_on_b_side, len(right)))))
        caps = {v: 2 for v in left} | {v: 2 if v in twos else 1 for v in right}
        simple = True
    return GameGraph.build(left + right, edges, caps, sides, simple)


def suite(seed: int, kind: str, count: int = 20, **kwargs) -> list[GameGraph]:
    rng = random.Random(seed)
    return [random_bipartite(rng, kind, **kwargs) for _ in range(count)]
