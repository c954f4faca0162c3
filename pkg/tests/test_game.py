import random
from fractions import Fraction as F

import pytest

from bnucleolus import bmatching as bm
from bnucleolus.exact_lp import Constraint, LpModel, solve
from bnucleolus.gadgets import make_xdelta, make_xstar
from bnucleolus.game import (Allocation, Coalition, ExcessVector, Game, core_check, excess,
                             excess_vector, is_imputation, lex_compare, parse_allocation,
                             proper_coalitions)
from bnucleolus.graph import GameGraph
from bnucleolus.instances import suite

from conftest import data_graph

HALF = F(1, 2)


def single_edge():
    return Game.from_graph(GameGraph.build(["a", "b"], [("a", "b", 1)]))


def test_coalition_basics():
    c = Coalition.of([0, 2], 3)
    assert c.mask == 5 and len(c) == 2 and 2 in c and 1 not in c
    assert c.is_proper and not Coalition.grand(3).is_proper
    with pytest.raises(ValueError):
        Coalition(8, 3)


def test_proper_coalitions_order():
    assert list(proper_coalitions(3)) == [1, 2, 4, 3, 5, 6]
    assert len(list(proper_coalitions(12))) == 4094


def test_excess_from_table(gstar_k2):
    game = gstar_k2.game()
    g = gstar_k2.graph
    assert excess(game, g.mask_of(["u", "x@u"]), make_xstar(gstar_k2)) == 2
    t_u = g.mask_of(gstar_k2.gadget_vertices("u"))
    assert excess(game, t_u, make_xdelta(gstar_k2, F(1, 4))) == F(5, 4)
    zero = Allocation.uniform(game.players, 0)
    assert excess(game, g.mask_of(["u"]), zero) == 0


def test_excess_vector_sorting():
    game = single_edge()
    vec = excess_vector(game, Allocation(game.players, (HALF, HALF)), [1, 2, 3])
    assert vec.values == (0, HALF, HALF)
    assert vec.entries[0][0].mask == 3


def test_excess_vector_permutation_invariant():
    game = Game.from_graph(data_graph("path3"))
    x = Allocation(game.players, (F(1, 3), F(1, 3), F(1, 3)))
    family = list(proper_coalitions(3))
    ref = excess_vector(game, x, family)
    rng = random.Random(1)
    for _ in range(5):
        rng.shuffle(family)
        assert excess_vector(game, x, family) == ref


def test_path_minimum_excess():
    game = Game.from_graph(data_graph("path3"))
    vec = excess_vector(game, Allocation(game.players, (0, 1, 0)), proper_coalitions(3))
    assert vec.minimum() == 0


def test_gadget_minimum_excess_at_unions_of_gadgets(gstar_k2):
    game = gstar_k2.game()
    vec = excess_vector(game, make_xstar(gstar_k2), proper_coalitions(game.n))
    zeros = {c.mask for c, e in vec.entries if e == 0}
    g = gstar_k2.graph
    assert vec.minimum() == 0
    assert zeros == {g.mask_of(gstar_k2.complete_gadget("u")), g.mask_of(gstar_k2.complete_gadget("v"))}


def test_lex_compare():
    assert lex_compare([0, 1], [0, 1]) == 0
    assert lex_compare([F(1, 5), 2], [0, 100]) == 1
    assert lex_compare([0, 100], [F(1, 5), 2]) == -1
    with pytest.raises(ValueError):
        lex_compare([0], [0, 1])


def test_tilted_allocation_wins_on_witness_family():
    from bnucleolus.gadgets import build_nucleolus_gadget
    g = build_nucleolus_gadget(data_graph("k33_minus_edge"))
    game = g.game()
    originals = g.originals
    family = [g.mask(g.complete_gadget(u)) for u in originals]
    family.append(g.mask(originals))
    family += [g.mask(g.gadget_vertices(u)) for u in originals[:5]]
    assert len(family) == 12
    star = excess_vector(game, make_xstar(g), family)
    tilted = excess_vector(game, make_xdelta(g, F(1, 4)), family)
    assert lex_compare(tilted, star) == 1


def test_imputation_and_core():
    game = single_edge()
    assert is_imputation(game, Allocation(game.players, (HALF, HALF)))
    assert not is_imputation(game, Allocation(game.players, (1, 1)))
    path = Game.from_graph(data_graph("path3"))
    bad = core_check(path, Allocation(path.players, (F(1, 3),) * 3))
    assert bad is not None and path.names(bad) == ["a", "b"]
    assert excess(path, bad, Allocation(path.players, (F(1, 3),) * 3)) == -F(1, 3)
    tri = Game.from_graph(data_graph("triangle"))
    assert core_check(tri, Allocation.uniform(tri.players, 1)) is None


def test_uniform_allocation_in_gadget_core(gstar_k2):
    game = gstar_k2.game()
    assert game.grand_value == 18
    assert is_imputation(game, make_xstar(gstar_k2))
    assert core_check(game, make_xstar(gstar_k2)) is None


def test_excess_additive_over_matching_components():
    for graph in suite(21, "charset-ii", 6):
        game = Game.from_graph(graph)
        m = bm.max_matching(graph, graph.full_mask)
        comps = bm.matching_components(graph, graph.full_mask, m)
        x = Allocation(game.players, tuple(F(i, 3) for i in range(game.n)))
        if len(comps) >= 2:
            s, t = comps[0], comps[1]
            assert game.value(s | t) == game.value(s) + game.value(t)
            assert excess(game, s | t, x) == excess(game, s, x) + excess(game, t, x)


def _core_vertex(game: Game, rng: random.Random) -> Allocation:
    xs = tuple(f"x{i}" for i in range(game.n))
    cons = [Constraint({x: 1 for x in xs}, "==", game.grand_value)]
    for mask in range(1, game.full_mask):
        cons.append(Constraint({xs[i]: 1 for i in range(game.n) if mask >> i & 1}, ">=", game.value(mask)))
    objective = {x: rng.randint(-5, 5) for x in xs}
    out = solve(LpModel(xs, objective, tuple(cons)))
    assert out.optimal
    return Allocation(game.players, tuple(out.point[x] for x in xs))


def test_core_vertices_pay_components_exactly():
    rng = random.Random(99)
    checked = 0
    for graph in suite(31, "charset-ii", 12, max_players=7):
        game = Game.from_graph(graph)
        m = bm.max_matching(graph, graph.full_mask)
        comps = bm.matching_components(graph, graph.full_mask, m)
        for _ in range(2):
            x = _core_vertex(game, rng)
            assert core_check(game, x) is None
            for c in comps:
                assert x.of(c) == game.value(c)
            checked += 1
    assert checked >= 20


def test_parse_allocation():
    x = parse_allocation("a 1/2\nb=1/2 # comment\n", ["a", "b"])
    assert x.values == (HALF, HALF)
    with pytest.raises(ValueError):
        parse_allocation("a 1\n", ["a", "b"])
    with pytest.raises(ValueError):
        parse_allocation("a 0.5\nb 1\n", ["a", "b"])


def test_excess_vector_requires_family():
    with pytest.raises(ValueError):
        excess_vector(single_edge(), Allocation(("a", "b"), (0, 0)), [])
    assert isinstance(excess_vector(single_edge(), Allocation(("a", "b"), (0, 1)), [1]), ExcessVector)
