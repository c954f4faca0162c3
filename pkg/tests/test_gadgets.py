from fractions import Fraction as F

import pytest

from bnucleolus.gadgets import (GadgetGraph, build_nucleolus_gadget, compare_table, excess_table,
                                make_xdelta, make_xstar, original_excess, reference_rows,
                                structural_check)
from bnucleolus.gadgets.nucleolus_gadget import TILTED_TABLE, UNIFORM_TABLE
from bnucleolus.graph import GameGraph, parse_graph, dump_graph

from conftest import data_graph


def test_gadget_of_single_edge(gstar_k2):
    g = gstar_k2.graph
    assert g.n == 12 and len(g.edges) == 19 and g.is_bipartite()
    assert g.b == (3,) * 12 and g.simple
    assert g.sides[g.index("v@u")] == g.sides[g.index("u")] != g.sides[g.index("x@u")]
    assert structural_check(gstar_k2).ok


def test_gadget_counts_and_degrees():
    for name, maxdeg in (("k33", 6), ("c8_maxdeg4", 7), ("path3", 5)):
        base = data_graph(name)
        g = build_nucleolus_gadget(base)
        assert g.graph.n == 6 * base.n
        assert len(g.graph.edges) == len(base.edges) + 9 * base.n
        assert g.graph.max_degree() == maxdeg
        assert structural_check(g).ok


def test_gadget_rejects_bad_input():
    with pytest.raises(ValueError):
        build_nucleolus_gadget(data_graph("triangle"))
    with pytest.raises(ValueError):
        build_nucleolus_gadget(GameGraph.build(["a"], []))


def test_gadget_file_round_trip(gstar_k2):
    again = GadgetGraph.from_graph(parse_graph(dump_graph(gstar_k2.graph)))
    assert again.graph == gstar_k2.graph and again.originals == ["u", "v"]
    assert again.base_max_degree == 1


def test_special_allocations(gstar_k2):
    star = make_xstar(gstar_k2)
    assert set(star.values) == {F(3, 2)}
    tilt = make_xdelta(gstar_k2, F(1, 4))
    assert tilt["u"] == F(7, 4) and tilt["x@v"] == F(29, 20)
    assert tilt.total() == star.total() == gstar_k2.game().grand_value
    for bad in (0, F(1, 2), F(-1, 4)):
        with pytest.raises(ValueError):
            make_xdelta(gstar_k2, bad)


def test_table_shapes(gstar_k2):
    rows1 = excess_table(gstar_k2, "table1")
    assert len(rows1) == 14 and sum(r.members for r in rows1) == 62
    rows2 = excess_table(gstar_k2, "table2", F(1, 4))
    assert len(rows2) == 22 and sum(r.members for r in rows2) == 62
    by_shape = {r.shape: r for r in rows1}
    assert (by_shape[(1, 1)].value, by_shape[(1, 1)].excess) == (1, 2)
    assert (by_shape[(3, 2)].value, by_shape[(3, 2)].excess) == (6, F(3, 2))
    t = {r.shape: r for r in rows2}
    assert (t[(1, 1, 3)].value, t[(1, 1, 3)].excess) == (6, F(3, 2) + F(1, 20))
    with pytest.raises(ValueError):
        excess_table(gstar_k2, "table2")


def test_table1_matches_reference(gstar_k2):
    assert all(c.ok for c in compare_table(gstar_k2, "table1"))


def test_tilted_rows_against_direct_arithmetic(gstar_k2):
    """Recompute each tilted row from the shape alone: originals carry 3/2 + d,
    gadget vertices 3/2 - d/5, and the value is the row's matching size."""
    delta = F(1, 3)
    computed = {r.shape: (r.value, r.excess) for r in excess_table(gstar_k2, "table2", delta)}
    for (u, vw, xyz), (value, _, _) in TILTED_TABLE.items():
        x = u * (F(3, 2) + delta) + (vw + xyz) * (F(3, 2) - delta / 5)
        assert computed[(u, vw, xyz)] == (value, x - value)


def test_tilted_reference_disagrees_only_on_one_row(gstar_k2):
    bad = [c for c in compare_table(gstar_k2, "table2", F(1, 4)) if not c.ok]
    assert [c.shape for c in bad] == [(0, 2, 1)]
    assert bad[0].computed == (2, F(5, 2) - 3 * F(1, 4) / 5)


def test_reference_rows_are_complete():
    assert len(UNIFORM_TABLE) == 14 and len(TILTED_TABLE) == 22
    assert reference_rows("table2", F(1, 4))[(0, 2, 3)] == (6, F(5, 4))


def test_original_coalition_excess_equals_delta():
    assert original_excess(build_nucleolus_gadget(data_graph("k33")), "abcdef") == 0
    assert original_excess(build_nucleolus_gadget(data_graph("k33_minus_edge")), "abcdef") == 1
    with pytest.raises(ValueError):
        original_excess(build_nucleolus_gadget(data_graph("k33")), ["v@a"])
