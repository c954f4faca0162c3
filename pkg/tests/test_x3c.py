import pytest

from bnucleolus.gadgets import (X3CFormatError, X3CInstance, build_x3c_graph, cover_to_cubic,
                                dump_x3c, expected_size, load_x3c, parse_x3c, structural_check,
                                x3c_bruteforce)
from bnucleolus.gadgets.structure import to_networkx

from conftest import DATA

K1 = load_x3c(DATA / "x3c_k1.x3c")
K2 = load_x3c(DATA / "x3c_k2_cover.x3c")
K2_NONE = load_x3c(DATA / "x3c_k2_none.x3c")


def test_parsing():
    assert K1.k == 1 and K1.subsets == ((1, 2, 3),) * 3
    assert parse_x3c(dump_x3c(K2)) == K2
    inst = parse_x3c("2\nq r s\nt u v\n")
    assert inst.element_names == ("q", "r", "s", "t", "u", "v")
    for bad in ("k 1\na b\n", "k 1\na b c\nd e f\n", "k x\n", "", "k 1\na a b\n"):
        with pytest.raises(X3CFormatError):
            parse_x3c(bad)


def test_bruteforce():
    assert x3c_bruteforce(K1) == (0,)
    cover = x3c_bruteforce(K2)
    assert cover is not None and K2.is_cover(cover)
    assert x3c_bruteforce(K2_NONE) is None and K2_NONE.is_restricted()
    with pytest.raises(ValueError):
        x3c_bruteforce(X3CInstance(1, ((1, 2, 3),) * 21))


@pytest.mark.parametrize("inst", [K1, K2, K2_NONE])
def test_reduction_structure(inst):
    g = build_x3c_graph(inst)
    assert (g.graph.n, len(g.graph.edges)) == expected_size(inst)
    assert g.graph.is_bipartite() and g.graph.max_degree() == 4
    report = structural_check(g)
    assert report.ok, [c for c in report.checks if not c[1]]
    four = [v for i, v in enumerate(g.graph.names) if g.graph.degree(i) == 4]
    assert len(four) == 2 * 2 * inst.size
    for name, members in g.groups.items():
        if name.startswith("O"):
            h = to_networkx(g.graph, members)
            assert h.number_of_edges() == 4 and all(d == 2 for _, d in h.degree())


def test_stage_graphs():
    g = build_x3c_graph(K2)
    g0, g1, g2 = (g.stages[s] for s in ("G0", "G1", "G2"))
    assert g0.n == 6 + 6 and len(g0.edges) == 18
    assert g1.n == 12 + 14 and all(g1.degree(g1.index(f"a{i}")) == 4 for i in range(1, 7))
    assert g2.n == 46 * K2.k and len(g2.edges) == 63 * K2.k and g2.is_bipartite()
    side = {v: g.graph.sides[g.graph.index(v)] for v in ("b1", "u[1,1]", "w[1,1]", "S1", "cu[1,1]", "cw[1,1]", "b7", "b13")}
    assert side["b1"] == side["w[1,1]"] == side["cu[1,1]"] == side["b13"]
    assert side["u[1,1]"] == side["S1"] == side["cw[1,1]"] == side["b7"] != side["b1"]
    assert g.graph.sides[g.graph.index("b1'")] != side["b1"]


def test_planted_covers_give_cubic_subgraphs():
    for inst in (K1, K2):
        g = build_x3c_graph(inst)
        w = cover_to_cubic(g, inst, x3c_bruteforce(inst))
        assert set(w.degrees().values()) == {3}
    # the second cover {S1, S6} walks further down the ore chains
    w = cover_to_cubic(build_x3c_graph(K2), K2, (0, 5))
    assert set(w.degrees().values()) == {3}


def test_invalid_cover_rejected():
    g = build_x3c_graph(K2)
    with pytest.raises(ValueError):
        cover_to_cubic(g, K2, (0, 2))


def test_unrestricted_instance_rejected():
    with pytest.raises(ValueError):
        build_x3c_graph(X3CInstance(2, ((1, 2, 3), (4, 5, 6))))
