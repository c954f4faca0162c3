from fractions import Fraction as F

import pytest

from bnucleolus.exact_lp import (INFEASIBLE, UNBOUNDED, Constraint, LpModel, MalformedModelError,
                                 RowSpace, affine_rank, max_over_optimal_face, solve,
                                 solve_equalities)
from bnucleolus.instances import suite

from conftest import data_graph


def least_core_single_edge():
    return LpModel(("xa", "xb", "e"), {"e": 1}, (
        Constraint({"xa": 1, "xb": 1}, "==", 1),
        Constraint({"xa": 1, "e": -1}, ">=", 0),
        Constraint({"xb": 1, "e": -1}, ">=", 0),
    ), nonnegative=frozenset({"xa", "xb"}))


def test_single_binding_constraint():
    out = solve(LpModel(("x",), {"x": 1}, (Constraint({"x": 1}, "<=", 3),),
                        nonnegative=frozenset({"x"})))
    assert out.optimal and out.value == 3 and out.point == {"x": 3}


def test_least_core_of_single_edge():
    out = solve(least_core_single_edge())
    assert out.value == F(1, 2)
    assert out.point["xa"] == out.point["xb"] == F(1, 2)


def test_face_probe_single_edge():
    assert max_over_optimal_face(least_core_single_edge(), {"xa": 1}) == F(1, 2)


def test_face_probe_matches_optimum():
    model = least_core_single_edge()
    assert max_over_optimal_face(model, model.objective) == solve(model).value


def test_unbounded_and_infeasible():
    free = LpModel(("x",), {"x": 1}, (Constraint({"x": 1}, ">=", 0),))
    assert solve(free).status == UNBOUNDED
    clash = LpModel(("x",), {"x": 1}, (Constraint({"x": 1}, ">=", 2), Constraint({"x": 1}, "<=", 1)))
    assert solve(clash).status == INFEASIBLE


def test_minimisation_and_free_variables():
    out = solve(LpModel(("x", "y"), {"x": 1, "y": 1}, (
        Constraint({"x": 1}, ">=", -2), Constraint({"y": 1, "x": -1}, ">=", 1)), sense="min"))
    assert out.value == -3 and out.point == {"x": -2, "y": -1}


def test_duplicate_constraints_are_harmless():
    c = Constraint({"x": 1, "y": 1}, "<=", 4)
    out = solve(LpModel(("x", "y"), {"x": 1, "y": 2}, (c, c, Constraint({"x": 1, "y": 1}, "<=", 4)),
                        nonnegative=frozenset({"x", "y"})))
    assert out.value == 8
    assert len(out.duals) == 3


def test_point_satisfies_constraints_and_is_deterministic():
    model = LpModel(("a", "b", "c"), {"a": 3, "b": 2, "c": 4}, (
        Constraint({"a": 1, "b": 1, "c": 2}, "<=", 4),
        Constraint({"a": 2, "c": 3}, "<=", 5),
        Constraint({"a": 2, "b": 1, "c": 3}, "<=", 7),
    ), nonnegative=frozenset("abc"))
    first, second = solve(model), solve(model)
    assert first == second
    assert all(c.holds(first.point) for c in model.constraints)
    # dual certificate y = (2, 1/2, 0) has value 4*2 + 5/2 = 21/2
    assert first.value == F(21, 2)
    assert model.objective_value(first.point) == first.value


def test_malformed_models():
    with pytest.raises(MalformedModelError):
        solve(LpModel(("x",), {"y": 1}, ()))
    with pytest.raises(MalformedModelError):
        solve(LpModel(("x",), {"x": 1}, (Constraint({"x": 1}, "<", 0),)))


def test_affine_rank_and_equalities():
    assert affine_rank([{"a": 1, "b": 1}]) == 1
    assert affine_rank([{"a": 1, "b": 1}, {"a": 1}]) == 2
    sol = solve_equalities(("a", "b"), [({"a": 1, "b": 1}, 1), ({"a": 1}, F(1, 2))])
    assert sol == {"a": F(1, 2), "b": F(1, 2)}
    with pytest.raises(ValueError):
        solve_equalities(("a", "b"), [({"a": 1, "b": 1}, 1)])
    with pytest.raises(ValueError):
        solve_equalities(("a",), [({"a": 1}, 1), ({"a": 2}, 3)])


def test_rowspace():
    rs = RowSpace(3)
    assert rs.add([1, 1, 0]) and rs.add([0, 1, 1])
    assert not rs.add([1, 2, 1])
    assert rs.contains([2, 0, -2]) and not rs.contains([1, 0, 0])
    assert rs.rank == 2


def _two_matching_pair(graph):
    xs = tuple(f"x{k}" for k in range(len(graph.edges)))
    primal = LpModel(xs, {x: graph.edges[k].weight for k, x in enumerate(xs)}, tuple(
        Constraint({xs[k]: 1 for k, e in enumerate(graph.edges) if i in (e.u, e.v)}, "<=", 2)
        for i in range(graph.n)), nonnegative=frozenset(xs))
    ys = tuple(f"y{i}" for i in range(graph.n))
    dual = LpModel(ys, {y: 2 for y in ys}, tuple(
        Constraint({ys[e.u]: 1, ys[e.v]: 1}, ">=", e.weight) for e in graph.edges),
        sense="min", nonnegative=frozenset(ys))
    return primal, dual


def test_strong_duality_on_bipartite_two_matchings():
    for graph in suite(11, "charset-ii", 8) + [data_graph("c4")]:
        primal, dual = _two_matching_pair(graph)
        p, d = solve(primal), solve(dual)
        assert p.optimal and d.optimal and p.value == d.value
