import pytest

from gradedkit.core.errors import SizeBoundError
from gradedkit.core.search import Constraint, SearchStats, Variable, solve, solve_all
from gradedkit.core.union_find import UnionFind


def bits(name):
    return Variable(name, lambda a: [0, 1])


def test_solutions_come_in_domain_order():
    sols = solve_all([bits("x"), bits("y")])
    assert [(s["x"], s["y"]) for s in sols] == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_domain_may_depend_on_earlier_values():
    below = Variable("y", lambda a: range(a["x"] + 1))
    sols = solve_all([Variable("x", lambda a: range(3)), below])
    assert len(sols) == 1 + 2 + 3
    assert all(s["y"] <= s["x"] for s in sols)


def test_constraints_prune_and_are_counted():
    stats = SearchStats()
    distinct = Constraint("distinct", ("x", "y"), lambda a: a["x"] != a["y"])
    sols = solve_all([bits("x"), bits("y")], [distinct], stats=stats)
    assert [(s["x"], s["y"]) for s in sols] == [(0, 1), (1, 0)]
    assert stats.solutions == 2
    assert stats.pruned_by == {"distinct": 2}
    assert stats.nodes == 6


def test_limit_stops_early():
    assert len(list(solve([bits("x"), bits("y"), bits("z")], limit=3))) == 3


def test_unknown_variable_in_constraint():
    with pytest.raises(KeyError):
        solve_all([bits("x")], [Constraint("c", ("w",), lambda a: True)])


def test_node_bound():
    with pytest.raises(SizeBoundError):
        solve_all([bits(i) for i in range(6)], max_nodes=10)


def test_union_find_classes():
    uf = UnionFind(range(5))
    assert uf.union(0, 1)
    assert uf.union(3, 4)
    assert not uf.union(1, 0)
    assert uf.find(0) == uf.find(1)
    assert uf.find(2) != uf.find(3)
    classes = sorted(sorted(c) for c in uf.classes().values())
    assert classes == [[0, 1], [2], [3, 4]]


def test_union_find_add():
    uf = UnionFind()
    assert "a" not in uf
    uf.add("a")
    uf.add("a")
    assert "a" in uf and uf.find("a") == "a"
