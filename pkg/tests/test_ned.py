import pytest

from nedist.errors import UsageError
from nedist.graph import parse_edge_list
from nedist.ned import (
    TreeDistanceCache,
    hausdorff_graph_distance,
    ned,
    ned_directed,
    tree_for,
)
from nedist.ted import UNIT, W_PLUS

PATH5 = "a b\nb c\nc d\nd e\n"


def star(n, prefix):
    return "".join(f"{prefix}hub {prefix}{i}\n" for i in range(n))


def test_isomorphic_neighborhoods_at_zero():
    g1 = parse_edge_list(PATH5)
    g2 = parse_edge_list("v w\nw x\nx y\ny z\n")
    assert ned(g1, "a", g2, "v", 3) == 0
    assert ned(g1, "c", g2, "x", 4) == 0


def test_star_centers():
    g3 = parse_edge_list(star(3, "a"))
    g4 = parse_edge_list(star(4, "b"))
    assert ned(g3, "ahub", g4, "bhub", 2) == 1


def test_path_end_vs_center():
    g = parse_edge_list(PATH5)
    assert ned(g, "a", g, "c", 2) == 1   # "(())" vs "(()())"


def test_ned_rejects_directed():
    g = parse_edge_list("a b\n", directed=True)
    with pytest.raises(UsageError):
        ned(g, "a", g, "b", 2)


def test_directed_distance_sums_both_trees():
    g1 = parse_edge_list("p u\nq u\n", directed=True)   # u has 2 in-edges
    g2 = parse_edge_list("x y\n", directed=True)
    # in-trees (()()) vs () cost 2; out-trees () vs (()) cost 1
    assert ned_directed(g1, "u", g2, "x", 2) == 3


def test_ned_directed_rejects_undirected():
    g = parse_edge_list("a b\n")
    with pytest.raises(UsageError):
        ned_directed(g, "a", g, "b", 2)


def test_tree_for_memoizes():
    g = parse_edge_list(PATH5)
    t1 = tree_for(g, "a", 3)
    t2 = tree_for(g, "a", 3)
    assert t1 is t2


def test_distance_cache_counts():
    g = parse_edge_list(PATH5)
    cache = TreeDistanceCache()
    ta, tc = tree_for(g, "a", 2), tree_for(g, "c", 2)
    assert cache.distance(ta, tc) == 1
    assert cache.distance(tc, ta) == 1   # symmetric key, no recompute
    assert cache.evaluations == 2
    assert cache.computations == 1


def test_hausdorff_identity_and_symmetry():
    g1 = parse_edge_list(PATH5)
    g2 = parse_edge_list(star(4, ""))
    assert hausdorff_graph_distance(g1, g1, 3) == 0
    d12 = hausdorff_graph_distance(g1, g2, 3)
    d21 = hausdorff_graph_distance(g2, g1, 3)
    assert d12 == d21 > 0


def test_hausdorff_rejects_mixed_directedness():
    g1 = parse_edge_list("a b\n")
    g2 = parse_edge_list("a b\n", directed=True)
    with pytest.raises(UsageError):
        hausdorff_graph_distance(g1, g2, 2)


def test_hausdorff_sampling_deterministic():
    g1 = parse_edge_list(PATH5)
    g2 = parse_edge_list(star(5, ""))
    runs = {hausdorff_graph_distance(g1, g2, 2, sample=3, seed=42)
            for _ in range(4)}
    assert len(runs) == 1


def test_hausdorff_cache_scheme_mismatch():
    g = parse_edge_list(PATH5)
    with pytest.raises(UsageError):
        hausdorff_graph_distance(g, g, 2, weights=W_PLUS,
                                 cache=TreeDistanceCache(UNIT))


def test_hausdorff_directed():
    g1 = parse_edge_list("a b\nb c\n", directed=True)
    g2 = parse_edge_list("x y\ny z\n", directed=True)
    assert hausdorff_graph_distance(g1, g2, 2) == 0
