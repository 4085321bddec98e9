import pytest

from bmgedit import (PhyloTree, SplitMix64, Triple, bmg_from_tree,
                     random_colored_tree, star, validate_coloring)
from bmgedit.errors import EmptyRestriction, NotPhylogenetic, UnknownLeaf

CATERPILLAR = PhyloTree.from_nested((("x", "y"), "z"),
                                    {"x": "A", "y": "B", "z": "B"})


def test_lca_basics():
    t = CATERPILLAR
    assert t.lca(["x"]).label == "x"
    inner = t.lca(["x", "y"])
    assert not inner.is_leaf and inner.parent is t.root
    assert t.lca(["x", "z"]) is t.root
    s = star(["x", "y", "z"])
    assert s.lca(["x", "y"]) is s.root
    with pytest.raises(UnknownLeaf):
        t.lca(["nope"])


def test_displays():
    t = CATERPILLAR
    assert t.displays(Triple.of("x", "y", "z"))
    assert not t.displays(Triple.of("x", "z", "y"))
    s = star(["x", "y", "z"])
    for tr in (Triple.of("x", "y", "z"), Triple.of("x", "z", "y"), Triple.of("y", "z", "x")):
        assert not s.displays(tr)


def test_displays_mutually_exclusive():
    rng = SplitMix64(3)
    for seed in range(8):
        t = random_colored_tree(8, 2, seed)
        leaves = t.leaf_ids
        for _ in range(20):
            trio = sorted({leaves[rng.randrange(len(leaves))] for _ in range(3)})
            if len(trio) < 3:
                continue
            a, b, c = trio
            shown = [t.displays(Triple.of(a, b, c)),
                     t.displays(Triple.of(a, c, b)),
                     t.displays(Triple.of(b, c, a))]
            assert sum(shown) <= 1
            if not any(shown):
                assert t.lca([a, b]) is t.lca([a, c]) is t.lca([b, c])


def test_restrict():
    t = CATERPILLAR
    assert t.restrict(t.leaf_ids) == t
    cherry = t.restrict(["x", "z"])
    assert cherry.to_nested() == ("x", "z")
    nested = PhyloTree.from_nested((("x", "y"), ("a", "b")),
                                   {"x": "A", "y": "B", "a": "A", "b": "B"})
    assert nested.restrict(["x", "y", "a"]) == PhyloTree.from_nested(
        (("x", "y"), "a"), {"x": "A", "y": "B", "a": "A"})
    with pytest.raises(EmptyRestriction):
        t.restrict([])
    with pytest.raises(UnknownLeaf):
        t.restrict(["x", "nope"])


def test_restrict_to_single_leaf():
    t = CATERPILLAR.restrict(["y"])
    assert t.to_nested() == "y" and t.n_leaves == 1


def test_clusters():
    cherry = PhyloTree.from_nested(("x", "y"))
    cl = cherry.clusters()
    assert cl.clusters == {frozenset({"x"}), frozenset({"y"}), frozenset({"x", "y"})}
    assert cl.nontrivial() == frozenset()
    cl2 = CATERPILLAR.clusters()
    assert cl2.nontrivial() == {frozenset({"x", "y"})}
    assert cl2.is_hierarchy()


def test_nontrivial_cluster_bound_and_hierarchy():
    for seed in range(12):
        t = random_colored_tree(9, 3, seed)
        cl = t.clusters()
        assert cl.is_hierarchy()
        assert len(cl.nontrivial()) <= t.n_leaves - 2


def test_phylogenetic_validation():
    with pytest.raises(NotPhylogenetic):
        PhyloTree.from_nested((("x",),))
    with pytest.raises(NotPhylogenetic):
        PhyloTree.from_nested((("x", "y"), ("x", "z")))  # duplicate leaf


def test_canonical_child_order():
    one = PhyloTree.from_nested((("z", "y"), ("b", "a")))
    two = PhyloTree.from_nested((("a", "b"), ("y", "z")))
    assert one == two
    assert one.to_nested() == (("a", "b"), ("y", "z"))


def test_bmg_cherry():
    t = PhyloTree.from_nested(("x", "y"), {"x": "red", "y": "blue"})
    assert bmg_from_tree(t).arcs == {("x", "y"), ("y", "x")}


def test_bmg_caterpillar():
    g = bmg_from_tree(CATERPILLAR)
    assert g.arcs == {("x", "y"), ("y", "x"), ("z", "x")}


def test_bmg_hourglass_shape():
    t = PhyloTree.from_nested(("x", "y", ("xp", "yp")),
                              {"x": "A", "y": "B", "xp": "A", "yp": "B"})
    g = bmg_from_tree(t)
    assert g.arcs == {("x", "y"), ("y", "x"), ("xp", "yp"), ("yp", "xp"),
                      ("x", "yp"), ("y", "xp")}


def test_bmg_is_always_sf_colored():
    for seed in range(15):
        t = random_colored_tree(3 + seed % 10, 2 + seed % 3, seed)
        report = validate_coloring(bmg_from_tree(t))
        assert report.proper and report.sink_free


def test_color_restriction_matches_induced_subgraph():
    for seed in range(10):
        t = random_colored_tree(10, 4, seed)
        g = bmg_from_tree(t)
        rng = SplitMix64(seed + 1000)
        colors = sorted(set(t.colors.values()))
        keep_colors = {c for c in colors if rng.random() < 0.6}
        if not keep_colors:
            keep_colors = {colors[0]}
        keep = [v for v in t.leaf_ids if t.colors[v] in keep_colors]
        assert bmg_from_tree(t.restrict(keep)) == g.induced(keep)


def test_single_leaf_tree():
    t = star(["only"], {"only": "c1"})
    assert t.n_leaves == 1 and t.root.is_leaf
    g = bmg_from_tree(t)
    assert g.n == 1 and not g.arcs
