"""Rooted phylogenetic trees with optional leaf colorings.

A tree is phylogenetic when every inner vertex other than the root has at
least two children; the root has at least two children as well unless the
tree consists of a single leaf.  Children are kept in a canonical order
(by smallest descendant leaf id) so that structurally equal trees compare
and serialize identically.

Trees are immutable after construction; all queries are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

from .digraph import ColoredDigraph
from .errors import EmptyRestriction, NotPhylogenetic, UnknownLeaf

Nested = Union[str, tuple]


class TreeNode:
    __slots__ = ("label", "children", "parent", "min_leaf")

    def __init__(self, label=None, children=()):
        self.label = label          # leaf id, None for inner nodes
        self.children = tuple(children)
        self.parent = None
        self.min_leaf = label

    @property
    def is_leaf(self) -> bool:
        return self.label is not None

    def __repr__(self):
        return f"TreeNode({self.label!r})" if self.is_leaf else f"TreeNode(<{len(self.children)}>)"


class PhyloTree:
    __slots__ = ("root", "colors", "_leaves")

    def __init__(self, root: TreeNode, colors: Optional[Mapping[str, str]] = None):
        self.root = root
        self._leaves: dict[str, TreeNode] = {}
        self._index(root)
        if colors is None:
            self.colors = None
        else:
            missing = [v for v in self._leaves if v not in colors]
            if missing:
                raise ValueError(f"missing colors for leaves {missing[:3]}")
            self.colors = {v: colors[v] for v in self._leaves}

    def _index(self, node: TreeNode):
        if node.is_leaf:
            if node.label in self._leaves:
                raise NotPhylogenetic(f"duplicate leaf id {node.label!r}")
            self._leaves[node.label] = node
        else:
            for child in node.children:
                self._index(child)

    # -- construction -------------------------------------------------------

    @classmethod
    def from_nested(cls, nested: Nested, colors: Optional[Mapping[str, str]] = None) -> "PhyloTree":
        """Build a tree from nested tuples of leaf ids, e.g. ``(("x","y"),"z")``."""
        root = _build(nested, is_root=True)
        _canonicalize(root)
        _set_parents(root, None)
        return cls(root, colors)

    def to_nested(self) -> Nested:
        def conv(node):
            return node.label if node.is_leaf else tuple(conv(c) for c in node.children)
        return conv(self.root)

    def with_colors(self, colors: Mapping[str, str]) -> "PhyloTree":
        return PhyloTree.from_nested(self.to_nested(), colors)

    # -- basic queries -------------------------------------------------------

    @property
    def leaf_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._leaves))

    @property
    def n_leaves(self) -> int:
        return len(self._leaves)

    def node_of(self, leaf: str) -> TreeNode:
        try:
            return self._leaves[leaf]
        except KeyError:
            raise UnknownLeaf(f"unknown leaf {leaf!r}") from None

    def postorder(self):
        stack = [(self.root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded or node.is_leaf:
                yield node
            else:
                stack.append((node, True))
                for child in reversed(node.children):
                    stack.append((child, False))

    def inner_nodes(self):
        return (n for n in self.postorder() if not n.is_leaf)

    @property
    def is_binary(self) -> bool:
        return all(len(n.children) == 2 for n in self.inner_nodes())

    def _root_path(self, node: TreeNode) -> list[TreeNode]:
        path = [node]
        while path[-1].parent is not None:
            path.append(path[-1].parent)
        return path

    # -- lca and triples -------------------------------------------------------

    def lca(self, leaves: Iterable[str]) -> TreeNode:
        """Last common ancestor of a nonempty set of leaves."""
        ids = list(leaves)
        if not ids:
            raise ValueError("lca of an empty leaf set")
        paths = [self._root_path(self.node_of(v)) for v in ids]
        common = set(map(id, paths[0]))
        for path in paths[1:]:
            common &= set(map(id, path))
        # deepest common ancestor = first common node on any root path
        for node in paths[0]:
            if id(node) in common:
                return node
        raise AssertionError("root must be a common ancestor")

    def is_strict_ancestor(self, above: TreeNode, below: TreeNode) -> bool:
        walk = below.parent
        while walk is not None:
            if walk is above:
                return True
            walk = walk.parent
        return False

    def displays(self, triple) -> bool:
        """True iff lca(a,b) lies strictly below lca(a,outgroup) = lca(b,outgroup)."""
        a, b, z = triple.a, triple.b, triple.outgroup
        lab = self.lca([a, b])
        laz = self.lca([a, z])
        lbz = self.lca([b, z])
        return laz is lbz and self.is_strict_ancestor(laz, lab)

    # -- restriction and clusters ------------------------------------------------

    def restrict(self, leaves: Iterable[str]) -> "PhyloTree":
        """Tree induced on a leaf subset, with unary inner vertices suppressed."""
        keep = set(leaves)
        if not keep:
            raise EmptyRestriction("restriction to an empty leaf set")
        for v in keep:
            if v not in self._leaves:
                raise UnknownLeaf(f"unknown leaf {v!r}")

        def prune(node) -> Optional[Nested]:
            if node.is_leaf:
                return node.label if node.label in keep else None
            parts = [p for p in (prune(c) for c in node.children) if p is not None]
            if not parts:
                return None
            if len(parts) == 1:
                return parts[0]
            return tuple(parts)

        nested = prune(self.root)
        colors = None if self.colors is None else {v: self.colors[v] for v in keep}
        return PhyloTree.from_nested(nested, colors)

    def clusters(self) -> "ClusterSet":
        """All clusters L(T(v)), including singletons and the full leaf set."""
        below: dict[int, frozenset[str]] = {}
        out = set()
        for node in self.postorder():
            if node.is_leaf:
                cl = frozenset([node.label])
            else:
                cl = frozenset().union(*(below[id(c)] for c in node.children))
            below[id(node)] = cl
            out.add(cl)
        return ClusterSet(clusters=frozenset(out), leaf_set=frozenset(self._leaves))

    # -- equality -----------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, PhyloTree):
            return NotImplemented
        return self.to_nested() == other.to_nested() and self.colors == other.colors

    def __hash__(self):
        colors = None if self.colors is None else tuple(sorted(self.colors.items()))
        return hash((self.to_nested(), colors))

    def __repr__(self):
        return f"PhyloTree(n_leaves={self.n_leaves})"


@dataclass(frozen=True)
class ClusterSet:
    clusters: frozenset[frozenset[str]]
    leaf_set: frozenset[str]

    def nontrivial(self) -> frozenset[frozenset[str]]:
        return frozenset(c for c in self.clusters if len(c) > 1 and c != self.leaf_set)

    def is_hierarchy(self) -> bool:
        cl = sorted(self.clusters, key=lambda c: (len(c), sorted(c)))
        for i, p in enumerate(cl):
            for q in cl[i + 1:]:
                inter = p & q
                if inter and inter != p and inter != q:
                    return False
        return True


def _build(nested: Nested, is_root: bool) -> TreeNode:
    if isinstance(nested, str):
        return TreeNode(label=nested)
    children = tuple(nested)
    if len(children) == 0:
        raise NotPhylogenetic("inner vertex with no children")
    if len(children) == 1:
        raise NotPhylogenetic("inner vertex with a single child")
    return TreeNode(children=[_build(c, False) for c in children])


def _canonicalize(node: TreeNode):
    if node.is_leaf:
        return
    for child in node.children:
        _canonicalize(child)
    node.children = tuple(sorted(node.children, key=lambda c: c.min_leaf))
    node.min_leaf = node.children[0].min_leaf


def _set_parents(node: TreeNode, parent):
    node.parent = parent
    for child in node.children:
        _set_parents(child, node)


def star(leaves: Iterable[str], colors: Optional[Mapping[str, str]] = None) -> PhyloTree:
    """Star tree: all leaves attached to the root (a bare leaf for one id)."""
    ids = sorted(set(leaves))
    if not ids:
        raise ValueError("star tree needs at least one leaf")
    nested: Nested = ids[0] if len(ids) == 1 else tuple(ids)
    return PhyloTree.from_nested(nested, colors)


def bmg_from_tree(tree: PhyloTree) -> ColoredDigraph:
    """Best match graph of a leaf-colored tree.

    There is an arc (x, y) iff the colors differ and no leaf of y's color
    has a lower last common ancestor with x than y.  Computed in one
    bottom-up pass that stores, per node, the leaves of each color in its
    subtree; for a leaf x the best matches of color s are the s-leaves of
    the lowest ancestor whose subtree contains color s.
    """
    if tree.colors is None:
        raise ValueError("bmg_from_tree needs a leaf-colored tree")
    by_color: dict[int, dict[str, tuple[str, ...]]] = {}
    for node in tree.postorder():
        if node.is_leaf:
            by_color[id(node)] = {tree.colors[node.label]: (node.label,)}
        else:
            merged: dict[str, list[str]] = {}
            for child in node.children:
                for color, leaves in by_color[id(child)].items():
                    merged.setdefault(color, []).extend(leaves)
            by_color[id(node)] = {c: tuple(ls) for c, ls in merged.items()}

    arcs = []
    all_colors = set(tree.colors.values())
    for x in tree.leaf_ids:
        remaining = all_colors - {tree.colors[x]}
        node = tree.node_of(x).parent
        while node is not None and remaining:
            found = remaining & by_color[id(node)].keys()
            for color in found:
                arcs.extend((x, y) for y in by_color[id(node)][color])
            remaining -= found
            node = node.parent
    return ColoredDigraph(tree.colors, arcs)
