"""Rooted triples: extraction from colored digraphs and tree construction.

``build_tree`` is the classic component-recursion supertree construction
for a set of required triples.  ``mtt`` additionally takes triples that the
output must *not* display: at each recursion level the required triples
define blocks (connected components), and any forbidden triple whose pair
lies inside one block while its outgroup sits outside would become
displayed by the split, so the outgroup's block is merged in; this repeats
to a fixed point.  The fixed point is independent of processing order
because merging is monotone, but forbidden triples are swept in canonical
sorted order anyway for reproducibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .digraph import ColoredDigraph
from .trees import PhyloTree


@dataclass(frozen=True, order=True)
class Triple:
    """Rooted triple ab|outgroup; the pair is stored sorted."""
    a: str
    b: str
    outgroup: str

    @staticmethod
    def of(x: str, y: str, outgroup: str) -> "Triple":
        if len({x, y, outgroup}) != 3:
            raise ValueError(f"triple leaves must be distinct: {x!r}, {y!r}, {outgroup!r}")
        return Triple(min(x, y), max(x, y), outgroup)

    @property
    def leaves(self) -> frozenset[str]:
        return frozenset((self.a, self.b, self.outgroup))

    def __str__(self):
        return f"{self.a}{self.b}|{self.outgroup}"


@dataclass(frozen=True)
class TriplePair:
    """Informative and forbidden triples of a colored digraph."""
    informative: frozenset[Triple]
    forbidden: frozenset[Triple]
    leaf_universe: tuple[str, ...]


def extract_triples(graph: ColoredDigraph) -> TriplePair:
    """Informative and forbidden triples xy|y' with σ(x) ≠ σ(y) = σ(y').

    xy|y' is informative when (x,y) is an arc and (x,y') is not, and
    forbidden when both (x,y) and (x,y') are arcs (then so is xy'|y).
    """
    informative = set()
    forbidden = set()
    for x in graph.vertices:
        cx = graph.colors[x]
        nx = graph.out(x)
        for color in graph.color_set:
            if color == cx:
                continue
            members = graph.vertices_of_color(color)
            hits = [y for y in members if y in nx]
            misses = [y for y in members if y not in nx]
            for y in hits:
                for y2 in misses:
                    informative.add(Triple.of(x, y, y2))
            for i, y in enumerate(hits):
                for y2 in hits[i + 1:]:
                    forbidden.add(Triple.of(x, y, y2))
                    forbidden.add(Triple.of(x, y2, y))
    return TriplePair(frozenset(informative), frozenset(forbidden), graph.vertices)


class _DSU:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx
            return True
        return False


def _blocks(dsu: _DSU, leaves) -> list[tuple[str, ...]]:
    groups: dict[str, list[str]] = {}
    for v in leaves:
        groups.setdefault(dsu.find(v), []).append(v)
    blocks = [tuple(sorted(g)) for g in groups.values()]
    blocks.sort(key=lambda b: b[0])
    return blocks


def _check_universe(triples, leaves):
    if not leaves:
        raise ValueError("tree construction needs at least one leaf")
    universe = set(leaves)
    for t in triples:
        if not t.leaves <= universe:
            raise ValueError(f"triple {t} uses leaves outside the given set")


def build_tree(required: Iterable[Triple], leaves: Iterable[str]) -> Optional[PhyloTree]:
    """Tree on ``leaves`` displaying every required triple, or None.

    Output is uncolored and uses multifurcations freely (one child per
    component of the triple graph at each level).
    """
    leaves = tuple(sorted(set(leaves)))
    required = sorted(set(required))
    _check_universe(required, leaves)

    def rec(cur_leaves, cur_triples):
        if len(cur_leaves) == 1:
            return cur_leaves[0]
        dsu = _DSU(cur_leaves)
        for t in cur_triples:
            dsu.union(t.a, t.b)
        blocks = _blocks(dsu, cur_leaves)
        if len(blocks) == 1:
            return None
        children = []
        for block in blocks:
            inside = set(block)
            sub = [t for t in cur_triples if t.leaves <= inside]
            child = rec(block, sub)
            if child is None:
                return None
            children.append(child)
        return tuple(children)

    nested = rec(leaves, required)
    return None if nested is None else PhyloTree.from_nested(nested)


def mtt(required: Iterable[Triple], forbidden: Iterable[Triple],
        leaves: Iterable[str]) -> Optional[PhyloTree]:
    """Tree displaying all required and none of the forbidden triples, or None."""
    leaves = tuple(sorted(set(leaves)))
    required = sorted(set(required))
    forbidden = sorted(set(forbidden))
    _check_universe(required, leaves)
    _check_universe(forbidden, leaves)

    def rec(cur_leaves, cur_required, cur_forbidden):
        if len(cur_leaves) == 1:
            return cur_leaves[0]
        dsu = _DSU(cur_leaves)
        for t in cur_required:
            dsu.union(t.a, t.b)
        changed = True
        while changed:
            changed = False
            for t in cur_forbidden:
                ra, rz = dsu.find(t.a), dsu.find(t.outgroup)
                if ra == dsu.find(t.b) and ra != rz:
                    dsu.union(ra, rz)
                    changed = True
        blocks = _blocks(dsu, cur_leaves)
        if len(blocks) == 1:
            return None
        children = []
        for block in blocks:
            inside = set(block)
            sub_r = [t for t in cur_required if t.leaves <= inside]
            sub_f = [t for t in cur_forbidden if t.leaves <= inside]
            child = rec(block, sub_r, sub_f)
            if child is None:
                return None
            children.append(child)
        return tuple(children)

    nested = rec(leaves, required, forbidden)
    return None if nested is None else PhyloTree.from_nested(nested)
