"""Colored digraph data model: coloring checks, thinness classes, edits.

Graphs are immutable after construction and safe to share across threads;
every function in this module is pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import ModeViolation, UnknownVertex

DELETION = "deletion"
COMPLETION = "completion"
EDITING = "editing"
MODES = (DELETION, COMPLETION, EDITING)


class ColoredDigraph:
    """Simple loop-free digraph with a total vertex coloring.

    Vertex ids and colors are opaque strings.  All deterministic orderings
    (vertex lists, arc lists, class lists) use lexicographic id order.
    """

    __slots__ = ("vertices", "colors", "arcs", "_out", "_in", "_by_color",
                 "_sorted_arcs", "_hash")

    def __init__(self, colors: Mapping[str, str], arcs: Iterable[tuple[str, str]] = ()):
        self.colors = dict(colors)
        self.vertices = tuple(sorted(self.colors))
        arc_set = set()
        for arc in arcs:
            x, y = arc
            if x == y:
                raise ValueError(f"self-loop on {x!r}")
            if x not in self.colors or y not in self.colors:
                raise UnknownVertex(f"arc ({x!r}, {y!r}) references an unknown vertex")
            arc_set.add((x, y))
        self.arcs = frozenset(arc_set)
        out: dict[str, set[str]] = {v: set() for v in self.vertices}
        inn: dict[str, set[str]] = {v: set() for v in self.vertices}
        for x, y in self.arcs:
            out[x].add(y)
            inn[y].add(x)
        self._out = {v: frozenset(s) for v, s in out.items()}
        self._in = {v: frozenset(s) for v, s in inn.items()}
        by_color: dict[str, list[str]] = {}
        for v in self.vertices:
            by_color.setdefault(self.colors[v], []).append(v)
        self._by_color = {c: tuple(vs) for c, vs in by_color.items()}
        self._sorted_arcs = None
        self._hash = None

    # -- basic queries ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.vertices)

    def color_of(self, v: str) -> str:
        try:
            return self.colors[v]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {v!r}") from None

    @property
    def color_set(self) -> tuple[str, ...]:
        return tuple(sorted(self._by_color))

    @property
    def num_colors(self) -> int:
        return len(self._by_color)

    def vertices_of_color(self, color: str) -> tuple[str, ...]:
        return self._by_color.get(color, ())

    def out(self, v: str) -> frozenset[str]:
        try:
            return self._out[v]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {v!r}") from None

    def in_(self, v: str) -> frozenset[str]:
        try:
            return self._in[v]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {v!r}") from None

    def has_arc(self, x: str, y: str) -> bool:
        return (x, y) in self.arcs

    def sorted_arcs(self) -> tuple[tuple[str, str], ...]:
        if self._sorted_arcs is None:
            self._sorted_arcs = tuple(sorted(self.arcs))
        return self._sorted_arcs

    def induced(self, vertices: Iterable[str]) -> "ColoredDigraph":
        keep = set(vertices)
        for v in keep:
            if v not in self.colors:
                raise UnknownVertex(f"unknown vertex {v!r}")
        return ColoredDigraph(
            {v: self.colors[v] for v in keep},
            (a for a in self.arcs if a[0] in keep and a[1] in keep),
        )

    # -- equality ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, ColoredDigraph):
            return NotImplemented
        return self.colors == other.colors and self.arcs == other.arcs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(sorted(self.colors.items())), self.arcs))
        return self._hash

    def __repr__(self):
        return f"ColoredDigraph(n={self.n}, colors={self.num_colors}, arcs={len(self.arcs)})"


@dataclass(frozen=True)
class ColoringReport:
    """Outcome of a coloring check.

    ``witnesses`` lists the (vertex, color) pairs for which the vertex has
    no out-neighbor of that color; ``sink_free`` holds exactly when the
    coloring is proper and there are no such pairs.
    """
    proper: bool
    sink_free: bool
    witnesses: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class EditSet:
    """A set of ordered vertex pairs to delete, add, or toggle."""
    pairs: frozenset[tuple[str, str]]
    mode: str

    def __post_init__(self):
        if self.mode not in MODES:
            raise ModeViolation(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "pairs", frozenset(tuple(p) for p in self.pairs))
        for x, y in self.pairs:
            if x == y:
                raise ModeViolation(f"self-loop pair ({x!r}, {y!r})")

    @property
    def k(self) -> int:
        return len(self.pairs)

    def sorted_pairs(self) -> tuple[tuple[str, str], ...]:
        return tuple(sorted(self.pairs))


def validate_coloring(graph: ColoredDigraph) -> ColoringReport:
    """Check whether the coloring is proper and sink-free.

    A coloring is sink-free when it is proper and every vertex has an
    out-neighbor of every color other than its own.
    """
    proper = all(graph.colors[x] != graph.colors[y] for x, y in graph.arcs)
    witnesses = []
    all_colors = graph.color_set
    for x in graph.vertices:
        seen = {graph.colors[y] for y in graph.out(x)}
        for s in all_colors:
            if s != graph.colors[x] and s not in seen:
                witnesses.append((x, s))
    return ColoringReport(proper=proper,
                          sink_free=proper and not witnesses,
                          witnesses=tuple(witnesses))


def thinness_classes(graph: ColoredDigraph) -> tuple[tuple[str, ...], ...]:
    """Partition vertices into classes with equal out- and in-neighborhoods.

    Classes are sorted internally and listed by their smallest member.
    """
    groups: dict[tuple[frozenset, frozenset], list[str]] = {}
    for v in graph.vertices:
        groups.setdefault((graph.out(v), graph.in_(v)), []).append(v)
    classes = [tuple(members) for members in groups.values()]
    classes.sort(key=lambda c: c[0])
    return tuple(classes)


def apply_edit(graph: ColoredDigraph, edits: EditSet) -> ColoredDigraph:
    """Return the graph with ``edits`` applied; the coloring is unchanged.

    Deletion removes arcs (all pairs must be arcs), completion adds arcs
    (no pair may be an arc), editing takes the symmetric difference.
    """
    for x, y in edits.pairs:
        if x not in graph.colors or y not in graph.colors:
            raise UnknownVertex(f"edit pair ({x!r}, {y!r}) references an unknown vertex")
    if edits.mode == DELETION:
        missing = edits.pairs - graph.arcs
        if missing:
            raise ModeViolation(f"deletion of non-arcs: {sorted(missing)[:3]}")
        new_arcs = graph.arcs - edits.pairs
    elif edits.mode == COMPLETION:
        present = edits.pairs & graph.arcs
        if present:
            raise ModeViolation(f"completion of existing arcs: {sorted(present)[:3]}")
        new_arcs = graph.arcs | edits.pairs
    else:
        new_arcs = graph.arcs ^ edits.pairs
    return ColoredDigraph(graph.colors, new_arcs)


def connected_components(graph: ColoredDigraph) -> tuple[tuple[str, ...], ...]:
    """Weakly connected components as sorted vertex tuples, by smallest member."""
    seen: set[str] = set()
    components = []
    for start in graph.vertices:
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in graph.out(v) | graph.in_(v):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        components.append(tuple(sorted(comp)))
    return tuple(components)
