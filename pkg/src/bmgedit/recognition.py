"""Best match graph recognition and forbidden-subgraph machinery.

Four independent routes decide whether a colored digraph is a best match
graph (BMG):

* ``recognize_bmg``: sink-free coloring plus compatibility of the
  informative/forbidden triple pair, via the mixed-triple tree builder.
  Returns an explaining tree on success.
* ``recognize_bmg_via_aho``: build the supertree of the informative
  triples alone and compare its BMG with the input.
* ``is_2bmg_via_forbidden``: for two colors, sink-freeness plus absence of
  induced F1/F2/F3 subgraphs.
* ``recognize_bmg_via_axioms``: for two colors, the four neighborhood
  axioms N0..N3 evaluated per connected component over thinness classes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .digraph import (ColoredDigraph, connected_components, thinness_classes,
                      validate_coloring)
from .errors import NotABmg, NotConnected, NotProperlyColored, NotTwoColored
from .trees import PhyloTree, bmg_from_tree, star
from .triples import extract_triples, build_tree, mtt

NOT_SF_COLORED = "not_sf_colored"
TRIPLES_INCOMPATIBLE = "triples_incompatible"

# Above this size, two-colored inputs are recognized on the thinness
# quotient instead of on the raw vertex set (see _recognize_two_colored_by_quotient).
QUOTIENT_THRESHOLD = 40


@dataclass(frozen=True)
class RecognitionResult:
    is_bmg: bool
    explaining_tree: Optional[PhyloTree]
    failure_reason: Optional[str]


@dataclass(frozen=True)
class ForbiddenWitness:
    """A vertex tuple matching one of the forbidden patterns.

    ``vertices`` follows the template roles: (x1, x2, y1, y2) for F1/F2,
    (x1, x2, y1, y2, y3) for F3, (x, x', y, y') for hourglasses, and the
    single sinking vertex for ``sink`` (with ``missing_color`` set).
    """
    kind: str
    vertices: tuple[str, ...]
    missing_color: Optional[str] = None

    def holds_in(self, graph: ColoredDigraph) -> bool:
        """Re-check this witness against its defining arc/non-arc pattern."""
        E = graph.arcs
        c = graph.colors
        if self.kind == "sink":
            (x,) = self.vertices
            return all(c[y] != self.missing_color for y in graph.out(x))
        if self.kind == "F1":
            x1, x2, y1, y2 = self.vertices
            return (c[x1] == c[x2] != c[y1] == c[y2]
                    and (x1, y1) in E and (y2, x2) in E and (y1, x2) in E
                    and (x1, y2) not in E and (y2, x1) not in E)
        if self.kind == "F2":
            x1, x2, y1, y2 = self.vertices
            return (c[x1] == c[x2] != c[y1] == c[y2]
                    and (x1, y1) in E and (y1, x2) in E and (x2, y2) in E
                    and (x1, y2) not in E)
        if self.kind == "F3":
            x1, x2, y1, y2, y3 = self.vertices
            return (c[x1] == c[x2] != c[y1] == c[y2] == c[y3]
                    and (x1, y1) in E and (x2, y2) in E
                    and (x1, y3) in E and (x2, y3) in E
                    and (x1, y2) not in E and (x2, y1) not in E)
        if self.kind == "hourglass":
            x, xp, y, yp = self.vertices
            return (c[x] == c[xp] != c[y] == c[yp]
                    and (x, y) in E and (y, x) in E
                    and (xp, yp) in E and (yp, xp) in E
                    and (x, yp) in E and (y, xp) in E
                    and (yp, x) not in E and (xp, y) not in E)
        raise ValueError(f"unknown witness kind {self.kind!r}")


# -- recognition ------------------------------------------------------------


def recognize_bmg(graph: ColoredDigraph) -> RecognitionResult:
    """Decide BMG-ness; on success return a tree that explains the graph.

    A graph is a BMG iff its coloring is sink-free and the pair of
    informative and forbidden triples is compatible.  When no informative
    or forbidden triple exists (one color, or all colors distinct), any
    tree explains a sink-free graph and the star is returned.
    """
    report = validate_coloring(graph)
    if not report.sink_free:
        return RecognitionResult(False, None, NOT_SF_COLORED)
    if graph.n == 0:
        raise ValueError("recognition needs at least one vertex")
    if graph.num_colors < 2 or all(
            len(graph.vertices_of_color(s)) == 1 for s in graph.color_set):
        return RecognitionResult(True, star(graph.vertices, graph.colors), None)
    if graph.num_colors == 2 and graph.n > QUOTIENT_THRESHOLD:
        return _recognize_two_colored_by_quotient(graph)
    pair = extract_triples(graph)
    tree = mtt(pair.informative, pair.forbidden, graph.vertices)
    if tree is None:
        return RecognitionResult(False, None, TRIPLES_INCOMPATIBLE)
    return RecognitionResult(True, tree.with_colors(graph.colors), None)


def _recognize_two_colored_by_quotient(graph: ColoredDigraph) -> RecognitionResult:
    """Recognition of a sink-free 2-colored graph on its thinness quotient.

    In a sink-free properly colored graph, vertices with identical in- and
    out-neighborhoods share a color, and each neighborhood is a union of
    such classes.  Collapsing every class to one representative therefore
    yields a (thin) 2-colored graph that satisfies the neighborhood axioms
    exactly when the original component does, so it is a BMG exactly when
    the component is one.  A tree explaining the quotient expands to a tree
    explaining the component by replacing each class leaf with an inner
    node whose children are the class members.  Components are finally
    joined under a common root, which is sound because every sink-free
    2-colored component contains both colors.
    """
    parts = []
    for comp in connected_components(graph):
        sub = graph.induced(comp)
        classes = thinness_classes(sub)
        members_of = {cls[0]: cls for cls in classes}
        quotient = sub.induced(members_of.keys())
        pair = extract_triples(quotient)
        qtree = mtt(pair.informative, pair.forbidden, quotient.vertices)
        if qtree is None:
            return RecognitionResult(False, None, TRIPLES_INCOMPATIBLE)

        def expand(nested):
            if isinstance(nested, str):
                cls = members_of[nested]
                return cls[0] if len(cls) == 1 else cls
            return tuple(expand(part) for part in nested)

        parts.append(expand(qtree.to_nested()))
    nested = parts[0] if len(parts) == 1 else tuple(parts)
    tree = PhyloTree.from_nested(nested, graph.colors)
    return RecognitionResult(True, tree, None)


def recognize_bmg_via_aho(graph: ColoredDigraph) -> bool:
    """True iff the supertree of the informative triples reproduces the graph."""
    pair = extract_triples(graph)
    tree = build_tree(pair.informative, graph.vertices)
    if tree is None:
        return False
    return bmg_from_tree(tree.with_colors(graph.colors)) == graph


# -- forbidden subgraph scans --------------------------------------------------


def _require_proper(graph: ColoredDigraph):
    if not all(graph.colors[x] != graph.colors[y] for x, y in graph.arcs):
        raise NotProperlyColored("graph has an arc between same-colored vertices")


def _require_two_colored(graph: ColoredDigraph):
    _require_proper(graph)
    if graph.num_colors != 2:
        raise NotTwoColored(f"expected 2 colors, found {graph.num_colors}")


def _same_color_pairs(graph: ColoredDigraph, ordered: bool) -> Iterator[tuple[str, str]]:
    for color in graph.color_set:
        members = graph.vertices_of_color(color)
        for i, x1 in enumerate(members):
            for j, x2 in enumerate(members):
                if i == j or (not ordered and i > j):
                    continue
                yield x1, x2


def _iter_f1(graph: ColoredDigraph) -> Iterator[ForbiddenWitness]:
    for x1, x2 in _same_color_pairs(graph, ordered=True):
        y1s = sorted(graph.out(x1) & graph.in_(x2))
        if not y1s:
            continue
        y2s = sorted(graph.in_(x2) - graph.out(x1) - graph.in_(x1))
        for y1 in y1s:
            for y2 in y2s:
                yield ForbiddenWitness("F1", (x1, x2, y1, y2))


def _iter_f2(graph: ColoredDigraph) -> Iterator[ForbiddenWitness]:
    for x1, x2 in _same_color_pairs(graph, ordered=True):
        y1s = sorted(graph.out(x1) & graph.in_(x2))
        if not y1s:
            continue
        y2s = sorted(graph.out(x2) - graph.out(x1))
        for y1 in y1s:
            for y2 in y2s:
                yield ForbiddenWitness("F2", (x1, x2, y1, y2))


def _iter_f3(graph: ColoredDigraph) -> Iterator[ForbiddenWitness]:
    # (x1, x2) needs a common out-neighbor (the y3 role); the roles of the
    # tuple are invariant under swapping (x1,y1) with (x2,y2), so x1 < x2
    # fixes one representative per witness.
    for x1, x2 in _same_color_pairs(graph, ordered=False):
        y3s = sorted(graph.out(x1) & graph.out(x2))
        if not y3s:
            continue
        y1s = sorted(graph.out(x1) - graph.out(x2))
        y2s = sorted(graph.out(x2) - graph.out(x1))
        for y1 in y1s:
            for y2 in y2s:
                for y3 in y3s:
                    yield ForbiddenWitness("F3", (x1, x2, y1, y2, y3))


_SCANNERS = {"F1": _iter_f1, "F2": _iter_f2, "F3": _iter_f3}


def scan_forbidden_subgraphs(graph: ColoredDigraph,
                             kinds: tuple[str, ...] = ("F1", "F2", "F3"),
                             ) -> list[ForbiddenWitness]:
    """All induced F1/F2/F3 witnesses of a properly 2-colored graph."""
    _require_two_colored(graph)
    witnesses = []
    for kind in ("F1", "F2", "F3"):
        if kind in kinds:
            witnesses.extend(_SCANNERS[kind](graph))
    return witnesses


def scan_hourglasses(graph: ColoredDigraph) -> list[ForbiddenWitness]:
    """All induced hourglasses [xy <> x'y'] of a properly colored graph."""
    _require_proper(graph)
    bidirectional: dict[str, list[tuple[str, str]]] = {}
    for x, y in graph.sorted_arcs():
        if (y, x) in graph.arcs:
            bidirectional.setdefault(graph.colors[x], []).append((x, y))
    witnesses = []
    for color in sorted(bidirectional):
        pairs = bidirectional[color]
        for (x, y), (xp, yp) in itertools.product(pairs, pairs):
            if x == xp or y == yp or graph.colors[y] != graph.colors[yp]:
                continue
            if x > y:
                continue  # (x,x',y,y') and (y,y',x,x') name the same hourglass
            if ((x, yp) in graph.arcs and (y, xp) in graph.arcs
                    and (yp, x) not in graph.arcs and (xp, y) not in graph.arcs):
                witnesses.append(ForbiddenWitness("hourglass", (x, xp, y, yp)))
    return witnesses


def is_2bmg_via_forbidden(graph: ColoredDigraph) -> bool:
    """2-colored BMG test: sink-free and no induced F1-, F2-, or F3-graph."""
    _require_two_colored(graph)
    if not validate_coloring(graph).sink_free:
        return False
    for scanner in (_iter_f1, _iter_f2, _iter_f3):
        if next(scanner(graph), None) is not None:
            return False
    return True


def find_violation(graph: ColoredDigraph) -> Optional[ForbiddenWitness]:
    """First sink/F1/F2/F3 witness of a properly 2-colored graph, or None."""
    _require_two_colored(graph)
    report = validate_coloring(graph)
    if report.witnesses:
        x, s = report.witnesses[0]
        return ForbiddenWitness("sink", (x,), missing_color=s)
    for scanner in (_iter_f1, _iter_f2, _iter_f3):
        witness = next(scanner(graph), None)
        if witness is not None:
            return witness
    return None


# -- neighborhood axioms -------------------------------------------------------


@dataclass(frozen=True)
class NeighborhoodAxioms:
    n0: bool
    n1: bool
    n2: bool
    n3: bool

    @property
    def all_hold(self) -> bool:
        return self.n0 and self.n1 and self.n2 and self.n3


def check_neighborhood_axioms(graph: ColoredDigraph) -> NeighborhoodAxioms:
    """Evaluate the axioms N0..N3 over the thinness classes.

    The graph must be connected and properly 2-colored.  Out- and
    in-neighborhoods of a class are unions of classes, so all four
    conditions reduce to set algebra over class indices.
    """
    _require_two_colored(graph)
    if len(connected_components(graph)) != 1:
        raise NotConnected("axioms are evaluated on connected graphs")
    classes = thinness_classes(graph)
    index_of = {}
    for i, cls in enumerate(classes):
        for v in cls:
            index_of[v] = i
    n_out = [frozenset(index_of[w] for w in graph.out(cls[0])) for cls in classes]
    n_in = [frozenset(index_of[w] for w in graph.in_(cls[0])) for cls in classes]

    def nbh(indices: frozenset[int]) -> frozenset[int]:
        return frozenset().union(*(n_out[i] for i in indices)) if indices else frozenset()

    nn = [nbh(s) for s in n_out]
    nnn = [nbh(s) for s in nn]
    k = len(classes)

    n0 = all(n_out[i] for i in range(k))
    n2 = all(nnn[i] <= n_out[i] for i in range(k))
    n1 = True
    n3 = True
    for i in range(k):
        for j in range(i, k):
            if i not in n_out[j] and j not in n_out[i]:
                if (n_out[i] & nn[j]) or (n_out[j] & nn[i]):
                    n1 = False
            if i not in nn[j] and j not in nn[i] and (n_out[i] & n_out[j]):
                if n_in[i] != n_in[j] or not (n_out[i] <= n_out[j] or n_out[j] <= n_out[i]):
                    n3 = False
    return NeighborhoodAxioms(n0, n1, n2, n3)


def recognize_bmg_via_axioms(graph: ColoredDigraph) -> bool:
    """2-colored BMG test via per-component neighborhood axioms.

    Components of a sink-free properly 2-colored graph all carry both
    colors, so the disjoint union is a BMG exactly when every component
    satisfies N0..N3.
    """
    _require_two_colored(graph)
    for comp in connected_components(graph):
        sub = graph.induced(comp)
        if sub.num_colors < 2:
            return False  # an isolated color class is all sinks
        if not check_neighborhood_axioms(sub).all_hold:
            return False
    return True


# -- binary explainability ------------------------------------------------------


def is_binary_explainable(graph: ColoredDigraph) -> bool:
    """True iff this BMG can be explained by a binary tree (no hourglass)."""
    if not recognize_bmg(graph).is_bmg:
        raise NotABmg("binary explainability is defined for BMGs only")
    return not scan_hourglasses(graph)


# -- the forbidden-subgraph catalog ----------------------------------------------


_F1_TEMPLATE = (("x1", "x2"), ("y1", "y2"),
                (("x1", "y1"), ("y2", "x2"), ("y1", "x2")),
                (("x1", "y2"), ("y2", "x1")))
_F2_TEMPLATE = (("x1", "x2"), ("y1", "y2"),
                (("x1", "y1"), ("y1", "x2"), ("x2", "y2")),
                (("x1", "y2"),))
_F3_TEMPLATE = (("x1", "x2"), ("y1", "y2", "y3"),
                (("x1", "y1"), ("x2", "y2"), ("x1", "y3"), ("x2", "y3")),
                (("x1", "y2"), ("x2", "y1")))


def _template_instantiations(template) -> list[ColoredDigraph]:
    xs, ys, required, excluded = template
    colors = {v: "A" for v in xs} | {v: "B" for v in ys}
    cross = [(a, b) for a in xs for b in ys] + [(b, a) for a in xs for b in ys]
    optional = sorted(set(cross) - set(required) - set(excluded))
    graphs = []
    for r in range(len(optional) + 1):
        for extra in itertools.combinations(optional, r):
            graphs.append(ColoredDigraph(colors, set(required) | set(extra)))
    graphs.sort(key=lambda g: g.sorted_arcs())
    return graphs


def _canonical_form(graph: ColoredDigraph):
    """Minimum encoding over vertex bijections; colors may be permuted.

    Treating the two colors as exchangeable matches how the template
    families are counted (e.g. a pattern and its color-swapped mirror fall
    into one class).
    """
    vertices = graph.vertices
    color_maps = [dict(zip(graph.color_set, perm))
                  for perm in itertools.permutations(graph.color_set)]
    best = None
    for cmap in color_maps:
        for perm in itertools.permutations(vertices):
            pos = {v: i for i, v in enumerate(perm)}
            enc = (tuple(cmap[graph.colors[v]] for v in perm),
                   tuple(sorted((pos[x], pos[y]) for x, y in graph.arcs)))
            if best is None or enc < best:
                best = enc
    return best


@dataclass(frozen=True)
class ForbiddenClassCatalog:
    f1_graphs: int
    f2_graphs: int
    f3_graphs: int
    f1_f2_iso_classes: int
    overlap: int
    f3_only_classes: int
    nonredundant_total: int
    representatives: tuple[tuple[frozenset[str], ColoredDigraph], ...] = field(repr=False)


def enumerate_forbidden_classes() -> ForbiddenClassCatalog:
    """Materialize all template instantiations and group them by isomorphism.

    The F1/F2/F3 templates have 3, 4 and 6 optional arcs and hence 8, 16
    and 64 instantiations.  F1 and F2 graphs are grouped into isomorphism
    classes (color-preserving); F3 instantiations that contain no induced
    F1- or F2-graph contribute the remaining non-redundant classes.
    """
    f1 = _template_instantiations(_F1_TEMPLATE)
    f2 = _template_instantiations(_F2_TEMPLATE)
    f3 = _template_instantiations(_F3_TEMPLATE)

    classes: dict[tuple, tuple[set[str], ColoredDigraph]] = {}
    for kind, graphs in (("F1", f1), ("F2", f2)):
        for g in graphs:
            key = _canonical_form(g)
            if key not in classes:
                classes[key] = ({kind}, g)
            else:
                classes[key][0].add(kind)

    f3_only = {}
    for g in f3:
        if not scan_forbidden_subgraphs(g, kinds=("F1", "F2")):
            key = _canonical_form(g)
            if key not in f3_only:
                f3_only[key] = ({"F3"}, g)

    overlap = sum(1 for kinds, _ in classes.values() if kinds == {"F1", "F2"})
    reps = [(frozenset(kinds), g) for kinds, g in classes.values()]
    reps += [(frozenset(kinds), g) for kinds, g in f3_only.values()]
    reps.sort(key=lambda item: (sorted(item[0]), item[1].sorted_arcs()))
    return ForbiddenClassCatalog(
        f1_graphs=len(f1),
        f2_graphs=len(f2),
        f3_graphs=len(f3),
        f1_f2_iso_classes=len(classes),
        overlap=overlap,
        f3_only_classes=len(f3_only),
        nonredundant_total=len(classes) + len(f3_only),
        representatives=tuple(reps),
    )
