"""Instance generators: random trees, perturbations, and reduction gadgets.

All randomness flows through :class:`SplitMix64`, a self-contained 64-bit
PRNG, so that seeded instances are bit-identical across platforms and
implementations (Python's own generators make no such promise).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .digraph import (COMPLETION, DELETION, EDITING, ColoredDigraph, EditSet,
                      apply_edit)
from .errors import (BadComponents, BadInstance, BadParameters, EmptyPart,
                     NotAnExactCover, NotEnoughPairs)
from .trees import PhyloTree

_MASK = (1 << 64) - 1


class SplitMix64:
    """splitmix64 generator: 64-bit state advanced by the golden-gamma step.

    next_u64: state += 0x9E3779B97F4A7C15; z = state;
    z = (z ^ z>>30) * 0xBF58476D1CE4E5B9; z = (z ^ z>>27) * 0x94D049BB133111EB;
    return z ^ z>>31 (all mod 2^64).  ``randrange`` draws by rejection below
    the largest multiple of n, so results are exactly uniform.
    """

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def randrange(self, n: int) -> int:
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            draw = self.next_u64()
            if draw < limit:
                return draw % n

    def random(self) -> float:
        return (self.next_u64() >> 11) / float(1 << 53)

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def shuffle(self, items: list):
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, seq, k: int) -> list:
        items = list(seq)
        if k > len(items):
            raise ValueError("sample larger than population")
        self.shuffle(items)
        return items[:k]


# -- random instances ------------------------------------------------------------


def random_colored_tree(n: int, colors: int, seed: int,
                        multifurcation_p: float = 0.2) -> PhyloTree:
    """Random phylogenetic tree on n leaves with a surjective coloring.

    Shapes are drawn by recursively partitioning the leaf set into two or,
    with probability ``multifurcation_p``, more blocks, so non-binary
    vertices occur.  Leaves are ``L001..``, colors ``c1..``.
    """
    if n < 1 or colors < 1 or colors > n:
        raise BadParameters(f"need n >= colors >= 1, got n={n}, colors={colors}")
    rng = SplitMix64(seed)
    leaves = [f"L{i:03d}" for i in range(1, n + 1)]

    def shape(block: list) -> object:
        if len(block) == 1:
            return block[0]
        parts = 2
        if len(block) >= 3 and rng.random() < multifurcation_p:
            parts = 3 + rng.randrange(len(block) - 2)
        items = list(block)
        rng.shuffle(items)
        # one leaf per part first, the rest thrown in at random
        blocks = [[items[i]] for i in range(parts)]
        for leaf in items[parts:]:
            blocks[rng.randrange(parts)].append(leaf)
        return tuple(shape(b) for b in blocks)

    color_names = [f"c{i}" for i in range(1, colors + 1)]
    carriers = rng.sample(leaves, colors)
    coloring = dict(zip(carriers, color_names))
    for leaf in leaves:
        if leaf not in coloring:
            coloring[leaf] = color_names[rng.randrange(colors)]
    return PhyloTree.from_nested(shape(leaves), coloring)


def perturb(graph: ColoredDigraph, flips: int, seed: int,
            mode: str = EDITING) -> tuple[ColoredDigraph, EditSet]:
    """Flip ``flips`` distinct cross-color pairs uniformly at random.

    ``mode`` constrains the flip direction: deletion removes existing
    arcs, completion adds missing ones, editing toggles either.  Returns
    the perturbed graph and the applied edit set (a ground-truth upper
    bound for solvers).
    """
    cross = [(x, y) for x in graph.vertices for y in graph.vertices
             if x != y and graph.colors[x] != graph.colors[y]]
    if mode == DELETION:
        universe = [p for p in cross if p in graph.arcs]
    elif mode == COMPLETION:
        universe = [p for p in cross if p not in graph.arcs]
    elif mode == EDITING:
        universe = cross
    else:
        raise BadParameters(f"unknown mode {mode!r}")
    if flips > len(universe):
        raise NotEnoughPairs(f"asked for {flips} flips, only {len(universe)} pairs available")
    rng = SplitMix64(seed)
    chosen = rng.sample(sorted(universe), flips)
    edits = EditSet(frozenset(chosen), mode)
    return apply_edit(graph, edits), edits


# -- bi-cluster construction -------------------------------------------------------


def bmg_special(components: Sequence[tuple[int, int]], chosen: int,
                colors: tuple[str, str] = ("black", "white")) -> ColoredDigraph:
    """Union of bi-cliques plus all cross-color arcs out of one component.

    ``components`` lists (black, white) vertex counts per bi-clique; the
    component at index ``chosen`` sends arcs to every differently colored
    vertex elsewhere.  The result is always a BMG.
    """
    if len(components) < 2:
        raise BadComponents("need at least two components")
    if not 0 <= chosen < len(components):
        raise BadComponents(f"chosen index {chosen} out of range")
    black, white = colors
    coloring = {}
    groups = []
    for i, (nb, nw) in enumerate(components, 1):
        if nb < 1 or nw < 1:
            raise BadComponents("every bi-clique needs both colors")
        blacks = [f"K{i}_b{j}" for j in range(1, nb + 1)]
        whites = [f"K{i}_w{j}" for j in range(1, nw + 1)]
        coloring.update({v: black for v in blacks})
        coloring.update({v: white for v in whites})
        groups.append((blacks, whites))
    arcs = set()
    for blacks, whites in groups:
        arcs.update((b, w) for b in blacks for w in whites)
        arcs.update((w, b) for b in blacks for w in whites)
    sb, sw = groups[chosen]
    for i, (blacks, whites) in enumerate(groups):
        if i == chosen:
            continue
        arcs.update((x, w) for x in sb for w in whites)
        arcs.update((x, b) for x in sw for b in blacks)
    return ColoredDigraph(coloring, arcs)


# -- exact 3-cover gadget -------------------------------------------------------------


@dataclass(frozen=True)
class X3cInstance:
    """Exact-3-cover instance: a universe of size 3t and 3-element subsets.

    Duplicate subsets are allowed; the construction below stays valid and
    the smallest interesting sizes (t=1 with m=2) require them.
    """
    universe: tuple[str, ...]
    collection: tuple[frozenset[str], ...]

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(sorted(set(self.universe))))
        object.__setattr__(self, "collection",
                           tuple(frozenset(c) for c in self.collection))
        if len(self.universe) % 3 != 0 or not self.universe:
            raise BadInstance(f"universe size {len(self.universe)} is not a positive multiple of 3")
        for c in self.collection:
            if len(c) != 3 or not c <= set(self.universe):
                raise BadInstance(f"subset {sorted(c)} is not a 3-subset of the universe")
        if self.m <= self.t:
            raise BadInstance(f"need more subsets than t (m={self.m}, t={self.t})")

    @property
    def t(self) -> int:
        return len(self.universe) // 3

    @property
    def m(self) -> int:
        return len(self.collection)


@dataclass(frozen=True)
class BipartiteGraph:
    """Undirected bipartite graph with parts P and Q."""
    p: tuple[str, ...]
    q: tuple[str, ...]
    edges: frozenset[tuple[str, str]]  # stored as (p-name, q-name)

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(self.p))
        object.__setattr__(self, "q", tuple(self.q))
        if not self.p or not self.q:
            raise EmptyPart("both parts must be nonempty")
        if set(self.p) & set(self.q):
            raise BadInstance("parts must be disjoint")
        edges = frozenset(tuple(e) for e in self.edges)
        for a, b in edges:
            if a not in self.p or b not in self.q:
                raise BadInstance(f"edge ({a!r}, {b!r}) does not cross the parts")
        object.__setattr__(self, "edges", edges)


@dataclass(frozen=True)
class GadgetOutput:
    graph: ColoredDigraph
    k: Optional[int]
    role_map: dict[str, tuple]
    constants: dict[str, int]
    faithful: bool = True
    instance: object = field(default=None, repr=False)


def x3c_gadget(inst: X3cInstance, scale: float = 1.0) -> GadgetOutput:
    """Arc-deletion/editing hardness gadget for an exact-3-cover instance.

    One 2-colored bi-clique pair (s_b, s_w) per universe element forms S;
    each subset C_i contributes bi-cliques X_i (r+r vertices) and Y_i
    (q+q vertices) with one-way arcs X_i -> Y_i and arcs from X_i into the
    S-vertices of its three elements.  Faithful sizes are r = 18 t^2,
    k = 6r(m-t) + r - 18t and q = 3k; ``scale`` < 1 shrinks r and q for
    exploratory runs, voiding the reduction's guarantees (faithful=False).
    """
    t, m = inst.t, inst.m
    if not 0 < scale <= 1:
        raise BadParameters("scale must be in (0, 1]")
    r_full = 18 * t * t
    k_full = 6 * r_full * (m - t) + r_full - 18 * t
    q_full = 3 * k_full
    r = max(1, round(r_full * scale))
    q = max(1, round(q_full * scale))
    # deletion count of a cover-prescribed edit set: the S bi-clique always
    # carries 18 t^2 arcs of which 18t survive, whatever the X_i size r is
    k = 6 * r * (m - t) + 18 * t * t - 18 * t
    faithful = scale == 1.0

    coloring: dict[str, str] = {}
    role: dict[str, tuple] = {}
    arcs: set[tuple[str, str]] = set()

    s_b: dict[str, str] = {}
    s_w: dict[str, str] = {}
    for i, elem in enumerate(inst.universe, 1):
        vb, vw = f"s{i}_b", f"s{i}_w"
        s_b[elem], s_w[elem] = vb, vw
        coloring[vb] = "black"
        coloring[vw] = "white"
        role[vb] = ("S", elem)
        role[vw] = ("S", elem)
    s_blacks = [s_b[e] for e in inst.universe]
    s_whites = [s_w[e] for e in inst.universe]
    arcs.update((b, w) for b in s_blacks for w in s_whites)
    arcs.update((w, b) for b in s_blacks for w in s_whites)

    for i, subset in enumerate(inst.collection, 1):
        xb = [f"X{i}_b{j}" for j in range(1, r + 1)]
        xw = [f"X{i}_w{j}" for j in range(1, r + 1)]
        yb = [f"Y{i}_b{j}" for j in range(1, q + 1)]
        yw = [f"Y{i}_w{j}" for j in range(1, q + 1)]
        for v in xb + xw:
            role[v] = ("X", i)
        for v in yb + yw:
            role[v] = ("Y", i)
        coloring.update({v: "black" for v in xb + yb})
        coloring.update({v: "white" for v in xw + yw})
        arcs.update((b, w) for b in xb for w in xw)
        arcs.update((w, b) for b in xb for w in xw)
        arcs.update((b, w) for b in yb for w in yw)
        arcs.update((w, b) for b in yb for w in yw)
        # one-way arcs from X_i into Y_i
        arcs.update((x, y) for x in xb for y in yw)
        arcs.update((x, y) for x in xw for y in yb)
        # arcs from X_i into the S-vertices of its elements
        for elem in sorted(subset):
            arcs.update((x, s_b[elem]) for x in xw)
            arcs.update((x, s_w[elem]) for x in xb)

    graph = ColoredDigraph(coloring, arcs)
    return GadgetOutput(graph=graph, k=k, role_map=role,
                        constants={"r": r, "q_const": q, "t": t, "m": m},
                        faithful=faithful, instance=inst)


def cover_edit_set(gadget: GadgetOutput, cover: Sequence[int]) -> EditSet:
    """Deletion set of size k prescribed for an exact cover.

    For every subset outside the cover, all its X_i -> S arcs are removed;
    inside S, the arcs between elements of different cover members are
    removed, which splits S into t bi-cliques of 3+3 vertices.
    """
    inst: X3cInstance = gadget.instance
    if inst is None:
        raise BadInstance("gadget does not carry an exact-3-cover instance")
    cover = sorted(set(cover))
    for i in cover:
        if not 0 <= i < inst.m:
            raise NotAnExactCover(f"index {i} out of range")
    counts: dict[str, int] = {e: 0 for e in inst.universe}
    for i in cover:
        for e in inst.collection[i]:
            counts[e] += 1
    if any(c != 1 for c in counts.values()):
        raise NotAnExactCover("chosen subsets do not cover every element exactly once")

    group_of = {}
    for i in cover:
        for e in inst.collection[i]:
            group_of[e] = i
    index_of = {e: i for i, e in enumerate(inst.universe, 1)}
    r = gadget.constants["r"]
    pairs = set()
    for i, subset in enumerate(inst.collection):
        if i in cover:
            continue
        xi = i + 1
        for elem in subset:
            si = index_of[elem]
            pairs.update((f"X{xi}_w{j}", f"s{si}_b") for j in range(1, r + 1))
            pairs.update((f"X{xi}_b{j}", f"s{si}_w") for j in range(1, r + 1))
    for e1 in inst.universe:
        for e2 in inst.universe:
            if e1 != e2 and group_of[e1] != group_of[e2]:
                pairs.add((f"s{index_of[e1]}_b", f"s{index_of[e2]}_w"))
                pairs.add((f"s{index_of[e1]}_w", f"s{index_of[e2]}_b"))
    return EditSet(frozenset(pairs), DELETION)


# -- chain graph completion gadget ----------------------------------------------------


def independent_edge_pairs(u: BipartiteGraph) -> list[tuple[tuple[str, str], tuple[str, str]]]:
    """Pairs of edges spanning four vertices with no edge between them."""
    edges = sorted(u.edges)
    pairs = []
    for i, (p1, q1) in enumerate(edges):
        for p2, q2 in edges[i + 1:]:
            if p1 != p2 and q1 != q2 and (p1, q2) not in u.edges and (p2, q1) not in u.edges:
                pairs.append(((p1, q1), (p2, q2)))
    return pairs


def is_chain_graph(u: BipartiteGraph) -> bool:
    """Chain graphs are exactly the bipartite graphs without independent edge pairs."""
    return not independent_edge_pairs(u)


def cgc_gadget(u: BipartiteGraph) -> GadgetOutput:
    """Arc-completion hardness gadget for a chain-graph-completion instance.

    Adds a black copy r_i of every q_i with bidirectional arcs, a hub pair
    (w, b), arcs p_i -> w, and one arc p -> q per edge of the bipartite
    graph.  The gadget is sink-free by construction; adding the arcs of a
    chain completion (subset of P x Q) turns it into a BMG.
    """
    coloring: dict[str, str] = {}
    role: dict[str, tuple] = {}
    p_ids = {name: f"p{i}" for i, name in enumerate(u.p, 1)}
    q_ids = {name: f"q{i}" for i, name in enumerate(u.q, 1)}
    for name, vid in p_ids.items():
        coloring[vid] = "black"
        role[vid] = ("P", name)
    for i, name in enumerate(u.q, 1):
        coloring[f"q{i}"] = "white"
        coloring[f"r{i}"] = "black"
        role[f"q{i}"] = ("Q", name)
        role[f"r{i}"] = ("R", name)
    coloring["b"] = "black"
    coloring["w"] = "white"
    role["b"] = ("hub", "b")
    role["w"] = ("hub", "w")

    arcs: set[tuple[str, str]] = {("w", "b"), ("b", "w")}
    for i in range(1, len(u.q) + 1):
        arcs.add((f"q{i}", f"r{i}"))
        arcs.add((f"r{i}", f"q{i}"))
    for vid in p_ids.values():
        arcs.add((vid, "w"))
    for pname, qname in u.edges:
        arcs.add((p_ids[pname], q_ids[qname]))
    graph = ColoredDigraph(coloring, arcs)
    return GadgetOutput(graph=graph, k=None, role_map=role, constants={},
                        faithful=True, instance=u)


# -- color lifting ---------------------------------------------------------------------


def hub_extension(graph: ColoredDigraph, extra_colors: int) -> ColoredDigraph:
    """Add one hub vertex per new color, bidirectionally joined to all others.

    Lifts 2-colored instances to more colors: each hub is the unique
    vertex of its color, so edits restricted to the old vertices carry
    over unchanged.
    """
    if extra_colors < 1:
        raise BadParameters("extra_colors must be >= 1")
    taken_colors = set(graph.color_set)
    taken_ids = set(graph.vertices)
    coloring = dict(graph.colors)
    arcs = set(graph.arcs)
    existing = list(graph.vertices)
    for i in range(1, extra_colors + 1):
        color = f"hub{i}"
        while color in taken_colors:
            color += "_"
        taken_colors.add(color)
        vid = f"h{i}"
        while vid in taken_ids:
            vid += "_"
        taken_ids.add(vid)
        coloring[vid] = color
        for v in existing:
            arcs.add((vid, v))
            arcs.add((v, vid))
        existing.append(vid)
    return ColoredDigraph(coloring, arcs)
