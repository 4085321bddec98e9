"""Line-oriented text formats for graphs, trees, and problem instances.

Graph documents ("#bmg v1"):
    #bmg v1
    V <id> <color>        one vertex per line
    A <src> <dst>         one arc per line
Serialization sorts vertices and arcs, so parse(serialize(g)) == g and the
output is stable across runs.  Blank lines and further "#" lines are
ignored on input.

Tree documents are Newick-like with colored leaves, e.g.
"((x|A,y|B),z|B);".  Inner vertices are unlabeled, there are no branch
lengths, and children are serialized in canonical order.  A single leaf is
written "(x|A);".

Exact-3-cover instances:  first line "t m", then m lines of 3 element
names.  Chain-graph-completion instances:  lines "P <names...>",
"Q <names...>", then one "E <p> <q>" line per edge.
"""

from __future__ import annotations

from .digraph import ColoredDigraph
from .errors import (BadInstance, DuplicateRecord, NotPhylogenetic, ParseError,
                     UnknownVertexInArc)
from .generators import BipartiteGraph, X3cInstance
from .trees import PhyloTree

_FORBIDDEN = set(" \t\n(),;|")


def _check_token(token: str, what: str):
    if not token or any(ch in _FORBIDDEN for ch in token):
        raise ValueError(f"{what} {token!r} contains reserved characters")


# -- graphs -------------------------------------------------------------------


def serialize_graph(graph: ColoredDigraph) -> str:
    lines = ["#bmg v1"]
    for v in graph.vertices:
        _check_token(v, "vertex id")
        _check_token(graph.colors[v], "color")
        lines.append(f"V {v} {graph.colors[v]}")
    for x, y in graph.sorted_arcs():
        lines.append(f"A {x} {y}")
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> ColoredDigraph:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "#bmg v1":
        raise ParseError("expected header '#bmg v1'", line=1)
    colors: dict[str, str] = {}
    arcs: set[tuple[str, str]] = set()
    for no, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if fields[0] == "V":
            if len(fields) != 3:
                raise ParseError(f"malformed vertex record {raw!r}", line=no)
            _, vid, color = fields
            if vid in colors:
                raise DuplicateRecord(f"vertex {vid!r} declared twice", line=no)
            colors[vid] = color
        elif fields[0] == "A":
            if len(fields) != 3:
                raise ParseError(f"malformed arc record {raw!r}", line=no)
            _, src, dst = fields
            if src not in colors or dst not in colors:
                raise UnknownVertexInArc(f"arc references undeclared vertex {raw!r}", line=no)
            if src == dst:
                raise ParseError(f"self-loop {raw!r}", line=no)
            if (src, dst) in arcs:
                raise DuplicateRecord(f"arc ({src}, {dst}) declared twice", line=no)
            arcs.add((src, dst))
        else:
            raise ParseError(f"unknown record type {fields[0]!r}", line=no)
    return ColoredDigraph(colors, arcs)


# -- trees --------------------------------------------------------------------


def serialize_tree(tree: PhyloTree) -> str:
    if tree.colors is None:
        raise ValueError("only leaf-colored trees are serialized")

    def leaf_token(leaf: str) -> str:
        _check_token(leaf, "leaf id")
        _check_token(tree.colors[leaf], "color")
        return f"{leaf}|{tree.colors[leaf]}"

    def conv(nested) -> str:
        if isinstance(nested, str):
            return leaf_token(nested)
        return "(" + ",".join(conv(part) for part in nested) + ")"

    nested = tree.to_nested()
    if isinstance(nested, str):  # one-leaf tree
        return f"({leaf_token(nested)});"
    return conv(nested) + ";"


def parse_tree(text: str) -> PhyloTree:
    s = text.strip()
    if not s.endswith(";"):
        raise ParseError("tree text must end with ';'")
    s = s[:-1].rstrip()
    colors: dict[str, str] = {}
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(s) and s[pos] in " \t":
            pos += 1

    def parse_node():
        nonlocal pos
        skip_ws()
        if pos >= len(s):
            raise ParseError("unexpected end of tree text")
        if s[pos] == "(":
            pos += 1
            children = [parse_node()]
            skip_ws()
            while pos < len(s) and s[pos] == ",":
                pos += 1
                children.append(parse_node())
                skip_ws()
            if pos >= len(s) or s[pos] != ")":
                raise ParseError("unbalanced parentheses in tree text")
            pos += 1
            if len(children) == 1:
                return children[0] if isinstance(children[0], str) and _outermost() \
                    else _unary_error()
            return tuple(children)
        start = pos
        while pos < len(s) and s[pos] not in "(),":
            pos += 1
        token = s[start:pos].strip()
        if "|" not in token:
            raise ParseError(f"leaf token {token!r} lacks a '|color' suffix")
        leaf, color = token.split("|", 1)
        if not leaf or not color:
            raise ParseError(f"malformed leaf token {token!r}")
        if leaf in colors:
            raise ParseError(f"duplicate leaf id {leaf!r}")
        colors[leaf] = color
        return leaf

    def _outermost():
        # "(x|A);" is the one-leaf tree; a unary node anywhere else is not
        # phylogenetic ("((x|A));" stays an error because the inner group
        # is not outermost).
        return pos == len(s)

    def _unary_error():
        raise NotPhylogenetic("inner vertex with a single child")

    nested = parse_node()
    if pos != len(s):
        raise ParseError(f"trailing characters {s[pos:]!r} after tree")
    return PhyloTree.from_nested(nested, colors)


# -- problem instances -----------------------------------------------------------


def parse_x3c(text: str) -> X3cInstance:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines())
             if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty exact-3-cover instance")
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError(f"expected 't m' on the first line, got {lines[0]!r}", line=1)
    try:
        t, m = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError(f"expected integers on the first line, got {lines[0]!r}", line=1)
    if len(lines) - 1 != m:
        raise ParseError(f"expected {m} subset lines, found {len(lines) - 1}")
    collection = []
    for no, line in enumerate(lines[1:], start=2):
        elems = line.split()
        if len(elems) != 3:
            raise ParseError(f"subset line needs 3 element names: {line!r}", line=no)
        collection.append(frozenset(elems))
    universe = sorted(set().union(*collection)) if collection else []
    if len(universe) != 3 * t:
        raise BadInstance(
            f"subsets mention {len(universe)} distinct elements, expected 3t = {3 * t}")
    return X3cInstance(tuple(universe), tuple(collection))


def parse_cgc(text: str) -> BipartiteGraph:
    p: list[str] = []
    q: list[str] = []
    edges: set[tuple[str, str]] = set()
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if fields[0] == "P":
            p.extend(fields[1:])
        elif fields[0] == "Q":
            q.extend(fields[1:])
        elif fields[0] == "E":
            if len(fields) != 3:
                raise ParseError(f"edge line needs two endpoints: {raw!r}", line=no)
            edges.add((fields[1], fields[2]))
        else:
            raise ParseError(f"unknown record type {fields[0]!r}", line=no)
    return BipartiteGraph(tuple(p), tuple(q), frozenset(edges))
