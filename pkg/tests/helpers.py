"""Shared enumeration and brute-force oracles for the test suite.

Everything here is deliberately independent of the library's search
machinery: recognition inside the brute-force edit oracle goes through the
supertree route, edit sets are enumerated exhaustively in cardinality
order, and trees are enumerated from scratch via set partitions.
"""

from __future__ import annotations

import itertools

from bmgedit import (ColoredDigraph, EditSet, SplitMix64, apply_edit,
                     recognize_bmg_via_aho)

NAMES = ("a", "b", "c", "d", "e", "f", "g")


def set_partitions(items):
    """All partitions of ``items`` into nonempty blocks (tuples, sorted)."""
    items = list(items)
    if not items:
        return
    if len(items) == 1:
        yield [tuple(items)]
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [tuple(sorted(part[i] + (first,)))] + part[i + 1:]
        yield [(first,)] + part


def all_phylo_trees(leaves):
    """All rooted phylogenetic tree shapes on the leaf set, as nested tuples."""
    leaves = tuple(leaves)
    if len(leaves) == 1:
        yield leaves[0]
        return
    for part in set_partitions(list(leaves)):
        if len(part) < 2:
            continue
        for combo in itertools.product(*(list(all_phylo_trees(b)) for b in part)):
            yield tuple(combo)


def two_color_splits(n):
    """Color-count splits (n1, n2) with n1 <= n2, up to color swap."""
    return [(n1, n - n1) for n1 in range(1, n // 2 + 1)]


def all_two_colored_graphs(n):
    """Every properly 2-colored digraph on n fixed-name vertices."""
    for n1, n2 in two_color_splits(n):
        vertices = NAMES[:n]
        colors = {v: ("A" if i < n1 else "B") for i, v in enumerate(vertices)}
        cross = [(x, y) for x in vertices for y in vertices
                 if x != y and colors[x] != colors[y]]
        for mask in range(1 << len(cross)):
            arcs = [cross[i] for i in range(len(cross)) if mask >> i & 1]
            yield ColoredDigraph(colors, arcs)


def cross_pairs(graph):
    return [(x, y) for x in graph.vertices for y in graph.vertices
            if x != y and graph.colors[x] != graph.colors[y]]


def brute_force_min_edit(graph, mode, max_k=None):
    """Smallest edit set by exhaustive enumeration in cardinality order.

    Recognition goes through the informative-triples supertree, keeping
    this oracle independent of the witness-guided solver.  Returns
    (cost, EditSet) or None when the whole universe is exhausted.
    """
    pairs = sorted(cross_pairs(graph))
    if mode == "deletion":
        universe = [p for p in pairs if p in graph.arcs]
    elif mode == "completion":
        universe = [p for p in pairs if p not in graph.arcs]
    else:
        universe = pairs
    cap = len(universe) if max_k is None else min(max_k, len(universe))
    for k in range(cap + 1):
        for combo in itertools.combinations(universe, k):
            edits = EditSet(frozenset(combo), mode)
            if recognize_bmg_via_aho(apply_edit(graph, edits)):
                return k, edits
    return None


def random_two_colored_graph(rng: SplitMix64, n, arc_p=0.5):
    """Random properly 2-colored digraph (both colors nonempty)."""
    vertices = [f"v{i}" for i in range(1, n + 1)]
    split = 1 + rng.randrange(n - 1)
    colors = {v: ("A" if i < split else "B") for i, v in enumerate(vertices)}
    arcs = [(x, y) for x in vertices for y in vertices
            if x != y and colors[x] != colors[y] and rng.random() < arc_p]
    return ColoredDigraph(colors, arcs)


def graph_key(graph):
    return (tuple(sorted(graph.colors.items())), graph.arcs)


def milp_optimum(model):
    """Optimal objective of an IlpModel via scipy's HiGHS MILP solver."""
    solved = milp_solve(model)
    return None if solved is None else solved[0]


def milp_solve(model):
    """(objective, {var: 0/1}) for an optimal MILP solution, or None."""
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp

    names = model.free_variables()
    index = {name: i for i, name in enumerate(names)}
    cost = np.zeros(len(names))
    for var, coef in model.objective:
        cost[index[var]] += coef
    rows, lb, ub = [], [], []
    for con in model.constraints:
        row = np.zeros(len(names))
        for var, coef in con.coeffs:
            if model.variables[var].fixed is None:
                row[index[var]] += coef
        rows.append(row)
        if con.sense == "<=":
            lb.append(-np.inf)
            ub.append(con.rhs)
        else:
            lb.append(con.rhs)
            ub.append(np.inf)
    constraints = [LinearConstraint(np.array(rows), lb, ub)] if rows else []
    result = milp(cost, constraints=constraints,
                  integrality=np.ones(len(names)), bounds=Bounds(0, 1))
    if not result.success:
        return None  # infeasible model
    assignment = {name: round(result.x[i]) for i, name in enumerate(names)}
    return round(result.fun) + model.objective_const, assignment
