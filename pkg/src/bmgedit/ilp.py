"""Binary ILP models for BMG deletion/completion/editing, plus an exact solver.

``build_model`` emits the model over binary arc variables e_x_y (arcs of
the edited graph).  The objective counts the symmetric difference with the
input arcs.  Two formulations are supported:

* ``two_color``: sink-freeness rows plus one row per (ordered) vertex
  tuple excluding induced F1-, F2- and F3-graphs; O(|V|^2) variables and
  O(|V|^5) rows.
* ``general``: triple variables t_a_b_c linked to the arc variables, a
  binary cluster matrix M with |V|-2 columns, linking variables
  m_a_b_c_p, and three-gamete rows C_p_q_* forcing the columns to form a
  hierarchy; O(|V|^4) variables and rows.

``solve_exact`` does not touch the models: it is a combinatorial
iterative-deepening search (witness-guided for two colors, subset
enumeration otherwise), so exported LP files can be cross-checked against
an entirely independent route.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Optional

from .digraph import (COMPLETION, DELETION, EDITING, MODES, ColoredDigraph,
                      EditSet, apply_edit, validate_coloring)
from .errors import (BudgetExceeded, ExportError, Infeasible,
                     NotProperlyColored, WrongColorCount)
from .recognition import ForbiddenWitness, find_violation, recognize_bmg
from .triples import Triple

TWO_COLOR = "two_color"
GENERAL = "general"


@dataclass(frozen=True)
class Constraint:
    name: str
    coeffs: tuple[tuple[str, int], ...]
    sense: str  # "<=" or ">="
    rhs: int


@dataclass(frozen=True)
class VarSpec:
    kind: str            # "arc", "triple", "cluster", "link", "gamete"
    fixed: Optional[int] = None


@dataclass
class IlpModel:
    mode: str
    formulation: str
    variables: dict[str, VarSpec]
    objective: tuple[tuple[str, int], ...]
    objective_const: int
    constraints: list[Constraint]
    triples: tuple[Triple, ...] = ()
    columns: int = 0

    def free_variables(self) -> list[str]:
        return [name for name, spec in self.variables.items() if spec.fixed is None]

    def evaluate(self, assignment: Mapping[str, int]) -> tuple[int, list[str]]:
        """Objective value and the names of violated constraints."""
        values = dict(assignment)
        for name, spec in self.variables.items():
            if spec.fixed is not None:
                values[name] = spec.fixed
        for name in self.free_variables():
            if values.get(name) not in (0, 1):
                raise ValueError(f"assignment misses binary variable {name!r}")
        violated = []
        for con in self.constraints:
            total = sum(coef * values[var] for var, coef in con.coeffs)
            ok = total <= con.rhs if con.sense == "<=" else total >= con.rhs
            if not ok:
                violated.append(con.name)
        objective = self.objective_const + sum(
            coef * values[var] for var, coef in self.objective)
        return objective, violated


def _require_proper(graph: ColoredDigraph):
    if not all(graph.colors[x] != graph.colors[y] for x, y in graph.arcs):
        raise NotProperlyColored("modification problems are posed for properly colored digraphs")


def _cross_pairs(graph: ColoredDigraph) -> list[tuple[str, str]]:
    return [(x, y) for x in graph.vertices for y in graph.vertices
            if x != y and graph.colors[x] != graph.colors[y]]


def _evar(x, y):
    return f"e_{x}_{y}"


class _ModelBuilder:
    def __init__(self, mode, formulation):
        self.variables: dict[str, VarSpec] = {}
        self.constraints: list[Constraint] = []
        self.mode = mode
        self.formulation = formulation

    def add_var(self, name, kind, fixed=None):
        if name in self.variables:
            raise ExportError(f"variable name collision: {name!r}"
                              " (vertex ids must not collide under '_' joining)")
        self.variables[name] = VarSpec(kind, fixed)

    def add_row(self, coeffs, sense, rhs):
        name = f"c{len(self.constraints) + 1}"
        self.constraints.append(Constraint(name, tuple(coeffs), sense, rhs))


def build_model(graph: ColoredDigraph, mode: str,
                formulation: str = TWO_COLOR) -> IlpModel:
    """Build the arc-modification ILP for ``graph``.

    Strict sink-freeness inequalities are encoded as "sum >= 1" (the
    variables are binary).  Arc variables for same-colored pairs are fixed
    to zero and omitted from rows and export.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if formulation not in (TWO_COLOR, GENERAL):
        raise ValueError(f"unknown formulation {formulation!r}")
    _require_proper(graph)
    if formulation == TWO_COLOR and graph.num_colors != 2:
        raise WrongColorCount(f"two_color formulation needs 2 colors, got {graph.num_colors}")
    if formulation == GENERAL and graph.num_colors < 2:
        raise WrongColorCount("general formulation needs at least 2 colors")

    b = _ModelBuilder(mode, formulation)
    cross = _cross_pairs(graph)
    for x, y in sorted(set((x, y) for x in graph.vertices for y in graph.vertices if x != y)):
        if graph.colors[x] == graph.colors[y]:
            b.add_var(_evar(x, y), "arc", fixed=0)
        else:
            b.add_var(_evar(x, y), "arc")

    # completion keeps every arc; deletion adds none
    if mode == COMPLETION:
        for x, y in sorted(cross):
            b.add_row(((_evar(x, y), 1),), ">=", 1 if (x, y) in graph.arcs else 0)
    elif mode == DELETION:
        for x, y in sorted(cross):
            b.add_row(((_evar(x, y), 1),), "<=", 1 if (x, y) in graph.arcs else 0)

    # every vertex keeps an out-neighbor of every other color
    for x in graph.vertices:
        for s in graph.color_set:
            if s == graph.colors[x]:
                continue
            coeffs = tuple((_evar(x, y), 1) for y in graph.vertices_of_color(s) if y != x)
            b.add_row(coeffs, ">=", 1)

    if formulation == TWO_COLOR:
        _add_forbidden_subgraph_rows(b, graph)
        triples: tuple[Triple, ...] = ()
        columns = 0
    else:
        triples, columns = _add_general_rows(b, graph)

    objective = []
    for x, y in sorted(cross):
        objective.append((_evar(x, y), -1 if (x, y) in graph.arcs else 1))
    return IlpModel(mode=mode, formulation=formulation,
                    variables=b.variables,
                    objective=tuple(objective),
                    objective_const=len(graph.arcs),
                    constraints=b.constraints,
                    triples=triples, columns=columns)


def _add_forbidden_subgraph_rows(b: _ModelBuilder, graph: ColoredDigraph):
    ca, cb = graph.color_set
    for cx, cy in ((ca, cb), (cb, ca)):
        xs = graph.vertices_of_color(cx)
        ys = graph.vertices_of_color(cy)
        for x1, x2 in itertools.permutations(xs, 2):
            for y1, y2 in itertools.permutations(ys, 2):
                b.add_row(((_evar(x1, y1), 1), (_evar(y1, x2), 1), (_evar(y2, x2), 1),
                           (_evar(x1, y2), -1), (_evar(y2, x1), -1)), "<=", 2)
        for x1, x2 in itertools.permutations(xs, 2):
            for y1, y2 in itertools.permutations(ys, 2):
                b.add_row(((_evar(x1, y1), 1), (_evar(y1, x2), 1), (_evar(x2, y2), 1),
                           (_evar(x1, y2), -1)), "<=", 2)
        # the F3 pattern is invariant under swapping (x1,y1) with (x2,y2),
        # so x1 < x2 emits each distinct row once
        for x1, x2 in itertools.combinations(xs, 2):
            for y1, y2 in itertools.permutations(ys, 2):
                for y3 in ys:
                    if y3 == y1 or y3 == y2:
                        continue
                    b.add_row(((_evar(x1, y1), 1), (_evar(x1, y3), 1),
                               (_evar(x2, y2), 1), (_evar(x2, y3), 1),
                               (_evar(x1, y2), -1), (_evar(x2, y1), -1)), "<=", 3)


def _tvar(t: Triple):
    return f"t_{t.a}_{t.b}_{t.outgroup}"


def _add_general_rows(b: _ModelBuilder, graph: ColoredDigraph):
    n = graph.n
    if n < 3:
        # no room for triples or non-trivial clusters; sink-freeness suffices
        return (), 0
    columns = n - 2
    triples: list[Triple] = []
    for x in graph.vertices:
        for s in graph.color_set:
            if s == graph.colors[x]:
                continue
            members = graph.vertices_of_color(s)
            for y, y2 in itertools.permutations(members, 2):
                t = Triple.of(x, y, y2)
                triples.append(t)
                b.add_var(_tvar(t), "triple")
    for t in triples:
        x, y, y2 = _roles(graph, t)
        # informative in the edited graph forces t = 1 ...
        b.add_row(((_evar(x, y), 1), (_evar(x, y2), -1), (_tvar(t), -1)), "<=", 0)
        # ... and forbidden forces t = 0
        b.add_row(((_evar(x, y), 1), (_evar(x, y2), 1), (_tvar(t), 1)), "<=", 2)

    for x in graph.vertices:
        for p in range(1, columns + 1):
            b.add_var(f"M_{x}_{p}", "cluster")
    for t in triples:
        for p in range(1, columns + 1):
            b.add_var(f"m_{t.a}_{t.b}_{t.outgroup}_{p}", "link")
    for t in triples:
        a, bb, c = t.a, t.b, t.outgroup
        for p in range(1, columns + 1):
            m = f"m_{a}_{bb}_{c}_{p}"
            coeffs = ((m, -3), (f"M_{a}_{p}", 1), (f"M_{bb}_{p}", 1), (f"M_{c}_{p}", -1))
            b.add_row(coeffs, ">=", -1)
            b.add_row(coeffs, "<=", 1)
        msum = tuple((f"m_{a}_{bb}_{c}_{p}", 1) for p in range(1, columns + 1))
        b.add_row(msum + ((_tvar(t), -1),), ">=", 0)
        b.add_row(msum + ((_tvar(t), -columns),), "<=", 0)

    for p, q in itertools.combinations(range(1, columns + 1), 2):
        for gl in ("01", "10", "11"):
            b.add_var(f"C_{p}_{q}_{gl}", "gamete")
    for p, q in itertools.combinations(range(1, columns + 1), 2):
        for a in graph.vertices:
            b.add_row(((f"C_{p}_{q}_01", 1), (f"M_{a}_{p}", 1), (f"M_{a}_{q}", -1)), ">=", 0)
            b.add_row(((f"C_{p}_{q}_10", 1), (f"M_{a}_{p}", -1), (f"M_{a}_{q}", 1)), ">=", 0)
            b.add_row(((f"C_{p}_{q}_11", 1), (f"M_{a}_{p}", -1), (f"M_{a}_{q}", -1)), ">=", -1)
        b.add_row(((f"C_{p}_{q}_01", 1), (f"C_{p}_{q}_10", 1), (f"C_{p}_{q}_11", 1)), "<=", 2)
    return tuple(triples), columns


def _roles(graph: ColoredDigraph, t: Triple) -> tuple[str, str, str]:
    """Split a canonical triple into (cross vertex, paired same-color vertex, outgroup)."""
    if graph.colors[t.a] == graph.colors[t.outgroup]:
        return t.b, t.a, t.outgroup
    return t.a, t.b, t.outgroup


# -- LP text export ----------------------------------------------------------------


def _format_terms(coeffs, const: int = 0) -> str:
    parts = []
    for var, coef in coeffs:
        if coef < 0:
            sign, mag = "-", -coef
        else:
            sign, mag = "+", coef
        term = var if mag == 1 else f"{mag} {var}"
        parts.append((sign, term))
    if const:
        parts.append(("-" if const < 0 else "+", str(abs(const))))
    if not parts:
        return "0"
    first_sign, first_term = parts[0]
    out = first_term if first_sign == "+" else f"- {first_term}"
    for sign, term in parts[1:]:
        out += f" {sign} {term}"
    return out


def export_lp(model: IlpModel) -> str:
    """Serialize the model in CPLEX-LP dialect; byte-identical across runs."""
    lines = ["Minimize",
             f" obj: {_format_terms(model.objective, model.objective_const)}",
             "Subject To"]
    for con in model.constraints:
        lines.append(f" {con.name}: {_format_terms(con.coeffs)} {con.sense} {con.rhs}")
    lines.append("Binary")
    for name in model.free_variables():
        lines.append(f" {name}")
    lines.append("End")
    return "\n".join(lines) + "\n"


# -- assignment construction ---------------------------------------------------------


def feasible_assignment(model: IlpModel, graph: ColoredDigraph,
                        edits: EditSet) -> dict[str, int]:
    """Full variable assignment induced by applying ``edits`` to ``graph``.

    The edited graph must be a BMG; its explaining tree supplies the
    cluster matrix and triple values for the general formulation.
    """
    edited = apply_edit(graph, edits)
    result = recognize_bmg(edited)
    if not result.is_bmg:
        raise ValueError("edit set does not produce a BMG")
    values: dict[str, int] = {}
    for x in graph.vertices:
        for y in graph.vertices:
            if x != y and graph.colors[x] != graph.colors[y]:
                values[_evar(x, y)] = 1 if (x, y) in edited.arcs else 0
    if model.formulation == GENERAL and model.columns:
        tree = result.explaining_tree
        clusters = sorted(tree.clusters().nontrivial(),
                          key=lambda c: (len(c), tuple(sorted(c))))
        if len(clusters) > model.columns:
            raise AssertionError("more non-trivial clusters than matrix columns")
        membership = []
        for p in range(model.columns):
            membership.append(clusters[p] if p < len(clusters) else frozenset())
        for x in graph.vertices:
            for p in range(1, model.columns + 1):
                values[f"M_{x}_{p}"] = 1 if x in membership[p - 1] else 0
        for t in model.triples:
            values[_tvar(t)] = 1 if tree.displays(t) else 0
            for p in range(1, model.columns + 1):
                cl = membership[p - 1]
                values[f"m_{t.a}_{t.b}_{t.outgroup}_{p}"] = int(
                    t.a in cl and t.b in cl and t.outgroup not in cl)
        for p, q in itertools.combinations(range(1, model.columns + 1), 2):
            cp, cq = membership[p - 1], membership[q - 1]
            values[f"C_{p}_{q}_01"] = int(bool(cq - cp))
            values[f"C_{p}_{q}_10"] = int(bool(cp - cq))
            values[f"C_{p}_{q}_11"] = int(bool(cp & cq))
    return values


# -- exact solving -----------------------------------------------------------------


@dataclass(frozen=True)
class SolveResult:
    optimal_cost: int
    edit_set: EditSet
    proof: bool  # edited graph re-verified as a BMG


def verify_edit(graph: ColoredDigraph, edits: EditSet) -> bool:
    """True iff applying the edit set yields a best match graph."""
    return recognize_bmg(apply_edit(graph, edits)).is_bmg


def _witness_flips(graph: ColoredDigraph, witness: ForbiddenWitness,
                   mode: str) -> list[tuple[str, str]]:
    """Pairs whose flip can destroy the witness, restricted to the mode.

    Any induced witness must lose one of its defining arcs or gain one of
    its defining non-arcs to disappear, so branching over exactly these
    pairs preserves completeness.
    """
    if witness.kind == "sink":
        if mode == DELETION:
            return []  # deletions cannot give a vertex a new out-neighbor
        (x,) = witness.vertices
        candidates = [y for y in graph.vertices_of_color(witness.missing_color)
                      if y != x and (x, y) not in graph.arcs]
        return [(x, y) for y in sorted(candidates)]
    if witness.kind == "F1":
        x1, x2, y1, y2 = witness.vertices
        arcs = [(x1, y1), (y2, x2), (y1, x2)]
        nonarcs = [(x1, y2), (y2, x1)]
    elif witness.kind == "F2":
        x1, x2, y1, y2 = witness.vertices
        arcs = [(x1, y1), (y1, x2), (x2, y2)]
        nonarcs = [(x1, y2)]
    elif witness.kind == "F3":
        x1, x2, y1, y2, y3 = witness.vertices
        arcs = [(x1, y1), (x2, y2), (x1, y3), (x2, y3)]
        nonarcs = [(x1, y2), (x2, y1)]
    else:
        raise ValueError(f"unexpected witness kind {witness.kind!r}")
    flips = []
    if mode in (DELETION, EDITING):
        flips.extend(arcs)
    if mode in (COMPLETION, EDITING):
        flips.extend(nonarcs)
    return flips


def _toggle(graph: ColoredDigraph, pair: tuple[str, str]) -> ColoredDigraph:
    arcs = set(graph.arcs)
    if pair in arcs:
        arcs.remove(pair)
    else:
        arcs.add(pair)
    return ColoredDigraph(graph.colors, arcs)


def _search_two_colored(graph, depth, flipped, mode):
    witness = find_violation(graph)
    if witness is None:
        return flipped, False
    if depth == 0:
        return None, True
    cut = False
    for pair in _witness_flips(graph, witness, mode):
        if pair in flipped:
            continue
        solution, was_cut = _search_two_colored(
            _toggle(graph, pair), depth - 1, flipped | {pair}, mode)
        cut = cut or was_cut
        if solution is not None:
            return solution, cut
    return None, cut


def solve_exact(graph: ColoredDigraph, mode: str,
                budget: Optional[int] = None) -> SolveResult:
    """Minimum-cardinality edit set whose application yields a BMG.

    Iterative deepening on |F|.  For two colors the branching is
    restricted to the defining pairs of a currently violated witness
    (sink or F1/F2/F3); otherwise edit sets over cross-color pairs are
    enumerated in cardinality order.  Raises ``Infeasible`` when no edit
    set of the mode exists (deletion with a sink) and ``BudgetExceeded``
    when only the budget stops the search.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    _require_proper(graph)
    if mode == DELETION and not validate_coloring(graph).sink_free:
        raise Infeasible("the graph has a sink; deletions cannot repair it")

    cross = sorted(_cross_pairs(graph))
    if mode == DELETION:
        universe = [p for p in cross if p in graph.arcs]
    elif mode == COMPLETION:
        universe = [p for p in cross if p not in graph.arcs]
    else:
        universe = cross

    max_depth = len(universe)
    cap = max_depth if budget is None else min(budget, max_depth)

    pairs: Optional[frozenset] = None
    if graph.num_colors == 2:
        for depth in range(cap + 1):
            solution, cut = _search_two_colored(graph, depth, frozenset(), mode)
            if solution is not None:
                pairs = solution
                break
            if not cut:
                raise Infeasible("no edit set of this mode yields a BMG")
    else:
        arcs0 = set(graph.arcs)
        for depth in range(cap + 1):
            for combo in itertools.combinations(universe, depth):
                arcs = set(arcs0)
                for pair in combo:
                    if pair in arcs:
                        arcs.remove(pair)
                    else:
                        arcs.add(pair)
                candidate = ColoredDigraph(graph.colors, arcs)
                if recognize_bmg(candidate).is_bmg:
                    pairs = frozenset(combo)
                    break
            if pairs is not None:
                break
    if pairs is None:
        if budget is not None and budget < max_depth:
            raise BudgetExceeded(f"no edit set of size <= {budget} found")
        raise Infeasible("no edit set of this mode yields a BMG")

    edits = EditSet(pairs, mode)
    return SolveResult(optimal_cost=len(pairs), edit_set=edits,
                       proof=verify_edit(graph, edits))
