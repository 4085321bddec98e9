import pytest

from bmgedit import (ColoredDigraph, EditSet, bmg_from_tree, build_model,
                     export_lp, feasible_assignment, perturb,
                     random_colored_tree, solve_exact, verify_edit)
from bmgedit.errors import (BudgetExceeded, Infeasible, NotProperlyColored,
                            WrongColorCount)

from helpers import brute_force_min_edit, milp_optimum

TWO_TWO = ColoredDigraph(
    {"x1": "red", "x2": "red", "y1": "blue", "y2": "blue"},
    [("x1", "y1"), ("y1", "x1"), ("x2", "y2"), ("y2", "x2")])


def arc_vars(model):
    return {name: spec for name, spec in model.variables.items() if spec.kind == "arc"}


def test_editing_variable_counts_two_plus_two():
    model = build_model(TWO_TWO, "editing", "two_color")
    eps = arc_vars(model)
    assert len(eps) == 12  # all ordered distinct pairs
    fixed = [name for name, spec in eps.items() if spec.fixed == 0]
    assert len(fixed) == 4  # same-colored pairs pinned to zero
    assert len(model.free_variables()) == 8


def test_deletion_adds_row_per_cross_pair():
    model = build_model(TWO_TWO, "deletion", "two_color")
    singleton = [c for c in model.constraints
                 if len(c.coeffs) == 1 and c.sense == "<="]
    assert len(singleton) == 8
    bounds = {c.coeffs[0][0]: c.rhs for c in singleton}
    assert bounds["e_x1_y1"] == 1 and bounds["e_x1_y2"] == 0


def test_completion_adds_row_per_cross_pair():
    model = build_model(TWO_TWO, "completion", "two_color")
    singleton = [c for c in model.constraints
                 if len(c.coeffs) == 1 and c.sense == ">=" and c.rhs in (0, 1)]
    assert len(singleton) == 8


def test_general_formulation_columns():
    g = bmg_from_tree(random_colored_tree(5, 3, 0))
    model = build_model(g, "editing", "general")
    assert model.columns == g.n - 2
    assert any(name.startswith("M_") for name in model.variables)
    assert any(name.startswith("C_") for name in model.variables)


def test_general_small_vertex_fast_path():
    g = ColoredDigraph({"a": "A", "b": "B"}, [("a", "b"), ("b", "a")])
    model = build_model(g, "editing", "general")
    assert model.columns == 0 and model.triples == ()
    assert all(spec.kind == "arc" for spec in model.variables.values())


def test_formulation_preconditions():
    three = bmg_from_tree(random_colored_tree(4, 3, 1))
    with pytest.raises(WrongColorCount):
        build_model(three, "editing", "two_color")
    one = ColoredDigraph({"a": "A", "b": "A"})
    with pytest.raises(WrongColorCount):
        build_model(one, "editing", "general")
    improper = ColoredDigraph({"a": "A", "b": "A"}, [("a", "b")])
    with pytest.raises(NotProperlyColored):
        build_model(improper, "editing", "general")


def test_export_structure_and_determinism():
    pg, _ = perturb(TWO_TWO, 1, 3)
    model = build_model(pg, "editing", "two_color")
    text = export_lp(model)
    again = export_lp(build_model(pg, "editing", "two_color"))
    assert text == again  # byte-identical re-export
    lines = text.splitlines()
    assert lines[0] == "Minimize"
    assert lines[1].startswith(" obj:")
    assert "Subject To" in lines and "Binary" in lines and lines[-1] == "End"
    # F1 rows carry the +3/-2 coefficient pattern with constants moved right
    f1_rows = [c for c in model.constraints
               if len(c.coeffs) == 5 and sorted(k for _, k in c.coeffs) == [-1, -1, 1, 1, 1]]
    assert f1_rows and all(c.rhs == 2 for c in f1_rows)
    f2_rows = [c for c in model.constraints
               if len(c.coeffs) == 4 and sorted(k for _, k in c.coeffs) == [-1, 1, 1, 1]]
    assert f2_rows and all(c.rhs == 2 for c in f2_rows)


def test_f3_rows_need_three_same_colored():
    colors = {"x1": "A", "x2": "A", "y1": "B", "y2": "B", "y3": "B"}
    g = ColoredDigraph(colors, [(x, y) for x in colors for y in colors
                                if colors[x] != colors[y]])
    model = build_model(g, "editing", "two_color")
    f3_rows = [c for c in model.constraints if len(c.coeffs) == 6]
    assert f3_rows and all(c.rhs == 3 for c in f3_rows)
    # 2+2 colorings admit no F3 row
    model22 = build_model(TWO_TWO, "editing", "two_color")
    assert not [c for c in model22.constraints if len(c.coeffs) == 6]


def test_export_empty_constraint_model():
    from bmgedit.ilp import IlpModel, VarSpec
    model = IlpModel(mode="editing", formulation="two_color",
                     variables={"e_a_b": VarSpec("arc")},
                     objective=(("e_a_b", 1),), objective_const=0,
                     constraints=[])
    text = export_lp(model)
    assert text == "Minimize\n obj: e_a_b\nSubject To\nBinary\n e_a_b\nEnd\n"


def test_solver_on_bmg_costs_zero():
    g = bmg_from_tree(random_colored_tree(6, 2, 5))
    for mode in ("editing", "deletion", "completion"):
        result = solve_exact(g, mode)
        assert result.optimal_cost == 0 and result.edit_set.k == 0 and result.proof


@pytest.mark.parametrize("colors,mode,seed", [
    (2, "editing", 11), (2, "deletion", 12), (2, "completion", 13),
    (3, "editing", 14), (3, "completion", 15),
])
def test_solver_matches_brute_force(colors, mode, seed):
    tree = random_colored_tree(6, colors, seed)
    g = bmg_from_tree(tree)
    direction = {"editing": "editing", "deletion": "completion",
                 "completion": "deletion"}[mode]
    perturbed, _ = perturb(g, 2, seed + 100, mode=direction)
    expected_cost, _ = brute_force_min_edit(perturbed, mode)
    result = solve_exact(perturbed, mode)
    assert result.optimal_cost == expected_cost
    assert verify_edit(perturbed, result.edit_set)


def test_deletion_with_sink_is_infeasible():
    g = ColoredDigraph({"a": "A", "b": "B", "c": "B"}, [("a", "b"), ("b", "a")])
    with pytest.raises(Infeasible):
        solve_exact(g, "deletion")


def test_completion_always_feasible():
    from helpers import random_two_colored_graph
    from bmgedit import SplitMix64
    rng = SplitMix64(23)
    for _ in range(15):
        g = random_two_colored_graph(rng, 5, arc_p=0.3)
        result = solve_exact(g, "completion")
        assert verify_edit(g, result.edit_set)


def test_budget_exceeded():
    pg, edits = perturb(bmg_from_tree(random_colored_tree(6, 2, 31)), 2, 7)
    baseline = solve_exact(pg, "editing")
    if baseline.optimal_cost == 0:
        pytest.skip("perturbation landed on a BMG")
    with pytest.raises(BudgetExceeded):
        solve_exact(pg, "editing", budget=baseline.optimal_cost - 1)
    assert solve_exact(pg, "editing", budget=baseline.optimal_cost).optimal_cost \
        == baseline.optimal_cost


def test_editing_no_worse_than_one_directional():
    for seed in (41, 42, 43):
        pg, _ = perturb(bmg_from_tree(random_colored_tree(5, 2, seed)), 2, seed)
        edit_cost = solve_exact(pg, "editing").optimal_cost
        completion_cost = solve_exact(pg, "completion").optimal_cost
        assert edit_cost <= completion_cost
        try:
            deletion_cost = solve_exact(pg, "deletion").optimal_cost
        except Infeasible:
            deletion_cost = None
        if deletion_cost is not None:
            assert edit_cost <= deletion_cost


def test_verify_edit():
    g = ColoredDigraph({"a": "A", "b": "B"}, [("a", "b")])
    assert not verify_edit(g, EditSet(frozenset(), "editing"))
    assert verify_edit(g, EditSet(frozenset({("b", "a")}), "completion"))


@pytest.mark.parametrize("formulation", ["two_color", "general"])
def test_assignment_from_solution_is_feasible(formulation):
    pg, _ = perturb(bmg_from_tree(random_colored_tree(5, 2, 51)), 2, 9)
    result = solve_exact(pg, "editing")
    model = build_model(pg, "editing", formulation)
    assignment = feasible_assignment(model, pg, result.edit_set)
    objective, violated = model.evaluate(assignment)
    assert violated == []
    assert objective == result.optimal_cost


def test_milp_optima_agree_across_formulations():
    for seed in (61, 62):
        pg, _ = perturb(bmg_from_tree(random_colored_tree(5, 2, seed)), 2, seed)
        exact = solve_exact(pg, "editing").optimal_cost
        two = milp_optimum(build_model(pg, "editing", "two_color"))
        general = milp_optimum(build_model(pg, "editing", "general"))
        assert two == general == exact


def test_milp_infeasible_deletion_model():
    g = ColoredDigraph({"a": "A", "b": "B", "c": "B"}, [("a", "b"), ("b", "a")])
    assert milp_optimum(build_model(g, "deletion", "two_color")) is None


def test_milp_general_three_colors():
    for seed in (71, 72):
        pg, _ = perturb(bmg_from_tree(random_colored_tree(5, 3, seed)), 1, seed)
        exact = solve_exact(pg, "editing").optimal_cost
        model = build_model(pg, "editing", "general")
        assert milp_optimum(model) == exact
        if exact:
            assignment = feasible_assignment(model, pg,
                                             solve_exact(pg, "editing").edit_set)
            objective, violated = model.evaluate(assignment)
            assert violated == [] and objective == exact


def test_milp_modes_respected():
    g = bmg_from_tree(random_colored_tree(5, 2, 81))
    deleted, _ = perturb(g, 2, 82, mode="deletion")
    for formulation in ("two_color", "general"):
        model = build_model(deleted, "completion", formulation)
        assert milp_optimum(model) == solve_exact(deleted, "completion").optimal_cost


@pytest.mark.parametrize("formulation", ["two_color", "general"])
def test_milp_solutions_decode_to_valid_edits(formulation):
    # feasible model assignments, decoded to edit sets, yield BMGs
    from helpers import milp_solve
    for seed in (91, 92):
        pg, _ = perturb(bmg_from_tree(random_colored_tree(5, 2, seed)), 2, seed)
        model = build_model(pg, "editing", formulation)
        objective, assignment = milp_solve(model)
        edited_arcs = {(x, y) for x in pg.vertices for y in pg.vertices
                       if x != y and pg.colors[x] != pg.colors[y]
                       and assignment[f"e_{x}_{y}"] == 1}
        flips = frozenset(edited_arcs ^ pg.arcs)
        assert len(flips) == objective
        assert verify_edit(pg, EditSet(flips, "editing"))
