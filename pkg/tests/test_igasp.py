import random

import pytest

from aspgraph.cycles import CycleKind
from aspgraph.graph import NodeKind, atoms_of, build_cnr, cnr_to_dg, node_kind
from aspgraph.igasp import (
    PartialModel,
    ProofBranch,
    Provenance,
    QueryAtomUnknown,
    build_causal_map,
    detect_branch_cycle,
    ensure_constraints,
    forward_propagate,
    merge_conjunctive,
    merge_disjunctive,
    prove,
    solve_igasp,
    solve_query,
)
from aspgraph.oracle import enumerate_stable, is_stable
from aspgraph.syntax import parse_program
from aspgraph.worlds import world_from_atoms
from aspgraph.justify import is_effective

from conftest import random_program_text


def transformed(text):
    return cnr_to_dg(build_cnr(parse_program(text)))


def models(text):
    return [sorted(m) for m in solve_igasp(parse_program(text))]


def pm(entries):
    return PartialModel(dict(entries))


def keys(model_list):
    return {m.key() for m in model_list}


# --- solve_igasp -----------------------------------------------------------


def test_program_five():
    assert models("m :- p. m :- not q. m :- r. :- not m. :- n.") == [["m"]]


def test_even_cycle_with_constraint():
    assert models("p :- not q. q :- not p. :- p, q.") == [["p"], ["q"]]


def test_positive_cycle_single_empty_model():
    assert models("p :- q. q :- p.") == [[]]


def test_no_constraints_no_facts_even_cycle():
    assert models("p :- not q. q :- not p.") == [["p"], ["q"]]


def test_facts_only():
    assert models("a. b.") == [["a", "b"]]


def test_empty_program():
    assert models("") == [[]]


# --- ensure_constraints ----------------------------------------------------


def constraint_count(g):
    return sum(1 for n in g.nodes if node_kind(n) is NodeKind.CONSTRAINT)


def test_fact_program_gets_negated_fact_constraint():
    p = parse_program("q. p :- q.")
    g = ensure_constraints(transformed("q. p :- q."), p)
    assert constraint_count(g) == 1
    # ":- not q." is a single-literal constraint: a direct negative edge
    (edge,) = g.in_edges("__constraint_0")
    assert edge.src == "q" and edge.negative


def test_anchor_on_constraint_free_even_cycle():
    p = parse_program("p :- not q. q :- not p.")
    g = ensure_constraints(transformed("p :- not q. q :- not p."), p)
    assert constraint_count(g) == 1
    # the anchor reaches its constraint through a both-sign conjunction
    (edge,) = g.in_edges("__constraint_0")
    conj = edge.src
    assert node_kind(conj) is NodeKind.CONJ
    signs = {(e.src, e.sign.value) for e in g.in_edges(conj)}
    assert signs == {("p", "positive"), ("p", "negative")}


def test_anchor_per_disconnected_component():
    text = "p :- not q. q :- not p. a :- not b. b :- not a."
    p = parse_program(text)
    g = ensure_constraints(transformed(text), p)
    assert constraint_count(g) == 2


def test_program_with_covering_constraints_unchanged():
    text = "p :- not q. q :- not p. :- p, q."
    g = transformed(text)
    assert ensure_constraints(g, parse_program(text)) is g


# --- prove ------------------------------------------------------------------


def test_prove_constraint_program_five():
    text = "m :- p. m :- not q. m :- r. :- not m. :- n."
    p = parse_program(text)
    g = ensure_constraints(transformed(text), p)
    # ":- not m." is __constraint_0; falsifying it needs m True
    results = prove("__constraint_0", False, ProofBranch(), g)
    assert len(g.in_edges("m")) == 3
    assert len(results) == 1
    m = results[0]
    assert m.value("m") is True
    assert m.value("p") is False and m.value("q") is False and m.value("r") is False
    # ":- n." is __constraint_1; falsifying it needs n False
    (n_model,) = prove("__constraint_1", False, ProofBranch(), g)
    assert n_model.value("n") is False


def test_prove_fact_leaf():
    g = transformed("q.")
    assert keys(prove("q", True, ProofBranch(), g)) == {frozenset({("q", True)})}
    assert prove("q", False, ProofBranch(), g) == []


def test_prove_ruleless_atom():
    g = transformed("p :- q.")
    assert prove("q", True, ProofBranch(), g) == []
    assert keys(prove("q", False, ProofBranch(), g)) == {frozenset({("q", False)})}


# --- detect_branch_cycle ----------------------------------------------------


def test_even_revisit_through_negation():
    branch = ProofBranch((("p", True), ("q", False)))
    assert detect_branch_cycle(branch, "p") is CycleKind.EVEN


def test_positive_revisit_all_true():
    branch = ProofBranch((("p", True), ("q", True)))
    assert detect_branch_cycle(branch, "p") is CycleKind.POSITIVE


def test_self_loop_revisit():
    assert detect_branch_cycle(ProofBranch((("p", True),)), "p") is CycleKind.POSITIVE
    assert detect_branch_cycle(ProofBranch((("p", False),)), "p") is CycleKind.EVEN


# --- model merging ----------------------------------------------------------


WORKED_A = [
    pm({"a": True, "d": True, "b": False}),
    pm({"a": False, "b": True}),
]
WORKED_B = [pm({"a": True, "c": True, "b": False})]


def test_merge_conjunctive_worked_example():
    merged = merge_conjunctive(WORKED_A, WORKED_B)
    assert keys(merged) == {
        frozenset({("a", True), ("c", True), ("d", True), ("b", False)})
    }


def test_merge_conjunctive_unit_and_conflict():
    assert keys(merge_conjunctive([pm({})], WORKED_B)) == keys(WORKED_B)
    assert merge_conjunctive([pm({"x": True})], [pm({"x": False})]) == []


def test_merge_conjunctive_commutative_associative():
    rng = random.Random(31)
    atoms = ["a", "b", "c"]

    def random_models():
        return [
            pm({a: rng.random() < 0.5 for a in rng.sample(atoms, rng.randint(0, 3))})
            for _ in range(rng.randint(0, 3))
        ]

    for _ in range(80):
        x, y, z = random_models(), random_models(), random_models()
        assert keys(merge_conjunctive(x, y)) == keys(merge_conjunctive(y, x))
        assert keys(merge_conjunctive(merge_conjunctive(x, y), z)) == keys(
            merge_conjunctive(x, merge_conjunctive(y, z))
        )


def test_merge_disjunctive_worked_example():
    merged = merge_disjunctive(WORKED_A, WORKED_B)
    assert keys(merged) == {
        frozenset({("a", True), ("c", True), ("d", True), ("b", False)}),
        frozenset({("a", False), ("b", True)}),
    }


def test_merge_disjunctive_empty_side():
    m = pm({"x": True})
    assert keys(merge_disjunctive([], [m])) == {m.key()}


def test_merge_disjunctive_idempotent():
    m = pm({"x": True})
    assert keys(merge_disjunctive([m], [m])) == {m.key()}


# --- forward propagation ----------------------------------------------------


def test_forward_propagate_fires_rules():
    cmap = build_causal_map(parse_program("c :- a. d :- not b."))
    out = forward_propagate(pm({"a": True, "b": False}), cmap)
    assert out.values == {"a": True, "b": False, "c": True, "d": True}
    assert out.provenance["c"] is Provenance.PROPAGATED


def test_forward_propagate_fixpoint_when_nothing_applies():
    cmap = build_causal_map(parse_program("c :- a."))
    start = pm({"b": True})
    assert forward_propagate(start, cmap).values == start.values


def test_forward_propagate_contradiction_drops_model():
    cmap = build_causal_map(parse_program("x :- a."))
    assert forward_propagate(pm({"a": True, "x": False}), cmap) is None


def test_forward_propagate_idempotent():
    rng = random.Random(32)
    for _ in range(60):
        program = parse_program(random_program_text(rng, 4, rng.randint(1, 6)))
        cmap = build_causal_map(program)
        start = pm(
            {a: rng.random() < 0.5 for a in list(program.atoms)[: rng.randint(0, 3)]}
        )
        once = forward_propagate(start, cmap)
        if once is not None:
            twice = forward_propagate(once, cmap)
            assert twice is not None and twice.values == once.values


# --- queries ----------------------------------------------------------------


QUERY_TEXT = "p :- not q. q :- not p. :- p, q."


def test_query_positive():
    assert solve_query(parse_program(QUERY_TEXT), "p") == [frozenset({"p"})]


def test_query_symmetric():
    assert solve_query(parse_program(QUERY_TEXT), "q") == [frozenset({"q"})]


def test_query_negative():
    assert solve_query(parse_program(QUERY_TEXT), "p", positive=False) == [
        frozenset({"q"})
    ]


def test_query_unknown_atom():
    with pytest.raises(QueryAtomUnknown):
        solve_query(parse_program(QUERY_TEXT), "r")


def test_query_soundness_random():
    rng = random.Random(33)
    for _ in range(40):
        program = parse_program(
            random_program_text(rng, rng.randint(2, 6), rng.randint(1, 8))
        )
        atom = sorted(program.atoms)[0]
        for model in solve_query(program, atom):
            assert atom in model
            assert is_stable(program, model)


# --- whole-engine properties -------------------------------------------------


def test_oracle_equivalence_random():
    rng = random.Random(34)
    for _ in range(200):
        program = parse_program(
            random_program_text(rng, rng.randint(1, 8), rng.randint(1, 12))
        )
        assert solve_igasp(program) == enumerate_stable(program)


def test_effective_edge_soundness():
    rng = random.Random(35)
    for _ in range(60):
        program = parse_program(
            random_program_text(rng, rng.randint(1, 6), rng.randint(1, 9))
        )
        g = transformed(str(program))
        for model in solve_igasp(program):
            w = world_from_atoms(g, model)
            for atom in atoms_of(g):
                effective = [e for e in g.in_edges(atom) if is_effective(e, w)]
                if w.value(atom):
                    assert effective or g.fixed_value(atom) is True
                else:
                    assert not effective


def test_positive_loop_rejection():
    # supported-but-unfounded loops never surface
    assert models("p :- q. q :- p. r :- not p.") == [["r"]]
    rng = random.Random(36)
    for _ in range(40):
        program = parse_program(
            random_program_text(rng, rng.randint(1, 6), rng.randint(1, 9), naf=0.2)
        )
        for model in solve_igasp(program):
            assert is_stable(program, model)
