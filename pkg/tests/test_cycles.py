import random

import pytest

from aspgraph.cycles import (
    CycleExplosionError,
    CycleKind,
    classify,
    cycle_stats,
    enumerate_cycles,
    find_virtual_nodes,
)
from aspgraph.graph import build_cnr, cnr_to_dg
from aspgraph.syntax import parse_program

from conftest import random_program_text


def transformed(text):
    return cnr_to_dg(build_cnr(parse_program(text)))


def test_classify_by_negative_count():
    assert classify(0) is CycleKind.POSITIVE
    assert classify(1) is CycleKind.ODD
    assert classify(2) is CycleKind.EVEN
    assert classify(3) is CycleKind.ODD


def test_even_pair_is_one_virtual_node():
    g = transformed("p :- not q. q :- not p.")
    virtual = find_virtual_nodes(g)
    assert len(virtual) == 1
    assert virtual[0].members == {"p", "q"}


def test_acyclic_graph_has_no_virtual_nodes():
    assert find_virtual_nodes(transformed("p :- q, not r.")) == []


def test_three_cycle_single_component():
    g = transformed("p :- not q. q :- not r. r :- not p.")
    virtual = find_virtual_nodes(g)
    assert len(virtual) == 1
    assert virtual[0].members == {"p", "q", "r"}


def test_boundary_edges():
    g = transformed("p :- not q. q :- not p. s :- p. p :- t.")
    (v,) = find_virtual_nodes(g)
    assert v.members == {"p", "q"}
    assert {(e.src, e.dst) for e in v.boundary_out} == {("p", "s")}
    assert {(e.src, e.dst) for e in v.boundary_in} == {("t", "p")}


def test_enumerate_even_cycle():
    g = transformed("p :- not q. q :- not p.")
    (v,) = find_virtual_nodes(g)
    cycles = enumerate_cycles(v, g)
    assert cycles == [(("p", "q"), CycleKind.EVEN)]


def test_enumerate_odd_cycle():
    g = transformed("p :- not q. q :- not r. r :- not p.")
    (v,) = find_virtual_nodes(g)
    [(nodes, kind)] = enumerate_cycles(v, g)
    assert set(nodes) == {"p", "q", "r"}
    assert kind is CycleKind.ODD


def test_enumerate_positive_cycle():
    g = transformed("p :- q. q :- p.")
    (v,) = find_virtual_nodes(g)
    assert enumerate_cycles(v, g) == [(("p", "q"), CycleKind.POSITIVE)]


def test_direct_negative_self_loop_is_odd_one_cycle():
    g = transformed("p :- not p.")
    (v,) = find_virtual_nodes(g)
    assert enumerate_cycles(v, g) == [(("p",), CycleKind.ODD)]


def test_self_through_conjunction_counts_via_helper():
    g = transformed("p :- not q, not r, not p.")
    (v,) = find_virtual_nodes(g)
    [(nodes, kind)] = enumerate_cycles(v, g)
    assert set(nodes) == {"p", "__conj_0"}
    assert kind is CycleKind.ODD  # one negative hop into, one positive out of


def test_parallel_signed_edges_expand():
    # p depends on q both ways; q on p once: two sign-distinct cycles
    g = transformed("p :- q. p :- not q. q :- p.")
    (v,) = find_virtual_nodes(g)
    kinds = sorted(kind.value for _, kind in enumerate_cycles(v, g))
    assert kinds == ["odd", "positive"]


def test_cycle_stats_examples():
    assert cycle_stats(transformed("p :- not q. q :- not p.")) == (1, 0, 0)
    assert cycle_stats(transformed("p :- not q. q :- not r. r :- not p.")) == (0, 1, 0)
    assert cycle_stats(transformed("")) == (0, 0, 0)
    assert cycle_stats(transformed("p :- q. q :- p.")) == (0, 0, 1)


def test_explosion_cap():
    text = " ".join(
        f"x{i} :- x{j}." for i in range(6) for j in range(6) if i != j
    )
    g = transformed(text)
    with pytest.raises(CycleExplosionError) as err:
        cycle_stats(g, cap=10)
    assert err.value.partial_count > 10
    (v,) = find_virtual_nodes(g)
    with pytest.raises(CycleExplosionError):
        enumerate_cycles(v, g, cap=10)


def test_cap_env_override(monkeypatch):
    from aspgraph.cycles import default_cycle_cap

    monkeypatch.setenv("ASPGRAPH_CYCLE_CAP", "123")
    assert default_cycle_cap() == 123
    monkeypatch.delenv("ASPGRAPH_CYCLE_CAP")
    assert default_cycle_cap() == 10**6


def _brute_force_cycles(g, members):
    """Exhaustive DFS over simple edge paths; each cycle is rooted at its
    smallest node, so every sign variant appears exactly once."""
    edges = {}
    for e in g.edges:
        if e.src in members and e.dst in members:
            edges.setdefault(e.src, []).append(e)
    found = []

    def walk(start, node, path, negatives):
        for e in edges.get(node, ()):
            if e.dst == start:
                found.append((tuple(path), classify(negatives + e.negative)))
            elif e.dst not in path and e.dst > start:
                walk(start, e.dst, path + [e.dst], negatives + e.negative)

    for start in sorted(members):
        walk(start, start, [start], 0)
    return found


def test_agreement_with_brute_force_on_small_graphs():
    rng = random.Random(13)
    key = lambda item: (item[0], item[1].value)
    for _ in range(60):
        g = transformed(random_program_text(rng, rng.randint(1, 5), rng.randint(1, 8)))
        expected = []
        got = []
        for v in find_virtual_nodes(g):
            expected += _brute_force_cycles(g, v.members)
            got += enumerate_cycles(v, g)
        assert sorted(got, key=key) == sorted(expected, key=key)


def test_partition_and_condensation_acyclic():
    rng = random.Random(14)
    for _ in range(60):
        g = transformed(random_program_text(rng, rng.randint(1, 7), rng.randint(1, 10)))
        virtual = find_virtual_nodes(g)
        member_of = {}
        for v in virtual:
            for m in v.members:
                assert m not in member_of
                member_of[m] = v
        handle = lambda n: id(member_of[n]) if n in member_of else n
        # collapse members and check the condensation has no cycle
        import networkx as nx

        cg = nx.DiGraph()
        cg.add_nodes_from({handle(n) for n in g.nodes})
        for e in g.edges:
            a, b = handle(e.src), handle(e.dst)
            if a != b:
                cg.add_edge(a, b)
        assert nx.is_directed_acyclic_graph(cg)
