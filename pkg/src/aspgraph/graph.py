"""Dependency graphs with explicit conjunction nodes.

A program maps to a graph whose nodes are atoms plus two kinds of helpers:
conjunction nodes standing for multi-literal rule bodies, and constraint
nodes standing for the (always false) head of a headless constraint.
``build_cnr`` produces the conjunction-node form; ``cnr_to_dg`` flips the
sign of every edge touching a conjunction node (De Morgan), which yields a
proper dependency graph: after the flip a conjunction node is true exactly
when its rule body fails.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .syntax import Program, Rule

CONJ_PREFIX = "__conj_"
CONSTRAINT_PREFIX = "__constraint_"


class DoubleTransformError(RuntimeError):
    """cnr_to_dg applied to an already transformed graph."""


class NodeKind(Enum):
    ATOM = "atom"
    CONJ = "conj"
    CONSTRAINT = "constraint"


class Sign(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"

    def flipped(self) -> Sign:
        return Sign.NEGATIVE if self is Sign.POSITIVE else Sign.POSITIVE


def node_kind(node_id: str) -> NodeKind:
    if node_id.startswith(CONJ_PREFIX):
        return NodeKind.CONJ
    if node_id.startswith(CONSTRAINT_PREFIX):
        return NodeKind.CONSTRAINT
    return NodeKind.ATOM


def helper_ordinal(node_id: str) -> int:
    return int(node_id.rsplit("_", 1)[1])


@dataclass(frozen=True, slots=True)
class Edge:
    src: str
    dst: str
    sign: Sign

    @property
    def negative(self) -> bool:
        return self.sign is Sign.NEGATIVE


class DepGraph:
    """Node/edge store; immutable by convention once built."""

    def __init__(self, transformed: bool = False, rule_count: int = 0):
        self._fixed: dict[str, bool] = {}
        self._node_order: dict[str, None] = {}
        self._edges: set[Edge] = set()
        self._out: dict[str, list[Edge]] = {}
        self._in: dict[str, list[Edge]] = {}
        self.origin: dict[str, tuple[Rule, ...]] = {}
        self.transformed = transformed
        self.rule_count = rule_count

    @property
    def nodes(self) -> list[str]:
        return list(self._node_order)

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset(self._edges)

    def has_node(self, node: str) -> bool:
        return node in self._node_order

    def add_node(self, node: str, fixed: bool | None = None) -> None:
        if node not in self._node_order:
            self._node_order[node] = None
            self._out[node] = []
            self._in[node] = []
        if fixed is not None:
            self._fixed[node] = fixed

    def add_edge(self, src: str, dst: str, sign: Sign) -> None:
        edge = Edge(src, dst, sign)
        if edge in self._edges:
            return
        self.add_node(src)
        self.add_node(dst)
        self._edges.add(edge)
        self._out[src].append(edge)
        self._in[dst].append(edge)

    def record_origin(self, node: str, rule: Rule) -> None:
        self.origin[node] = self.origin.get(node, ()) + (rule,)

    def fixed_value(self, node: str) -> bool | None:
        return self._fixed.get(node)

    @property
    def fixed(self) -> dict[str, bool]:
        return dict(self._fixed)

    def out_edges(self, node: str) -> list[Edge]:
        return self._out[node]

    def in_edges(self, node: str) -> list[Edge]:
        return self._in[node]

    def __eq__(self, other) -> bool:
        if not isinstance(other, DepGraph):
            return NotImplemented
        return (
            set(self._node_order) == set(other._node_order)
            and self._fixed == other._fixed
            and self._edges == other._edges
            and self.transformed == other.transformed
        )

    def __hash__(self):
        raise TypeError("DepGraph is not hashable")


def _rule_key(rule: Rule):
    return (rule.head, frozenset(rule.body))


def build_cnr(program: Program) -> DepGraph:
    """Conjunction-node graph of a program.

    One conjunction node per distinct rule with >= 2 body literals; rules
    with a single body literal become a direct edge. Facts fix their head
    node to True; each distinct headless constraint gets a False-fixed
    constraint node standing in for its head. Duplicate rules (same head and
    body set) collapse onto one node/edge set, with every source rule kept
    in the origin map.
    """
    g = DepGraph(transformed=False, rule_count=len(program.rules))
    for atom in sorted(program.atoms):
        g.add_node(atom)

    conj_count = 0
    constraint_count = 0
    seen: dict[tuple, tuple[str, ...]] = {}
    for rule in program.rules:
        key = _rule_key(rule)
        if key in seen:
            for helper in seen[key]:
                g.record_origin(helper, rule)
            continue

        helpers = []
        if rule.head is None:
            head_node = f"{CONSTRAINT_PREFIX}{constraint_count}"
            constraint_count += 1
            g.add_node(head_node, fixed=False)
            g.record_origin(head_node, rule)
            helpers.append(head_node)
        else:
            head_node = rule.head
            if not rule.body:
                g.add_node(head_node, fixed=True)
                seen[key] = ()
                continue

        if len(rule.body) == 1:
            lit = rule.body[0]
            g.add_edge(lit.atom, head_node, Sign.NEGATIVE if lit.negated else Sign.POSITIVE)
        else:
            conj = f"{CONJ_PREFIX}{conj_count}"
            conj_count += 1
            g.add_node(conj)
            g.record_origin(conj, rule)
            helpers.append(conj)
            for lit in rule.body:
                g.add_edge(lit.atom, conj, Sign.NEGATIVE if lit.negated else Sign.POSITIVE)
            g.add_edge(conj, head_node, Sign.POSITIVE)
        seen[key] = tuple(helpers)
    return g


def flip_conjunction_signs(g: DepGraph) -> DepGraph:
    """Copy of g with every conjunction-incident edge sign-flipped."""
    out = DepGraph(transformed=g.transformed, rule_count=g.rule_count)
    for node in g.nodes:
        out.add_node(node, fixed=g.fixed_value(node))
    for edge in sorted(g.edges, key=lambda e: (e.src, e.dst, e.sign.value)):
        touches_conj = (
            node_kind(edge.src) is NodeKind.CONJ or node_kind(edge.dst) is NodeKind.CONJ
        )
        sign = edge.sign.flipped() if touches_conj else edge.sign
        out.add_edge(edge.src, edge.dst, sign)
    out.origin = dict(g.origin)
    return out


def cnr_to_dg(g: DepGraph) -> DepGraph:
    """De Morgan rewrite: negate all in- and out-edges of conjunction nodes."""
    if g.transformed:
        raise DoubleTransformError("graph has already been transformed")
    out = flip_conjunction_signs(g)
    out.transformed = True
    return out


def atoms_of(g: DepGraph) -> frozenset[str]:
    """Atom node names; helper nodes are never reported in answer sets."""
    return frozenset(n for n in g.nodes if node_kind(n) is NodeKind.ATOM)


_KIND_ORDER = {NodeKind.ATOM: 0, NodeKind.CONJ: 1, NodeKind.CONSTRAINT: 2}


def _node_sort_key(node: str):
    kind = node_kind(node)
    if kind is NodeKind.ATOM:
        return (_KIND_ORDER[kind], node, 0)
    return (_KIND_ORDER[kind], "", helper_ordinal(node))


def sorted_nodes(g: DepGraph) -> list[str]:
    return sorted(g.nodes, key=_node_sort_key)


def export_dot(g: DepGraph) -> str:
    """Graphviz text: negative edges dashed with label "not", conjunction
    nodes filled black, constraint nodes double-circled."""
    if not g.nodes:
        return "digraph g {}"
    lines = ["digraph g {"]
    for node in sorted_nodes(g):
        kind = node_kind(node)
        if kind is NodeKind.CONJ:
            attrs = ' [shape=circle, style=filled, fillcolor=black, label=""]'
        elif kind is NodeKind.CONSTRAINT:
            attrs = " [shape=doublecircle]"
        else:
            attrs = ""
        lines.append(f'  "{node}"{attrs};')
    for edge in sorted(g.edges, key=lambda e: (_node_sort_key(e.src), _node_sort_key(e.dst), e.sign.value)):
        attrs = ' [label="not", style=dashed]' if edge.negative else ""
        lines.append(f'  "{edge.src}" -> "{edge.dst}"{attrs};')
    lines.append("}")
    return "\n".join(lines)


def graph_to_json(g: DepGraph) -> dict:
    """JSON-ready document: {nodes: [{id, kind, fixed}], edges: [...]}."""
    return {
        "nodes": [
            {"id": n, "kind": node_kind(n).value, "fixed": g.fixed_value(n)}
            for n in sorted_nodes(g)
        ],
        "edges": [
            {"from": e.src, "to": e.dst, "sign": e.sign.value}
            for e in sorted(
                g.edges,
                key=lambda e: (_node_sort_key(e.src), _node_sort_key(e.dst), e.sign.value),
            )
        ],
        "transformed": g.transformed,
    }
