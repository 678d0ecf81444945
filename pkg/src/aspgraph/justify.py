"""Causal justification trees over a valued dependency graph.

An edge is effective when it actually propagated True: a positive edge from
a True node or a negative edge from a False node. A True atom is explained
by its effective in-edges, a False atom by listing why each in-edge failed
to fire. Conjunction nodes appear as internal tree nodes annotated with
their source rule; recursion stops at facts, rule-less atoms, loop-backs
onto the current path, and nodes already expanded elsewhere in the tree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import DepGraph, Edge, NodeKind, Sign, atoms_of, node_kind
from .worlds import World


class AtomUnknown(ValueError):
    """Requested atom is not an atom node of the graph."""


class WorldIncomplete(ValueError):
    """Justification requires every node to carry a value."""


def is_effective(edge: Edge, w: World) -> bool:
    value = w.value(edge.src)
    if value is None:
        return False
    return (edge.sign is Sign.POSITIVE) == value


@dataclass(frozen=True)
class JustificationTree:
    node: str
    value: bool
    reason: str
    children: tuple[JustificationTree, ...] = ()
    primary: bool = False

    def size(self) -> int:
        return 1 + sum(child.size() for child in self.children)


def _edge_reason(edge: Edge, w: World) -> str:
    src_value = "true" if w.value(edge.src) else "false"
    sign = "positive" if edge.sign is Sign.POSITIVE else "negative"
    if is_effective(edge, w):
        return f"{sign} edge from {src_value} {edge.src}"
    return f"{sign} edge from {src_value} {edge.src} (not effective)"


def _node_label(g: DepGraph, node: str) -> str:
    if node_kind(node) is NodeKind.CONJ and node in g.origin:
        return f"body of rule [{g.origin[node][0]}]"
    return ""


def justify(g: DepGraph, w: World, atom: str) -> JustificationTree:
    """Justification tree for an atom in a completed world.

    True nodes branch on every effective in-edge, the lexicographically
    smallest source marked primary; False nodes list all in-edges with the
    reason each one is not effective.
    """
    if atom not in atoms_of(g):
        raise AtomUnknown(f"{atom!r} is not a program atom")
    if not w.is_complete(g):
        missing = sorted(n for n in g.nodes if w.value(n) is None)
        raise WorldIncomplete(f"unfixed nodes: {', '.join(missing)}")

    expanded: set[str] = set()

    def build(
        node: str, via: str, path: frozenset[str], primary: bool = False
    ) -> JustificationTree:
        value = bool(w.value(node))
        note = _node_label(g, node)
        prefix = f"{via}; " if via else ""
        if node in path:
            return JustificationTree(
                node, value, prefix + "coinductive assumption (loop)", (), primary
            )
        if node in expanded:
            return JustificationTree(
                node, value, prefix + "shown elsewhere in this tree", (), primary
            )
        if g.fixed_value(node) is True:
            return JustificationTree(node, value, prefix + "fact", (), primary)
        in_edges = sorted(g.in_edges(node), key=lambda e: (e.src, e.sign.value))
        if not in_edges:
            return JustificationTree(node, value, prefix + "no rules", (), primary)
        expanded.add(node)
        sub_path = path | {node}
        if value:
            support = [e for e in in_edges if is_effective(e, w)]
            primary_src = min(e.src for e in support) if support else None
            children = tuple(
                build(e.src, _edge_reason(e, w), sub_path, e.src == primary_src)
                for e in support
            )
            reason = prefix + (note or "supported")
        else:
            children = tuple(build(e.src, _edge_reason(e, w), sub_path) for e in in_edges)
            reason = prefix + (note or "no effective in-edge")
        return JustificationTree(node, value, reason, children, primary)

    return build(atom, "", frozenset())


def check_justified(g: DepGraph, w: World) -> bool:
    """Post-hoc validator: the world's True projection is an answer set.

    Requires a complete world consistent with fixed values in which every
    True node is a fact or has an effective in-edge, no False node receives
    an effective edge, and every True atom is founded: derivable from facts
    and negation without resting on a positive cycle.
    """
    if not w.is_complete(g):
        return False
    for node in g.nodes:
        fixed = g.fixed_value(node)
        if fixed is not None and w.value(node) != fixed:
            return False
        value = w.value(node)
        effective = [e for e in g.in_edges(node) if is_effective(e, w)]
        if value and not effective and g.fixed_value(node) is not True:
            return False
        if not value and effective:
            return False
    return _founded_atoms_ok(g, w)


def _supports_via(g: DepGraph, edge: Edge, w: World, founded: set[str]) -> bool:
    # A negative edge fires from a False node: negation-as-failure support
    # needs no further derivation unless the source is a conjunction node,
    # in which case the body's positive literals must themselves be founded.
    src = edge.src
    if node_kind(src) is not NodeKind.CONJ:
        if edge.sign is Sign.POSITIVE:
            return src in founded
        return True
    return all(
        inner.src in founded
        for inner in g.in_edges(src)
        if inner.sign is Sign.NEGATIVE  # transformed sign of a positive literal
    )


def _founded_atoms_ok(g: DepGraph, w: World) -> bool:
    true_atoms = {n for n in atoms_of(g) if w.value(n)}
    founded = {n for n in true_atoms if g.fixed_value(n) is True}
    changed = True
    while changed:
        changed = False
        for atom in true_atoms - founded:
            for edge in g.in_edges(atom):
                if is_effective(edge, w) and _supports_via(g, edge, w, founded):
                    founded.add(atom)
                    changed = True
                    break
    return founded == true_atoms


def render_text(tree: JustificationTree, indent: str = "") -> str:
    value = "True" if tree.value else "False"
    star = " *" if tree.primary else ""
    lines = [f"{indent}{tree.node} = {value}  [{tree.reason}]{star}"]
    for child in tree.children:
        lines.append(render_text(child, indent + "  "))
    return "\n".join(lines)


def tree_to_json(tree: JustificationTree) -> dict:
    return {
        "node": tree.node,
        "value": tree.value,
        "reason": tree.reason,
        "primary": tree.primary,
        "children": [tree_to_json(child) for child in tree.children],
    }


def export_dot_world(g: DepGraph, w: World) -> str:
    """DOT rendering of the valued graph with effective edges highlighted."""
    from .graph import sorted_nodes, _node_sort_key

    lines = ["digraph justification {"]
    for node in sorted_nodes(g):
        kind = node_kind(node)
        value = w.value(node)
        shape = {
            NodeKind.ATOM: "ellipse",
            NodeKind.CONJ: "circle",
            NodeKind.CONSTRAINT: "doublecircle",
        }[kind]
        color = "palegreen" if value else "lightgray"
        label = node if kind is not NodeKind.CONJ else ""
        lines.append(
            f'  "{node}" [shape={shape}, style=filled, fillcolor={color}, label="{label}"];'
        )
    for edge in sorted(g.edges, key=lambda e: (_node_sort_key(e.src), _node_sort_key(e.dst), e.sign.value)):
        attrs = []
        if edge.negative:
            attrs.append('label="not"')
            attrs.append("style=dashed")
        if is_effective(edge, w):
            attrs.append("color=red")
            attrs.append("penwidth=2")
        rendered = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f'  "{edge.src}" -> "{edge.dst}"{rendered};')
    lines.append("}")
    return "\n".join(lines)
