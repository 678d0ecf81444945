"""Bottom-up solver over the transformed dependency graph.

Solving walks the strongly-connected-component condensation in topological
order. Each iteration fixes the current root nodes (unfixed regular roots
default to False; virtual roots are broken into every stable labeling of
their members), merges the per-root worlds, propagates the two value rules

    (i)  a True node makes every positive out-neighbour True,
    (ii) a False node makes every negative out-neighbour True,

transitively, and removes the roots from the view. A True demand arriving
at a False node (in particular a constraint node) marks the world
inconsistent; unsatisfiability shows up as zero surviving worlds.
"""

from __future__ import annotations

from .cycles import VirtualNode, find_virtual_nodes
from .graph import DepGraph, NodeKind, Sign, build_cnr, cnr_to_dg, node_kind
from .syntax import Program
from .worlds import World, body_literal, eval_body, initial_world, node_bodies


class GraphView:
    """The not-yet-processed part of a graph, with SCCs wrapped."""

    def __init__(self, g: DepGraph, virtual: list[VirtualNode] | None = None):
        self.graph = g
        self.virtual = find_virtual_nodes(g) if virtual is None else virtual
        self.handle_of: dict[str, object] = {}
        for v in self.virtual:
            for m in v.members:
                self.handle_of[m] = v
        for n in g.nodes:
            self.handle_of.setdefault(n, n)
        self.alive: set[str] = set(g.nodes)

    def __bool__(self) -> bool:
        return bool(self.alive)

    def remove(self, handles) -> None:
        for h in handles:
            if isinstance(h, VirtualNode):
                self.alive -= h.members
            else:
                self.alive.discard(h)


def find_roots(view: GraphView) -> list:
    """Handles (regular nodes or virtual nodes) with no live in-edge.

    The condensation is acyclic, so a nonempty view always has roots; a
    rootless nonempty view signals a wrapping bug.
    """
    g = view.graph
    roots = []
    seen = set()
    for node in view.alive:
        handle = view.handle_of[node]
        key = handle.key if isinstance(handle, VirtualNode) else handle
        if key in seen:
            continue
        seen.add(key)
        in_edges = (
            handle.boundary_in if isinstance(handle, VirtualNode) else g.in_edges(node)
        )
        if not any(e.src in view.alive for e in in_edges):
            roots.append((key, handle))
    if view.alive and not roots:
        raise RuntimeError("nonempty view has no roots: cycle wrapping is broken")
    return [handle for _, handle in sorted(roots, key=lambda item: item[0])]


def _apply_removal(w: World, node: str, value: bool, g: DepGraph) -> None:
    # True nodes no longer need in-edges and cannot fire negative out-edges;
    # False nodes cannot fire positive out-edges. In-edges of False nodes
    # are kept so inconsistency stays detectable.
    if value:
        w.removed.update(g.in_edges(node))
        w.removed.update(e for e in g.out_edges(node) if e.sign is Sign.NEGATIVE)
    else:
        w.removed.update(e for e in g.out_edges(node) if e.sign is Sign.POSITIVE)


def propagate(
    node: str, value: bool, w: World, g: DepGraph, remove_edges: bool = True
) -> World:
    """Transitively apply the propagation rules from one fixed node."""
    stack = [(node, value)]
    while stack and w.consistent:
        n, v = stack.pop()
        for edge in g.out_edges(n):
            if edge in w.removed:
                continue
            effective = (edge.sign is Sign.POSITIVE) == v
            if not effective:
                continue
            current = w.value(edge.dst)
            if current is False:
                w.consistent = False
                return w
            if current is None:
                w.assign(edge.dst, True)
                if remove_edges:
                    _apply_removal(w, edge.dst, True, g)
                stack.append((edge.dst, True))
    return w


def fix_root(node: str, w: World) -> World:
    """Default an unfixed regular root to False; fixed values are kept."""
    if w.value(node) is None:
        w.assign(node, False)
    return w


def merge_root_worlds(per_root: list[list[World]]) -> list[World]:
    """Cartesian merge of the worlds produced by each root this iteration;
    combinations with conflicting assignments are dropped."""
    if not per_root:
        return []
    merged = per_root[0]
    for worlds in per_root[1:]:
        next_merged = []
        for a in merged:
            for b in worlds:
                c = a.copy()
                for node, value in b.values.items():
                    if not c.assign(node, value):
                        break
                if c.consistent:
                    c.removed |= b.removed
                    next_merged.append(c)
        merged = next_merged
        if not merged:
            return []
    return merged


def _member_rules(g: DepGraph, atoms: list[str]):
    bodies = {a: node_bodies(g, a) for a in atoms}
    mentions: dict[str, set[str]] = {a: set() for a in atoms}
    for head, heads_bodies in bodies.items():
        for body in heads_bodies:
            for lit_atom, _ in body:
                if lit_atom in mentions:
                    mentions[lit_atom].add(head)
    return bodies, mentions


def _founded(
    atom_values: dict[str, bool],
    members: frozenset[str],
    bodies,
    external_true: set[str],
    value_of,
) -> bool:
    """True members must be derivable without relying on the positive cycle
    itself: a least-fixpoint restricted to the component, seeded from
    externally supported members."""
    founded = set(external_true)
    changed = True
    while changed:
        changed = False
        for atom, val in atom_values.items():
            if not val or atom in founded:
                continue
            for body in bodies[atom]:
                if eval_body(body, value_of) is not True:
                    continue
                if all(
                    lit in founded
                    for lit, negated in body
                    if not negated and lit in members
                ):
                    founded.add(atom)
                    changed = True
                    break
    return all(atom in founded for atom, val in atom_values.items() if val)


def _component_labelings(
    v: VirtualNode, g: DepGraph, w: World
) -> list[dict[str, bool]]:
    """Stable labelings of a component's atom members, given outside values.

    Candidates are enumerated with support pruning (a False atom may not
    have a satisfied body; a True atom needs a satisfiable one) and filtered
    for foundedness.
    """
    atoms = sorted(m for m in v.members if node_kind(m) is NodeKind.ATOM)
    bodies, mentions = _member_rules(g, atoms)
    external_true = {a for a in atoms if w.value(a) is True}
    decisions = [a for a in atoms if a not in external_true]

    cand: dict[str, bool] = {a: True for a in external_true}

    def value_of(atom: str) -> bool | None:
        if atom in cand:
            return cand[atom]
        if atom in bodies:
            return None
        return w.value(atom)

    def head_ok(head: str) -> bool:
        val = cand.get(head)
        if val is None:
            return True
        states = [eval_body(b, value_of) for b in bodies[head]]
        if val is False:
            return not any(s is True for s in states)
        if head in external_true:
            return True
        return any(s is not False for s in states)

    # A component whose member atoms never occur negated in member bodies
    # has positive internal cycles only, hence exactly one stable labeling:
    # the support fixpoint from externally true members, all else False.
    member_naf = any(
        negated and lit in bodies
        for a in atoms
        for body in bodies[a]
        for lit, negated in body
    )
    if not member_naf:
        fixed = set(external_true)
        changed = True
        while changed:
            changed = False
            for atom in decisions:
                if atom in fixed:
                    continue
                for body in bodies[atom]:
                    outside = tuple((l, n) for l, n in body if l not in bodies)
                    inside_ok = all(
                        lit in fixed for lit, _ in body if lit in bodies
                    )
                    if inside_ok and eval_body(outside, w.value) is True:
                        fixed.add(atom)
                        changed = True
                        break
        return [{a: (a in fixed) for a in atoms}]

    results: list[dict[str, bool]] = []

    def search(index: int) -> None:
        if index == len(decisions):
            if all(head_ok(a) for a in atoms) and _founded(
                cand, v.members, bodies, external_true, value_of
            ):
                results.append(dict(cand))
            return
        atom = decisions[index]
        for value in (True, False):
            cand[atom] = value
            affected = {atom} | {h for h in mentions[atom] if h in cand}
            if all(head_ok(h) for h in affected):
                search(index + 1)
            del cand[atom]

    search(0)
    return results


def break_cycles(
    v: VirtualNode, g: DepGraph, w: World, remove_edges: bool = True
) -> list[World]:
    """Every extension of w that stably labels the virtual node's members.

    Even cycles contribute their alternative labelings, odd cycles without a
    True member kill the candidate, and purely positive components get the
    all-False labeling (modulo externally forced members). Conjunction
    members take the complement of their body's value.
    """
    worlds = []
    for labeling in _component_labelings(v, g, w):
        w2 = w.copy()
        for atom, value in labeling.items():
            w2.assign(atom, value)
            if remove_edges:
                _apply_removal(w2, atom, value, g)
        value_of = lambda a: w2.value(a)
        for member in sorted(v.members):
            if node_kind(member) is not NodeKind.CONJ:
                continue
            body = tuple(body_literal(e, g.transformed) for e in g.in_edges(member))
            value = not eval_body(body, value_of)
            w2.assign(member, value)
            if remove_edges:
                _apply_removal(w2, member, value, g)
        if w2.consistent:
            worlds.append(w2)
    return worlds


def solve_graph(
    g: DepGraph, remove_edges: bool = True, start: World | None = None
) -> list[World]:
    """All completed consistent worlds of a transformed graph."""
    view = GraphView(g)
    worlds = [start.copy() if start is not None else initial_world(g)]
    while view and worlds:
        roots = find_roots(view)
        survivors = []
        for w in worlds:
            per_root: list[list[World]] = []
            for root in roots:
                if isinstance(root, VirtualNode):
                    per_root.append(break_cycles(root, g, w, remove_edges))
                else:
                    per_root.append([fix_root(root, w.copy())])
            for merged in merge_root_worlds(per_root):
                for root in roots:
                    nodes = sorted(root.members) if isinstance(root, VirtualNode) else [root]
                    for node in nodes:
                        if not merged.consistent:
                            break
                        propagate(node, merged.value(node), merged, g, remove_edges)
                if merged.consistent:
                    survivors.append(merged)
        worlds = survivors
        view.remove(roots)
    return worlds


def solve_grasp_worlds(program: Program, remove_edges: bool = True):
    """Solve bottom-up; returns the transformed graph and completed worlds,
    ordered by their projected answer set."""
    g = cnr_to_dg(build_cnr(program))
    worlds = solve_graph(g, remove_edges)
    keyed = {}
    for w in worlds:
        keyed.setdefault(tuple(sorted(w.true_atoms(g))), w)
    ordered = [keyed[key] for key in sorted(keyed)]
    return g, ordered


def solve_grasp(program: Program, remove_edges: bool = True) -> list[frozenset[str]]:
    """Answer sets of the program, sorted lexicographically as atom lists."""
    g, worlds = solve_grasp_worlds(program, remove_edges)
    return [w.true_atoms(g) for w in worlds]
