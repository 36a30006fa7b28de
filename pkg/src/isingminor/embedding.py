"""Minor-embeddings: representation, validation, classification, and a
best-effort greedy embedder for end-to-end demos.

An embedding maps each logical vertex to a connected subtree of hardware
vertices, and each logical edge to one hardware coupler between the two
subtrees (the edge assignment).
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from .graphs import Edge, Graph, HardwareGraph, edge_key


class EmbeddingError(ValueError):
    """The given data does not form a valid minor-embedding."""


class EmbeddingClass(str, Enum):
    SUBGRAPH = "subgraph"
    TOPOLOGICAL_MINOR = "topological_minor"
    GENERAL_MINOR = "general_minor"


@dataclass(frozen=True)
class MinorEmbedding:
    """Vertex-to-subtree map plus per-logical-edge physical endpoints.

    edge_assignment is keyed by the canonical logical edge (i, j), i < j,
    and stores (p_i, p_j) with p_i in trees[i] and p_j in trees[j].
    """

    logical: Graph
    hardware: Graph
    trees: dict[int, frozenset[int]]
    tree_edges: dict[int, frozenset[Edge]]
    edge_assignment: dict[Edge, tuple[int, int]]

    @classmethod
    def build(
        cls,
        logical: Graph,
        hardware: Graph,
        trees: Mapping[int, Iterable[int]],
        tree_edges: Mapping[int, Iterable[tuple[int, int]]] | None = None,
        edge_assignment: Mapping[tuple[int, int], tuple[int, int]] | None = None,
    ) -> "MinorEmbedding":
        trees_f = {i: frozenset(vs) for i, vs in trees.items()}
        if tree_edges is None:
            tree_edges_f = {
                i: _spanning_tree_edges(hardware, vs) for i, vs in trees_f.items()
            }
        else:
            tree_edges_f = {
                i: frozenset(edge_key(u, v) for u, v in es) for i, es in tree_edges.items()
            }
            for i in trees_f:
                tree_edges_f.setdefault(i, frozenset())
        ea: dict[Edge, tuple[int, int]] = {}
        for (u, v), (pu, pv) in (edge_assignment or {}).items():
            if u > v:
                u, v, pu, pv = v, u, pv, pu
            ea[(u, v)] = (pu, pv)
        return cls(logical, hardware, trees_f, tree_edges_f, ea)

    def used_vertices(self) -> frozenset[int]:
        out: set[int] = set()
        for vs in self.trees.values():
            out |= vs
        return frozenset(out)

    def assigned_endpoint(self, i: int, j: int) -> int:
        """The physical qubit of trees[i] carrying logical edge ij (tau(i, j))."""
        e = edge_key(i, j)
        pu, pv = self.edge_assignment[e]
        return pu if e[0] == i else pv


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...] = field(default_factory=tuple)


def _spanning_tree_edges(hardware: Graph, vertices: frozenset[int]) -> frozenset[Edge]:
    """Any spanning tree of the subgraph induced on `vertices` (BFS tree)."""
    if not vertices:
        return frozenset()
    root = min(vertices)
    seen = {root}
    edges: set[Edge] = set()
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in sorted(hardware.nbr(u)):
            if v in vertices and v not in seen:
                seen.add(v)
                edges.add(edge_key(u, v))
                queue.append(v)
    # a disconnected vertex set yields too few edges; validation reports it
    return frozenset(edges)


def validate(e: MinorEmbedding) -> ValidationReport:
    """Check all minor-embedding invariants; violations are data, not errors."""
    violations: list[str] = []

    logical_vs = set(e.logical.vertices)
    hardware_vs = set(e.hardware.vertices)
    owner: dict[int, int] = {}
    for i, vs in e.trees.items():
        if i not in logical_vs:
            violations.append(f"tree for unknown logical vertex {i}")
        if not vs:
            violations.append(f"empty tree for logical vertex {i}")
        for u in vs:
            if u not in hardware_vs:
                violations.append(f"tree of {i} uses unknown hardware vertex {u}")
            elif u in owner:
                violations.append(f"hardware vertex {u} shared by logical {owner[u]} and {i}")
            else:
                owner[u] = i
    for i in e.logical.vertices:
        if i not in e.trees:
            violations.append(f"no tree for logical vertex {i}")

    for i, es in e.tree_edges.items():
        vs = e.trees.get(i, frozenset())
        for ed in es:
            if ed not in e.hardware.edges:
                violations.append(f"tree edge {ed} of {i} is not a hardware edge")
            if not (ed[0] in vs and ed[1] in vs):
                violations.append(f"tree edge {ed} of {i} leaves trees[{i}]")
        if vs and len(es) != len(vs) - 1:
            violations.append(f"tree of {i} has {len(es)} edges for {len(vs)} vertices")
        elif vs and not _connected(vs, es):
            violations.append(f"tree of {i} disconnected")

    for le in e.logical.edges:
        if le not in e.edge_assignment:
            violations.append(f"logical edge {le} has no assigned hardware edge")
            continue
        pu, pv = e.edge_assignment[le]
        i, j = le
        if edge_key(pu, pv) not in e.hardware.edges:
            violations.append(f"assignment {le} -> ({pu},{pv}) is not a hardware edge")
        if pu not in e.trees.get(i, frozenset()):
            violations.append(f"assignment {le}: {pu} not in trees[{i}]")
        if pv not in e.trees.get(j, frozenset()):
            violations.append(f"assignment {le}: {pv} not in trees[{j}]")
    for le in e.edge_assignment:
        if le not in e.logical.edges:
            violations.append(f"assignment for non-logical edge {le}")

    return ValidationReport(ok=not violations, violations=tuple(violations))


def _connected(vertices: frozenset[int], edges: frozenset[Edge]) -> bool:
    adj: dict[int, set[int]] = {v: set() for v in vertices}
    for u, v in edges:
        if u in adj and v in adj:
            adj[u].add(v)
            adj[v].add(u)
    start = next(iter(vertices))
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == len(vertices)


def _internal_degrees(e: MinorEmbedding, i: int) -> dict[int, int]:
    deg = {v: 0 for v in e.trees[i]}
    for u, v in e.tree_edges[i]:
        deg[u] += 1
        deg[v] += 1
    return deg


def classify(e: MinorEmbedding) -> EmbeddingClass:
    """subgraph < topological_minor < general_minor, by tree shape."""
    report = validate(e)
    if not report.ok:
        raise EmbeddingError("; ".join(report.violations))
    if all(len(vs) == 1 for vs in e.trees.values()):
        return EmbeddingClass.SUBGRAPH
    for i in e.trees:
        if any(d > 2 for d in _internal_degrees(e, i).values()):
            return EmbeddingClass.GENERAL_MINOR
    return EmbeddingClass.TOPOLOGICAL_MINOR


def leaves(e: MinorEmbedding, i: int) -> frozenset[int]:
    """Hardware vertices of trees[i] with internal degree <= 1.

    A singleton tree is its own sole leaf (l_i = 1).
    """
    return frozenset(v for v, d in _internal_degrees(e, i).items() if d <= 1)


def leaf_count(e: MinorEmbedding, i: int) -> int:
    return len(leaves(e, i))


def derive_edge_assignment(
    logical: Graph,
    hardware: Graph,
    trees: Mapping[int, Iterable[int]],
    tree_edges: Mapping[int, Iterable[tuple[int, int]]] | None = None,
) -> MinorEmbedding:
    """Fill in the edge assignment deterministically.

    For each logical edge the lexicographically smallest connecting
    hardware edge (by sorted hardware id pair) is chosen.
    """
    e = MinorEmbedding.build(logical, hardware, trees, tree_edges)
    assignment: dict[Edge, tuple[int, int]] = {}
    for i, j in sorted(logical.edges):
        candidates = []
        for u in e.trees[i]:
            for v in hardware.nbr(u):
                if v in e.trees[j]:
                    candidates.append((edge_key(u, v), (u, v)))
        if not candidates:
            raise EmbeddingError(f"not an embedding: no hardware edge connects trees of {i} and {j}")
        _, (u, v) = min(candidates)
        assignment[(i, j)] = (u, v)
    return MinorEmbedding.build(logical, hardware, trees, e.tree_edges, assignment)


def greedy_chain_embed(
    logical: Graph,
    hardware: HardwareGraph | Graph,
    seed: int = 0,
    retries: int = 64,
) -> MinorEmbedding | None:
    """Randomized best-effort embedder; deterministic given the seed.

    Places logical vertices in random high-degree-first order, growing each
    tree through free hardware vertices until it touches every already
    placed neighbor's tree. Returns None if no attempt succeeds.
    """
    hw = hardware.base if isinstance(hardware, HardwareGraph) else hardware
    rng = random.Random(seed)
    if logical.n > hw.n:
        return None
    for _ in range(retries):
        trees = _attempt_place(logical, hw, rng)
        if trees is None:
            continue
        emb = derive_edge_assignment(logical, hw, trees)
        if validate(emb).ok:
            return emb
    return None


def _attempt_place(
    logical: Graph, hw: Graph, rng: random.Random
) -> dict[int, set[int]] | None:
    order = sorted(logical.vertices, key=lambda v: (-logical.degree(v), rng.random()))
    free = set(hw.vertices)
    trees: dict[int, set[int]] = {}
    for i in order:
        placed_nbrs = [j for j in logical.nbr(i) if j in trees]
        candidates = list(free)
        rng.shuffle(candidates)
        placed = False
        for start in candidates[: max(8, len(candidates) // 2)]:
            tree = _grow_tree(hw, start, free, [trees[j] for j in placed_nbrs])
            if tree is not None:
                trees[i] = tree
                free -= tree
                placed = True
                break
        if not placed:
            return None
    return trees


def _grow_tree(
    hw: Graph, start: int, free: set[int], targets: list[set[int]]
) -> set[int] | None:
    """Grow a tree from `start` through free vertices until adjacent to
    every target vertex set; None on failure."""
    tree = {start}
    for target in targets:
        if _touches(hw, tree, target):
            continue
        path = _bfs_to_adjacent(hw, tree, free - tree, target)
        if path is None:
            return None
        tree |= set(path)
    return tree


def _touches(hw: Graph, tree: set[int], target: set[int]) -> bool:
    return any(v in target for u in tree for v in hw.nbr(u))


def _bfs_to_adjacent(
    hw: Graph, tree: set[int], allowed: set[int], target: set[int]
) -> list[int] | None:
    """Shortest path of allowed vertices from the tree to a vertex adjacent
    to `target`; returns the new vertices to add."""
    parents: dict[int, int | None] = {}
    queue: deque[int] = deque()
    for u in tree:
        for v in sorted(hw.nbr(u)):
            if v in allowed and v not in parents:
                parents[v] = None
                queue.append(v)
    while queue:
        u = queue.popleft()
        if any(w in target for w in hw.nbr(u)):
            path = [u]
            while parents[path[-1]] is not None:
                path.append(parents[path[-1]])  # type: ignore[arg-type]
            return path
        for v in sorted(hw.nbr(u)):
            if v in allowed and v not in parents:
                parents[v] = u
                queue.append(v)
    return None


def contract(e: MinorEmbedding) -> Graph:
    """Contract each tree to its logical vertex, keeping assigned edges.

    The result contains every logical edge iff the embedding is valid.
    """
    owner: dict[int, int] = {}
    for i, vs in e.trees.items():
        for u in vs:
            owner[u] = i
    edges = set()
    for (i, j), (pu, pv) in e.edge_assignment.items():
        edges.add(edge_key(owner.get(pu, i), owner.get(pv, j)))
    return Graph.build(e.logical.vertices, edges)
