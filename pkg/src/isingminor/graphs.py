"""Graph, problem, and hardware-graph representations.

Vertices are integer ids. Freshly built problems use dense ids 0..n-1;
derived subproblems (preprocessing residuals, embedded subgraphs) keep
their original ids.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

Edge = tuple[int, int]


class DomainError(ValueError):
    """Input violates an operation's precondition."""


def edge_key(u: int, v: int) -> Edge:
    """Canonical (sorted) form of an undirected edge."""
    if u == v:
        raise DomainError(f"self-loop on vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with an ordered vertex set."""

    vertices: tuple[int, ...]
    edges: frozenset[Edge]
    _adj: dict[int, frozenset[int]] = field(
        init=False, repr=False, compare=False, hash=False, default_factory=dict
    )

    def __post_init__(self) -> None:
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise DomainError("duplicate vertex ids")
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for e in self.edges:
            u, v = e
            if edge_key(u, v) != e:
                raise DomainError(f"edge {e} not in canonical (u < v) form")
            if u not in vset or v not in vset:
                raise DomainError(f"edge {e} has an undeclared endpoint")
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "_adj", {v: frozenset(ns) for v, ns in adj.items()})

    @classmethod
    def build(cls, vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(tuple(vertices), frozenset(edge_key(u, v) for u, v in edges))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.build(range(n), [(i, j) for i in range(n) for j in range(i + 1, n)])

    @property
    def n(self) -> int:
        return len(self.vertices)

    def nbr(self, i: int) -> frozenset[int]:
        try:
            return self._adj[i]
        except KeyError:
            raise DomainError(f"vertex {i} not in graph") from None

    def degree(self, i: int) -> int:
        return len(self.nbr(i))

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.edges

    def subgraph(self, keep: Iterable[int]) -> "Graph":
        keep_set = set(keep)
        return Graph(
            tuple(v for v in self.vertices if v in keep_set),
            frozenset(e for e in self.edges if e[0] in keep_set and e[1] in keep_set),
        )


@dataclass(frozen=True)
class IsingProblem:
    """Spin problem: minimize sum_i h_i s_i + sum_ij J_ij s_i s_j, s_i in {-1,+1}."""

    graph: Graph
    h: Mapping[int, float]
    J: Mapping[Edge, float]

    def __post_init__(self) -> None:
        _check_weights(self.graph, self.h, self.J)

    @classmethod
    def build(
        cls,
        graph: Graph,
        h: Mapping[int, float] | None = None,
        J: Mapping[tuple[int, int], float] | None = None,
    ) -> "IsingProblem":
        return cls(graph, _full_linear(graph, h), _canon_quadratic(J))

    def bias(self, i: int) -> float:
        return self.h.get(i, 0.0)

    def coupling(self, u: int, v: int) -> float:
        return self.J.get(edge_key(u, v), 0.0)


@dataclass(frozen=True)
class QuboProblem:
    """Bit problem: maximize sum_i c_i x_i - sum_ij J_ij x_i x_j, x_i in {0,1}."""

    graph: Graph
    c: Mapping[int, float]
    J: Mapping[Edge, float]

    def __post_init__(self) -> None:
        _check_weights(self.graph, self.c, self.J)

    @classmethod
    def build(
        cls,
        graph: Graph,
        c: Mapping[int, float] | None = None,
        J: Mapping[tuple[int, int], float] | None = None,
    ) -> "QuboProblem":
        return cls(graph, _full_linear(graph, c), _canon_quadratic(J))


SpinConfig = dict[int, int]  # vertex -> -1 or +1
BitConfig = dict[int, int]  # vertex -> 0 or 1


def _full_linear(graph: Graph, values: Mapping[int, float] | None) -> dict[int, float]:
    values = dict(values or {})
    return {v: float(values.get(v, 0.0)) for v in graph.vertices}


def _canon_quadratic(J: Mapping[tuple[int, int], float] | None) -> dict[Edge, float]:
    out: dict[Edge, float] = {}
    for (u, v), w in (J or {}).items():
        out[edge_key(u, v)] = float(w)
    return out


def _check_weights(graph: Graph, linear: Mapping[int, float], J: Mapping[Edge, float]) -> None:
    for v in graph.vertices:
        if v not in linear:
            raise DomainError(f"missing linear weight for vertex {v}")
    for v in linear:
        if v not in graph._adj:
            raise DomainError(f"linear weight on undeclared vertex {v}")
    for e, w in J.items():
        if e not in graph.edges:
            raise DomainError(f"quadratic weight on non-edge {e}")
        if w == 0.0:
            raise DomainError(f"explicit zero coupling on edge {e}; omit the edge instead")
    for e in graph.edges:
        if e not in J:
            raise DomainError(f"missing coupling for edge {e}")


def energy(p: IsingProblem, s: Mapping[int, int]) -> float:
    """Ising energy of a total spin assignment."""
    total = 0.0
    for v in p.graph.vertices:
        if v not in s:
            raise DomainError(f"spin assignment missing vertex {v}")
        total += p.h[v] * s[v]
    for (u, v), w in p.J.items():
        total += w * s[u] * s[v]
    return total


def objective(q: QuboProblem, x: Mapping[int, int]) -> float:
    """QUBO objective of a total bit assignment."""
    total = 0.0
    for v in q.graph.vertices:
        if v not in x:
            raise DomainError(f"bit assignment missing vertex {v}")
        total += q.c[v] * x[v]
    for (u, v), w in q.J.items():
        total -= w * x[u] * x[v]
    return total


class HardwareKind(str, Enum):
    SQUARE_LATTICE = "square_lattice"
    EXTENDED_GRID = "extended_grid"
    CUSTOM = "custom"


@dataclass(frozen=True)
class HardwareGraph:
    """A fixed degree-constrained graph of physical qubits."""

    base: Graph
    kind: HardwareKind
    rows: int | None = None
    cols: int | None = None

    @property
    def max_degree(self) -> int:
        if not self.base.vertices:
            return 0
        return max(self.base.degree(v) for v in self.base.vertices)

    @classmethod
    def custom(cls, base: Graph) -> "HardwareGraph":
        return cls(base, HardwareKind.CUSTOM)


def make_hardware(kind: HardwareKind | str, rows: int, cols: int) -> HardwareGraph:
    """Build a grid hardware graph with row-major vertex numbering.

    square_lattice couples each site to its 4-neighbors; extended_grid adds
    the diagonal (next-nearest) couplers, i.e. king moves.
    """
    kind = HardwareKind(kind)
    if kind is HardwareKind.CUSTOM:
        raise DomainError("custom hardware is built from an explicit edge list")
    if rows < 1 or cols < 1:
        raise DomainError(f"grid dimensions must be positive, got {rows}x{cols}")

    def vid(r: int, c: int) -> int:
        return r * cols + c

    steps = [(0, 1), (1, 0)]
    if kind is HardwareKind.EXTENDED_GRID:
        steps += [(1, 1), (1, -1)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            for dr, dc in steps:
                rr, cc = r + dr, c + dc
                if 0 <= rr < rows and 0 <= cc < cols:
                    edges.append((vid(r, c), vid(rr, cc)))
    return HardwareGraph(Graph.build(range(rows * cols), edges), kind, rows, cols)
