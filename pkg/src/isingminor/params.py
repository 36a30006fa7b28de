"""Embedded Ising parameters: bias redistribution and ferromagnetic chain
strengths, under the loose per-vertex bound or the tight leaf-count bound,
plus preprocessing that fixes bias-dominated spins.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .embedding import EmbeddingError, MinorEmbedding, leaves, validate
from .graphs import DomainError, Edge, Graph, IsingProblem, edge_key

BIAS_CONSERVATION_TOL = 1e-12


class PreconditionError(ValueError):
    """Operation precondition not met (e.g. negative coupling slack)."""


@dataclass(frozen=True)
class EasyBound:
    """Per-vertex bound |h_i| + sum |J_ij|, uniform bias split."""

    margin: float = 1e-6

    def __post_init__(self) -> None:
        if self.margin <= 0:
            raise DomainError("margin must be strictly positive")


@dataclass(frozen=True)
class TightBound:
    """Leaf-count bound ((l_i - 1) / l_i) * C_i with explicit margin."""

    margin: float = 1e-6

    def __post_init__(self) -> None:
        if self.margin <= 0:
            raise DomainError("margin must be strictly positive")


@dataclass(frozen=True)
class GapTargeted:
    """Tight bound with F = -((l-1)/l) C_i - g_i/2, pinning the embedded gap."""

    g: Mapping[int, float]

    def __post_init__(self) -> None:
        if any(gi <= 0 for gi in self.g.values()):
            raise DomainError("gap targets must be strictly positive")


ChainStrengthPolicy = EasyBound | TightBound | GapTargeted


@dataclass(frozen=True)
class EmbeddedIsing:
    """Ising problem on the embedded subgraph, with coupler provenance.

    chain_edges[i] maps each tree edge of logical vertex i to its
    ferromagnetic strength; original_edges maps each logical edge to the
    hardware edge carrying it. offset = sum of all chain strengths, the
    constant separating min E_embedded from min E_original when every
    chain is aligned.
    """

    problem: IsingProblem
    chain_edges: dict[int, dict[Edge, float]]
    original_edges: dict[Edge, Edge]
    offset: float
    source: MinorEmbedding
    gap_targets: dict[int, float] | None = None


def compute_C(p: IsingProblem, i: int) -> float:
    """Coupling slack C_i = sum_{j in nbr(i)} |J_ij| - |h_i|."""
    return sum(abs(p.J[edge_key(i, j)]) for j in p.graph.nbr(i)) - abs(p.h[i])


@dataclass(frozen=True)
class Preprocessing:
    fixed: dict[int, int]
    residual: IsingProblem


def preprocess_fix(p: IsingProblem) -> Preprocessing:
    """Fix every vertex whose bias dominates its couplings (C_i < 0).

    Such a vertex takes spin -sign(h_i) in every minimizer. Fixing it
    shifts each neighbor's effective bias by J_ij * s_i; this can expose
    new dominated vertices, so iterate to a fixpoint.
    """
    h = dict(p.h)
    J = dict(p.J)
    alive = set(p.graph.vertices)
    fixed: dict[int, int] = {}

    def slack(i: int) -> float:
        return sum(abs(w) for e, w in J.items() if i in e) - abs(h[i])

    changed = True
    while changed:
        changed = False
        for i in sorted(alive):
            if slack(i) < 0:
                s_i = -1 if h[i] > 0 else 1
                fixed[i] = s_i
                for e in [e for e in J if i in e]:
                    j = e[0] if e[1] == i else e[1]
                    h[j] += J[e] * s_i
                    del J[e]
                alive.remove(i)
                changed = True
    residual_graph = p.graph.subgraph(alive)
    residual = IsingProblem(
        residual_graph,
        {v: h[v] for v in residual_graph.vertices},
        {e: w for e, w in J.items()},
    )
    return Preprocessing(fixed=fixed, residual=residual)


def _checked(e: MinorEmbedding, p: IsingProblem) -> None:
    report = validate(e)
    if not report.ok:
        raise EmbeddingError("; ".join(report.violations))
    if set(e.logical.vertices) != set(p.graph.vertices) or e.logical.edges != p.graph.edges:
        raise DomainError("embedding's logical graph does not match the problem graph")


def _embedded_graph(e: MinorEmbedding) -> tuple[Graph, dict[Edge, Edge]]:
    used = sorted(e.used_vertices())
    edges: set[Edge] = set()
    original: dict[Edge, Edge] = {}
    for es in e.tree_edges.values():
        edges |= es
    for le, (pu, pv) in e.edge_assignment.items():
        he = edge_key(pu, pv)
        edges.add(he)
        original[le] = he
    return Graph(tuple(used), frozenset(edges)), original


def _onbr_weight(e: MinorEmbedding, p: IsingProblem, i: int) -> dict[int, float]:
    """For each physical qubit of trees[i], the total |J| of original edges
    it carries."""
    out = {v: 0.0 for v in e.trees[i]}
    for j in e.logical.nbr(i):
        out[e.assigned_endpoint(i, j)] += abs(p.J[edge_key(i, j)])
    return out


def _assemble(
    e: MinorEmbedding,
    p: IsingProblem,
    h_prime: dict[int, float],
    chain_edges: dict[int, dict[Edge, float]],
    gap_targets: dict[int, float] | None = None,
) -> EmbeddedIsing:
    graph, original = _embedded_graph(e)
    J_emb: dict[Edge, float] = {}
    for i, fs in chain_edges.items():
        for he, f in fs.items():
            J_emb[he] = f
    for le, he in original.items():
        J_emb[he] = p.J[le]
    for i in e.logical.vertices:
        total = sum(h_prime[v] for v in e.trees[i])
        if abs(total - p.h[i]) > BIAS_CONSERVATION_TOL:
            raise AssertionError(f"bias not conserved on logical vertex {i}")
    offset = sum(f for fs in chain_edges.values() for f in fs.values())
    problem = IsingProblem(graph, h_prime, J_emb)
    return EmbeddedIsing(problem, chain_edges, original, offset, e, gap_targets)


def set_params_easy(e: MinorEmbedding, p: IsingProblem, margin: float = 1e-6) -> EmbeddedIsing:
    """Chain strengths from the per-vertex bound; uniform bias split.

    F = -(|h_i| + sum_j |J_ij|) - margin on every tree edge of vertex i.
    """
    if margin <= 0:
        raise DomainError("margin must be strictly positive")
    _checked(e, p)
    h_prime: dict[int, float] = {}
    chain_edges: dict[int, dict[Edge, float]] = {}
    for i in e.logical.vertices:
        tree = e.trees[i]
        for v in tree:
            h_prime[v] = p.h[i] / len(tree)
        bound = abs(p.h[i]) + sum(abs(p.J[edge_key(i, j)]) for j in e.logical.nbr(i))
        chain_edges[i] = {he: -bound - margin for he in e.tree_edges[i]}
    return _assemble(e, p, h_prime, chain_edges)


def easy_bound_magnitude(p: IsingProblem, i: int) -> float:
    return abs(p.h[i]) + sum(abs(p.J[edge_key(i, j)]) for j in p.graph.nbr(i))


def tight_bound_magnitude(e: MinorEmbedding, p: IsingProblem, i: int) -> float:
    l_i = len(leaves(e, i))
    return (l_i - 1) / l_i * compute_C(p, i)


def _sign(h: float) -> float:
    return 1.0 if h >= 0 else -1.0


def _tight_bias(e: MinorEmbedding, p: IsingProblem, i: int) -> dict[int, float]:
    """The leaf-aware bias rule: leaves give back C_i / l_i each."""
    C_i = compute_C(p, i)
    lv = leaves(e, i)
    onbr = _onbr_weight(e, p, i)
    sgn = _sign(p.h[i])
    out: dict[int, float] = {}
    for v in e.trees[i]:
        share = onbr[v] - (C_i / len(lv) if v in lv else 0.0)
        out[v] = sgn * share
    return out


def set_params_tight(
    e: MinorEmbedding, p: IsingProblem, policy: TightBound | GapTargeted
) -> EmbeddedIsing:
    """Chain strengths from the leaf-count bound ((l-1)/l) C_i.

    Requires C_i >= 0 everywhere; run preprocess_fix first otherwise.
    """
    _checked(e, p)
    negative = [i for i in p.graph.vertices if compute_C(p, i) < 0]
    if negative:
        raise PreconditionError(
            f"C_i < 0 on vertices {negative}; run preprocess_fix before the tight bound"
        )
    if isinstance(policy, GapTargeted):
        missing = [i for i in p.graph.vertices if i not in policy.g]
        if missing:
            raise DomainError(f"gap targets missing for vertices {missing}")
    h_prime: dict[int, float] = {}
    chain_edges: dict[int, dict[Edge, float]] = {}
    gap_targets: dict[int, float] | None = None
    if isinstance(policy, GapTargeted):
        gap_targets = {i: float(policy.g[i]) for i in p.graph.vertices}
    for i in e.logical.vertices:
        h_prime.update(_tight_bias(e, p, i))
        bound = tight_bound_magnitude(e, p, i)
        if isinstance(policy, GapTargeted):
            f = -bound - gap_targets[i] / 2.0  # type: ignore[index]
        else:
            f = -bound - policy.margin
        chain_edges[i] = {he: f for he in e.tree_edges[i]}
    return _assemble(e, p, h_prime, chain_edges, gap_targets)


def set_params_custom_split(
    e: MinorEmbedding,
    p: IsingProblem,
    C_split: Mapping[tuple[int, int], float],
    F: Mapping[Edge, float] | float,
) -> EmbeddedIsing:
    """Generalized bias rule h' = sign(h_i) (sum_Onbr |J| - C_{i_k}) with a
    caller-chosen split of C_i, and caller-supplied chain strengths.

    No sufficiency guarantee is asserted; verification is the solver's job.
    """
    _checked(e, p)
    h_prime: dict[int, float] = {}
    chain_edges: dict[int, dict[Edge, float]] = {}
    for i in e.logical.vertices:
        C_i = compute_C(p, i)
        split = {v: float(C_split.get((i, v), 0.0)) for v in e.trees[i]}
        if abs(sum(split.values()) - C_i) > BIAS_CONSERVATION_TOL:
            raise DomainError(f"C split for vertex {i} does not sum to C_i = {C_i}")
        onbr = _onbr_weight(e, p, i)
        sgn = _sign(p.h[i])
        for v in e.trees[i]:
            h_prime[v] = sgn * (onbr[v] - split[v])
        fs: dict[Edge, float] = {}
        for he in e.tree_edges[i]:
            f = float(F) if isinstance(F, (int, float)) else float(F[he])
            if f >= 0:
                raise DomainError(f"chain strength on {he} must be strictly negative")
            fs[he] = f
        chain_edges[i] = fs
    return _assemble(e, p, h_prime, chain_edges)


def uniform_leaf_split(e: MinorEmbedding, p: IsingProblem) -> dict[tuple[int, int], float]:
    """The C split that reproduces the tight-bound bias rule."""
    out: dict[tuple[int, int], float] = {}
    for i in e.logical.vertices:
        lv = leaves(e, i)
        C_i = compute_C(p, i)
        for v in lv:
            out[(i, v)] = C_i / len(lv)
    return out
