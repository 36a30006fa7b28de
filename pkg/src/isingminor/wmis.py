"""Weighted / unweighted maximum-independent-set frontends.

WMIS reduces to QUBO by putting an edge penalty above the smaller endpoint
weight; the unweighted case with uniform penalty 1 + eps composes all the
way down to a six-value embedded Hamiltonian on degree-3 hardware.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .embedding import EmbeddingClass, MinorEmbedding, classify
from .graphs import DomainError, Graph, QuboProblem
from .params import (
    EmbeddedIsing,
    Preprocessing,
    preprocess_fix,
    set_params_custom_split,
    uniform_leaf_split,
)
from .transform import qubo_to_ising


@dataclass(frozen=True)
class WmisInstance:
    graph: Graph
    weights: dict[int, float]

    def __post_init__(self) -> None:
        for v in self.graph.vertices:
            if self.weights.get(v, 0.0) <= 0.0:
                raise DomainError(f"vertex {v} needs a strictly positive weight")

    @classmethod
    def unweighted(cls, graph: Graph) -> "WmisInstance":
        return cls(graph, {v: 1.0 for v in graph.vertices})


@dataclass(frozen=True)
class StrictMinPlus:
    """J_ij = min(c_i, c_j) + delta: maximizers are guaranteed independent."""

    delta: float

    def __post_init__(self) -> None:
        if self.delta <= 0:
            raise DomainError("delta must be strictly positive")


@dataclass(frozen=True)
class UniformPenalty:
    """Constant J on every edge; independence guaranteed only when
    J > min(c_i, c_j) everywhere."""

    J: float


PenaltyRule = StrictMinPlus | UniformPenalty


@dataclass(frozen=True)
class WmisQubo:
    qubo: QuboProblem
    strict: bool  # J > min(c_i, c_j) held on every edge


def wmis_to_qubo(w: WmisInstance, rule: PenaltyRule) -> WmisQubo:
    """Penalty reduction: the QUBO maximum equals the WMIS weight whenever
    J_ij >= min(c_i, c_j); strict inequality also makes every maximizer's
    support independent."""
    c = {v: w.weights[v] for v in w.graph.vertices}
    J: dict[tuple[int, int], float] = {}
    strict = True
    for u, v in sorted(w.graph.edges):
        m = min(c[u], c[v])
        if isinstance(rule, StrictMinPlus):
            J[(u, v)] = m + rule.delta
        else:
            if rule.J < m:
                raise DomainError(
                    f"uniform penalty {rule.J} below min weight {m} on edge ({u},{v})"
                )
            J[(u, v)] = rule.J
            if not rule.J > m:
                strict = False
    return WmisQubo(QuboProblem(w.graph, c, J), strict)


@dataclass(frozen=True)
class IndependentSetResult:
    vertices: frozenset[int]
    independent: bool
    weight: float


def extract_independent_set(
    graph: Graph, weights: Mapping[int, float], x: Mapping[int, int]
) -> IndependentSetResult:
    """Support of a QUBO maximizer, with an independence check against the
    original graph."""
    support = frozenset(v for v, b in x.items() if b)
    independent = all(
        not graph.has_edge(u, v) for u in support for v in support if u < v
    )
    return IndependentSetResult(
        support, independent, sum(weights[v] for v in support)
    )


def enumerate_wmis(w: WmisInstance) -> tuple[float, tuple[frozenset[int], ...]]:
    """Independent oracle: enumerate all independent sets directly."""
    verts = list(w.graph.vertices)
    n = len(verts)
    if n > 20:
        raise DomainError("direct independent-set enumeration capped at 20 vertices")
    best = 0.0
    arg: list[frozenset[int]] = [frozenset()]
    for m in range(1, 1 << n):
        chosen = [verts[k] for k in range(n) if m >> k & 1]
        if any(w.graph.has_edge(u, v) for i, u in enumerate(chosen) for v in chosen[i + 1:]):
            continue
        weight = sum(w.weights[v] for v in chosen)
        if weight > best:
            best = weight
            arg = [frozenset(chosen)]
        elif weight == best:
            arg.append(frozenset(chosen))
    return best, tuple(arg)


def build_embedded_mis(g: Graph, e: MinorEmbedding, eps: float = 0.25) -> EmbeddedIsing:
    """Embedded Hamiltonian for unweighted MIS: uniform penalty 1 + eps,
    chain strength exactly -(1 + eps).

    Requires a chain (topological-minor) embedding and min degree >= 1 in
    g; isolated vertices belong in the independent set unconditionally and
    should be stripped by preprocessing first (see mis_preprocess).
    """
    if eps <= 0:
        raise DomainError("eps must be strictly positive")
    cls = classify(e)
    if cls is EmbeddingClass.GENERAL_MINOR:
        raise DomainError("embedded MIS parameters are defined for chain embeddings only")
    isolated = [v for v in g.vertices if g.degree(v) == 0]
    if isolated:
        raise DomainError(
            f"isolated vertices {isolated} must be preprocessed out (they are always in the MIS)"
        )
    qubo = wmis_to_qubo(WmisInstance.unweighted(g), UniformPenalty(1.0 + eps))
    ising, _ = qubo_to_ising(qubo.qubo)
    # -(1+eps) is below every tight bound here: C_i <= 2 for all degrees
    return set_params_custom_split(
        e, ising, uniform_leaf_split(e, ising), -(1.0 + eps)
    )


def mis_preprocess(g: Graph, eps: float = 0.25) -> tuple[Preprocessing, Graph]:
    """Spin-side preprocessing of the MIS Ising problem.

    Vertices whose bias dominates (isolated vertices, and low-degree ones
    for small eps) get fixed; the residual graph is what should be
    embedded. Returns the preprocessing record and the residual graph.
    """
    qubo = wmis_to_qubo(WmisInstance.unweighted(g), UniformPenalty(1.0 + eps))
    ising, _ = qubo_to_ising(qubo.qubo)
    prep = preprocess_fix(ising)
    return prep, prep.residual.graph
