"""JSON file formats for problems, embeddings, and embedded problems.

All writers sort keys and rely on Python's shortest round-trip float
repr, so output files are byte-stable and reload bit-exactly.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from .embedding import MinorEmbedding, derive_edge_assignment
from .graphs import (
    DomainError,
    Edge,
    Graph,
    HardwareGraph,
    HardwareKind,
    IsingProblem,
    QuboProblem,
    edge_key,
    make_hardware,
)
from .params import EmbeddedIsing
from .wmis import WmisInstance


class ParseError(ValueError):
    """Malformed input document."""


def _finite(x: Any, where: str) -> float:
    try:
        v = float(x)
    except (TypeError, ValueError):
        raise ParseError(f"non-numeric value in {where}: {x!r}") from None
    if v != v or v in (float("inf"), float("-inf")):
        raise ParseError(f"non-finite value in {where}: {x!r}")
    return v


def problem_to_doc(kind: str, graph: Graph, linear: Mapping[int, float],
                   quadratic: Mapping[Edge, float]) -> dict:
    return {
        "type": kind,
        "n": graph.n,
        "linear": {str(v): linear[v] for v in graph.vertices},
        "quadratic": [[u, v, quadratic[(u, v)]] for u, v in sorted(graph.edges)],
    }


def ising_to_doc(p: IsingProblem) -> dict:
    return problem_to_doc("ising", p.graph, p.h, p.J)


def qubo_to_doc(q: QuboProblem) -> dict:
    return problem_to_doc("qubo", q.graph, q.c, q.J)


def wmis_to_doc(w: WmisInstance) -> dict:
    doc = problem_to_doc("wmis", w.graph, w.weights, dict.fromkeys(w.graph.edges, 0.0))
    doc["quadratic"] = [[u, v] for u, v in sorted(w.graph.edges)]
    return doc


def parse_problem(doc: dict) -> IsingProblem | QuboProblem | WmisInstance:
    kind = doc.get("type")
    if kind not in ("ising", "qubo", "wmis"):
        raise ParseError(f"unknown problem type {kind!r}")
    try:
        n = int(doc["n"])
    except (KeyError, TypeError, ValueError):
        raise ParseError("missing or invalid vertex count 'n'") from None
    if n < 0:
        raise ParseError("'n' must be nonnegative")
    linear: dict[int, float] = {}
    for key, val in (doc.get("linear") or {}).items():
        try:
            v = int(key)
        except ValueError:
            raise ParseError(f"non-integer vertex id {key!r}") from None
        if not 0 <= v < n:
            raise ParseError(f"vertex id {v} out of range 0..{n - 1}")
        linear[v] = _finite(val, "linear")

    edges: list[tuple[int, int]] = []
    quadratic: dict[tuple[int, int], float] = {}
    for triple in doc.get("quadratic") or []:
        if kind == "wmis":
            if len(triple) not in (2, 3):
                raise ParseError(f"bad wmis edge entry {triple!r}")
            u, v = int(triple[0]), int(triple[1])
            w = 0.0
        else:
            if len(triple) != 3:
                raise ParseError(f"quadratic entries must be [u, v, value], got {triple!r}")
            u, v = int(triple[0]), int(triple[1])
            w = _finite(triple[2], "quadratic")
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"edge ({u},{v}) out of range")
        if u >= v:
            raise ParseError(f"quadratic entries must have u < v, got ({u},{v})")
        if (u, v) in quadratic:
            raise ParseError(f"duplicate edge ({u},{v})")
        if kind != "wmis" and w == 0.0:
            raise ParseError(f"zero coupling on edge ({u},{v}); omit the edge instead")
        edges.append((u, v))
        quadratic[(u, v)] = w

    graph = Graph.build(range(n), edges)
    if kind == "ising":
        return IsingProblem.build(graph, linear, quadratic)
    if kind == "qubo":
        return QuboProblem.build(graph, linear, quadratic)
    weights = {v: linear.get(v, 1.0) for v in graph.vertices}
    return WmisInstance(graph, weights)


def hardware_to_doc(hw: HardwareGraph) -> dict:
    if hw.kind is HardwareKind.CUSTOM:
        return {
            "kind": "custom",
            "n": hw.base.n,
            "edges": [[u, v] for u, v in sorted(hw.base.edges)],
        }
    return {
        "kind": "square" if hw.kind is HardwareKind.SQUARE_LATTICE else "extended",
        "rows": hw.rows,
        "cols": hw.cols,
    }


def parse_hardware(doc: dict) -> HardwareGraph:
    kind = doc.get("kind")
    if kind in ("square", "square_lattice", "extended", "extended_grid"):
        mapped = (
            HardwareKind.SQUARE_LATTICE
            if kind.startswith("square")
            else HardwareKind.EXTENDED_GRID
        )
        try:
            return make_hardware(mapped, int(doc["rows"]), int(doc["cols"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise ParseError("grid hardware needs integer 'rows' and 'cols'") from None
    if kind == "custom" or ("edges" in doc and "n" in doc):
        try:
            n = int(doc["n"])
            edges = [(int(u), int(v)) for u, v in doc["edges"]]
        except (KeyError, TypeError, ValueError):
            raise ParseError("custom hardware needs 'n' and an 'edges' list") from None
        return HardwareGraph.custom(Graph.build(range(n), edges))
    raise ParseError(f"unknown hardware kind {kind!r}")


def embedding_to_doc(e: MinorEmbedding, hardware_doc: dict | None = None) -> dict:
    doc: dict = {
        "hardware": hardware_doc
        or {
            "kind": "custom",
            "n": e.hardware.n,
            "edges": [[u, v] for u, v in sorted(e.hardware.edges)],
        },
        "chains": {str(i): sorted(vs) for i, vs in e.trees.items()},
        "chain_edges": {
            str(i): [[u, v] for u, v in sorted(es)] for i, es in e.tree_edges.items()
        },
        "edge_assignment": {
            f"{i}-{j}": [pu, pv] for (i, j), (pu, pv) in sorted(e.edge_assignment.items())
        },
    }
    return doc


def parse_embedding(doc: dict, logical: Graph) -> MinorEmbedding:
    hw = parse_hardware(doc.get("hardware") or {})
    chains_doc = doc.get("chains")
    if not isinstance(chains_doc, dict):
        raise ParseError("embedding needs a 'chains' map")
    trees: dict[int, list[int]] = {}
    for key, vs in chains_doc.items():
        try:
            trees[int(key)] = [int(v) for v in vs]
        except (TypeError, ValueError):
            raise ParseError(f"bad chain entry for {key!r}") from None

    tree_edges = None
    if "chain_edges" in doc and doc["chain_edges"] is not None:
        tree_edges = {}
        for key, es in doc["chain_edges"].items():
            tree_edges[int(key)] = [(int(u), int(v)) for u, v in es]
        for i in trees:
            tree_edges.setdefault(i, [])

    if "edge_assignment" in doc and doc["edge_assignment"] is not None:
        assignment: dict[tuple[int, int], tuple[int, int]] = {}
        for key, (pu, pv) in doc["edge_assignment"].items():
            try:
                i, j = (int(part) for part in key.split("-"))
            except ValueError:
                raise ParseError(f"bad edge-assignment key {key!r}") from None
            assignment[(i, j)] = (int(pu), int(pv))
        return MinorEmbedding.build(logical, hw.base, trees, tree_edges, assignment)
    return derive_edge_assignment(logical, hw.base, trees, tree_edges)


def embedded_to_doc(emb: EmbeddedIsing, policy: str) -> dict:
    """Embedded problem as a dense-id problem file plus reconstruction
    metadata (chains, chain strengths, original-edge mapping)."""
    hw_ids = list(emb.problem.graph.vertices)
    dense = {v: k for k, v in enumerate(hw_ids)}
    doc = {
        "type": "ising",
        "n": len(hw_ids),
        "linear": {str(dense[v]): emb.problem.h[v] for v in hw_ids},
        "quadratic": [
            [dense[u], dense[v], emb.problem.J[(u, v)]]
            if dense[u] < dense[v]
            else [dense[v], dense[u], emb.problem.J[(u, v)]]
            for u, v in sorted(emb.problem.graph.edges)
        ],
        "metadata": {
            "offset": emb.offset,
            "policy": policy,
            "hardware_vertices": hw_ids,
            "chains": {
                str(i): sorted(dense[v] for v in vs)
                for i, vs in emb.source.trees.items()
            },
            "chain_edges": [
                [min(dense[u], dense[v]), max(dense[u], dense[v]), f, i]
                for i, fs in sorted(emb.chain_edges.items())
                for (u, v), f in sorted(fs.items())
            ],
            "original_edges": {
                f"{i}-{j}": sorted([dense[u], dense[v]])
                for (i, j), (u, v) in sorted(emb.original_edges.items())
            },
        },
    }
    if emb.gap_targets is not None:
        doc["metadata"]["gap_targets"] = {str(i): g for i, g in sorted(emb.gap_targets.items())}
    doc["quadratic"].sort()
    return doc


def parse_embedded(doc: dict, logical: Graph) -> EmbeddedIsing:
    """Rebuild an EmbeddedIsing from an embedded problem file; the embedded
    graph itself serves as the hardware graph for validation purposes."""
    meta = doc.get("metadata")
    if not isinstance(meta, dict):
        raise ParseError("embedded problem file is missing its 'metadata' block")
    problem = parse_problem({k: v for k, v in doc.items() if k != "metadata"})
    if not isinstance(problem, IsingProblem):
        raise ParseError("embedded problem must be of type 'ising'")
    trees = {int(i): frozenset(vs) for i, vs in meta["chains"].items()}
    chain_edges: dict[int, dict[Edge, float]] = {int(i): {} for i in meta["chains"]}
    for u, v, f, i in meta["chain_edges"]:
        chain_edges[int(i)][edge_key(int(u), int(v))] = _finite(f, "chain_edges")
    tree_edges = {i: frozenset(fs.keys()) for i, fs in chain_edges.items()}
    assignment: dict[tuple[int, int], tuple[int, int]] = {}
    original_edges: dict[Edge, Edge] = {}
    for key, (pu, pv) in meta["original_edges"].items():
        i, j = (int(part) for part in key.split("-"))
        pu, pv = int(pu), int(pv)
        p_i = pu if pu in trees[i] else pv
        p_j = pv if p_i == pu else pu
        assignment[(i, j)] = (p_i, p_j)
        original_edges[(i, j)] = edge_key(pu, pv)
    source = MinorEmbedding.build(logical, problem.graph, trees, tree_edges, assignment)
    gap_targets = None
    if "gap_targets" in meta:
        gap_targets = {int(i): _finite(g, "gap_targets") for i, g in meta["gap_targets"].items()}
    return EmbeddedIsing(
        problem=problem,
        chain_edges=chain_edges,
        original_edges=original_edges,
        offset=_finite(meta["offset"], "offset"),
        source=source,
        gap_targets=gap_targets,
    )


def dump(doc: dict, path: str | Path) -> None:
    Path(path).write_text(dumps(doc))


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def load(path: str | Path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"top-level JSON value in {path} must be an object")
    return doc
