"""Exact brute-force oracle: spectra, ground states, gaps, and
embedded-vs-original correspondence checks.

Enumeration walks spin space in Gray-code order with O(1) incremental
energy updates, so the cost per state is one flip.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import DomainError, IsingProblem, QuboProblem, SpinConfig
from .params import EmbeddedIsing
from .transform import qubo_to_ising

DEFAULT_CAP = 24
DEFAULT_LEVEL_TOL = 1e-9
GROUND_STATE_CAP = 1 << 16


class EnumerationCapError(RuntimeError):
    """Problem exceeds the exhaustive-enumeration size cap."""


@dataclass(frozen=True)
class SpectrumReport:
    """Distinct energy levels (ascending) and the exact ground-state set."""

    levels: tuple[float, ...]
    ground_states: tuple[SpinConfig, ...]
    ground_count: int
    state_count: int
    complete: bool  # False when ground states were sampled, not materialized

    @property
    def min_energy(self) -> float:
        return self.levels[0]

    @property
    def gap(self) -> float | None:
        if len(self.levels) < 2:
            return None
        return self.levels[1] - self.levels[0]


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise EnumerationCapError(
            f"problem has {n} variables, above the exhaustive cap of {cap}"
        )


def enumerate_spectrum(
    p: IsingProblem,
    tol: float = DEFAULT_LEVEL_TOL,
    cap: int = DEFAULT_CAP,
    ground_cap: int = GROUND_STATE_CAP,
) -> SpectrumReport:
    """Visit all 2^n spin assignments exactly once.

    Energies within `tol` of each other are merged into one level whose
    representative is the smallest member. Ground states are materialized
    fully up to `ground_cap`, then sampled.
    """
    if tol < 0:
        raise DomainError("level tolerance must be nonnegative")
    verts = list(p.graph.vertices)
    n = len(verts)
    _check_cap(n, cap)
    index = {v: k for k, v in enumerate(verts)}
    h = [p.h[v] for v in verts]
    adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for (u, v), w in p.J.items():
        adj[index[u]].append((index[v], w))
        adj[index[v]].append((index[u], w))

    spins = [-1] * n
    energy = -sum(h) + sum(w for (_, _), w in p.J.items())

    counts: dict[float, int] = {energy: 1}
    min_e = energy
    ground: list[int] = [0]  # spin bitmasks, bit k set => spins[k] == +1
    ground_total = 1
    mask = 0

    for m in range(1, 1 << n):
        b = (m & -m).bit_length() - 1
        s_old = spins[b]
        delta = h[b]
        for j, w in adj[b]:
            delta += w * spins[j]
        energy -= 2.0 * s_old * delta
        spins[b] = -s_old
        mask ^= 1 << b

        counts[energy] = counts.get(energy, 0) + 1
        if energy < min_e - tol:
            min_e = energy
            ground = [mask]
            ground_total = 1
        elif energy <= min_e + tol:
            if energy < min_e:
                min_e = energy
            ground_total += 1
            if len(ground) < ground_cap:
                ground.append(mask)

    distinct = sorted(counts)
    levels: list[float] = []
    for e in distinct:
        if not levels or e > levels[-1] + tol:
            levels.append(e)

    def to_config(bits: int) -> SpinConfig:
        return {verts[k]: (1 if bits >> k & 1 else -1) for k in range(n)}

    return SpectrumReport(
        levels=tuple(levels),
        ground_states=tuple(to_config(g) for g in ground),
        ground_count=ground_total,
        state_count=1 << n,
        complete=len(ground) == ground_total,
    )


def solve_qubo_max(
    q: QuboProblem, cap: int = DEFAULT_CAP
) -> tuple[float, tuple[dict[int, int], ...]]:
    """Exhaustive maximum of the QUBO objective with the full argmax set."""
    verts = list(q.graph.vertices)
    n = len(verts)
    _check_cap(n, cap)
    c = [q.c[v] for v in verts]
    index = {v: k for k, v in enumerate(verts)}
    pairs = [(index[u], index[v], w) for (u, v), w in q.J.items()]
    best = None
    argmax: list[dict[int, int]] = []
    for m in range(1 << n):
        val = 0.0
        for k in range(n):
            if m >> k & 1:
                val += c[k]
        for a, b, w in pairs:
            if m >> a & 1 and m >> b & 1:
                val -= w
        if best is None or val > best:
            best = val
            argmax = [{verts[k]: (m >> k & 1) for k in range(n)}]
        elif val == best:
            argmax.append({verts[k]: (m >> k & 1) for k in range(n)})
    assert best is not None
    return best, tuple(argmax)


@dataclass(frozen=True)
class CorrespondenceReport:
    ok: bool
    chains_aligned: bool
    projected_ground_states: tuple[SpinConfig, ...]
    offset_identity: bool
    gap_bound_ok: bool | None
    min_embedded: float
    min_original: float
    embedded_gap: float | None
    original_gap: float | None
    detail: str = ""


def _freeze(configs) -> set[tuple[tuple[int, int], ...]]:
    return {tuple(sorted(c.items())) for c in configs}


def verify_correspondence(
    orig: IsingProblem,
    emb: EmbeddedIsing,
    tol: float = 0.0,
    cap: int = DEFAULT_CAP,
) -> CorrespondenceReport:
    """Exhaustively check the embedded problem against the original.

    Checks that every embedded ground state has aligned chains, that the
    aligned states project exactly onto the original ground-state set, and
    that min E_embedded = min E_original + offset. When the embedding was
    parameterized with per-vertex gap targets, also checks the embedded
    spectral gap against min(min_i g_i, original gap) - tol.
    """
    orig_spec = enumerate_spectrum(orig, cap=cap)
    emb_spec = enumerate_spectrum(emb.problem, cap=cap)

    chains_aligned = True
    detail = ""
    projected: list[SpinConfig] = []
    for state in emb_spec.ground_states:
        aligned = True
        for i, fs in emb.chain_edges.items():
            for (u, v) in fs:
                if state[u] != state[v]:
                    aligned = False
                    detail = f"chain misalignment on tree of logical vertex {i}"
        if not aligned:
            chains_aligned = False
            continue
        projected.append(
            {i: state[min(vs)] for i, vs in emb.source.trees.items()}
        )

    projection_ok = _freeze(projected) == _freeze(orig_spec.ground_states)
    offset_identity = (
        abs(emb_spec.min_energy - (orig_spec.min_energy + emb.offset)) <= tol
    )
    if not projection_ok and not detail:
        detail = "projected ground states differ from the original ground-state set"
    if not offset_identity and not detail:
        detail = "embedded minimum does not equal original minimum plus offset"

    gap_bound_ok: bool | None = None
    if emb.gap_targets:
        bound_parts = [min(emb.gap_targets.values())]
        if orig_spec.gap is not None:
            bound_parts.append(orig_spec.gap)
        bound = min(bound_parts)
        gap_bound_ok = emb_spec.gap is None or emb_spec.gap >= bound - max(tol, 1e-9)

    ok = chains_aligned and projection_ok and offset_identity
    return CorrespondenceReport(
        ok=ok,
        chains_aligned=chains_aligned,
        projected_ground_states=tuple(projected),
        offset_identity=offset_identity,
        gap_bound_ok=gap_bound_ok,
        min_embedded=emb_spec.min_energy,
        min_original=orig_spec.min_energy,
        embedded_gap=emb_spec.gap,
        original_gap=orig_spec.gap,
        detail=detail,
    )


def min_working_F(
    orig: IsingProblem,
    emb: EmbeddedIsing,
    resolution: float = 1e-3,
    cap: int = DEFAULT_CAP,
) -> float | None:
    """Empirical threshold on a shared chain-strength magnitude.

    Binary-searches the smallest uniform |F| for which the correspondence
    holds, to within `resolution`. None for all-singleton embeddings.
    """
    if all(not fs for fs in emb.chain_edges.values()):
        return None

    def with_F(mag: float) -> EmbeddedIsing:
        chain_edges = {
            i: {he: -mag for he in fs} for i, fs in emb.chain_edges.items()
        }
        J = dict(emb.problem.J)
        for fs in chain_edges.values():
            J.update(fs)
        problem = IsingProblem(emb.problem.graph, dict(emb.problem.h), J)
        offset = sum(f for fs in chain_edges.values() for f in fs.values())
        return EmbeddedIsing(
            problem, chain_edges, emb.original_edges, offset, emb.source
        )

    hi = max(
        abs(f) for fs in emb.chain_edges.values() for f in fs.values()
    )
    while not verify_correspondence(orig, with_F(hi), cap=cap).ok:
        hi *= 2.0
        if hi > 1e6:
            raise DomainError("no working chain strength found below 1e6")
    lo = 0.0
    while hi - lo > resolution:
        mid = (lo + hi) / 2.0
        if mid == 0.0:
            break
        if verify_correspondence(orig, with_F(mid), cap=cap).ok:
            hi = mid
        else:
            lo = mid
    return hi


def cross_check_qubo(q: QuboProblem, cap: int = DEFAULT_CAP) -> bool:
    """Consistency of solve_qubo_max with the spin-side enumerator via the
    affine link: max Y = offset + scale * min E."""
    best, _ = solve_qubo_max(q, cap=cap)
    ising, link = qubo_to_ising(q)
    spec = enumerate_spectrum(ising, cap=cap)
    return best == link.map_value(spec.min_energy)
