"""Acceptance suite.

Each test checks one numbered criterion and records a single pass/fail
line; the lines are printed together in the terminal summary (see
conftest.py). Fixtures are dyadic throughout, so most equality checks
carry tolerance 0.
"""

import random
import time

import pytest

import acceptance_report
from isingminor import (
    GapTargeted,
    Graph,
    IsingProblem,
    MinorEmbedding,
    StrictMinPlus,
    TightBound,
    UniformPenalty,
    WmisInstance,
    basis_state_energy,
    build_embedded_mis,
    cli,
    compute_C,
    enumerate_spectrum,
    enumerate_wmis,
    files,
    preprocess_fix,
    qubo_to_ising,
    set_params_custom_split,
    set_params_easy,
    set_params_tight,
    solve_qubo_max,
    verify_correspondence,
    wmis_to_qubo,
)

from corpus import QUARTERS, QUARTERS_NONZERO, chain_setup, random_connected_graph, random_ising, random_qubo, random_embedding

CORPUS_SIZE = 200
TIGHT_MARGIN = 1 / 16


@pytest.fixture(scope="module")
def corpus_records():
    """The shared 200-instance corpus for criteria 1-3: random dyadic
    problems on n in [2,6] embedded into grids with at most 14 physical
    qubits, parameterized under both the tight and the easy policy."""
    rng = random.Random(20260826)
    records = []
    tight_seconds = 0.0
    for _ in range(CORPUS_SIZE):
        p = random_ising(rng, rng.randint(2, 6))
        e = random_embedding(rng, p.graph, max_physical=14)
        t0 = time.perf_counter()
        tight = set_params_tight(e, p, TightBound(TIGHT_MARGIN))
        tight_report = verify_correspondence(p, tight, tol=0.0)
        tight_seconds += time.perf_counter() - t0
        easy = set_params_easy(e, p, TIGHT_MARGIN)
        easy_report = verify_correspondence(p, easy, tol=0.0)
        records.append((p, e, tight, tight_report, easy, easy_report))
    return records, tight_seconds


def test_criterion_1_tight_correspondence(corpus_records):
    records, seconds = corpus_records
    ok_count = sum(1 for r in records if r[3].ok)
    ok = ok_count == CORPUS_SIZE and seconds < 60.0
    acceptance_report.record(
        1, ok, f"tight policy verify ok on {ok_count}/{CORPUS_SIZE} at tolerance 0 in {seconds:.1f}s"
    )
    assert ok


def test_criterion_2_easy_correspondence(corpus_records):
    records, _ = corpus_records
    ok_count = sum(1 for r in records if r[5].ok)
    dominated = True
    for _, _, tight, _, easy, _ in records:
        for i, fs in tight.chain_edges.items():
            for edge, f_tight in fs.items():
                if abs(easy.chain_edges[i][edge]) < abs(f_tight):
                    dominated = False
    ok = ok_count == CORPUS_SIZE and dominated
    acceptance_report.record(
        2, ok,
        f"easy policy verify ok on {ok_count}/{CORPUS_SIZE}; |F_easy| >= |F_tight| per vertex: {dominated}",
    )
    assert ok


def test_criterion_3_offset_identity(corpus_records):
    records, _ = corpus_records
    exact = 0
    total = 0
    for _, _, tight, t_rep, easy, e_rep in records:
        for emb, rep in ((tight, t_rep), (easy, e_rep)):
            total += 1
            if rep.min_embedded - rep.min_original == emb.offset:
                exact += 1
    ok = exact == total
    acceptance_report.record(
        3, ok, f"min E_emb - min E == sum(chain F) exactly on {exact}/{total} cases"
    )
    assert ok


def test_criterion_4_gap_bound():
    rng = random.Random(404)
    ok_count = 0
    equality = 0
    for _ in range(100):
        p = random_ising(rng, rng.randint(2, 6))
        e = random_embedding(rng, p.graph, max_physical=14)
        targets = GapTargeted({i: rng.choice([0.25, 0.5, 1.0]) for i in p.graph.vertices})
        emb = set_params_tight(e, p, targets)
        report = verify_correspondence(p, emb, tol=0.0)
        bound = min(min(targets.g.values()), report.original_gap)
        if report.ok and report.embedded_gap >= bound - 1e-9:
            ok_count += 1
        if abs(report.embedded_gap - bound) <= 1e-9:
            equality += 1
    ok = ok_count == 100
    acceptance_report.record(
        4, ok,
        f"embedded gap >= min(min g_i, original gap) - 1e-9 on {ok_count}/100"
        f" (equality held on {equality}/100, reported only)",
    )
    assert ok


def test_criterion_5_qubo_ising_equivalence():
    rng = random.Random(505)
    ok_count = 0
    for _ in range(100):
        q = random_qubo(rng, rng.randint(2, 10))
        ising, link = qubo_to_ising(q)
        best, argmax = solve_qubo_max(q)
        spec = enumerate_spectrum(ising)
        value_ok = best == link.map_value(spec.min_energy)
        minimizers = {
            frozenset((v, (s[v] + 1) // 2) for v in ising.graph.vertices)
            for s in spec.ground_states
        }
        maximizers = {frozenset(x.items()) for x in argmax}
        if value_ok and spec.complete and minimizers == maximizers:
            ok_count += 1
    ok = ok_count == 100
    acceptance_report.record(
        5, ok, f"max Y = offset - min E / 4 with argmax/argmin bijection on {ok_count}/100, exact"
    )
    assert ok


def test_criterion_6_k4_boundary():
    t0 = time.perf_counter()
    g = Graph.complete(4)
    w = WmisInstance.unweighted(g)

    best1, argmax1 = solve_qubo_max(wmis_to_qubo(w, UniformPenalty(1.0)).qubo)
    supports1 = [frozenset(v for v, b in x.items() if b) for x in argmax1]
    boundary_ok = best1 == 1.0 and any(
        any(g.has_edge(u, v) for u in s for v in s if u < v) for s in supports1
    )

    best2, argmax2 = solve_qubo_max(wmis_to_qubo(w, UniformPenalty(1.25)).qubo)
    supports2 = {frozenset(v for v, b in x.items() if b) for x in argmax2}
    strict_ok = best2 == 1.0 and supports2 == {frozenset({v}) for v in g.vertices}

    elapsed = time.perf_counter() - t0
    ok = boundary_ok and strict_ok and elapsed < 1.0
    acceptance_report.record(
        6, ok,
        f"K4: J=1 gives max Y=1 with a non-independent maximizer ({boundary_ok}),"
        f" J=1.25 gives independent singletons only ({strict_ok}), {elapsed:.3f}s",
    )
    assert ok


def test_criterion_7_wmis_oracle():
    rng = random.Random(707)
    ok_count = 0
    for _ in range(100):
        g = random_connected_graph(rng, rng.randint(2, 10))
        w = WmisInstance(g, {v: rng.choice([0.25, 0.5, 1.0, 1.5, 2.0]) for v in g.vertices})
        best, argmax = solve_qubo_max(
            wmis_to_qubo(w, StrictMinPlus(min(w.weights.values()) / 4)).qubo
        )
        oracle_best, oracle_sets = enumerate_wmis(w)
        supports = {frozenset(v for v, b in x.items() if b) for x in argmax}
        if best == oracle_best and supports == set(oracle_sets):
            ok_count += 1
    ok = ok_count == 100
    acceptance_report.record(
        7, ok, f"strict-rule value and supports match brute-force WMIS on {ok_count}/100, exact"
    )
    assert ok


def six_value_k4_embedding():
    """K4 embedded with maximum hardware degree 3: two 3-chains and two
    2-chains, every chain endpoint carrying at least one original edge and
    internal vertices at most one.

    Physical layout (0,1,2)=chain of logical 0, (3,4,5)=chain of logical 1,
    (6,7)=logical 2, (8,9)=logical 3.
    """
    g = Graph.complete(4)
    chain_edges = [(0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (8, 9)]
    original = {
        (0, 1): (0, 3),
        (0, 2): (1, 6),
        (0, 3): (2, 8),
        (1, 2): (5, 7),
        (1, 3): (5, 8),
        (2, 3): (7, 9),
    }
    hw = Graph.build(range(10), chain_edges + [tuple(sorted(pq)) for pq in original.values()])
    e = MinorEmbedding.build(
        g, hw,
        {0: [0, 1, 2], 1: [3, 4, 5], 2: [6, 7], 3: [8, 9]},
        {0: [(0, 1), (1, 2)], 1: [(3, 4), (4, 5)], 2: [(6, 7)], 3: [(8, 9)]},
        original,
    )
    return g, e, hw


def test_criterion_8_six_value_mis_parameters():
    eps = 0.25
    g, e, hw = six_value_k4_embedding()
    degree_ok = max(hw.degree(v) for v in hw.vertices) <= 3

    emb = build_embedded_mis(g, e, eps)
    allowed = {-(1 + eps), 0.0, eps, 1 + eps, 1 + 2 * eps, 1 + 3 * eps}
    realized = set(emb.problem.h.values())
    for fs in emb.chain_edges.values():
        realized |= set(fs.values())
    values_ok = realized <= allowed

    ising, _ = qubo_to_ising(wmis_to_qubo(WmisInstance.unweighted(g), UniformPenalty(1 + eps)).qubo)
    slack_ok = all(compute_C(ising, i) == 2.0 for i in g.vertices if g.degree(i) >= 2)

    ok = degree_ok and values_ok and slack_ok
    acceptance_report.record(
        8, ok,
        f"degree-3 K4 chain embedding realizes values within the six-value set ({values_ok}),"
        f" C_i = 2 for deg >= 2 ({slack_ok}), exact",
    )
    assert ok


def test_criterion_9_preprocessing():
    rng = random.Random(909)
    ok_count = 0
    for _ in range(50):
        while True:
            p = random_ising(rng, rng.randint(2, 8), nonneg_slack=False)
            if any(compute_C(p, i) < 0 for i in p.graph.vertices):
                break
        prep = preprocess_fix(p)
        spec = enumerate_spectrum(p)
        agrees = all(
            s[i] == v for s in spec.ground_states for i, v in prep.fixed.items()
        )
        residual_ok = all(
            compute_C(prep.residual, i) >= 0 for i in prep.residual.graph.vertices
        )
        if prep.fixed and agrees and residual_ok and spec.complete:
            ok_count += 1
    ok = ok_count == 50
    acceptance_report.record(
        9, ok,
        f"fixed spins agree with every global minimizer and residual C_i >= 0 on {ok_count}/50",
    )
    assert ok


def test_criterion_10_basis_state_identity():
    rng = random.Random(1010)
    checked = 0
    mismatches = 0
    for n in range(1, 5):
        for _ in range(10):
            graph = random_connected_graph(rng, n) if n > 1 else Graph.build([0], [])
            p = IsingProblem.build(
                graph,
                {v: rng.choice(QUARTERS) for v in graph.vertices},
                {e: rng.choice(QUARTERS_NONZERO) for e in graph.edges},
            )
            for mask in range(1 << n):
                z = {v: (mask >> v) & 1 for v in graph.vertices}
                direct = sum(p.h.get(v, 0.0) * (-1) ** z[v] for v in graph.vertices)
                direct += sum(w * (-1) ** (z[u] + z[v]) for (u, v), w in p.J.items())
                checked += 1
                if basis_state_energy(p, z) != direct:
                    mismatches += 1
    ok = mismatches == 0
    acceptance_report.record(
        10, ok, f"diagonal eigenvalue matches spin energy on {checked} basis states, exact"
    )
    assert ok


def test_criterion_11_negative_control(tmp_path, capsys):
    p, emb = chain_setup()
    # tight bound magnitude for the 2-chain is C/2 = 1/2; F = -1/4 is a
    # factor 2 weaker and must break the correspondence
    weak = set_params_custom_split(
        emb.source, p, {(0, 0): 0.5, (0, 1): 0.5, (1, 2): 1.0}, -0.25
    )
    problem_path = tmp_path / "p.json"
    files.dump(files.ising_to_doc(p), problem_path)
    weak_path = tmp_path / "weak.json"
    files.dump(files.embedded_to_doc(weak, "custom"), weak_path)
    code = cli.main(["verify", "--original", str(problem_path), "--embedded", str(weak_path)])
    capsys.readouterr()
    ok = code == 1
    acceptance_report.record(
        11, ok, f"verify exits with code {code} on a chain strength weakened by factor 2"
    )
    assert ok
