import random

import pytest

from isingminor import (
    DomainError,
    Graph,
    IsingProblem,
    QuboProblem,
    energy,
    make_hardware,
    objective,
)


def test_energy_single_vertex():
    p = IsingProblem.build(Graph.build([0], []), {0: 1.0}, {})
    assert energy(p, {0: 1}) == 1.0


def test_energy_antiferromagnetic_pair():
    p = IsingProblem.build(Graph.build([1, 2], [(1, 2)]), {}, {(1, 2): 1.0})
    assert energy(p, {1: 1, 2: -1}) == -1.0


def test_energy_triangle_hand_sum():
    g = Graph.build(range(3), [(0, 1), (1, 2), (0, 2)])
    p = IsingProblem.build(g, {}, {(0, 1): 1.0, (1, 2): 1.0, (0, 2): 1.0})
    # +1*+1 + +1*-1 + +1*-1 = -1
    assert energy(p, {0: 1, 1: 1, 2: -1}) == -1.0


def test_energy_missing_assignment_raises():
    p = IsingProblem.build(Graph.build([0, 1], [(0, 1)]), {}, {(0, 1): 1.0})
    with pytest.raises(DomainError):
        energy(p, {0: 1})


def test_objective_examples():
    q1 = QuboProblem.build(Graph.build([0], []), {0: 2.0}, {})
    assert objective(q1, {0: 1}) == 2.0
    q2 = QuboProblem.build(Graph.build([1, 2], [(1, 2)]), {1: 1.0, 2: 1.0}, {(1, 2): 3.0})
    assert objective(q2, {1: 1, 2: 1}) == -1.0
    assert objective(q2, {1: 0, 2: 0}) == 0.0


def test_hardware_square_2x2_is_c4():
    hw = make_hardware("square_lattice", 2, 2)
    assert hw.base.n == 4
    assert len(hw.base.edges) == 4
    assert hw.max_degree == 2


def test_hardware_extended_2x2_is_k4():
    hw = make_hardware("extended_grid", 2, 2)
    assert hw.base.n == 4
    assert len(hw.base.edges) == 6


def test_hardware_extended_4x4_edge_count():
    # king graph: 2*r*(c-1) horizontal+vertical is wrong on purpose; use the
    # direct formula r(c-1) + (r-1)c + 2(r-1)(c-1)
    rows = cols = 4
    expected = rows * (cols - 1) + (rows - 1) * cols + 2 * (rows - 1) * (cols - 1)
    hw = make_hardware("extended_grid", rows, cols)
    assert hw.base.n == 16
    assert len(hw.base.edges) == expected == 42


def test_hardware_rejects_bad_dims():
    with pytest.raises(DomainError):
        make_hardware("square_lattice", 0, 3)


def test_square_lattice_neighbors_are_4_moves():
    hw = make_hardware("square_lattice", 3, 3)
    assert hw.base.nbr(4) == frozenset({1, 3, 5, 7})  # center of 3x3
    assert hw.max_degree == 4


def test_extended_grid_neighbors_are_king_moves():
    hw = make_hardware("extended_grid", 3, 3)
    assert hw.base.nbr(4) == frozenset({0, 1, 2, 3, 5, 6, 7, 8})


def test_graph_rejects_self_loop_and_zero_coupling():
    with pytest.raises(DomainError):
        Graph.build([0, 1], [(0, 0)])
    g = Graph.build([0, 1], [(0, 1)])
    with pytest.raises(DomainError):
        IsingProblem.build(g, {}, {(0, 1): 0.0})


def test_neighbor_symmetry_random():
    rng = random.Random(7)
    for _ in range(20):
        n = rng.randint(2, 8)
        edges = {tuple(sorted(rng.sample(range(n), 2))) for _ in range(n)}
        g = Graph.build(range(n), edges)
        for i in g.vertices:
            for j in g.nbr(i):
                assert i in g.nbr(j)


def test_spin_flip_symmetry_and_linearity():
    rng = random.Random(3)
    g = Graph.build(range(4), [(0, 1), (1, 2), (2, 3), (0, 3)])
    J = {e: rng.choice([-1.0, -0.5, 0.5, 1.0]) for e in g.edges}
    p0 = IsingProblem.build(g, {}, J)
    doubled = IsingProblem.build(g, {}, {e: 2 * w for e, w in J.items()})
    for m in range(16):
        s = {v: (1 if m >> v & 1 else -1) for v in range(4)}
        neg = {v: -sv for v, sv in s.items()}
        assert energy(p0, s) == energy(p0, neg)
        assert energy(doubled, s) == 2 * energy(p0, s)
