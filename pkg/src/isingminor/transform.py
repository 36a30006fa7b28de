"""Exact QUBO <-> Ising equivalences with offset bookkeeping.

Two bit/spin conventions coexist on purpose and are never mixed implicitly:
the optimization change of variables uses x=1 <-> s=+1, while the
basis-state energy uses z=0 <-> s=+1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .graphs import BitConfig, IsingProblem, QuboProblem, SpinConfig


class LinkDirection(str, Enum):
    QUBO_MAX_TO_ISING_MIN = "qubo_max_to_ising_min"
    ISING_MIN_TO_QUBO_MAX = "ising_min_to_qubo_max"


@dataclass(frozen=True)
class AffineLink:
    """Affine relation between the two problems' optimal values.

    source_opt = offset + scale * converted_opt, and pointwise
    Y(x) / E(s) are related the same way for corresponding assignments.
    """

    scale: float
    offset: float
    direction: LinkDirection

    def map_value(self, converted_value: float) -> float:
        return self.offset + self.scale * converted_value


def qubo_to_ising(q: QuboProblem) -> tuple[IsingProblem, AffineLink]:
    """Convert max-Y form to min-E form on the same graph.

    h_i = sum_{j in nbr(i)} J_ij - 2 c_i, couplings unchanged;
    max Y = offset + (-1/4) min E with offset = (1/2) sum c - (1/4) sum J.
    """
    h = {
        i: sum(q.J[e] for e in q.graph.edges if i in e) - 2.0 * q.c[i]
        for i in q.graph.vertices
    }
    offset = 0.5 * sum(q.c.values()) - 0.25 * sum(q.J.values())
    link = AffineLink(scale=-0.25, offset=offset, direction=LinkDirection.QUBO_MAX_TO_ISING_MIN)
    return IsingProblem(q.graph, h, dict(q.J)), link


def ising_to_qubo(p: IsingProblem) -> tuple[QuboProblem, AffineLink]:
    """Inverse conversion: c_i = (sum_{j in nbr(i)} J_ij - h_i) / 2.

    min E = offset + (-4) max Y. Round-tripping is bit-exact on dyadic
    inputs since every coefficient is a sum of halved dyadics.
    """
    c = {
        i: 0.5 * (sum(p.J[e] for e in p.graph.edges if i in e) - p.h[i])
        for i in p.graph.vertices
    }
    qubo_offset = 0.5 * sum(c.values()) - 0.25 * sum(p.J.values())
    link = AffineLink(scale=-4.0, offset=4.0 * qubo_offset, direction=LinkDirection.ISING_MIN_TO_QUBO_MAX)
    return QuboProblem(p.graph, c, dict(p.J)), link


def spins_from_bits(x: Mapping[int, int]) -> SpinConfig:
    """Optimization convention: x=1 -> s=+1, x=0 -> s=-1."""
    return {v: (1 if b else -1) for v, b in x.items()}


def bits_from_spins(s: Mapping[int, int]) -> BitConfig:
    """Inverse of spins_from_bits: x = (s + 1) / 2."""
    return {v: (1 if sp > 0 else 0) for v, sp in s.items()}


def basis_state_energy(p: IsingProblem, z: Mapping[int, int]) -> float:
    """Diagonal-Hamiltonian eigenvalue on basis state z: s_i = (-1)^{z_i}.

    Note the orientation is opposite to spins_from_bits: z=0 -> s=+1.
    """
    from .graphs import energy

    return energy(p, {v: (-1 if b else 1) for v, b in z.items()})
