"""Minor-embedding compilation of Ising/QUBO problems onto fixed hardware
graphs, with exact brute-force verification."""

from .embedding import (
    EmbeddingClass,
    EmbeddingError,
    MinorEmbedding,
    ValidationReport,
    classify,
    derive_edge_assignment,
    greedy_chain_embed,
    leaf_count,
    leaves,
    validate,
)
from .graphs import (
    DomainError,
    Graph,
    HardwareGraph,
    HardwareKind,
    IsingProblem,
    QuboProblem,
    energy,
    make_hardware,
    objective,
)
from .params import (
    ChainStrengthPolicy,
    EasyBound,
    EmbeddedIsing,
    GapTargeted,
    PreconditionError,
    Preprocessing,
    TightBound,
    compute_C,
    preprocess_fix,
    set_params_custom_split,
    set_params_easy,
    set_params_tight,
)
from .solve import (
    CorrespondenceReport,
    EnumerationCapError,
    SpectrumReport,
    enumerate_spectrum,
    min_working_F,
    solve_qubo_max,
    verify_correspondence,
)
from .transform import (
    AffineLink,
    basis_state_energy,
    bits_from_spins,
    ising_to_qubo,
    qubo_to_ising,
    spins_from_bits,
)
from .wmis import (
    StrictMinPlus,
    UniformPenalty,
    WmisInstance,
    build_embedded_mis,
    enumerate_wmis,
    extract_independent_set,
    wmis_to_qubo,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
