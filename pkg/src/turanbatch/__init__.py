"""Combinatorial batch codes and Turán numbers of deficiency-bounded hypergraphs."""

from .bounds import (
    BoundReport,
    PartialBound,
    bound_report,
    cbc_exponent,
    cbc_upper,
    competing_exponent_bb,
    d_constant_estimate,
    diff_upper_general,
    f_upper_general,
    f_upper_r2,
    graph_upper,
    hypergraph_upper,
    lower_exponent,
    upper_exponent,
    z_value,
)
from .construct import (
    C_GRID,
    POLICIES,
    ConstructionReport,
    auto_tune_c,
    deficiency_trace,
    edge_exponent,
    edge_probability,
    expected_edges,
    expected_forbidden_upper,
    forbidden_sizes,
    random_construct,
)
from .core import (
    Hypergraph,
    ParamTriple,
    as_params,
    check_selection,
    components,
    cover,
    deficiency,
    make_rng,
    random_uniform,
    read_hypergraph,
    validate_params,
    write_hypergraph,
)
from .errors import *  # noqa: F401,F403
from .exact import (
    DifferenceTable,
    ExactResult,
    difference_table,
    exact_ex,
    exact_f,
    exact_m,
    multiplicity_cap,
)
from .freeness import (
    FreenessVerdict,
    RetrievalPlan,
    find_violation,
    forbidden_member,
    is_cbc,
    is_f_free,
    is_free,
    max_deficiency,
    max_deficiency_bruteforce,
    min_cover_of,
    minimal_witness,
    sdr_retrieve,
)
from .structure import (
    BfsCertificate,
    DecompositionCertificate,
    DichotomyResult,
    LinkCertificate,
    PeelCertificate,
    best_link,
    bfs_certificate,
    decompose_maximal_forbidden,
    min_degree_core,
    peel_min_degree,
    verify_lemma51,
)

__version__ = "0.1.0"
