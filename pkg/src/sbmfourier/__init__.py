"""Fourier coefficients of stochastic block models, signed subgraph-count
hypothesis tests, and numerical verification of comparison inequalities."""

from .graphs import (
    PatternGraph,
    automorphism_count,
    canonical_form,
    complete_bipartite,
    connected_catalog,
    copies_in_complete,
    cycle,
    disjoint_union,
    enumerate_graphs,
    k4_minus,
    parse_graph,
    profile,
    single_edge,
    star,
    symmetric_product,
)
from .sbm import (
    ExampleFamily,
    SbmModel,
    abs_model,
    classify,
    community_row_means,
    construct_example,
    example,
    make_sbm,
    random_sbm,
)
from .fourier import (
    BudgetExceeded,
    FourierResult,
    phi_auto,
    phi_cycle_spectral,
    phi_factorized,
    phi_independence_poly,
    phi_label_sum,
    phi_star,
    planted_mean_sc,
    planted_variance_sc,
    psi,
    spectrum,
)
from .counts import (
    SampledGraph,
    sign_matrix,
    signed_count,
    signed_count_naive,
    signed_cycle4_fast,
    signed_star_count,
    signed_triangle_fast,
)
from .sampling import (
    PowerReport,
    TestSpec,
    build_test,
    estimate_phi_mc,
    estimate_power,
    sample_er,
    sample_sbm,
)
from .streams import SeededStream
from .verify import (
    VerifyReport,
    check_diagonal,
    check_nonnegative,
    check_nonvanishing,
    check_norm_monotone,
    check_one_to_one,
    check_two_community,
    falsify_search,
)

__version__ = "0.1.0"
