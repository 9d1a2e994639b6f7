"""
cliquelab - clique factors in graphs with small independence number
"""

from .absorbers import (
    AbsorbingSet,
    PipelineResult,
    SAbsorber,
    build_absorbing_set,
    build_s_absorber,
    full_pipeline,
    is_s_t_absorber,
    is_xi_absorbing,
)
from .constructions import (
    GeneratedGraph,
    blow_up,
    bollobas_erdos,
    bottleneck_degree_bound,
    bottleneck_extremal,
    gamma_graph,
    gnp,
    hs_extremal,
    triangle_free_process,
    two_cliques,
)
from .diamonds import DiamondPath, find_diamond_path
from .embeddings import (
    MultiEmbedding,
    find_kr_multi_embedding,
    fractional_multi_tiling,
    greedy_embed,
    lemma_start_embedding,
    upsilon,
    upsilon2,
    validate_multi_embedding,
)
from .errors import CliqueLabError, GraphParseError, InputError, InvariantViolation, ResourceGuardError
from .graph import Graph, induced_subgraph, iter_cliques
from .graph_io import read_graph, write_graph
from .oracles import (
    alpha_ell,
    enumerate_kr,
    erdos_sos_clique,
    find_kr_factor,
    has_kr_factor,
    independence_number,
    max_fractional_tiling,
    max_kr_tiling,
    satisfies_threshold,
)
from .reduced import (
    Partition,
    ReducedMultigraph,
    build_reduced,
    check_regular_pair,
    check_slicing,
    reduced_min_degree,
)
from .tiling import (
    augment_step,
    augment_to_target,
    flatten_in_blowup,
    fracmat_iterate,
    greedy_tiling,
    tiling_to_fractional,
)
from .tilings import FractionalTiling, Tiling

__version__ = "0.3.0"

__all__ = [
    "AbsorbingSet",
    "CliqueLabError",
    "DiamondPath",
    "FractionalTiling",
    "GeneratedGraph",
    "Graph",
    "GraphParseError",
    "InputError",
    "InvariantViolation",
    "MultiEmbedding",
    "Partition",
    "PipelineResult",
    "ReducedMultigraph",
    "ResourceGuardError",
    "SAbsorber",
    "Tiling",
    "alpha_ell",
    "augment_step",
    "augment_to_target",
    "blow_up",
    "bollobas_erdos",
    "bottleneck_degree_bound",
    "bottleneck_extremal",
    "build_absorbing_set",
    "build_reduced",
    "build_s_absorber",
    "check_regular_pair",
    "check_slicing",
    "enumerate_kr",
    "erdos_sos_clique",
    "find_diamond_path",
    "find_kr_factor",
    "find_kr_multi_embedding",
    "flatten_in_blowup",
    "fracmat_iterate",
    "fractional_multi_tiling",
    "full_pipeline",
    "gamma_graph",
    "gnp",
    "greedy_embed",
    "greedy_tiling",
    "has_kr_factor",
    "hs_extremal",
    "independence_number",
    "induced_subgraph",
    "is_s_t_absorber",
    "is_xi_absorbing",
    "iter_cliques",
    "lemma_start_embedding",
    "max_fractional_tiling",
    "max_kr_tiling",
    "read_graph",
    "reduced_min_degree",
    "satisfies_threshold",
    "tiling_to_fractional",
    "triangle_free_process",
    "two_cliques",
    "upsilon",
    "upsilon2",
    "validate_multi_embedding",
    "write_graph",
]
