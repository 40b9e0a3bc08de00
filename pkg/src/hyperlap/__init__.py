"""hyperlap: calculus, Laplacians, learning, and cuts on hypergraphs.

The package is organized around a validated :class:`Hypergraph` plus four
operator/algorithm layers:

* :mod:`hyperlap.calculus` — gradient, divergence, Dirichlet sums.
* :mod:`hyperlap.laplacians` — the p-Laplacian family and reference
  operators (clique/star reductions, random-walk view).
* :mod:`hyperlap.ssl` — regularized label propagation (closed form at p=2,
  relaxation sweeps otherwise).
* :mod:`hyperlap.spectral` — eigensolvers, normalized-cut partitioning, and
  the Rayleigh-quotient descent for general p.
* :mod:`hyperlap.dataio` — categorical-file ingestion, hypergraph files,
  experiment drivers, and the ``hyperlap`` CLI.

Numeric hot loops live in :mod:`hyperlap._kernels`, which picks a compiled
backend when available and a pure-numpy twin otherwise.
"""

from . import errors
from ._kernels import BACKEND as kernel_backend
from ._kernels import available_backends
from .hypergraph import Hypergraph, as_node_function, largest_component
from .calculus import (
    EPS_NORM,
    EdgeVertexField,
    GradientProfile,
    dirichlet_sum,
    divergence,
    edge_p_mean,
    gradient,
    gradient_norm,
    gradient_profile,
    inner_product_edges,
    inner_product_nodes,
    slot_index,
)
from .laplacians import (
    LinearOperatorView,
    PLaplacianCoefficients,
    apply_p_laplacian,
    graph_comparison_operators,
    hein_regularizer,
    laplacian_p2,
    p_coefficients,
    p_laplacian_parts,
    random_walk,
    rodriguez_laplacian,
    rodriguez_p_quadratic,
    xi_p,
    zhou_laplacian,
)
from .ssl import (
    DEFAULT_MU_GRID,
    SSLProblem,
    SSLResult,
    closed_form_p2,
    cross_validate_mu,
    gauss_jacobi_step,
    objective,
    predict,
    solve,
)
from .spectral import (
    DescentOptions,
    EigenPairs,
    PartitionResult,
    boundary_volume,
    brute_force_min_ncut,
    error_rate,
    multiclass_cut_p2,
    multiclass_ncut,
    ncut,
    p_eigen_residual,
    p_mean,
    p_var,
    rayleigh,
    rayleigh2,
    rayleigh2_gradient,
    smallest_eigenpairs,
    threshold_sweep,
    two_class_cut_p,
    two_class_cut_p2,
)
from . import dataio

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "errors",
    "dataio",
    "kernel_backend",
    "available_backends",
    "Hypergraph",
    "as_node_function",
    "largest_component",
    "EPS_NORM",
    "EdgeVertexField",
    "GradientProfile",
    "slot_index",
    "gradient",
    "gradient_profile",
    "gradient_norm",
    "dirichlet_sum",
    "edge_p_mean",
    "inner_product_nodes",
    "inner_product_edges",
    "divergence",
    "LinearOperatorView",
    "PLaplacianCoefficients",
    "xi_p",
    "p_coefficients",
    "p_laplacian_parts",
    "apply_p_laplacian",
    "laplacian_p2",
    "zhou_laplacian",
    "rodriguez_laplacian",
    "rodriguez_p_quadratic",
    "hein_regularizer",
    "random_walk",
    "graph_comparison_operators",
    "DEFAULT_MU_GRID",
    "SSLProblem",
    "SSLResult",
    "objective",
    "gauss_jacobi_step",
    "solve",
    "closed_form_p2",
    "cross_validate_mu",
    "predict",
    "EigenPairs",
    "PartitionResult",
    "DescentOptions",
    "smallest_eigenpairs",
    "boundary_volume",
    "ncut",
    "multiclass_ncut",
    "threshold_sweep",
    "two_class_cut_p2",
    "multiclass_cut_p2",
    "brute_force_min_ncut",
    "p_eigen_residual",
    "rayleigh",
    "p_mean",
    "p_var",
    "rayleigh2",
    "rayleigh2_gradient",
    "two_class_cut_p",
    "error_rate",
]
