"""Affinity-graph analysis of neural-network activations.

Learns sparse self-expressive affinity graphs over input samples from
layer activation matrices, compares graphs across layers and epochs with
centered kernel alignment, and quantifies class structure through graph
modularity, spectral embeddings and affinity-based label assignment.
"""

import os as _os

# Thread-count override must land before BLAS loads with numpy below.
_threads = _os.environ.get("SSCGRAPH_NUM_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

from .graph_metrics import (
    ClassProfile,
    DegenerateDegreeError,
    Embedding,
    EmptyGraphError,
    agreement,
    class_affinity_profile,
    isolated_nodes,
    modularity,
    spectral_embedding,
    ssc_labels,
    top_neighbors,
)
from .matrix_io import (
    LayerManifest,
    LayerRecord,
    ManifestError,
    MatrixFormatError,
    load_labels,
    load_manifest,
    load_matrix,
    load_record_matrix,
    save_labels,
    save_matrix,
)
from .pipeline import (
    render_heatmap,
    run_instance_analysis,
    run_pairwise_architecture,
    run_training_dynamics,
    write_report,
)
from .similarity import (
    DegenerateKernelError,
    center,
    cka,
    hsic,
    linear_gram,
    pairwise_cka,
)
from .solver import (
    SolveReport,
    SscConfig,
    build_affinity,
    shrink,
    solve_ssc,
    ssc_objective,
)
from .synthetic import SyntheticConfig, gen_synthetic, subspace_preserving_ratio

__all__ = [
    "ClassProfile",
    "DegenerateDegreeError",
    "DegenerateKernelError",
    "Embedding",
    "EmptyGraphError",
    "LayerManifest",
    "LayerRecord",
    "ManifestError",
    "MatrixFormatError",
    "SolveReport",
    "SscConfig",
    "SyntheticConfig",
    "agreement",
    "build_affinity",
    "center",
    "cka",
    "class_affinity_profile",
    "gen_synthetic",
    "hsic",
    "isolated_nodes",
    "linear_gram",
    "load_labels",
    "load_manifest",
    "load_matrix",
    "load_record_matrix",
    "modularity",
    "pairwise_cka",
    "render_heatmap",
    "run_instance_analysis",
    "run_pairwise_architecture",
    "run_training_dynamics",
    "save_labels",
    "save_matrix",
    "shrink",
    "solve_ssc",
    "spectral_embedding",
    "ssc_labels",
    "ssc_objective",
    "subspace_preserving_ratio",
    "top_neighbors",
    "write_report",
]

__version__ = "0.1.0"
