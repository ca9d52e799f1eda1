"""Block-boundary detection in noisy block-wise constant matrices.

The estimator rephrases 2D change-point detection as an l1-penalised
regression against the implicit design T (x) T, solves the full
regularisation path with a structured homotopy algorithm, and selects the
final boundaries by resampling-based stability scores.
"""

from .gram import ActiveSet, CholeskyFactor, gram_entry, gram_submatrix
from .lars import (
    Breakpoint,
    ChangePointSet,
    PathRecord,
    extract_changepoints,
    fitted_means,
    lars_path,
)
from .linops import apply_design, apply_design_transpose, unvec, vec
from .metrics import HausdorffParts, RocCurve, hausdorff_parts, roc_from_path
from .simulate import (
    GeneratedDataset,
    Scenario,
    generate,
    generate_checkerboard_k,
)
from .stability import (
    SelectionConfig,
    StabilityScores,
    reconstruct_U,
    select_changepoints,
    stability_scores,
)

__version__ = "0.1.0"

__all__ = [
    "ActiveSet",
    "Breakpoint",
    "ChangePointSet",
    "CholeskyFactor",
    "GeneratedDataset",
    "HausdorffParts",
    "PathRecord",
    "RocCurve",
    "Scenario",
    "SelectionConfig",
    "StabilityScores",
    "apply_design",
    "apply_design_transpose",
    "extract_changepoints",
    "fitted_means",
    "generate",
    "generate_checkerboard_k",
    "gram_entry",
    "gram_submatrix",
    "hausdorff_parts",
    "lars_path",
    "reconstruct_U",
    "roc_from_path",
    "select_changepoints",
    "stability_scores",
    "unvec",
    "vec",
]
