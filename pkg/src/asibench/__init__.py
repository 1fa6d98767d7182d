"""Robustness benchmarking toolkit: two-factor image perturbations, accuracy
measurement across corruption conditions, and accuracy-stability scoring."""

from .image import Image, read_netpbm, write_netpbm
from .perturb import (
    Kind,
    PerturbationStep,
    apply_gaussian_noise,
    apply_salt_pepper,
    apply_sequence,
    rotate,
)
from .registry import Condition, ConditionRegistry, default_registry, load_registry, materialize
from .harness import AccuracySeries, evaluate, load_accuracy_table
from .metrics import BenchmarkScore, RelativeDelta, asi, coefficient_of_variation, compare, mean_accuracy, score
from .surface import SurfaceGrid, emit_grid, surface_grid

__all__ = [
    "Image", "read_netpbm", "write_netpbm",
    "Kind", "PerturbationStep", "apply_salt_pepper", "apply_gaussian_noise",
    "rotate", "apply_sequence",
    "Condition", "ConditionRegistry", "default_registry", "load_registry", "materialize",
    "AccuracySeries", "evaluate", "load_accuracy_table",
    "BenchmarkScore", "RelativeDelta", "mean_accuracy", "coefficient_of_variation",
    "asi", "score", "compare",
    "SurfaceGrid", "surface_grid", "emit_grid",
]

__version__ = "0.1.0"
