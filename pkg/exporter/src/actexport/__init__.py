"""Per-layer activation export for trained networks."""

from .capture import capture_activations, flatten_features, predict_classes
from .export import ExportSpec, build_toy_fixture, export_activations, load_checkpoint
from .toy_fixture import ToyMlp, ToyTrainConfig, make_blobs, train_toy_mlp

__all__ = [
    "ExportSpec",
    "ToyMlp",
    "ToyTrainConfig",
    "build_toy_fixture",
    "capture_activations",
    "export_activations",
    "flatten_features",
    "load_checkpoint",
    "make_blobs",
    "predict_classes",
    "train_toy_mlp",
]
