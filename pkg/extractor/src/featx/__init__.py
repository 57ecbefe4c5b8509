"""Image folders to 128-dim feature CSVs via a fine-tuned MobileNetV3-Large."""

from .data import ImageFolderError, SplitIndex, index_split
from .export import ExtractorConfig, finetune_and_export
from .model import EmbeddingNet

__version__ = "0.1.0"

__all__ = [
    "EmbeddingNet",
    "ExtractorConfig",
    "ImageFolderError",
    "SplitIndex",
    "finetune_and_export",
    "index_split",
]
