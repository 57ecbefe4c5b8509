"""Labeled image-folder handling with a deterministic manifest order.

Expected layout: one directory per split, one subdirectory per class, image
files inside. Rows in every exported CSV follow the lexicographic order of
(class directory, file name), which is also what the manifest records.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import torch
from PIL import Image
from torch.utils.data import Dataset
from torchvision import transforms

IMAGE_EXTENSIONS = (".png", ".jpg", ".jpeg", ".bmp", ".gif", ".webp")

# ImageNet statistics, matching the pretrained backbone.
NORMALIZE = transforms.Normalize(
    mean=[0.485, 0.456, 0.406], std=[0.229, 0.224, 0.225]
)


class ImageFolderError(Exception):
    """Bad split layout or unreadable image; message names the path."""


@dataclass(frozen=True)
class SplitIndex:
    root: Path
    class_names: tuple[str, ...]
    files: tuple[Path, ...]
    labels: tuple[int, ...]


def index_split(root: str | Path) -> SplitIndex:
    """Scan one split directory into a lexicographically ordered index."""
    root = Path(root)
    if not root.is_dir():
        raise ImageFolderError(f"split directory not found: {root}")
    class_dirs = sorted(p for p in root.iterdir() if p.is_dir())
    if not class_dirs:
        raise ImageFolderError(f"no class subdirectories under {root}")
    files: list[Path] = []
    labels: list[int] = []
    for label, class_dir in enumerate(class_dirs):
        entries = sorted(
            p
            for p in class_dir.iterdir()
            if p.is_file() and p.suffix.lower() in IMAGE_EXTENSIONS
        )
        if not entries:
            raise ImageFolderError(f"no images under {class_dir}")
        files.extend(entries)
        labels.extend([label] * len(entries))
    return SplitIndex(
        root=root,
        class_names=tuple(d.name for d in class_dirs),
        files=tuple(files),
        labels=tuple(labels),
    )


def check_matching_classes(train: SplitIndex, test: SplitIndex):
    if train.class_names != test.class_names:
        raise ImageFolderError(
            f"class folders differ between splits: train {train.class_names} "
            f"vs test {test.class_names}"
        )


def build_transform(image_size: int) -> transforms.Compose:
    return transforms.Compose(
        [
            transforms.Resize((image_size, image_size)),
            transforms.ToTensor(),
            NORMALIZE,
        ]
    )


class IndexedImageDataset(Dataset):
    """Images in manifest order; corrupt files raise with their path."""

    def __init__(self, index: SplitIndex, image_size: int):
        self.index = index
        self.transform = build_transform(image_size)

    def __len__(self) -> int:
        return len(self.index.files)

    def __getitem__(self, i: int):
        path = self.index.files[i]
        try:
            with Image.open(path) as img:
                tensor = self.transform(img.convert("RGB"))
        except (OSError, SyntaxError) as exc:
            raise ImageFolderError(f"cannot read image {path}: {exc}") from exc
        return tensor, torch.tensor(self.index.labels[i], dtype=torch.long)
