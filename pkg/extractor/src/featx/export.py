"""Fine-tune the embedding network and export feature CSVs.

Output files follow the downstream feature-CSV contract exactly: UTF-8, LF
line endings, header ``f0,...,f127,label``, one row per image in manifest
order, floats in shortest round-trip form, class-folder name as the label.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import torch
from torch import nn
from torch.utils.data import DataLoader

from .data import (
    IndexedImageDataset,
    SplitIndex,
    check_matching_classes,
    index_split,
)
from .model import EmbeddingNet


@dataclass(frozen=True)
class ExtractorConfig:
    train_dir: str
    test_dir: str
    out_train: str = "train.csv"
    out_test: str = "test.csv"
    manifest: str = "manifest.json"
    image_size: int = 224
    embedding_dim: int = 128
    epochs: int = 100
    batch_size: int = 32
    learning_rate: float = 1e-4
    dropout: float = 0.38
    pretrained: bool = True
    unfreeze_blocks: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.embedding_dim != 128:
            raise ValueError("embedding dim is fixed at 128")
        if self.image_size != 224:
            raise ValueError("input size is fixed at 224")


def _finetune(model: EmbeddingNet, dataset, config: ExtractorConfig):
    loader = DataLoader(
        dataset,
        batch_size=config.batch_size,
        shuffle=True,
        generator=torch.Generator().manual_seed(config.seed),
        num_workers=0,
    )
    trainable = [p for p in model.parameters() if p.requires_grad]
    optimizer = torch.optim.RMSprop(trainable, lr=config.learning_rate)
    loss_fn = nn.CrossEntropyLoss()
    model.train()
    for _ in range(config.epochs):
        for images, labels in loader:
            optimizer.zero_grad()
            loss = loss_fn(model(images), labels)
            loss.backward()
            optimizer.step()


@torch.no_grad()
def _export_split(
    model: EmbeddingNet,
    index: SplitIndex,
    config: ExtractorConfig,
    path: str | Path,
):
    model.eval()
    loader = DataLoader(
        IndexedImageDataset(index, config.image_size),
        batch_size=config.batch_size,
        shuffle=False,
        num_workers=0,
    )
    rows: list[torch.Tensor] = []
    for images, _ in loader:
        rows.append(model.embed(images))
    embeddings = torch.cat(rows).double().cpu().numpy()
    with open(path, "w", newline="\n", encoding="utf-8") as handle:
        header = [f"f{j}" for j in range(config.embedding_dim)] + ["label"]
        handle.write(",".join(header) + "\n")
        for vector, label in zip(embeddings, index.labels):
            cells = [repr(float(v)) for v in vector]
            cells.append(index.class_names[label])
            handle.write(",".join(cells) + "\n")


def finetune_and_export(config: ExtractorConfig) -> dict:
    """Train on the train split, export embeddings for both splits.

    Returns the manifest (also written to ``config.manifest``): the config
    echo plus the exact row order of every output file.
    """
    torch.manual_seed(config.seed)
    train_index = index_split(config.train_dir)
    test_index = index_split(config.test_dir)
    check_matching_classes(train_index, test_index)
    model = EmbeddingNet(
        class_count=len(train_index.class_names),
        embedding_dim=config.embedding_dim,
        dropout=config.dropout,
        pretrained=config.pretrained,
        unfreeze_blocks=config.unfreeze_blocks,
    )
    _finetune(model, IndexedImageDataset(train_index, config.image_size), config)
    _export_split(model, train_index, config, config.out_train)
    _export_split(model, test_index, config, config.out_test)
    manifest = {
        "config": asdict(config),
        "classes": list(train_index.class_names),
        "train_rows": [str(p) for p in train_index.files],
        "test_rows": [str(p) for p in test_index.files],
    }
    Path(config.manifest).write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest
