"""MobileNetV3-Large backbone with a two-conv embedding/classification top.

The stock classification top is replaced by two 1x1 point-wise
convolutions: the first projects the pooled backbone features to the
128-dim embedding (with dropout before it), the second maps embeddings to
class logits. The flattened output of the first convolution is the
exported feature vector.
"""

from __future__ import annotations

import torch
from torch import nn
from torchvision.models import MobileNet_V3_Large_Weights, mobilenet_v3_large


class EmbeddingNet(nn.Module):
    def __init__(
        self,
        class_count: int,
        embedding_dim: int = 128,
        dropout: float = 0.38,
        pretrained: bool = True,
        unfreeze_blocks: int = 3,
    ):
        super().__init__()
        weights = MobileNet_V3_Large_Weights.IMAGENET1K_V1 if pretrained else None
        backbone = mobilenet_v3_large(weights=weights)
        self.features = backbone.features
        self.pool = nn.AdaptiveAvgPool2d(1)
        self.dropout = nn.Dropout(p=dropout)
        backbone_channels = backbone.classifier[0].in_features
        self.embed_conv = nn.Conv2d(backbone_channels, embedding_dim, kernel_size=1)
        self.embed_act = nn.Hardswish()
        self.class_conv = nn.Conv2d(embedding_dim, class_count, kernel_size=1)
        self._freeze_backbone(unfreeze_blocks)

    def _freeze_backbone(self, unfreeze_blocks: int):
        """Freeze all backbone blocks except the last ``unfreeze_blocks``."""
        for param in self.features.parameters():
            param.requires_grad = False
        if unfreeze_blocks > 0:
            for block in list(self.features)[-unfreeze_blocks:]:
                for param in block.parameters():
                    param.requires_grad = True

    def _embed_map(self, x: torch.Tensor) -> torch.Tensor:
        x = self.features(x)
        x = self.pool(x)
        x = self.dropout(x)
        return self.embed_act(self.embed_conv(x))

    def embed(self, x: torch.Tensor) -> torch.Tensor:
        """Flattened 128-dim embedding for a batch of images."""
        return torch.flatten(self._embed_map(x), 1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return torch.flatten(self.class_conv(self._embed_map(x)), 1)
