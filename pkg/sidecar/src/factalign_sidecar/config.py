"""Sidecar configuration."""

from __future__ import annotations

from dataclasses import dataclass, field

# Default class order of the public DeBERTa-family NLI checkpoints this
# sidecar is normally pointed at: logit 0 = entailment (aligned),
# 1 = neutral, 2 = contradiction. Always declared, never guessed: override
# --class-map when serving a checkpoint with a different head order.
DEFAULT_CLASS_MAP = {"aligned": 0, "neutral": 1, "contradiction": 2}

OVERLAP_MODEL_ID = "overlap"


@dataclass
class SidecarConfig:
    model_id: str = OVERLAP_MODEL_ID
    device: str = "cpu"
    max_sequence_length: int = 512
    port: int = 8441
    class_map: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_CLASS_MAP))
    batch_size: int = 16
    max_concurrency: int = 4

    def __post_init__(self):
        if self.max_sequence_length < 384:
            # must hold one ~350-token chunk plus a typical sentence
            raise ValueError(
                f"max_sequence_length {self.max_sequence_length} is too small for 350-token chunks"
            )
        if sorted(self.class_map.values()) != [0, 1, 2] or set(self.class_map) != {
            "aligned",
            "neutral",
            "contradiction",
        }:
            raise ValueError(f"class_map must assign aligned/neutral/contradiction to 0,1,2: {self.class_map}")
        if self.batch_size < 1 or self.max_concurrency < 1:
            raise ValueError("batch_size and max_concurrency must be positive")


def parse_class_map(text: str) -> dict[str, int]:
    """Parse "aligned=0,neutral=1,contradiction=2" style flags."""
    out: dict[str, int] = {}
    for part in text.split(","):
        key, _, value = part.partition("=")
        out[key.strip()] = int(value)
    return out
