"""Fine-tuning configuration, taken from the manifest's opaque config blob."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class FineTuneConfig:
    base_model: str = "roberta-base"
    epochs: int = 10
    batch_size: int = 8
    max_sequence_length: int = 512
    learning_rate: float = 4e-5
    warmup_fraction: float = 0.06
    constant_lr: bool = False  # disable warmup/decay for strict constant-rate runs
    seed: int = 42

    @classmethod
    def from_blob(cls, blob: dict) -> "FineTuneConfig":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in blob.items() if k in known})
