"""Alignment models served by the sidecar.

Every model maps a list of (chunk, sentence) pairs to rows of
(aligned, neutral, contradiction) probabilities summing to 1.
"""

from __future__ import annotations

import math

import numpy as np

from .config import OVERLAP_MODEL_ID, SidecarConfig


class OverlapNliModel:
    """Deterministic offline model: softmax over token-overlap features.

    Exists so the sidecar (and its protocol tests) run with no downloads;
    not a trained classifier.
    """

    def __init__(self, config: SidecarConfig):
        self.config = config
        self.model_id = OVERLAP_MODEL_ID

    def predict(self, pairs: list[tuple[str, str]]) -> np.ndarray:
        out = np.empty((len(pairs), 3), dtype=np.float64)
        for i, (chunk, sentence) in enumerate(pairs):
            chunk = chunk[: self.config.max_sequence_length * 8]  # crude char-level cap
            c_tokens = chunk.lower().split()
            s_tokens = sentence.lower().split()
            c_set = set(c_tokens)
            overlap = sum(1 for t in s_tokens if t in c_set) / max(len(s_tokens), 1)
            novel_caps = sum(
                1
                for t in sentence.split()
                if (t[:1].isupper() or t[:1].isdigit()) and t.lower() not in c_set
            )
            e_align = 4.0 * overlap
            e_contra = 1.5 * min(novel_caps, 3)
            e_neutral = 1.0
            z = (math.exp(e_align), math.exp(e_neutral), math.exp(e_contra))
            total = sum(z)
            out[i, 0] = z[0] / total
            out[i, 1] = z[1] / total
            out[i, 2] = z[2] / total
        return out


class TransformersNliModel:
    """A pretrained sequence-pair classifier behind the declared class map.

    Pairs run as (chunk, sentence); inputs longer than max_sequence_length
    truncate from the chunk side. Inference is batched; batching must not
    change outputs beyond 1e-6 (verified in tests when a checkpoint is
    available).
    """

    def __init__(self, config: SidecarConfig):
        import torch
        from transformers import AutoModelForSequenceClassification, AutoTokenizer

        self.config = config
        self.model_id = config.model_id
        self._torch = torch
        self.tokenizer = AutoTokenizer.from_pretrained(config.model_id)
        self.model = AutoModelForSequenceClassification.from_pretrained(config.model_id)
        self.model.to(config.device)
        self.model.eval()
        n_labels = self.model.config.num_labels
        if n_labels != 3:
            raise ValueError(f"checkpoint {config.model_id} has {n_labels} labels, need 3")
        order = config.class_map
        self._permutation = [order["aligned"], order["neutral"], order["contradiction"]]

    def predict(self, pairs: list[tuple[str, str]]) -> np.ndarray:
        torch = self._torch
        rows = []
        for start in range(0, len(pairs), self.config.batch_size):
            batch = pairs[start : start + self.config.batch_size]
            encoded = self.tokenizer(
                [c for c, _ in batch],
                [s for _, s in batch],
                padding=True,
                truncation="only_first",  # cut the chunk, never the sentence
                max_length=self.config.max_sequence_length,
                return_tensors="pt",
            ).to(self.config.device)
            with torch.no_grad():
                logits = self.model(**encoded).logits
            probs = torch.softmax(logits, dim=-1).cpu().numpy()
            rows.append(probs[:, self._permutation])
        out = np.concatenate(rows, axis=0).astype(np.float64)
        # renormalize away any float32 drift; rows must sum to 1 within 1e-4
        return out / out.sum(axis=1, keepdims=True)


def load_model(config: SidecarConfig):
    if config.model_id == OVERLAP_MODEL_ID:
        return OverlapNliModel(config)
    return TransformersNliModel(config)
