"""Scoring model: a pluggable text encoder (backbone) plus an affine
head squashed through a sigmoid, giving a correctness score in [0, 1].

Backbones implement encode_batch(texts) -> (n, dim) float32 and are
looked up by name, so the toy hashed bag-of-tokens encoder and a real
pretrained transformer are interchangeable everywhere downstream. The
toy backbone keeps the full pipeline testable without any model
download: each lowercased whitespace token is FNV-1a-64 hashed, lands
at index (hash % 64) with sign taken from the hash's top bit, and the
token vectors are averaged.

Head weights live in float32 (matching the checkpoint payload exactly,
so a save/load round trip is bit-stable) while logits accumulate in
float64.

Checkpoint file layout: one JSON header line (format tag, backbone
name, dimension, model version, config fingerprint) terminated by a
newline, then the raw little-endian float32 weight vector followed by
the single float32 bias.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .encoding import EncodedInput

CHECKPOINT_FORMAT = "squareval-checkpoint-v1"

_MASK64 = (1 << 64) - 1
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3

TOY_DIM = 64


class BackboneError(RuntimeError):
    """Backbone could not be built or failed while encoding."""


class CheckpointError(ValueError):
    """Unreadable, truncated, or mismatched checkpoint file."""


def fnv1a64(data: bytes) -> int:
    """FNV-1a 64-bit hash of a byte string."""
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


class ToyBackbone:
    """Hashed bag-of-tokens encoder, dimension 64, no trained weights."""

    name = "toy"
    dim = TOY_DIM

    def encode_batch(self, texts: list[str]) -> np.ndarray:
        out = np.zeros((len(texts), self.dim), dtype=np.float32)
        for row, text in enumerate(texts):
            tokens = text.lower().split()
            if not tokens:
                continue
            acc = np.zeros(self.dim, dtype=np.float64)
            for tok in tokens:
                h = fnv1a64(tok.encode("utf-8"))
                sign = 1.0 if (h >> 63) == 0 else -1.0
                acc[h % self.dim] += sign
            out[row] = (acc / len(tokens)).astype(np.float32)
        return out


class TransformerBackbone:
    """Pretrained transformer encoder plug-in (first-position pooling).

    Imports torch/transformers lazily, so the dependency is only paid
    when a transformer backbone is actually requested. model_ref may be
    a local directory or a hub id already present in the local cache.
    """

    def __init__(self, model_ref: str):
        try:
            import torch
            from transformers import AutoModel, AutoTokenizer
        except ImportError as err:
            raise BackboneError(f"transformer backbone needs torch+transformers: {err}") from err
        self.name = f"transformer:{model_ref}"
        self._torch = torch
        try:
            self._tokenizer = AutoTokenizer.from_pretrained(model_ref)
            self._model = AutoModel.from_pretrained(model_ref)
        except Exception as err:
            raise BackboneError(f"cannot load transformer {model_ref!r}: {err}") from err
        self._model.eval()
        self.dim = int(self._model.config.hidden_size)

    def encode_batch(self, texts: list[str]) -> np.ndarray:
        if not texts:
            return np.zeros((0, self.dim), dtype=np.float32)
        torch = self._torch
        with torch.no_grad():
            batch = self._tokenizer(
                list(texts), padding=True, truncation=True, max_length=512, return_tensors="pt"
            )
            hidden = self._model(**batch).last_hidden_state
        return hidden[:, 0, :].cpu().numpy().astype(np.float32)


_BACKBONES = {"toy": ToyBackbone}


def register_backbone(name: str, factory) -> None:
    """Register a zero-argument backbone factory under a name."""
    _BACKBONES[name] = factory


def get_backbone(name: str):
    """Build a backbone by name; "transformer:<ref>" loads a plug-in."""
    if name in _BACKBONES:
        return _BACKBONES[name]()
    if name.startswith("transformer:"):
        return TransformerBackbone(name.split(":", 1)[1])
    known = ", ".join(sorted(_BACKBONES))
    raise BackboneError(f"unknown backbone {name!r} (registered: {known})")


@dataclass
class ScorerModel:
    """Backbone plus affine head. Weights are float32 throughout."""

    backbone: object
    weights: np.ndarray
    bias: np.float32
    version: str = "1"
    config_fingerprint: str = ""

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float32).reshape(self.backbone.dim)
        self.bias = np.float32(self.bias)

    def snapshot(self) -> tuple[np.ndarray, np.float32]:
        return self.weights.copy(), np.float32(self.bias)

    def restore(self, snap: tuple[np.ndarray, np.float32]) -> None:
        self.weights = snap[0].copy()
        self.bias = np.float32(snap[1])


def new_model(backbone, config_fingerprint: str = "", version: str = "1") -> ScorerModel:
    """Fresh model with a zero head: every input scores exactly 0.5."""
    return ScorerModel(
        backbone=backbone,
        weights=np.zeros(backbone.dim, dtype=np.float32),
        bias=np.float32(0.0),
        version=version,
        config_fingerprint=config_fingerprint,
    )


def _sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def logits_for_features(model: ScorerModel, features: np.ndarray) -> np.ndarray:
    """Affine head applied to (n, dim) features, accumulated in float64."""
    feats = np.asarray(features, dtype=np.float64)
    return feats @ model.weights.astype(np.float64) + float(model.bias)


def score(model: ScorerModel, encoded: EncodedInput) -> float:
    """Correctness score sigmoid(head(backbone(text))) for one input."""
    if not encoded.text:
        raise ValueError("cannot score an empty input")
    features = model.backbone.encode_batch([encoded.text])
    return _sigmoid(float(logits_for_features(model, features)[0]))


def score_batch(model: ScorerModel, inputs: list[EncodedInput], batch_size: int = 32) -> list[float]:
    """Score many inputs, batching backbone calls; order is preserved."""
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    out: list[float] = []
    for start in range(0, len(inputs), batch_size):
        chunk = inputs[start : start + batch_size]
        features = model.backbone.encode_batch([e.text for e in chunk])
        out.extend(_sigmoid(float(z)) for z in logits_for_features(model, features))
    return out


def save_checkpoint(model: ScorerModel, path) -> None:
    header = {
        "format": CHECKPOINT_FORMAT,
        "backbone": model.backbone.name,
        "dim": int(model.backbone.dim),
        "version": model.version,
        "config_fingerprint": model.config_fingerprint,
    }
    payload = model.weights.astype("<f4").tobytes() + np.float32(model.bias).astype("<f4").tobytes()
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode("utf-8") + b"\n")
        fh.write(payload)


def load_checkpoint(path, expected_fingerprint: str | None = None) -> ScorerModel:
    """Load a checkpoint; optionally insist on a config fingerprint."""
    p = Path(path)
    if not p.is_file():
        raise CheckpointError(f"no such checkpoint: {p}")
    blob = p.read_bytes()
    newline = blob.find(b"\n")
    if newline < 0:
        raise CheckpointError(f"{p}: missing header line")
    try:
        header = json.loads(blob[:newline].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as err:
        raise CheckpointError(f"{p}: unreadable header: {err}") from err
    if header.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointError(f"{p}: format {header.get('format')!r} != {CHECKPOINT_FORMAT!r}")
    dim = int(header["dim"])
    body = blob[newline + 1 :]
    expected_bytes = (dim + 1) * 4
    if len(body) != expected_bytes:
        raise CheckpointError(f"{p}: payload is {len(body)} bytes, expected {expected_bytes}")
    if expected_fingerprint is not None and header["config_fingerprint"] != expected_fingerprint:
        raise CheckpointError(
            f"{p}: checkpoint fingerprint {header['config_fingerprint']!r} "
            f"does not match expected {expected_fingerprint!r}"
        )
    backbone = get_backbone(header["backbone"])
    if backbone.dim != dim:
        raise CheckpointError(f"{p}: backbone dim {backbone.dim} != stored dim {dim}")
    flat = np.frombuffer(body, dtype="<f4")
    return ScorerModel(
        backbone=backbone,
        weights=flat[:dim].copy(),
        bias=np.float32(flat[dim]),
        version=str(header["version"]),
        config_fingerprint=str(header["config_fingerprint"]),
    )
