"""Tests for the scoring model, toy backbone, registry, and the
checkpoint container format."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from squareval.encoding import QT, SQUARE, encode
from squareval.scorer import (
    BackboneError,
    CheckpointError,
    ToyBackbone,
    fnv1a64,
    get_backbone,
    load_checkpoint,
    new_model,
    register_backbone,
    save_checkpoint,
    score,
    score_batch,
)


def toy_model(seed=0, fingerprint=""):
    backbone = ToyBackbone()
    model = new_model(backbone, config_fingerprint=fingerprint)
    rng = np.random.default_rng(seed)
    model.weights = rng.normal(size=backbone.dim).astype(np.float32)
    model.bias = np.float32(rng.normal())
    return model


def encoded(text_seed="what is the sky? it is blue"):
    return encode("what color is the sky?", text_seed, ["the sky looks blue"], [], SQUARE)


# ---------------------------------------------------------------- toy backbone


def test_fnv1a64_published_vectors():
    assert fnv1a64(b"") == 0xCBF29CE484222325
    assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a64(b"foobar") == 0x85944171F73967E8


def test_toy_embedding_single_token_golden():
    # "blue" hashes to slot 13 with the sign bit set
    v = ToyBackbone().encode_batch(["blue"])[0]
    assert v.dtype == np.float32
    assert v[13] == -1.0
    assert np.count_nonzero(v) == 1


def test_toy_embedding_sentence_golden():
    v = ToyBackbone().encode_batch(["the sky is blue"])[0]
    expected = {13: -0.25, 21: 0.25, 54: -0.25, 60: 0.25}
    assert {int(i): float(v[i]) for i in np.nonzero(v)[0]} == expected


def test_toy_embedding_token_multiset_mean():
    bb = ToyBackbone()
    assert_allclose(bb.encode_batch(["blue blue blue"])[0], bb.encode_batch(["blue"])[0])


def test_toy_embedding_case_insensitive():
    bb = ToyBackbone()
    assert_allclose(bb.encode_batch(["Blue BLUE"])[0], bb.encode_batch(["blue"])[0])


def test_toy_embedding_empty_text_is_zero():
    assert np.abs(ToyBackbone().encode_batch([""])).sum() == 0.0


def test_toy_embedding_shape():
    out = ToyBackbone().encode_batch(["a", "b", "c"])
    assert out.shape == (3, 64)


# ---------------------------------------------------------------- scoring


def test_zero_head_scores_exactly_half():
    model = new_model(ToyBackbone())
    for text in ("anything", "at", "all three words"):
        assert score(model, encode("q?", text, [], [], QT)) == 0.5


def test_score_is_deterministic():
    model = toy_model(seed=3)
    enc = encoded()
    assert score(model, enc) == score(model, enc)


def test_score_range_on_random_models():
    for seed in range(10):
        model = toy_model(seed=seed)
        for text in ("one", "two words", "three words here", "a b c d e f g"):
            p = score(model, encode("q?", text, [], [], QT))
            assert 0.0 <= p <= 1.0


def test_score_rejects_empty_input():
    model = toy_model()
    enc = encoded()
    object.__setattr__(enc, "text", "")
    with pytest.raises(ValueError):
        score(model, enc)


def test_score_batch_empty():
    assert score_batch(toy_model(), []) == []


def test_score_batch_singleton_matches_score():
    model = toy_model(seed=5)
    enc = encoded()
    assert score_batch(model, [enc]) == [score(model, enc)]


def test_score_batch_size_invariance():
    model = toy_model(seed=7)
    inputs = [encode("q?", f"answer number {i} with words", [], [], QT) for i in range(33)]
    one = score_batch(model, inputs, batch_size=1)
    thirty_two = score_batch(model, inputs, batch_size=32)
    assert_allclose(one, thirty_two, rtol=0, atol=1e-6)
    assert_allclose(one, [score(model, e) for e in inputs], rtol=0, atol=1e-6)


def test_score_batch_rejects_bad_batch_size():
    with pytest.raises(ValueError):
        score_batch(toy_model(), [encoded()], batch_size=0)


# ---------------------------------------------------------------- checkpoints


def test_checkpoint_roundtrip_scores_identically(tmp_path):
    model = toy_model(seed=11, fingerprint="cfg-abc")
    path = tmp_path / "model.ckpt"
    save_checkpoint(model, path)
    loaded = load_checkpoint(path)
    assert loaded.config_fingerprint == "cfg-abc"
    assert np.array_equal(loaded.weights, model.weights)
    assert loaded.bias == model.bias
    for text in ("alpha", "beta gamma", "delta words here now"):
        enc = encode("q?", text, [], [], QT)
        assert score(loaded, enc) == score(model, enc)


def test_checkpoint_truncated_file_is_error(tmp_path):
    model = toy_model(seed=1)
    path = tmp_path / "model.ckpt"
    save_checkpoint(model, path)
    blob = path.read_bytes()
    path.write_bytes(blob[:-2])
    with pytest.raises(CheckpointError):
        load_checkpoint(path)


def test_checkpoint_fingerprint_mismatch_names_both(tmp_path):
    model = toy_model(seed=1, fingerprint="fp-one")
    path = tmp_path / "model.ckpt"
    save_checkpoint(model, path)
    with pytest.raises(CheckpointError) as err:
        load_checkpoint(path, expected_fingerprint="fp-two")
    assert "fp-one" in str(err.value) and "fp-two" in str(err.value)


def test_checkpoint_bad_format_tag(tmp_path):
    path = tmp_path / "model.ckpt"
    path.write_bytes(b'{"format": "other-v9", "dim": 64}\n' + b"\x00" * 260)
    with pytest.raises(CheckpointError):
        load_checkpoint(path)


def test_checkpoint_headerless_file(tmp_path):
    path = tmp_path / "model.ckpt"
    path.write_bytes(b"\x00" * 16)
    with pytest.raises(CheckpointError):
        load_checkpoint(path)


def test_checkpoint_missing_file():
    with pytest.raises(CheckpointError):
        load_checkpoint("/no/such/model.ckpt")


# ---------------------------------------------------------------- registry


def test_registry_builds_toy():
    bb = get_backbone("toy")
    assert bb.name == "toy" and bb.dim == 64


def test_registry_unknown_name():
    with pytest.raises(BackboneError) as err:
        get_backbone("bert-large")
    assert "toy" in str(err.value)


def test_registry_custom_backbone_roundtrip(tmp_path):
    class TinyBackbone:
        name = "tiny-test"
        dim = 4

        def encode_batch(self, texts):
            out = np.zeros((len(texts), 4), dtype=np.float32)
            for i, t in enumerate(texts):
                out[i, 0] = len(t) % 7
            return out

    register_backbone("tiny-test", TinyBackbone)
    model = new_model(get_backbone("tiny-test"))
    model.weights = np.arange(4, dtype=np.float32)
    path = tmp_path / "tiny.ckpt"
    save_checkpoint(model, path)
    loaded = load_checkpoint(path)
    assert loaded.backbone.name == "tiny-test"
    enc = encode("q?", "abcde", [], [], QT)
    assert score(loaded, enc) == score(model, enc)
