"""Configuration loading, validation, and client selection."""

from __future__ import annotations

import json

import pytest

from collective_memory import EngineConfig, WeightParams, build_dialogue_client
from collective_memory.config import CONFIG_ENV_VAR
from collective_memory.fusion import HttpDialogueClient, StubDialogueClient


def test_params_defaults():
    params = WeightParams()
    assert (params.alpha, params.beta, params.gamma) == (0.3, 0.5, 0.2)
    assert params.w_forget == 0.1
    assert params.archive_after_days == 7


def test_params_reject_forget_at_or_above_synth():
    with pytest.raises(ValueError):
        WeightParams(w_forget=0.5, w_synth=0.5)


def test_params_reject_nonpositive_half_life():
    with pytest.raises(ValueError):
        WeightParams(decay_half_life_cycles=0)


def test_params_roundtrip_dict():
    params = WeightParams(alpha=0.05, theme_threshold=0.35)
    assert WeightParams.from_dict(params.to_dict()) == params


def test_config_from_file_and_env(tmp_path, monkeypatch):
    path = tmp_path / "config.json"
    path.write_text(
        json.dumps(
            {
                "port": 9000,
                "embedder_seed": 42,
                "dialogue_client": "stub",
                "params": {"alpha": 0.1},
            }
        )
    )
    config = EngineConfig.from_file(path)
    assert config.port == 9000
    assert config.embedder_seed == 42
    assert config.params.alpha == 0.1
    assert config.params.beta == 0.5  # untouched defaults survive

    monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
    assert EngineConfig.from_env().port == 9000
    monkeypatch.delenv(CONFIG_ENV_VAR)
    assert EngineConfig.from_env().port == 8760


def test_dialogue_client_selection():
    assert isinstance(build_dialogue_client(EngineConfig(dialogue_client="stub")), StubDialogueClient)
    http = build_dialogue_client(EngineConfig(dialogue_client="http://localhost:9/v1/chat"))
    assert isinstance(http, HttpDialogueClient)
    with pytest.raises(ValueError):
        build_dialogue_client(EngineConfig(dialogue_client="carrier-pigeon"))


def test_engine_honours_lexicon_and_gazetteer_paths(tmp_path):
    lexicon_path = tmp_path / "lexicon.json"
    lexicon_path.write_text(
        '{"negation_cues": ["not"],'
        ' "topics": [{"topic": "tea", "terms": [{"term": "oolong", "stance": "positive"}]}]}'
    )
    gazetteer_path = tmp_path / "gazetteer.json"
    gazetteer_path.write_text('{"places": [{"name": "Test Pier", "aliases": ["the pier"]}]}')

    from collective_memory import MemoryEngine

    engine = MemoryEngine(
        EngineConfig(lexicon_path=str(lexicon_path), gazetteer_path=str(gazetteer_path))
    )
    out = engine.handle_dialogue("s1", text="I drink oolong by the pier")
    fragment = engine.graph.fragments[out.fragment_ids[0]]
    assert ("tea", "positive") in [tuple(c) for c in fragment.claims]
    assert "Test Pier" in fragment.place_tags
