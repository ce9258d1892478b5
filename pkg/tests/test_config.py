# tests/test_config.py

import json
from pathlib import Path

import pytest

from fracdense.config import load_config, parse_config
from fracdense.errors import ConfigError

CONFIGS = sorted(Path(__file__).resolve().parent.parent.joinpath("configs").glob("*.json"))


@pytest.mark.parametrize("caminho", CONFIGS, ids=[c.stem for c in CONFIGS])
def test_exemplos_validos(caminho):
    cfg = load_config(caminho)
    assert cfg.eta.entries
    assert len(cfg.sha256) == 64


def test_plano_uniforme_do_maior_para_o_menor(config_texto):
    cfg = parse_config(config_texto(eta={"mode": "uniform", "fractions": [0.01, 0.04, 0.02]}))
    assert cfg.eta.entries == (0.04, 0.02, 0.01)


def test_plano_adaptativo(config_texto):
    cfg = parse_config(config_texto(eta={"mode": "adaptive", "k": [4, 1, 2], "target": "lp"}))
    assert cfg.eta.entries == (1, 2, 4)
    assert cfg.eta.target == "lp"


def test_semente_propaga_para_quadratura(config_texto):
    cfg = parse_config(config_texto(seed=11))
    assert cfg.seed == 11 and cfg.quadrature.seed == 11


def test_todas_as_violacoes_de_uma_vez(config_texto):
    texto = config_texto(
        epsilon=0.2,
        function={"name": "seno"},
        errors=["lp", "weighted_lp", "h1"],
        tolerances={"lp": -1},
    )
    with pytest.raises(ConfigError) as exc:
        parse_config(texto)
    v = " | ".join(exc.value.violations)
    assert len(exc.value.violations) >= 5
    for trecho in ("(1+ε)²", "seno", "h1", "exigem 'weight'", "tolerância lp"):
        assert trecho in v


def test_fracao_acima_de_meio_epsilon(config_texto):
    with pytest.raises(ConfigError) as exc:
        parse_config(config_texto(eta={"mode": "uniform", "fractions": [0.05]}))
    assert any("ε/2" in v for v in exc.value.violations)


def test_peso_continuo_sem_zero_set(config_texto):
    peso = {"name": "power", "params": {"beta": 0.5, "center": [0.5]}, "class": "continuous"}
    with pytest.raises(ConfigError) as exc:
        parse_config(config_texto(weight=peso))
    assert any("zero_set" in v for v in exc.value.violations)
    peso["zero_set"] = [[0.5]]
    cfg = parse_config(config_texto(weight=peso))
    assert cfg.weight["zero_set"] == [[0.5]]


def test_dimensao_incorreta_nos_parametros(config_texto):
    with pytest.raises(ConfigError) as exc:
        parse_config(config_texto(function={"name": "hat", "params": {"lo": [0.2, 0.2], "hi": [0.8, 0.8]}}))
    assert any("dimensão incorreta" in v for v in exc.value.violations)


def test_json_invalido():
    with pytest.raises(ConfigError) as exc:
        parse_config("{domain: ")
    assert exc.value.violations[0].startswith("JSON inválido")


def test_overrides(config_texto):
    cfg = parse_config(config_texto())
    novo = cfg.with_overrides(seed=3, quad_order=8, max_generation=6, fmt="jsonl")
    assert (novo.seed, novo.quadrature.seed, novo.quadrature.order) == (3, 3, 8)
    assert novo.max_generation == 6 and novo.output_format == "jsonl"
    with pytest.raises(ConfigError):
        cfg.with_overrides(max_generation=99)


def test_to_dict_reparseavel(config_texto):
    cfg = parse_config(config_texto())
    de_novo = parse_config(json.dumps(cfg.to_dict()))
    assert de_novo.to_dict() == cfg.to_dict()
