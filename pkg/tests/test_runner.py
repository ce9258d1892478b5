# tests/test_runner.py

import math
from pathlib import Path

import numpy as np
import pytest

from fracdense.config import load_config, parse_config
from fracdense.errors import PreconditionError, TruncationCollarError
from fracdense.quadrature import FINITE
from fracdense.smoothing import uniform_eta
from fracdense.runner import (
    ReportRow, build_experiment, check_tolerances, envelope_bound, plump_complement_scenario, precheck,
    _band_for, run_convergence, run_validation, weighted_constants_table,
)

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def test_envelope():
    assert envelope_bound(1, 2.0, 1) == pytest.approx(2 * math.sqrt(12))
    assert envelope_bound(2, 2.0, 4) == pytest.approx(2 * math.sqrt(144 / 4))
    # p = 1: M = 1
    assert envelope_bound(3, 1.0, 8) == pytest.approx(2 / 8)


def test_tolerancias_na_ultima_linha():
    linhas = [ReportRow("fraction", 0.04, 0.01, lp_error=0.5), ReportRow("fraction", 0.01, 0.0025, lp_error=0.01)]
    assert check_tolerances(linhas, {"lp": 0.02, "seminorm": 0.05}) == []
    problemas = check_tolerances(linhas, {"lp": 0.001})
    assert len(problemas) == 1 and problemas[0].startswith("lp:")
    assert check_tolerances([], {"lp": 1.0})


def test_faixa_diagonal_abaixo_do_menor_eta(dec1):
    eta = uniform_eta(dec1, 0.04)
    assert _band_for(eta, 0.1) == pytest.approx(eta.values.min() / 8)
    assert _band_for(eta, 1e-9) == 1e-9


def test_experimento_montado(config_texto):
    exp = build_experiment(parse_config(config_texto()))
    assert exp.f.name == "hat"
    assert exp.weight is None and exp.kernel is None
    assert exp.region.contains(np.array([[0.5]]))[0]


def test_convergencia_uniforme(config_texto):
    linhas = run_convergence(parse_config(config_texto()))
    assert [r.entry for r in linhas] == [0.04, 0.01]
    assert linhas[0].eta_max > linhas[1].eta_max
    assert linhas[-1].lp_error < linhas[0].lp_error
    assert math.isnan(linhas[0].seminorm_error)
    assert check_tolerances(linhas, {"lp": 0.05}) == []


def test_colar_de_truncamento_pesado(config_texto):
    # constante até a fronteira com G baixo: massa no colar acima da tolerância
    texto = config_texto(function={"name": "constant", "params": {"value": 1.0}}, max_generation=3,
                         tolerances={"lp": 1e-3})
    with pytest.raises(TruncationCollarError):
        run_convergence(parse_config(texto))


def test_hardy_divergente_bloqueia(config_texto):
    texto = config_texto(function={"name": "constant", "params": {"value": 1.0}}, errors=["lp", "seminorm"],
                         tolerances={"lp": 10.0})
    exp = build_experiment(parse_config(texto))
    with pytest.raises(PreconditionError):
        precheck(exp)


def test_hardy_divergente_com_override(config_texto):
    texto = config_texto(function={"name": "constant", "params": {"value": 1.0}}, errors=["lp", "seminorm"],
                         tolerances={"lp": 10.0}, override_precheck=True)
    exp = build_experiment(parse_config(texto))
    resultados = precheck(exp)
    assert resultados["hardy_verdict"] == "divergent"


def test_tabela_de_constantes_com_peso():
    exp = build_experiment(load_config(CONFIGS / "peso_potencia.json").with_overrides(max_generation=4))
    tabela = weighted_constants_table(exp)
    assert len(tabela) == len(exp.decomp)
    assert all(t["C_n"] > 0 and math.isfinite(t["D_n"]) for t in tabela)


@pytest.mark.slow
def test_convergencia_do_produto():
    cfg = load_config(CONFIGS / "intervalo_produto.json")
    linhas = run_convergence(cfg)
    assert len(linhas) == 3
    assert linhas[-1].lp_error < linhas[0].lp_error
    assert check_tolerances(linhas, cfg.tolerances) == []


@pytest.mark.slow
def test_validacao_rapida():
    relatorios = run_validation((1,), quick=True)
    nomes = {r.name for r in relatorios}
    assert {"overlap[d=1]", "overlap[d=2]", "lemma_xy[d=1]", "partition_sum", "gn_bound"} <= nomes
    assert all(r.passed for r in relatorios), [r.name for r in relatorios if not r.passed]


def _decrescente(valores):
    """Não cresce de uma entrada para a seguinte e termina abaixo do ponto de partida."""
    return all(b <= a for a, b in zip(valores, valores[1:])) and valores[-1] < valores[0]


@pytest.mark.slow
def test_lp_da_indicadora_com_p_1(config_texto):
    # η = ε/2^{j+2}, j = 0..6
    fracoes = [0.1 / 2 ** (j + 2) for j in range(7)]
    texto = config_texto(function={"name": "indicator_box", "params": {"lo": [0.0], "hi": [0.5]}},
                         sobolev={"s": 0.5, "p": 1}, max_generation=10,
                         eta={"mode": "uniform", "fractions": fracoes}, tolerances={"lp": 0.02})
    linhas = run_convergence(parse_config(texto))
    assert len(linhas) == 7
    assert linhas[-1].lp_error < linhas[0].lp_error
    assert linhas[-1].lp_error < 0.02


@pytest.mark.slow
def test_seminorma_com_k_adaptativo():
    cfg = load_config(CONFIGS / "intervalo_adaptativo.json")
    exp = build_experiment(cfg)
    linhas = run_convergence(cfg, exp)
    assert exp.prechecks["hardy_verdict"] == FINITE
    erros = [r.seminorm_error for r in linhas]
    assert [r.entry for r in linhas] == [1, 2, 4, 8]
    assert all(math.isfinite(e) for e in erros), erros
    assert _decrescente(erros), erros
    assert erros[-1] < 0.05
    assert all(r.envelope_ok == 1.0 for r in linhas)
    assert check_tolerances(linhas, cfg.tolerances) == []


@pytest.mark.slow
def test_convergencia_com_peso():
    cfg = load_config(CONFIGS / "peso_potencia.json")
    linhas = run_convergence(cfg)
    for coluna in ("weighted_lp_error", "weighted_seminorm_error"):
        erros = [getattr(r, coluna) for r in linhas]
        assert _decrescente(erros), (coluna, erros)
        assert erros[-1] < 0.05
    assert check_tolerances(linhas, cfg.tolerances) == []


@pytest.mark.slow
def test_convergencia_na_norma_do_nucleo():
    cfg = load_config(CONFIGS / "nucleo_exp.json")
    exp = build_experiment(cfg)
    linhas = run_convergence(cfg, exp)
    assert exp.prechecks["kernel_verdict"] == FINITE
    erros = [r.kernel_error for r in linhas]
    assert _decrescente(erros), erros
    assert erros[-1] < 0.05


@pytest.mark.slow
def test_complementar_plump():
    veredito, linhas = plump_complement_scenario(samples=2000)
    assert veredito.plump
    assert len(linhas) == 2
    assert all(math.isfinite(r.lp_error) and math.isfinite(r.seminorm_error) for r in linhas)
