# tests/test_cli.py

import json
from pathlib import Path

import pandas as pd
import pytest

from fracdense.cli import EXIT_OK, EXIT_PRECONDITION, EXIT_VALIDATION, main
from fracdense.report import read_report

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def arquivo(tmp_path, config_texto):
    def grava(**extra):
        caminho = tmp_path / "exp.json"
        caminho.write_text(config_texto(**extra), encoding="utf-8")
        return str(caminho)
    return grava


def test_sem_config():
    assert main(["whitney"]) == EXIT_PRECONDITION


def test_arquivo_inexistente(tmp_path):
    assert main(["whitney", "--config", str(tmp_path / "nao_existe.json")]) == EXIT_PRECONDITION


def test_config_invalida(arquivo):
    assert main(["whitney", "--config", arquivo(epsilon=0.3)]) == EXIT_PRECONDITION


def test_whitney_em_csv(arquivo, tmp_path):
    saida = tmp_path / "cubos.csv"
    assert main(["whitney", "--config", arquivo(), "--out", str(saida)]) == EXIT_OK
    df = pd.read_csv(saida)
    assert list(df.columns) == ["generation", "center_0", "edge", "dist_to_complement"]
    assert (df["dist_to_complement"] >= df["edge"]).all()


def test_smooth(arquivo, tmp_path):
    saida = tmp_path / "p.csv"
    assert main(["smooth", "--config", arquivo(), "--out", str(saida), "--points", "51"]) == EXIT_OK
    df = pd.read_csv(saida)
    assert {"x_0", "f", "P_eta_f"} <= set(df.columns)
    assert (df["P_eta_f"] - df["f"]).abs().max() < 0.1


def test_check_kernel(tmp_path):
    saida = tmp_path / "k.jsonl"
    assert main(["check-kernel", "--config", str(CONFIGS / "nucleo_exp.json"), "--out", str(saida)]) == EXIT_OK
    registro = json.loads(saida.read_text(encoding="utf-8").splitlines()[0])
    assert registro["verdict"] == "finite"
    assert registro["name"] == "kernel_admissibility"


def test_check_weight_exige_peso(arquivo):
    assert main(["check-weight", "--config", arquivo()]) == EXIT_PRECONDITION


def test_converge_dentro_da_tolerancia(arquivo, tmp_path):
    saida = tmp_path / "rel.csv"
    assert main(["converge", "--config", arquivo(), "--out", str(saida)]) == EXIT_OK
    cab, linhas = read_report(saida)
    assert cab["seed"] == 0
    assert len(linhas) == 2


def test_converge_fora_da_tolerancia(arquivo, tmp_path):
    saida = tmp_path / "rel.jsonl"
    codigo = main(["converge", "--config", arquivo(tolerances={"lp": 1e-12}), "--out", str(saida),
                   "--format", "jsonl"])
    assert codigo == EXIT_VALIDATION
    assert saida.exists()


def test_hardy_divergente_sai_com_erro(arquivo):
    caminho = arquivo(function={"name": "constant", "params": {"value": 1.0}}, errors=["lp", "seminorm"],
                      max_generation=3, tolerances={"lp": 10.0, "seminorm": 10.0})
    assert main(["converge", "--config", caminho, "--out", caminho + ".csv"]) == EXIT_PRECONDITION


def test_tempo_so_com_flag(arquivo, tmp_path):
    sem, com = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["converge", "--config", arquivo(), "--out", str(sem)]) == EXIT_OK
    assert main(["converge", "--config", arquivo(), "--out", str(com), "--timing"]) == EXIT_OK
    assert "wall_time" not in sem.read_text(encoding="utf-8")
    assert "wall_time" in com.read_text(encoding="utf-8")
