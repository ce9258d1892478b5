# tests/test_report.py

import json
import math

import pytest

from fracdense.config import parse_config
from fracdense.report import TOLERANCE_NOTE, emit_report, parse_report, read_report, rows_frame
from fracdense.runner import ReportRow


@pytest.fixture
def linhas():
    return [
        ReportRow("fraction", 0.04, 0.01, lp_error=3.2e-3, lp_error_estimate=1e-6, hardy=0.1146, wall_time=1.7),
        ReportRow("fraction", 0.01, 0.0025, lp_error=2.1e-4, lp_error_estimate=1e-7, hardy=0.1146, wall_time=2.9),
    ]


def test_csv_deterministico(linhas, config_texto):
    cfg = parse_config(config_texto())
    a = emit_report(linhas, "csv", None, cfg)
    b = emit_report(linhas, "csv", None, cfg)
    assert a == b
    assert a.startswith("# format: \"fracdense-report\"\n")
    assert f"# config_sha256: \"{cfg.sha256}\"" in a


def test_tempo_so_quando_pedido(linhas):
    assert "wall_time" not in emit_report(linhas, "csv")
    assert "wall_time" in emit_report(linhas, "csv", include_timing=True)
    assert "wall_time" not in emit_report(linhas, "jsonl")


@pytest.mark.parametrize("fmt", ["csv", "jsonl"])
def test_leitura_do_relatorio(linhas, fmt):
    cab, lidas = parse_report(emit_report(linhas, fmt, seed=5), fmt)
    assert cab["tolerance_note"] == TOLERANCE_NOTE and cab["seed"] == 5
    assert [r.lp_error for r in lidas] == [r.lp_error for r in linhas]
    assert lidas[0].entry_kind == "fraction"
    assert math.isnan(lidas[0].seminorm_error)
    assert lidas[0].wall_time == 0.0


def test_gravacao_em_arquivo(linhas, tmp_path):
    destino = tmp_path / "rel.jsonl"
    texto = emit_report(linhas, "jsonl", destino)
    assert destino.read_text(encoding="utf-8") == texto
    _, lidas = read_report(destino)
    assert len(lidas) == 2


def test_relatorio_vazio_ou_formato_desconhecido(linhas):
    with pytest.raises(ValueError):
        emit_report([], "csv")
    with pytest.raises(ValueError):
        emit_report(linhas, "xml")


def test_frame_para_o_painel(linhas):
    df = rows_frame(linhas)
    assert list(df.columns) == ReportRow.field_names()
    assert "wall_time" not in rows_frame(linhas, include_timing=False).columns


def test_jsonl_estrito_sem_nan():
    linhas = [ReportRow("k", 1.0, 0.01, lp_error=1e-3, seminorm_error=math.inf)]
    texto = emit_report(linhas, "jsonl")

    def recusa(token):
        raise ValueError(token)

    for linha in texto.splitlines():
        json.loads(linha, parse_constant=recusa)
    _, lidas = parse_report(texto, "jsonl")
    assert math.isnan(lidas[0].weighted_lp_error)
    assert lidas[0].seminorm_error == math.inf
