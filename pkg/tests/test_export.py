# tests/test_export.py

import io
import re
import zipfile

import pandas as pd

from utils.export import clean_chart_title, clean_sheet_name, create_zip_package
from utils.format import report_frame, sci, verdict_label


def test_nome_de_aba():
    assert clean_sheet_name("1. Convergência [L^p]: η/2") == "1. Convergência L^p η2"
    longo = clean_sheet_name("x" * 40)
    assert len(longo) == 31 and ".." in longo


def test_titulo_do_grafico():
    assert clean_chart_title("2. Varredura de Pesos (Gráfico)") == "Varredura de Pesos"


def test_pacote_zip():
    df = pd.DataFrame({"eta_max": [0.01, 0.0025], "lp_error": [3e-3, 2e-4]})
    # as duas chaves colidem depois da limpeza
    dados = {"1. Convergência [A]": {"df": df}, "1. Convergência A": {"df": df}}
    pacote = create_zip_package(dados, "s=0.5, p=2", "Convergencia", {"relatorio.csv": "a,b\n1,2\n"})
    with zipfile.ZipFile(io.BytesIO(pacote)) as zf:
        assert sorted(zf.namelist()) == ["Convergencia.xlsx", "relatorio.csv"]
        xlsx = zf.read("Convergencia.xlsx")
    with zipfile.ZipFile(io.BytesIO(xlsx)) as planilha:
        abas = re.findall(r'<sheet name="([^"]+)"', planilha.read("xl/workbook.xml").decode("utf-8"))
    assert abas == ["Parâmetros", "1. Convergência A", "1. Convergência A (2)"]


def test_formatacao():
    assert sci(float("nan")) == "—"
    assert verdict_label("divergent") != "divergent"
    df = report_frame(pd.DataFrame({"lp_error": [1e-3]}))
    assert len(df) == 1
