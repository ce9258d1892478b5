# fracdense/report.py
"""Gravação e leitura dos relatórios de convergência (CSV com cabeçalho ``#`` ou JSON lines)."""

from __future__ import annotations

import io
import json
import logging
import math

import pandas as pd

from .runner import ReportRow

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
TOLERANCE_NOTE = "tolerâncias são escolhas de engenharia; não há taxa teórica de convergência"
TIMING_FIELD = "wall_time"


def _columns(include_timing):
    cols = ReportRow.field_names()
    return cols if include_timing else [c for c in cols if c != TIMING_FIELD]


def report_header(config=None, seed=None):
    cab = {"format": "fracdense-report", "version": 1, "tolerance_note": TOLERANCE_NOTE}
    if config is not None:
        cab["config_sha256"] = config.sha256
        cab["seed"] = config.seed
        cab["tolerances"] = dict(sorted(config.tolerances.items()))
    if seed is not None:
        cab["seed"] = seed
    return cab


def _fmt(v):
    """Valor de uma célula em JSON estrito: NaN vira null e ±∞ vira "inf"/"-inf"."""
    if isinstance(v, str):
        return v
    if math.isnan(v):
        return None
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return float(FLOAT_FORMAT % v)


def emit_report(rows, fmt="csv", path=None, config=None, seed=None, include_timing=False):
    """Escreve as linhas; devolve o texto gerado. Mesmas entradas ⇒ mesmos bytes.

    ``wall_time`` só entra com ``include_timing``.
    """
    if not rows:
        raise ValueError("relatório sem linhas")
    cab = report_header(config, seed)
    cols = _columns(include_timing)
    registros = [{c: getattr(r, c) for c in cols} for r in rows]
    buf = io.StringIO()
    if fmt == "csv":
        for chave, valor in cab.items():
            buf.write(f"# {chave}: {json.dumps(valor, sort_keys=True, ensure_ascii=False)}\n")
        pd.DataFrame(registros, columns=cols).to_csv(buf, index=False, float_format=FLOAT_FORMAT,
                                                     lineterminator="\n")
    elif fmt == "jsonl":
        buf.write(json.dumps({"type": "header", **cab}, sort_keys=True, ensure_ascii=False) + "\n")
        for reg in registros:
            linha = {"type": "row", **{k: _fmt(v) for k, v in reg.items()}}
            buf.write(json.dumps(linha, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n")
    else:
        raise ValueError(f"formato desconhecido: {fmt!r}")
    texto = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(texto)
        logger.info("relatório gravado em %s (%d linhas)", path, len(rows))
    return texto


def _row_from(reg):
    campos = {}
    for nome in ReportRow.field_names():
        if nome not in reg:
            continue
        v = reg[nome]
        if nome == "entry_kind":
            campos[nome] = str(v)
        else:
            campos[nome] = math.nan if v is None or (isinstance(v, float) and math.isnan(v)) else float(v)
    return ReportRow(**campos)


def parse_report(text, fmt="csv"):
    """Texto → (cabeçalho, linhas)."""
    cab = {}
    if fmt == "csv":
        corpo = []
        for linha in text.splitlines(keepends=True):
            if linha.startswith("# "):
                chave, _, valor = linha[2:].partition(": ")
                cab[chave] = json.loads(valor)
            else:
                corpo.append(linha)
        df = pd.read_csv(io.StringIO("".join(corpo)), float_precision="round_trip")
        return cab, [_row_from(reg) for reg in df.to_dict("records")]
    if fmt == "jsonl":
        linhas = []
        for linha in text.splitlines():
            if not linha.strip():
                continue
            reg = json.loads(linha)
            if reg.pop("type", None) == "header":
                cab = reg
            else:
                linhas.append(_row_from(reg))
        return cab, linhas
    raise ValueError(f"formato desconhecido: {fmt!r}")


def read_report(path, fmt=None):
    fmt = fmt or ("jsonl" if str(path).endswith(".jsonl") else "csv")
    with open(path, encoding="utf-8") as fh:
        return parse_report(fh.read(), fmt)


def rows_frame(rows, include_timing=True):
    """Linhas como DataFrame (usado pelo dashboard e pelos testes)."""
    cols = _columns(include_timing)
    return pd.DataFrame([{c: getattr(r, c) for c in cols} for r in rows], columns=cols)
