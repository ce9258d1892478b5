# utils/format.py
import math
import pandas as pd

PALETTE = ["#007dc3", "#00a8e0", "#7ad1e6", "#004b8d", "#0095d9"]

# Nomes de coluna exibidos (relatório de convergência)
COLUMN_LABELS = {
    "entry_kind": "Tipo",
    "entry": "Entrada",
    "eta_max": "η máx.",
    "lp_error": "Erro L^p",
    "lp_error_estimate": "± L^p",
    "seminorm_error": "Erro seminorma",
    "seminorm_error_estimate": "± seminorma",
    "weighted_lp_error": "Erro L^p com peso",
    "weighted_lp_error_estimate": "± L^p peso",
    "weighted_seminorm_error": "Erro seminorma com peso",
    "weighted_seminorm_error_estimate": "± seminorma peso",
    "kernel_error": "Erro X(Ω)",
    "kernel_error_estimate": "± X(Ω)",
    "hardy": "Hardy",
    "envelope": "Envelope M/k",
    "envelope_ok": "Dentro do envelope",
    "wall_time": "Tempo (s)",
}

VERDICT_LABELS = {"finite": "Finito", "divergent": "Divergente", "inconclusive": "Inconclusivo"}


def sci(valor, casas=3):
    """Formata em notação científica curta; NaN vira '—'."""
    try:
        v = float(valor)
    except (TypeError, ValueError):
        return str(valor)
    if math.isnan(v):
        return "—"
    if math.isinf(v):
        return "∞" if v > 0 else "−∞"
    return f"{v:.{casas}e}"


def verdict_label(veredito):
    return VERDICT_LABELS.get(veredito, str(veredito))


def report_frame(df):
    """Relatório de convergência pronto para exibição: descarta colunas vazias e renomeia."""
    if df is None or df.empty:
        return pd.DataFrame()
    df = df.dropna(axis=1, how="all").copy()
    if "envelope_ok" in df.columns:
        df["envelope_ok"] = df["envelope_ok"].map(lambda v: "—" if pd.isna(v) else ("Sim" if v else "Não"))
    return df.rename(columns=COLUMN_LABELS)


def error_columns(df):
    """Colunas de erro presentes (sem as estimativas) num relatório cru."""
    return [c for c in df.columns if c.endswith("_error") and not df[c].isna().all()]


def checks_frame(relatorios):
    """CheckReports em tabela, com o contraexemplo resumido."""
    linhas = []
    for r in relatorios:
        linhas.append({
            "Checagem": r.name,
            "Semente": r.seed,
            "Aprovada": "Sim" if r.passed else "Não",
            "Amostras": r.samples,
            "Contraexemplo": "" if r.counterexample is None else str(r.counterexample),
            "Detalhes": ", ".join(f"{k}={sci(v) if isinstance(v, float) else v}" for k, v in (r.details or {}).items()),
        })
    return pd.DataFrame(linhas)
