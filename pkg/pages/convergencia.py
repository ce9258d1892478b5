# pages/convergencia.py

import numpy as np
import plotly.graph_objects as go
import streamlit as st

from fracdense.errors import FracDenseError, PreconditionError, TruncationCollarError
from fracdense.report import emit_report, rows_frame
from fracdense.runner import check_tolerances, run_convergence
from utils.export import botao_exportar
from utils.filters import descricao_parametros
from utils.format import PALETTE, error_columns, report_frame, sci
from utils.loaders import load_experiment

SERIES = {
    "lp_error": "L^p",
    "seminorm_error": "seminorma",
    "weighted_lp_error": "L^p com peso",
    "weighted_seminorm_error": "seminorma com peso",
    "kernel_error": "X(Ω)",
}


@st.cache_data(show_spinner="Rodando a convergência (uma linha por η)...")
def _linhas(texto):
    exp = load_experiment(texto)
    return run_convergence(exp.config, experiment=exp)


def _grafico(df):
    fig = go.Figure()
    for i, col in enumerate(error_columns(df)):
        erro = df.get(f"{col}_estimate")
        fig.add_trace(go.Scatter(
            x=df["eta_max"], y=df[col], mode="lines+markers", name=SERIES.get(col, col),
            line=dict(color=PALETTE[i % len(PALETTE)], width=2),
            error_y=None if erro is None else dict(type="data", array=erro, visible=True),
        ))
    if "envelope" in df.columns and df["envelope"].notna().any():
        fig.add_trace(go.Scatter(x=df["eta_max"], y=df["envelope"], mode="lines", name="envelope 2(M/k)^{1/p}",
                                 line=dict(color="#c0392b", dash="dot")))
    fig.update_layout(xaxis_type="log", yaxis_type="log", xaxis_title="η máx.", yaxis_title="erro",
                      xaxis=dict(autorange="reversed"), height=460, margin=dict(t=30),
                      legend=dict(orientation="h", yanchor="bottom", y=1.02, xanchor="center", x=0.5))
    return fig


def render(texto):
    st.markdown("<h2 style='text-align: center; color: #003366;'>Convergência P^η f → f</h2>",
                unsafe_allow_html=True)

    try:
        exp = load_experiment(texto)
    except FracDenseError as exc:
        st.error(f"Não foi possível montar o experimento: {exc}")
        return

    cfg = exp.config
    plano = ", ".join(f"{e:g}" for e in cfg.eta.entries)
    st.markdown(f"<div style='text-align: center; color: grey;'>η {cfg.eta.mode} · entradas: {plano} · "
                f"erros: {', '.join(cfg.errors)}</div>", unsafe_allow_html=True)

    c_left, c_btn, c_right = st.columns([3, 2, 3])
    with c_btn:
        if st.button("Rodar convergência", type="primary", use_container_width=True):
            st.session_state["conv_texto"] = texto

    if st.session_state.get("conv_texto") != texto:
        st.info("Ajuste os parâmetros no topo e clique em 'Rodar convergência'.")
        return

    try:
        linhas = _linhas(texto)
    except PreconditionError as exc:
        st.error(f"Pré-checagem falhou: {exc}")
        st.caption("Ative 'Pré-checagem: Ignorada' nos parâmetros para rodar mesmo assim.")
        return
    except TruncationCollarError as exc:
        st.error(f"Colar de truncamento: {exc}")
        return
    except FracDenseError as exc:
        st.error(f"Falha na convergência: {exc}")
        return

    df = rows_frame(linhas)

    # ==================== KPIs ====================
    final = linhas[-1]
    k1, k2, k3 = st.columns(3)
    k1.metric("Erro L^p final", sci(final.lp_error), f"tol. {cfg.tolerances.get('lp', np.nan):g}",
              delta_color="off")
    k2.metric("Erro seminorma final", sci(final.seminorm_error),
              f"tol. {cfg.tolerances.get('seminorm', np.nan):g}", delta_color="off")
    k3.metric("Termo de Hardy", sci(final.hardy))

    problemas = check_tolerances(linhas, cfg.tolerances)
    for msg in problemas:
        st.warning(msg)
    if not problemas:
        st.success("Última linha dentro de todas as tolerâncias.")

    # ==================== GRÁFICO LOG-LOG ====================
    fig = _grafico(df)
    st.plotly_chart(fig, use_container_width=True)
    st.caption("Tolerâncias são escolhas de engenharia; não há taxa teórica de convergência.")

    # ==================== TABELA ====================
    st.dataframe(report_frame(df), hide_index=True, width="stretch")

    csv = emit_report(linhas, "csv", None, cfg)
    botao_exportar("convergencia", {
        "1. Convergência (Dados)": {"df": df},
        "1. Convergência (Gráfico)": {"fig": fig},
    }, descricao_parametros(), "Convergencia", extra_files={"relatorio.csv": csv})
