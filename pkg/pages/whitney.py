# pages/whitney.py

import numpy as np
import pandas as pd
import plotly.graph_objects as go
import streamlit as st

from fracdense.errors import FracDenseError
from fracdense.geometry import overlap_count
from utils.export import botao_exportar
from utils.filters import descricao_parametros
from utils.format import PALETTE, sci
from utils.loaders import load_experiment

MAX_CUBOS_DESENHO = 20_000


def _figura_1d(dec):
    fig = go.Figure()
    for g in np.unique(dec.gens):
        ids = np.flatnonzero(dec.gens == g)
        c, l = dec.centers[ids, 0], dec.edges[ids]
        # segmentos separados por None (um único trace por geração)
        xs = np.column_stack([c - l / 2, c + l / 2, np.full_like(c, np.nan)]).ravel()
        ys = np.column_stack([np.full_like(c, g), np.full_like(c, g), np.full_like(c, np.nan)]).ravel()
        fig.add_trace(go.Scatter(x=xs, y=ys, mode="lines+markers", name=f"G{g}",
                                 line=dict(color=PALETTE[int(g) % len(PALETTE)], width=6),
                                 marker=dict(size=4)))
    fig.update_layout(xaxis_title="x", yaxis_title="geração", yaxis=dict(autorange="reversed"),
                      height=420, showlegend=False, margin=dict(t=30))
    return fig


def _figura_2d(dec):
    fig = go.Figure()
    for g in np.unique(dec.gens):
        ids = np.flatnonzero(dec.gens == g)
        c, h = dec.centers[ids], dec.edges[ids] / 2
        x0, x1, y0, y1 = c[:, 0] - h, c[:, 0] + h, c[:, 1] - h, c[:, 1] + h
        nan = np.full_like(x0, np.nan)
        xs = np.column_stack([x0, x1, x1, x0, x0, nan]).ravel()
        ys = np.column_stack([y0, y0, y1, y1, y0, nan]).ravel()
        fig.add_trace(go.Scatter(x=xs, y=ys, mode="lines", name=f"G{g}", fill="toself",
                                 line=dict(color=PALETTE[int(g) % len(PALETTE)], width=1)))
    fig.update_layout(height=620, xaxis_title="x₁", yaxis_title="x₂", margin=dict(t=30))
    fig.update_yaxes(scaleanchor="x", scaleratio=1)
    return fig


def _amostra_overlap(exp, n=4000):
    rng = np.random.default_rng(exp.config.seed)
    lo, hi = exp.spec.box_lo, exp.spec.box_hi
    X = lo + (hi - lo) * rng.uniform(size=(n, exp.spec.dim))
    X = X[exp.region.contains(X)]
    return overlap_count(exp.decomp, X) if X.shape[0] else np.zeros(0, dtype=int)


def render(texto):
    st.markdown("<h2 style='text-align: center; color: #003366;'>Decomposição de Whitney</h2>",
                unsafe_allow_html=True)

    try:
        exp = load_experiment(texto)
    except FracDenseError as exc:
        st.error(f"Não foi possível montar o experimento: {exc}")
        return

    dec = exp.decomp
    df = dec.to_frame()

    # ==================== KPIs ====================
    k1, k2, k3, k4 = st.columns(4)
    k1.metric("Cubos", f"{len(dec):,}".replace(",", "."))
    k2.metric("Gerações", f"{int(dec.gens.min())} – {int(dec.gens.max())}")
    k3.metric("Fator Q** (1+ε)²", f"{dec.star2:.4f}")
    k4.metric("Colar τ", sci(dec.tau))

    # ==================== GRÁFICO ====================
    fig = None
    if len(dec) > MAX_CUBOS_DESENHO:
        st.info(f"Mais de {MAX_CUBOS_DESENHO} cubos: desenho omitido, veja a tabela.")
    elif dec.dim == 1:
        fig = _figura_1d(dec)
    elif dec.dim == 2:
        fig = _figura_2d(dec)
    else:
        st.info("Em d = 3 a decomposição é exibida só em tabela.")
    if fig is not None:
        st.plotly_chart(fig, use_container_width=True)

    # ==================== SOBREPOSIÇÃO ====================
    st.markdown("##### Sobreposição das ampliações Q** (pontos amostrados na região coberta)")
    contagens = _amostra_overlap(exp)
    limite = 12 ** dec.dim
    df_overlap = pd.Series(contagens).value_counts().sort_index().rename_axis("cubos").reset_index(name="pontos")
    fig_overlap = go.Figure(go.Bar(x=df_overlap["cubos"], y=df_overlap["pontos"], marker_color=PALETTE[0]))
    fig_overlap.update_layout(xaxis_title="nº de cubos com x ∈ Q**", yaxis_title="pontos", height=320,
                              margin=dict(t=30))
    st.plotly_chart(fig_overlap, use_container_width=True)
    if contagens.size and contagens.max() > limite:
        st.error(f"Sobreposição máxima {int(contagens.max())} acima de 12^d = {limite}.")
    elif contagens.size:
        st.caption(f"Máximo observado: {int(contagens.max())} (limite 12^d = {limite}).")

    # ==================== TABELA ====================
    por_geracao = df.groupby("generation").agg(cubos=("edge", "size"), aresta=("edge", "first"),
                                              dist_min=("dist_to_complement", "min")).reset_index()
    c1, c2 = st.columns([1, 2])
    with c1:
        st.markdown("**Por geração**")
        st.dataframe(por_geracao, hide_index=True, width="stretch")
    with c2:
        st.markdown("**Cubos**")
        st.dataframe(df, hide_index=True, width="stretch", height=360)

    opcoes = {
        "1. Cubos de Whitney (Dados)": {"df": df},
        "2. Cubos por Geração (Dados)": {"df": por_geracao},
        "3. Sobreposição (Dados)": {"df": df_overlap},
        "4. Sobreposição (Gráfico)": {"fig": fig_overlap},
    }
    if fig is not None:
        opcoes["1. Cubos de Whitney (Gráfico)"] = {"fig": fig}
    botao_exportar("whitney", opcoes, descricao_parametros(), "Whitney")
