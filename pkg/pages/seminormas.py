# pages/seminormas.py

import pandas as pd
import plotly.graph_objects as go
import streamlit as st

from fracdense.errors import FracDenseError
from fracdense.norms import gagliardo, hardy_term, kernel_seminorm, lp_norm, weighted_gagliardo
from fracdense.oracles import brute_gagliardo
from utils.export import botao_exportar
from utils.filters import descricao_parametros
from utils.format import PALETTE, sci, verdict_label
from utils.loaders import load_experiment


@st.cache_data(show_spinner="Calculando seminormas...")
def _valores(texto, com_forca_bruta):
    exp = load_experiment(texto)
    q = exp.quad
    resultados = [
        lp_norm(exp.f, exp.spec, exp.params.p, None, q),
        gagliardo(exp.f, exp.spec, exp.params, q),
        hardy_term(exp.f, exp.spec, exp.params, q),
    ]
    if exp.weight is not None:
        com_peso = lp_norm(exp.f, exp.spec, exp.params.p, exp.weight, q)
        com_peso.name = "weighted_lp_norm"
        resultados.append(com_peso)
        resultados.append(weighted_gagliardo(exp.f, exp.spec, exp.params, exp.weight, q))
    if exp.kernel is not None:
        resultados.append(kernel_seminorm(exp.f, exp.spec, exp.params.p, exp.kernel, q))
    if com_forca_bruta and exp.spec.dim <= 2:
        resultados.append(brute_gagliardo(exp.f, exp.spec, exp.params, 128 if exp.spec.dim == 2 else 256))
    return pd.DataFrame([r.to_dict() for r in resultados])


def render(texto):
    st.markdown("<h2 style='text-align: center; color: #003366;'>Seminormas</h2>", unsafe_allow_html=True)

    try:
        exp = load_experiment(texto)
    except FracDenseError as exc:
        st.error(f"Não foi possível montar o experimento: {exc}")
        return

    st.markdown(f"<div style='text-align: center; color: grey;'>f = {exp.f.name} · s = {exp.params.s:g} · "
                f"p = {exp.params.p:g} · d = {exp.params.d}</div>", unsafe_allow_html=True)

    forca_bruta = st.toggle("Conferir com a soma dupla em grade (força bruta)", value=False, key="semi_bruta")

    try:
        df = _valores(texto, forca_bruta)
    except FracDenseError as exc:
        st.error(f"Falha no cálculo: {exc}")
        return

    # ==================== GRÁFICO COM BARRAS DE ERRO ====================
    df_fin = df[df["verdict"] == "finite"]
    fig = go.Figure(go.Bar(
        x=df_fin["name"], y=df_fin["value"], marker_color=PALETTE[0],
        error_y=dict(type="data", array=df_fin["error_estimate"], visible=True),
        text=[sci(v) for v in df_fin["value"]], textposition="outside",
    ))
    fig.update_layout(yaxis_title="valor", height=420, margin=dict(t=30))
    st.plotly_chart(fig, use_container_width=True)

    for _, linha in df[df["verdict"] != "finite"].iterrows():
        st.warning(f"{linha['name']}: veredito {verdict_label(linha['verdict'])}.")

    df_exib = df.assign(verdict=df["verdict"].map(verdict_label))
    st.dataframe(df_exib, hide_index=True, width="stretch")

    botao_exportar("seminormas", {
        "1. Seminormas (Dados)": {"df": df},
        "1. Seminormas (Gráfico)": {"fig": fig},
    }, descricao_parametros(), "Seminormas")
