# pages/pesos_nucleos.py

import dataclasses
import math

import numpy as np
import pandas as pd
import plotly.graph_objects as go
import streamlit as st

from fracdense.errors import FracDenseError
from fracdense.norms import kernel_admissibility, local_comparability, make_weight, power_kernel, weight_condition
from utils.export import botao_exportar
from utils.filters import descricao_parametros
from utils.format import PALETTE, sci, verdict_label
from utils.loaders import load_experiment

GRADE_BETA = np.round(np.arange(-1.5, 1.51, 0.25), 2)
GRADE_ALPHA = np.round(np.arange(0.25, 4.01, 0.25), 2)


@st.cache_data(show_spinner="Varrendo expoentes do peso...")
def _varredura_peso(texto, betas):
    exp = load_experiment(texto)
    centro = [0.0] * exp.spec.dim
    linhas = []
    for b in betas:
        w = make_weight("power", exp.spec.dim, {"beta": float(b), "center": centro}, "locally-comparable")
        r = weight_condition(w, exp.spec, exp.params, exp.quad)
        linhas.append({"beta": float(b), "valor": r.value, "verdict": r.verdict})
    return pd.DataFrame(linhas)


@st.cache_data(show_spinner="Varrendo expoentes do núcleo...")
def _varredura_nucleo(texto, alphas):
    exp = load_experiment(texto)
    d, p = exp.spec.dim, exp.params.p
    linhas = []
    for a in alphas:
        K = power_kernel(float(a))
        r = kernel_admissibility(K, d, p, exp.quad)
        linhas.append({"alpha": float(a), "valor": r.value, "verdict": r.verdict,
                       "forma_fechada": K.admissibility_closed_form(d, p)})
    return pd.DataFrame(linhas)


def _grafico_varredura(df, x, titulo_x):
    cores = df["verdict"].map({"finite": PALETTE[0], "divergent": "#c0392b", "inconclusive": "#f39c12"})
    y = df["valor"].where(np.isfinite(df["valor"]))
    fig = go.Figure(go.Bar(x=df[x], y=y, marker_color=cores,
                           text=[verdict_label(v) for v in df["verdict"]], textposition="outside"))
    fig.update_layout(xaxis_title=titulo_x, yaxis_title="integral", yaxis_type="log", height=360,
                      margin=dict(t=30))
    return fig


def render(texto):
    st.markdown("<h2 style='text-align: center; color: #003366;'>Pesos & Núcleos</h2>", unsafe_allow_html=True)

    try:
        exp = load_experiment(texto)
    except FracDenseError as exc:
        st.error(f"Não foi possível montar o experimento: {exc}")
        return

    opcoes = {}
    d, p, sp = exp.spec.dim, exp.params.p, exp.params.sp

    # ==================== PESO DO EXPERIMENTO ====================
    st.markdown("#### Peso do experimento")
    if exp.weight is None:
        st.info("A configuração não declara peso.")
    else:
        try:
            wc = weight_condition(exp.weight, exp.spec, exp.params, exp.quad)
            comp = local_comparability(exp.weight, exp.decomp.box(0), seed=exp.config.seed)
        except FracDenseError as exc:
            st.error(f"Falha na checagem do peso: {exc}")
        else:
            k1, k2, k3 = st.columns(3)
            k1.metric("Peso", exp.weight.name)
            k2.metric("∫ w/(1+|x|)^{d+sp}", sci(wc.value), verdict_label(wc.verdict), delta_color="off")
            k3.metric("Comparável no cubo 0", "Sim" if comp.comparable else "Não", f"C = {sci(comp.constant)}",
                      delta_color="off")
            zeros = exp.weight.zeros_in(exp.spec)
            if zeros:
                st.caption(f"Zeros de w em Ω (removidos de Ω'): {list(zeros)}")
            df_peso = pd.DataFrame([{**wc.to_dict(), **{f"comparab_{k}": v
                                                         for k, v in dataclasses.asdict(comp).items()}}])
            opcoes["1. Peso do Experimento (Dados)"] = {"df": df_peso}

    # ==================== VARREDURA DE PESOS ====================
    st.markdown(f"#### Varredura w(x) = |x|^β  (em ℝ^d: finito para −{d} < β < sp = {sp:g})")
    df_w = _varredura_peso(texto, tuple(GRADE_BETA))
    fig_w = _grafico_varredura(df_w, "beta", "β")
    st.plotly_chart(fig_w, use_container_width=True)
    opcoes["2. Varredura de Pesos (Dados)"] = {"df": df_w}
    opcoes["2. Varredura de Pesos (Gráfico)"] = {"fig": fig_w}

    # ==================== NÚCLEO DO EXPERIMENTO ====================
    st.markdown("#### Núcleo do experimento")
    if exp.kernel is None:
        st.info("A configuração não declara núcleo.")
    else:
        try:
            ka = kernel_admissibility(exp.kernel, d, p, exp.quad)
        except FracDenseError as exc:
            st.error(f"Falha na checagem do núcleo: {exc}")
        else:
            fechada = exp.kernel.admissibility_closed_form(d, p)
            k1, k2, k3 = st.columns(3)
            k1.metric("Núcleo", exp.kernel.name)
            k2.metric("∫ (x^p ∧ 1) K x^{d−1}", sci(ka.value), verdict_label(ka.verdict), delta_color="off")
            k3.metric("Forma fechada", "—" if fechada is None else sci(fechada))
            opcoes["3. Núcleo do Experimento (Dados)"] = {"df": pd.DataFrame([{**ka.to_dict(),
                                                                               "closed_form": fechada}])}

    # ==================== VARREDURA DE NÚCLEOS ====================
    st.markdown(f"#### Varredura K(r) = r^−α  (admissível para {d} < α < p + d = {p + d:g})")
    df_k = _varredura_nucleo(texto, tuple(GRADE_ALPHA))
    fig_k = _grafico_varredura(df_k, "alpha", "α")
    st.plotly_chart(fig_k, use_container_width=True)
    df_k_exib = df_k.assign(
        verdict=df_k["verdict"].map(verdict_label),
        forma_fechada=[("∞" if math.isinf(v) else sci(v)) if v is not None else "—" for v in df_k["forma_fechada"]],
    )
    st.dataframe(df_k_exib, hide_index=True, width="stretch")
    opcoes["4. Varredura de Núcleos (Dados)"] = {"df": df_k}
    opcoes["4. Varredura de Núcleos (Gráfico)"] = {"fig": fig_k}

    botao_exportar("pesos_nucleos", opcoes, descricao_parametros(), "Pesos_Nucleos")
