# pages/suavizacao.py

import numpy as np
import pandas as pd
import plotly.graph_objects as go
import streamlit as st

from fracdense.errors import FracDenseError, IterationCapError
from fracdense.smoothing import MODES, apply_P, select_eta, uniform_eta
from utils.export import botao_exportar
from utils.filters import descricao_parametros
from utils.format import PALETTE, sci
from utils.loaders import load_experiment


@st.cache_resource(show_spinner="Escolhendo η por cubo...")
def _agenda(texto, modo, valor, alvo):
    exp = load_experiment(texto)
    if modo == "uniforme":
        return uniform_eta(exp.decomp, valor)
    return select_eta(exp.f, exp.pou, int(valor), exp.params.s, exp.params.p, mode=alvo, weight=exp.weight,
                      kernel=exp.kernel, quad=exp.quad, seed=exp.config.seed)


def _linha(exp, pontos):
    """Pontos sobre a diagonal da caixa envolvente, restritos à região coberta."""
    lo, hi = exp.spec.box_lo, exp.spec.box_hi
    t = np.linspace(0.0, 1.0, pontos)
    X = lo + t[:, None] * (hi - lo)
    m = exp.region.contains(X)
    return t[m] * float(np.linalg.norm(hi - lo)), X[m]


def render(texto):
    st.markdown("<h2 style='text-align: center; color: #003366;'>Suavização P^η</h2>", unsafe_allow_html=True)

    try:
        exp = load_experiment(texto)
    except FracDenseError as exc:
        st.error(f"Não foi possível montar o experimento: {exc}")
        return

    cfg = exp.config
    eps = exp.decomp.epsilon

    # ==================== SELETORES ====================
    c1, c2, c3, c4 = st.columns([1.2, 1.2, 1.2, 1])
    modo = c1.radio("η por cubo", ["uniforme", "adaptativo"], horizontal=True,
                    index=0 if cfg.eta.mode == "uniform" else 1, key="suav_modo")
    if modo == "uniforme":
        padrao = cfg.eta.entries[-1] if cfg.eta.mode == "uniform" else eps / 4
        valor = c2.number_input("Fração de l(Q)", min_value=1e-4, max_value=float(eps / 2) * 0.999,
                                value=float(padrao), format="%.4f", key="suav_fracao")
        alvo = "plain"
    else:
        padrao = cfg.eta.entries[-1] if cfg.eta.mode == "adaptive" else 4
        valor = c2.number_input("k", min_value=1, max_value=256, value=int(padrao), step=1, key="suav_k")
        alvos = [m for m in MODES if not (m.startswith("weighted") and exp.weight is None)
                 and not (m == "kernel" and exp.kernel is None)]
        alvo = c3.selectbox("Alvo", alvos, index=alvos.index(cfg.eta.target) if cfg.eta.target in alvos else 0,
                            key="suav_alvo")
    pontos = c4.number_input("Pontos", min_value=21, max_value=2001, value=401, step=20, key="suav_pontos")

    try:
        eta = _agenda(texto, modo, valor, alvo)
    except IterationCapError as exc:
        st.error(f"Limite de iterações na escolha de η: {exc}")
        return
    except FracDenseError as exc:
        st.error(f"Agenda η inválida: {exc}")
        return

    # ==================== f × P^η f ====================
    s, X = _linha(exp, int(pontos))
    if X.shape[0] == 0:
        st.warning("A diagonal da caixa não cruza a região coberta.")
        return
    valores_f = exp.f.values(X)
    valores_p = apply_P(exp.f, exp.pou, eta, X, cfg.quadrature.order)

    df_linha = pd.DataFrame(X, columns=[f"x_{i}" for i in range(exp.spec.dim)])
    df_linha["f"] = valores_f
    df_linha["P_eta_f"] = valores_p
    df_linha["diferenca"] = valores_p - valores_f

    eixo = "x" if exp.spec.dim == 1 else "posição na diagonal"
    fig = go.Figure()
    fig.add_trace(go.Scatter(x=s if exp.spec.dim > 1 else X[:, 0], y=valores_f, mode="lines", name="f",
                             line=dict(color=PALETTE[3], width=2)))
    fig.add_trace(go.Scatter(x=s if exp.spec.dim > 1 else X[:, 0], y=valores_p, mode="lines", name="P^η f",
                             line=dict(color=PALETTE[1], width=2, dash="dash")))
    fig.update_layout(xaxis_title=eixo, height=420, margin=dict(t=30),
                      legend=dict(orientation="h", yanchor="bottom", y=1.02, xanchor="center", x=0.5))
    st.plotly_chart(fig, use_container_width=True)

    k1, k2, k3 = st.columns(3)
    k1.metric("η máx.", sci(eta.eta_max))
    k2.metric("máx |P^η f − f| na linha", sci(float(np.max(np.abs(df_linha["diferenca"])))))
    k3.metric("Cubos", len(eta))

    # ==================== AGENDA ====================
    df_eta = eta.to_frame()
    fig_eta = go.Figure(go.Scatter(x=df_eta["edge"], y=df_eta["eta"] / df_eta["edge"], mode="markers",
                                   marker=dict(color=df_eta["generation"], colorscale="Blues", size=6)))
    fig_eta.add_hline(y=eps / 2, line_dash="dot", annotation_text="ε/2")
    fig_eta.update_layout(xaxis_type="log", xaxis_title="l(Q)", yaxis_title="η(Q)/l(Q)", height=340,
                          margin=dict(t=30))
    st.markdown("##### Agenda η(Q)")
    st.plotly_chart(fig_eta, use_container_width=True)
    st.dataframe(df_eta, hide_index=True, width="stretch", height=300)

    botao_exportar("suavizacao", {
        "1. f e P^η f (Dados)": {"df": df_linha},
        "1. f e P^η f (Gráfico)": {"fig": fig},
        "2. Agenda η (Dados)": {"df": df_eta},
        "2. Agenda η (Gráfico)": {"fig": fig_eta},
    }, descricao_parametros(), "Suavizacao")
