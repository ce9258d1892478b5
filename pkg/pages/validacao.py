# pages/validacao.py

import pandas as pd
import plotly.graph_objects as go
import streamlit as st

from fracdense.errors import FracDenseError
from fracdense.report import rows_frame
from fracdense.runner import plump_complement_scenario, run_validation
from utils.export import botao_exportar
from utils.filters import descricao_parametros
from utils.format import PALETTE, checks_frame, report_frame


@st.cache_data(show_spinner="Rodando a suíte de validação...")
def _suite(seeds, quick):
    return run_validation(seeds, quick=quick)


@st.cache_data(show_spinner="Rodando o cenário ℝ² ∖ disco...")
def _cenario(seed):
    veredito, linhas = plump_complement_scenario(seed=seed)
    return veredito, linhas


def render(texto=None):
    st.markdown("<h2 style='text-align: center; color: #003366;'>Validação</h2>", unsafe_allow_html=True)
    st.markdown("<div style='text-align: center; color: grey;'>Checagens estruturais da decomposição, da "
                "partição da unidade e do operador, com sementes fixas.</div>", unsafe_allow_html=True)

    c1, c2, c3 = st.columns([2, 1, 1])
    seeds = c1.multiselect("Sementes", [1, 2, 3, 4, 5], default=[1, 2, 3], key="val_seeds")
    quick = c2.toggle("Versão rápida", value=True, key="val_quick")
    with c3:
        rodar = st.button("Rodar validação", type="primary", use_container_width=True)
    if rodar:
        st.session_state["val_pedido"] = (tuple(sorted(seeds)), quick)

    opcoes = {}
    pedido = st.session_state.get("val_pedido")
    if pedido is None:
        st.info("Escolha as sementes e clique em 'Rodar validação'.")
    elif not pedido[0]:
        st.warning("Selecione pelo menos uma semente.")
    else:
        try:
            relatorios = _suite(*pedido)
        except FracDenseError as exc:
            st.error(f"Falha na validação: {exc}")
            relatorios = []
        if relatorios:
            df = checks_frame(relatorios)
            aprovadas = int((df["Aprovada"] == "Sim").sum())
            k1, k2 = st.columns(2)
            k1.metric("Checagens aprovadas", f"{aprovadas} / {len(df)}")
            k2.metric("Falhas", len(df) - aprovadas)

            resumo = df.groupby(["Checagem", "Aprovada"]).size().reset_index(name="n")
            fig = go.Figure()
            for status, cor in (("Sim", PALETTE[0]), ("Não", "#c0392b")):
                parte = resumo[resumo["Aprovada"] == status]
                fig.add_trace(go.Bar(x=parte["Checagem"], y=parte["n"], name=status, marker_color=cor))
            fig.update_layout(barmode="stack", height=360, margin=dict(t=30), yaxis_title="execuções")
            st.plotly_chart(fig, use_container_width=True)

            def destaca_falha(row):
                if row["Aprovada"] == "Não":
                    return ['background-color: #fdecea; font-weight: bold; color: #8b0000'] * len(row)
                return [''] * len(row)

            st.dataframe(df.style.apply(destaca_falha, axis=1), hide_index=True, width="stretch")
            opcoes["1. Checagens (Dados)"] = {"df": df}
            opcoes["1. Checagens (Gráfico)"] = {"fig": fig}

    # ==================== CENÁRIO κ-PLUMP ====================
    st.markdown("---")
    st.markdown("#### Cenário: Ω = ℝ² ∖ disco fechado")
    st.caption("O complementar passa pelo teste de κ-plumpness antes da convergência (Monte Carlo, d = 2).")
    if st.button("Rodar cenário", type="secondary", key="btn_plump"):
        st.session_state["val_plump"] = True
    if st.session_state.get("val_plump"):
        try:
            veredito, linhas = _cenario(int(st.session_state.get("param_seed", 0)))
        except FracDenseError as exc:
            st.error(f"Cenário interrompido: {exc}")
        else:
            st.success(f"Complementar {veredito.kappa}-plump ({veredito.checked} pares (x, r) testados).")
            df_plump = rows_frame(linhas)
            st.dataframe(report_frame(df_plump), hide_index=True, width="stretch")
            opcoes["2. Cenário Disco (Dados)"] = {"df": df_plump}
            opcoes["2. Cenário Disco κ-plump"] = {"df": pd.DataFrame([veredito.to_dict()])}

    botao_exportar("validacao", opcoes, descricao_parametros(), "Validacao")
