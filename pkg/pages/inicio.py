# pages/inicio.py

import pandas as pd
import streamlit as st

from utils.loaders import PRESETS, preset_raw


def tabela_presets():
    """Resumo dos experimentos de exemplo (uma linha por arquivo em configs/)."""
    linhas = []
    for nome, arquivo in PRESETS.items():
        raw = preset_raw(nome)
        sob = raw.get("sobolev", {})
        eta = raw.get("eta", {})
        linhas.append({
            "Experimento": nome,
            "Arquivo": arquivo,
            "d": raw["domain"]["dim"],
            "f": raw["function"]["name"],
            "s": sob.get("s"),
            "p": sob.get("p"),
            "ε": raw.get("epsilon"),
            "G": raw.get("max_generation"),
            "η": eta.get("mode"),
            "Erros": ", ".join(raw.get("errors", [])),
        })
    return pd.DataFrame(linhas)


def render(secoes=()):
    # ==================== TÍTULO ====================
    st.markdown("<h1 style='text-align: center; color: #003366;'>Densidade em W<sup>s,p</sup>(Ω)</h1>",
                unsafe_allow_html=True)
    st.markdown(
        "<div class='intro-text'>Este painel monta a <b>decomposição de Whitney</b> de um aberto Ω, a partição "
        "da unidade associada e o operador de suavização <b>P<sup>η</sup></b>, e acompanha a convergência "
        "P<sup>η</sup>f → f nas seminormas fracionárias, com peso e com núcleo.</div>",
        unsafe_allow_html=True,
    )

    # ==================== CARTÕES ====================
    cartoes = "".join(
        f'<a href="?nav={i}" target="_self" class="nb-card"><b>{rotulo}</b><span>{resumo}</span></a>'
        for i, rotulo, resumo in secoes
    )
    st.markdown(f'<div class="nb-grid">{cartoes}</div>', unsafe_allow_html=True)

    # ==================== EXPERIMENTOS DE EXEMPLO ====================
    st.markdown("<br>", unsafe_allow_html=True)
    st.subheader("Experimentos de exemplo")
    st.caption("Selecionáveis no topo de cada página; o mesmo JSON roda na linha de comando.")
    st.dataframe(tabela_presets(), hide_index=True, use_container_width=True)
