# streamlit_app.py

import logging
from pathlib import Path

import streamlit as st

from fracdense.logs import setup_logging
from utils.filters import aplicar_parametros
from pages import inicio, whitney, suavizacao, seminormas, pesos_nucleos, convergencia, validacao

# (rótulo no menu, módulo, resumo usado no pop-up e nos cartões do início)
PAGINAS = [
    ("Início", inicio, ""),
    ("Whitney", whitney, "Cubos, gerações e a sobreposição das ampliações Q**."),
    ("Suavização P^η", suavizacao, "f e P^η f lado a lado, com a agenda η(Q)."),
    ("Seminormas", seminormas, "|f|_{W^{s,p}}, Hardy e a norma X(Ω) do experimento."),
    ("Pesos & Núcleos", pesos_nucleos, "Condições sobre o peso w e o núcleo K, com veredito."),
    ("Convergência", convergencia, "Erros L^p e de seminorma conforme η diminui."),
    ("Validação", validacao, "Oráculos: lema x/y, cota de g_n, sobreposição, partição."),
]

# ==================== CONFIGURAÇÕES GERAIS ====================
st.set_page_config(page_title="Densidade em W^{s,p}", layout="wide", initial_sidebar_state="expanded")

if "logging_ready" not in st.session_state:
    setup_logging(logging.INFO)
    st.session_state.logging_ready = True

ESTILO = Path(__file__).resolve().parent / "utils" / "style.css"
if ESTILO.exists():
    st.markdown(f"<style>{ESTILO.read_text(encoding='utf-8')}</style>", unsafe_allow_html=True)
else:
    st.warning(f"Arquivo de estilo não encontrado: {ESTILO}")

# menu nativo de páginas escondido; a navegação é pelo ?nav=
st.markdown("<style>[data-testid='stSidebarNav'] {display: none;}</style>", unsafe_allow_html=True)


def pagina_da_url():
    try:
        idx = int(st.query_params.get("nav", "0"))
    except ValueError:
        return 0
    return idx if 0 <= idx < len(PAGINAS) else 0


idx_ativa = pagina_da_url()
rotulo_ativo, modulo_ativo, _ = PAGINAS[idx_ativa]

# ==================== MENU LATERAL ====================
st.sidebar.markdown("<p class='sidebar-title'>Selecione a página:</p>", unsafe_allow_html=True)
links = "".join(
    f'<a class="sidebar-nav-btn {"active" if i == idx_ativa else ""}" href="?nav={i}" target="_self">{rotulo}</a>'
    for i, (rotulo, _, _) in enumerate(PAGINAS)
)
st.sidebar.markdown(f'<div class="sidebar-nav-container">{links}</div>', unsafe_allow_html=True)
st.sidebar.divider()
st.sidebar.caption("Os cálculos também rodam sem interface: `python -m fracdense converge --config exp.json`.")

# ==================== RENDERIZAÇÃO ====================
if idx_ativa == 0:
    inicio.render([(i, rotulo, resumo) for i, (rotulo, _, resumo) in enumerate(PAGINAS) if i])
else:
    st.markdown('<a href="?nav=0" target="_self" class="nav-back-link">⬅ Voltar ao início</a>',
                unsafe_allow_html=True)
    modulo_ativo.render(aplicar_parametros())


# ==================== BOAS-VINDAS E RODAPÉ ====================
@st.dialog("Densidade em W^{s,p}", width="medium")
def boas_vindas():
    st.markdown("<div class='popup-subtitle'>Whitney · P<sup>η</sup> · Seminormas</div>", unsafe_allow_html=True)
    with st.container(height=350, border=True):
        st.markdown(
            "**Parâmetros:** no topo de cada página, escolha um experimento de exemplo ou envie um JSON "
            "e ajuste s, p, ε e G.\n\n"
            "**Exportação:** no fim das páginas, tabelas e gráficos saem num ZIP com a planilha Excel.\n\n---\n"
            + "\n".join(f"* **{rotulo}:** {resumo}" for rotulo, _, resumo in PAGINAS if resumo)
        )
    if st.button("Começar", type="secondary"):
        st.session_state.welcome_seen = True
        st.rerun()


if not st.session_state.get("welcome_seen", False):
    boas_vindas()

st.markdown(
    "<div class='footer-container'>"
    "<p class='footer-text'>NumPy · SciPy · Plotly | Interface Streamlit</p>"
    "<p class='footer-text'>Tolerâncias são escolhas de engenharia; os números não substituem as demonstrações.</p>"
    "</div>",
    unsafe_allow_html=True,
)
