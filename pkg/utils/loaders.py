# utils/loaders.py
import os
import json
import logging
import streamlit as st

from fracdense.config import parse_config
from fracdense.runner import build_experiment

logger = logging.getLogger(__name__)

# --- CONFIGURAÇÃO ---
CONFIG_FOLDER = "configs"

PRESETS = {
    "Intervalo (0,1) · produto": "intervalo_produto.json",
    "Intervalo (0,1) · η adaptativo": "intervalo_adaptativo.json",
    "Intervalo (0,1) · peso |x|^0.25": "peso_potencia.json",
    "Intervalo (0,1) · núcleo e^-r r^-1.5": "nucleo_exp.json",
    "ℝ² ∖ disco · bump anular": "exterior_disco.json",
}


# ==========================================
# LOADERS
# ==========================================

@st.cache_data(show_spinner=False)
def read_preset(nome):
    """Texto JSON de um experimento de exemplo."""
    caminho = os.path.join(CONFIG_FOLDER, PRESETS[nome])
    with open(caminho, encoding="utf-8") as fh:
        return fh.read()


def preset_raw(nome):
    return json.loads(read_preset(nome))


@st.cache_resource(show_spinner="Montando decomposição de Whitney...")
def load_experiment(texto):
    """Configuração validada + decomposição/partição, em cache pelo texto da configuração.

    Erros de configuração sobem como ``FracDenseError``; as páginas mostram ``st.error``.
    """
    cfg = parse_config(texto)
    exp = build_experiment(cfg)
    logger.info("experimento carregado: %d cubos, G=%d", len(exp.decomp), cfg.max_generation)
    return exp


def load_uploaded(arquivo):
    """Lê o JSON enviado pelo usuário (st.file_uploader) e guarda na sessão."""
    if arquivo is None:
        return None
    texto = arquivo.getvalue().decode("utf-8")
    st.session_state["uploaded_config"] = texto
    st.session_state["uploaded_name"] = arquivo.name
    return texto
