# utils/filters.py
import json
import streamlit as st

from .loaders import PRESETS, load_uploaded, preset_raw

UPLOAD_LABEL = "Arquivo enviado"


def _defaults(raw):
    sob = raw.get("sobolev") or {}
    quad = raw.get("quadrature") or {}
    return {
        "param_s": float(sob.get("s", 0.5)),
        "param_p": float(sob.get("p", 2.0)),
        "param_epsilon": float(raw.get("epsilon", 0.1)),
        "param_G": int(raw.get("max_generation", 10)),
        "param_seed": int(raw.get("seed", quad.get("seed", 0))),
        "param_ordem": int(quad.get("order", 32)),
        "param_override": bool(raw.get("override_precheck", False)),
    }


def _base_raw():
    """Configuração de partida: o arquivo enviado (se houver) ou o exemplo escolhido."""
    origem = st.session_state["param_origem"]
    if origem == UPLOAD_LABEL and st.session_state.get("uploaded_config"):
        try:
            return json.loads(st.session_state["uploaded_config"])
        except json.JSONDecodeError:
            st.error("O arquivo enviado não é um JSON válido; usando o primeiro exemplo.")
    nome = origem if origem in PRESETS else next(iter(PRESETS))
    return preset_raw(nome)


def aplicar_parametros():
    """
    Expander de parâmetros no TOPO da página (Main Area).
    Retorna o texto JSON do experimento com os ajustes da sessão aplicados.
    """

    # ==================== LÓGICA DE PERSISTÊNCIA (SESSION STATE) ====================
    opcoes = list(PRESETS)
    if st.session_state.get("uploaded_config"):
        opcoes.append(UPLOAD_LABEL)

    if "param_pendente" in st.session_state:
        st.session_state["param_origem"] = st.session_state.pop("param_pendente")
    if st.session_state.get("param_origem") not in opcoes:
        st.session_state["param_origem"] = opcoes[0]

    raw = _base_raw()
    defaults = _defaults(raw)

    # Troca de exemplo: parâmetros voltam aos valores do arquivo
    if st.session_state.get("param_carregado") != st.session_state["param_origem"]:
        st.session_state.update(defaults)
        st.session_state["param_carregado"] = st.session_state["param_origem"]

    for chave, valor in defaults.items():
        st.session_state.setdefault(chave, valor)

    # --- CALLBACKS ---
    def reset_parametros_callback():
        st.session_state["param_origem"] = next(iter(PRESETS))
        st.session_state.pop("uploaded_config", None)
        st.session_state.pop("param_carregado", None)

    # ==================== WIDGETS NO TOPO (EXPANDER WIDE) ====================
    with st.expander("Parâmetros do Experimento (Clique para expandir)", expanded=False):

        # --- LINHA 1: ORIGEM DA CONFIGURAÇÃO ---
        c1, c2 = st.columns([2, 3])
        with c1:
            st.selectbox("Experimento:", opcoes, key="param_origem")
        with c2:
            arquivo = st.file_uploader("Ou envie um JSON de configuração:", type=["json"], key="param_upload")
            if arquivo is not None and st.session_state.get("uploaded_name") != arquivo.name:
                load_uploaded(arquivo)
                st.session_state["param_pendente"] = UPLOAD_LABEL
                st.rerun()

        # --- LINHA 2: PARÂMETROS NUMÉRICOS ---
        c3, c4, c5, c6, c7, c8 = st.columns(6)
        with c3:
            st.number_input("s", min_value=0.01, max_value=0.99, step=0.05, key="param_s")
        with c4:
            st.number_input("p", min_value=1.0, max_value=20.0, step=0.5, key="param_p")
        with c5:
            st.number_input("ε", min_value=0.005, max_value=0.11, step=0.005, format="%.3f",
                            key="param_epsilon", help="Exige (1+ε)² < 5/4")
        with c6:
            st.number_input("Geração máx. G", min_value=1, max_value=20, step=1, key="param_G")
        with c7:
            st.number_input("Semente", min_value=0, step=1, key="param_seed")
        with c8:
            st.number_input("Ordem GL", min_value=2, max_value=64, step=2, key="param_ordem")

        st.markdown("---")

        # --- LINHA 3: AÇÕES ---
        st.markdown("**Controles & Ações**")
        c9, c10, c11 = st.columns([1.5, 3, 0.8])
        with c9:
            is_active = st.session_state["param_override"]
            if st.button("Pré-checagem: Ignorada" if is_active else "Pré-checagem: Ativa",
                         type="secondary" if is_active else "primary", key="btn_toggle_override",
                         help="Ignorar falhas das pré-checagens (Hardy, peso, núcleo, colar)",
                         use_container_width=True):
                st.session_state["param_override"] = not is_active
                st.rerun()
        with c11:
            st.button("Limpar", type="secondary", help="Resetar todos os parâmetros", use_container_width=True,
                      on_click=reset_parametros_callback)

    # ==================== APLICA PARÂMETROS ====================
    raw = dict(raw)
    raw["sobolev"] = {"s": float(st.session_state["param_s"]), "p": float(st.session_state["param_p"])}
    raw["epsilon"] = float(st.session_state["param_epsilon"])
    raw["max_generation"] = int(st.session_state["param_G"])
    raw["seed"] = int(st.session_state["param_seed"])
    raw["quadrature"] = {**(raw.get("quadrature") or {}), "order": int(st.session_state["param_ordem"])}
    raw["override_precheck"] = bool(st.session_state["param_override"])

    return json.dumps(raw, sort_keys=True, ensure_ascii=False)


def descricao_parametros():
    """Resumo textual dos parâmetros (aba 'Parâmetros' da exportação)."""
    s = st.session_state
    return (f"Experimento: {s.get('param_origem', '-')} | s = {s.get('param_s')} | p = {s.get('param_p')} | "
            f"ε = {s.get('param_epsilon')} | G = {s.get('param_G')} | semente = {s.get('param_seed')} | "
            f"ordem GL = {s.get('param_ordem')}")
