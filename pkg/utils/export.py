# utils/export.py

import io
import re
import logging
import zipfile
import pandas as pd
import streamlit as st

logger = logging.getLogger(__name__)


def clean_sheet_name(name):
    """
    Limpa o nome para abas do Excel (max 31 chars).
    """
    # Remove caracteres proibidos
    clean = re.sub(r'[\[\]:*?/\\]', '', str(name))

    if len(clean) <= 31:
        return clean

    # Abreviação: primeiros 20 chars + ".." + últimos 9 chars
    return clean[:20] + ".." + clean[-9:]


def clean_chart_title(title_key):
    """
    Título do gráfico no PNG: sem numeração inicial ('1. ') e sem o sufixo '(Gráfico)'.
    """
    s = re.sub(r'^\d+\.\s*', '', str(title_key))
    return s.replace(" (Gráfico)", "")


def _unique_sheet(nome, usados):
    base, i = nome, 2
    while nome in usados:
        sufixo = f" ({i})"
        nome = base[:31 - len(sufixo)] + sufixo
        i += 1
    usados.add(nome)
    return nome


def to_excel_with_images(data_dict, param_info):
    """
    Gera um arquivo Excel em memória contendo DataFrames e Imagens (Plots).
    """
    output = io.BytesIO()
    usados = {"Parâmetros"}

    with pd.ExcelWriter(output, engine='xlsxwriter') as writer:

        # --- ABA 1: PARÂMETROS ---
        df_info = pd.DataFrame([{"Parâmetros do Experimento": param_info}])
        df_info.to_excel(writer, sheet_name="Parâmetros", index=False)
        worksheet_params = writer.sheets["Parâmetros"]
        worksheet_params.set_column('A:A', 100)
        worksheet_params.hide_gridlines(2)

        # --- ABAS DE DADOS E GRÁFICOS ---
        for key, value in data_dict.items():
            sheet_name = _unique_sheet(clean_sheet_name(key), usados)

            # 1. Tabela
            if value.get('df') is not None and not value['df'].empty:
                value['df'].to_excel(writer, sheet_name=sheet_name, index=False)
                writer.sheets[sheet_name].set_column('A:Z', 18)

            # 2. Gráfico
            elif value.get('fig') is not None:
                pd.DataFrame().to_excel(writer, sheet_name=sheet_name)
                worksheet = writer.sheets[sheet_name]
                worksheet.hide_gridlines(2)

                try:
                    fig_to_export = value['fig']
                    fig_to_export.update_layout(
                        title={'text': clean_chart_title(key), 'y': 0.95, 'x': 0.5,
                               'xanchor': 'center', 'yanchor': 'top'},
                        title_font=dict(size=24, color="#003366", family="Arial, sans-serif"),
                        margin=dict(t=80),
                        paper_bgcolor='rgba(0,0,0,0)',
                        plot_bgcolor='rgba(0,0,0,0)',
                    )
                    img_bytes = fig_to_export.to_image(format="png", width=1200, height=700, scale=2,
                                                       engine="kaleido")
                    worksheet.insert_image('A1', f'{sheet_name}.png', {'image_data': io.BytesIO(img_bytes)})
                except Exception as e:
                    logger.warning("erro ao converter imagem %s: %s", key, e)
                    worksheet.write('A1', f"Erro ao gerar imagem: {e}")

    return output.getvalue()


def create_zip_package(data_dict, param_info, excel_filename="Relatorio.xlsx", extra_files=None):
    """ZIP com a planilha e, opcionalmente, arquivos de texto (ex.: relatório CSV/JSONL)."""
    output_excel = to_excel_with_images(data_dict, param_info)
    zip_buffer = io.BytesIO()
    with zipfile.ZipFile(zip_buffer, "a", zipfile.ZIP_DEFLATED, False) as zip_file:
        if not excel_filename.lower().endswith(".xlsx"):
            excel_filename += ".xlsx"
        zip_file.writestr(excel_filename, output_excel)
        for nome, texto in (extra_files or {}).items():
            zip_file.writestr(nome, texto)
    return zip_buffer.getvalue()


# ==================== DIÁLOGO DE EXPORTAÇÃO ====================

def botao_exportar(page_id, opcoes, param_info, nome_arquivo, extra_files=None):
    """Botão centralizado 'Exportar Dados da Página' + diálogo de seleção dos itens.

    ``opcoes`` mapeia o nome do item para ``{'df': DataFrame}`` ou ``{'fig': Figure}``.
    """
    flag = f"show_{page_id}_export"

    c_left, c_btn, c_right = st.columns([3, 2, 3])
    with c_btn:
        if st.button("Exportar Dados da Página", type="secondary", use_container_width=True,
                     key=f"btn_export_{page_id}"):
            st.session_state[flag] = True

    if not st.session_state.get(flag, False):
        return

    @st.dialog("Opções de Exportação")
    def export_dialog():
        available_options = [k for k, v in opcoes.items()
                             if (v.get('df') is not None and not v['df'].empty) or v.get('fig') is not None]

        if not available_options:
            st.warning("Nenhuma tabela ou gráfico com dados foi gerado.")
            if st.button("Fechar", type="secondary"):
                st.session_state[flag] = False
                st.rerun()
            return

        selected_names = st.multiselect("Selecione os itens para exportar:", options=available_options,
                                        default=available_options)
        if not selected_names:
            st.error("Selecione pelo menos um item.")
            return

        try:
            zip_data = create_zip_package({n: opcoes[n] for n in selected_names}, param_info,
                                          excel_filename=f"{nome_arquivo}.xlsx", extra_files=extra_files)
            st.download_button(
                label="Clique para baixar",
                data=zip_data,
                file_name=f"{nome_arquivo}.zip",
                mime="application/zip",
                on_click=lambda: st.session_state.update({flag: False}),
                type="secondary",
            )
        except Exception as e:
            st.error(f"Erro ao gerar ZIP: {e}")

        if st.button("Cancelar", key=f"cancel_export_{page_id}", type="secondary"):
            st.session_state[flag] = False
            st.rerun()

    export_dialog()
