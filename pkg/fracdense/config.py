# fracdense/config.py
"""Leitura e validação da configuração JSON de um experimento.

``parse_config`` junta todas as violações encontradas num único ConfigError.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .catalog import FUNCTIONS, catalog_function
from .errors import ConfigError, FracDenseError
from .geometry import MAX_GENERATION, OpenSetSpec
from .norms import KERNELS, WEIGHT_CLASSES, WEIGHTS, SobolevParams, make_weight
from .quadrature import QuadratureConfig
from .smoothing import MODES

logger = logging.getLogger(__name__)

# --- PADRÕES ---
DEFAULT_EPSILON = 0.1
DEFAULT_GENERATION = 10
DEFAULT_TOLERANCES = {"lp": 0.02, "seminorm": 0.05}
ERROR_KINDS = ("lp", "seminorm", "weighted_lp", "weighted_seminorm", "kernel")
FORMATS = ("csv", "jsonl")


@dataclass(frozen=True)
class EtaPlan:
    mode: str = "uniform"
    fractions: tuple = ()
    ks: tuple = ()
    target: str = "plain"

    @property
    def entries(self):
        """Valores percorridos pela convergência, do maior η para o menor."""
        if self.mode == "uniform":
            return tuple(sorted(self.fractions, reverse=True))
        return tuple(sorted(self.ks))


@dataclass(frozen=True)
class ExperimentConfig:
    domain: OpenSetSpec
    function: str
    function_params: dict = field(default_factory=dict)
    sobolev: SobolevParams = None
    epsilon: float = DEFAULT_EPSILON
    max_generation: int = DEFAULT_GENERATION
    weight: dict | None = None
    kernel: dict | None = None
    eta: EtaPlan = EtaPlan()
    errors: tuple = ("lp", "seminorm")
    quadrature: QuadratureConfig = QuadratureConfig()
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    seed: int = 0
    override_precheck: bool = False
    output_path: str | None = None
    output_format: str = "csv"
    source: str = ""

    @property
    def sha256(self):
        return hashlib.sha256(self.source.encode("utf-8")).hexdigest()

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def with_overrides(self, seed=None, quad_order=None, max_generation=None, out=None, fmt=None,
                       override_precheck=None):
        """Aplica as flags da linha de comando por cima do arquivo."""
        mudancas = {}
        quad = self.quadrature
        if seed is not None:
            mudancas["seed"] = int(seed)
            quad = quad.replace(seed=int(seed))
        if quad_order is not None:
            quad = quad.replace(order=int(quad_order))
        mudancas["quadrature"] = quad
        if max_generation is not None:
            mudancas["max_generation"] = int(max_generation)
        if out is not None:
            mudancas["output_path"] = str(out)
        if fmt is not None:
            mudancas["output_format"] = fmt
        if override_precheck:
            mudancas["override_precheck"] = True
        novo = self.replace(**mudancas)
        problemas = _check_ranges(novo)
        if problemas:
            raise ConfigError(problemas)
        return novo

    def to_dict(self):
        return {
            "domain": self.domain.to_dict(),
            "epsilon": self.epsilon,
            "max_generation": self.max_generation,
            "function": {"name": self.function, "params": self.function_params},
            "sobolev": {"s": self.sobolev.s, "p": self.sobolev.p},
            "weight": self.weight,
            "kernel": self.kernel,
            "eta": dataclasses.asdict(self.eta),
            "errors": list(self.errors),
            "quadrature": self.quadrature.to_dict(),
            "tolerances": self.tolerances,
            "seed": self.seed,
            "override_precheck": self.override_precheck,
            "output": {"path": self.output_path, "format": self.output_format},
        }


def _check_ranges(cfg):
    problemas = []
    if not (cfg.epsilon > 0 and (1 + cfg.epsilon) ** 2 < 1.25):
        problemas.append(f"epsilon = {cfg.epsilon} viola (1+ε)² < 5/4")
    if not 1 <= cfg.max_generation <= MAX_GENERATION:
        problemas.append(f"max_generation = {cfg.max_generation} fora de [1, {MAX_GENERATION}]")
    if cfg.output_format not in FORMATS:
        problemas.append(f"formato de saída desconhecido: {cfg.output_format!r}")
    return problemas


# ==================== PARSER ====================

def _section(raw, key, problemas, default=None):
    valor = raw.get(key, default)
    if valor is not None and not isinstance(valor, dict):
        problemas.append(f"'{key}' deve ser um objeto")
        return default
    return valor


def _parse_domain(raw, problemas):
    bruto = raw.get("domain")
    if not isinstance(bruto, dict):
        problemas.append("'domain' ausente ou inválido")
        return None
    try:
        return OpenSetSpec.from_dict(bruto)
    except (FracDenseError, KeyError, TypeError, ValueError) as exc:
        problemas.append(f"domain: {exc}")
        return None


def _parse_sobolev(raw, dim, problemas):
    bruto = _section(raw, "sobolev", problemas, {}) or {}
    try:
        return SobolevParams(float(bruto.get("s", 0.5)), float(bruto.get("p", 2.0)), dim or 1)
    except (FracDenseError, TypeError, ValueError) as exc:
        problemas.append(f"sobolev: {exc}")
        return None


def _parse_weight(raw, spec, problemas):
    bruto = _section(raw, "weight", problemas)
    if not bruto:
        return None
    nome = bruto.get("name")
    if nome not in WEIGHTS:
        problemas.append(f"peso desconhecido: {nome!r}")
        return None
    classe = bruto.get("class")
    if classe is not None and classe not in WEIGHT_CLASSES:
        problemas.append(f"classe de peso desconhecida: {classe!r}")
        return None
    params = dict(bruto.get("params") or {})
    zero_set = [z if isinstance(z, list) else [z] for z in bruto.get("zero_set") or []]
    if spec is None:
        return bruto
    centro = params.get("center")
    if centro is not None and len(np.atleast_1d(centro)) != spec.dim:
        problemas.append(f"peso: centro com dimensão {len(np.atleast_1d(centro))} ≠ {spec.dim}")
        return None
    if any(len(z) != spec.dim for z in zero_set):
        problemas.append("peso: ponto do zero_set com dimensão incorreta")
        return None
    try:
        w = make_weight(nome, spec.dim, params, classe, [tuple(z) for z in zero_set])
    except (FracDenseError, TypeError) as exc:
        problemas.append(f"peso: {exc}")
        return None
    if w.kind == "continuous":
        zeros = w.zeros_in(spec)
        declarados = {tuple(map(float, z)) for z in zero_set}
        faltando = [z for z in zeros if tuple(map(float, z)) not in declarados]
        if faltando:
            problemas.append(f"peso contínuo com zeros em Ω {faltando} sem zero_set declarado")
    return {"name": nome, "params": params, "class": w.kind, "zero_set": zero_set}


def _parse_kernel(raw, problemas):
    bruto = _section(raw, "kernel", problemas)
    if not bruto:
        return None
    if bruto.get("name") not in KERNELS:
        problemas.append(f"núcleo desconhecido: {bruto.get('name')!r}")
        return None
    return {"name": bruto["name"], "params": dict(bruto.get("params") or {})}


def _parse_eta(raw, epsilon, problemas):
    bruto = _section(raw, "eta", problemas, {}) or {}
    modo = bruto.get("mode", "uniform")
    if modo == "uniform":
        fracoes = tuple(float(v) for v in bruto.get("fractions", [epsilon / 4]))
        if not fracoes:
            problemas.append("eta: lista de frações vazia")
        for fr in fracoes:
            if fr <= 0:
                problemas.append(f"fraction = {fr} deve ser positiva")
            elif fr >= epsilon / 2:
                problemas.append(f"fraction ≥ ε/2: {fr} ≥ {epsilon / 2}")
        return EtaPlan("uniform", fracoes)
    if modo == "adaptive":
        ks = tuple(bruto.get("k", [1, 2, 4, 8]))
        if not ks:
            problemas.append("eta: lista de k vazia")
        if any(not isinstance(k, int) or k < 1 for k in ks):
            problemas.append(f"eta: k deve ser inteiro ≥ 1 ({list(ks)})")
        alvo = bruto.get("target", "plain")
        if alvo not in MODES:
            problemas.append(f"eta: alvo desconhecido {alvo!r}")
        return EtaPlan("adaptive", (), ks, alvo)
    problemas.append(f"eta: modo desconhecido {modo!r}")
    return EtaPlan()


def parse_config(text):
    """Texto JSON → ExperimentConfig validada, ou ConfigError com todas as violações."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"JSON inválido: {exc}"]) from None
    if not isinstance(raw, dict):
        raise ConfigError(["a configuração deve ser um objeto JSON"])
    problemas = []

    spec = _parse_domain(raw, problemas)
    dim = spec.dim if spec is not None else None
    epsilon = float(raw.get("epsilon", DEFAULT_EPSILON))
    sobolev = _parse_sobolev(raw, dim, problemas)

    funcao = _section(raw, "function", problemas, {}) or {}
    nome = funcao.get("name")
    params = dict(funcao.get("params") or {})
    if nome not in FUNCTIONS:
        problemas.append(f"função desconhecida no catálogo: {nome!r}")
    elif spec is not None:
        for chave in ("lo", "hi", "center"):
            if chave in params and len(np.atleast_1d(params[chave])) != spec.dim:
                problemas.append(f"function.params.{chave} com dimensão incorreta (esperado {spec.dim})")
        try:
            catalog_function(nome, spec, params)
        except FracDenseError as exc:
            problemas.append(f"function: {exc}")

    weight = _parse_weight(raw, spec, problemas)
    kernel = _parse_kernel(raw, problemas)
    eta = _parse_eta(raw, epsilon, problemas)

    erros = tuple(raw.get("errors", ["lp", "seminorm"]))
    for e in erros:
        if e not in ERROR_KINDS:
            problemas.append(f"erro desconhecido em 'errors': {e!r}")
    precisa_peso = {"weighted_lp", "weighted_seminorm"} & set(erros) or eta.target in ("weighted", "weighted_lp")
    if precisa_peso and weight is None and raw.get("weight") is None:
        problemas.append("erros/η com peso exigem 'weight'")
    if ("kernel" in erros or eta.target == "kernel") and kernel is None and raw.get("kernel") is None:
        problemas.append("erro/η com núcleo exige 'kernel'")

    try:
        quad = QuadratureConfig.from_dict(_section(raw, "quadrature", problemas, {}))
    except (FracDenseError, TypeError) as exc:
        problemas.append(f"quadrature: {exc}")
        quad = QuadratureConfig()

    tolerancias = dict(DEFAULT_TOLERANCES)
    tolerancias.update(_section(raw, "tolerances", problemas, {}) or {})
    for chave, v in tolerancias.items():
        if not (isinstance(v, (int, float)) and v > 0 and math.isfinite(v)):
            problemas.append(f"tolerância {chave} deve ser positiva")

    saida = _section(raw, "output", problemas, {}) or {}
    semente = int(raw.get("seed", quad.seed))
    cfg = ExperimentConfig(
        domain=spec,
        function=nome,
        function_params=params,
        sobolev=sobolev,
        epsilon=epsilon,
        max_generation=int(raw.get("max_generation", DEFAULT_GENERATION)),
        weight=weight,
        kernel=kernel,
        eta=eta,
        errors=erros,
        quadrature=quad.replace(seed=semente) if "seed" in raw else quad,
        tolerances=tolerancias,
        seed=semente,
        override_precheck=bool(raw.get("override_precheck", False)),
        output_path=saida.get("path"),
        output_format=saida.get("format", "csv"),
        source=text,
    )
    problemas += _check_ranges(cfg)
    if problemas:
        logger.debug("configuração rejeitada: %s", problemas)
        raise ConfigError(problemas)
    return cfg


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
