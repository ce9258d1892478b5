# fracdense/runner.py
"""Montagem de experimentos, pré-checagens, corridas de convergência e suíte de validação."""

from __future__ import annotations

import json
import logging
import math
import time
from dataclasses import dataclass, field, fields

import numpy as np

from .catalog import catalog_function, support_is_compact
from .config import ExperimentConfig, parse_config
from .errors import DivergentIntegralError, PreconditionError, TruncationCollarError
from .geometry import Box, Complement, CoveredRegion, OpenSetSpec, decompose, is_plump
from .norms import (
    SobolevParams, gagliardo, hardy_term, kernel_admissibility, lp_norm, make_kernel, make_weight,
    weight_condition, weighted_gagliardo, x_norm,
)
from .oracles import (
    check_brute_agreement, check_compact_support, check_gn_sweep, check_lemma_xy, check_overlap,
    check_partition_sum, check_uniform_collapse,
)
from .partition import PartitionOfUnity
from .quadrature import DIVERGENT, QuadratureConfig
from .smoothing import select_eta, smoothed, uniform_eta, weighted_constants

logger = logging.getLogger(__name__)

ENVELOPE_SLACK = 2.0
BAND_DIVISOR = 8


# ==================== EXPERIMENTO ====================

@dataclass
class Experiment:
    config: ExperimentConfig
    spec: OpenSetSpec
    decomp: object
    pou: PartitionOfUnity
    f: object
    params: SobolevParams
    weight: object = None
    kernel: object = None
    region: CoveredRegion = None
    prechecks: dict = field(default_factory=dict)

    @property
    def quad(self):
        return self.config.quadrature


def build_experiment(config):
    """Decomposição, partição, função e pesos/núcleos descritos pela configuração."""
    spec = config.domain
    decomp = decompose(spec, config.epsilon, config.max_generation)
    pou = PartitionOfUnity(decomp)
    f = catalog_function(config.function, spec, config.function_params)
    params = config.sobolev
    weight = None
    if config.weight:
        w = config.weight
        weight = make_weight(w["name"], spec.dim, w.get("params"), w.get("class"),
                             [tuple(z) for z in w.get("zero_set") or []])
    kernel = make_kernel(config.kernel["name"], config.kernel.get("params"), params) if config.kernel else None
    return Experiment(config, spec, decomp, pou, f, params, weight, kernel, CoveredRegion(decomp, 2.0))


# ==================== PRÉ-CHECAGENS ====================

SEMINORM_ERRORS = {"seminorm", "weighted_seminorm", "kernel"}


def _support_inside(exp):
    if not support_is_compact(exp.f):
        return False
    lo, hi = exp.f.support.bounds()
    m = 9 if exp.spec.dim == 1 else 5
    malha = np.array(np.meshgrid(*[np.linspace(a, b, m) for a, b in zip(lo, hi)], indexing="ij"))
    P = malha.reshape(exp.spec.dim, -1).T
    P = P[exp.spec.contains(P) & (exp.f.values(P) != 0)]
    return bool(P.shape[0] == 0 or exp.decomp.safe(P, 2.0).all())


def collar_mass(exp):
    """‖f‖_{L^p} no colar de truncamento (Ω ∩ caixa fora da região coberta)."""
    regiao = exp.region
    colar = exp.f.restricted(lambda X: ~regiao.contains(X),
                             extra_breaks=[v for seg in regiao.segments() for v in seg] if exp.spec.dim == 1 else ())
    return lp_norm(colar, exp.spec, exp.params.p, None, exp.quad.coarser(4)).value


def precheck(exp):
    """Hipóteses da convergência: Hardy finito (ou suporte compacto coberto), peso e núcleo admissíveis.

    Com ``override_precheck`` as falhas só geram aviso.
    """
    cfg = exp.config
    resultados = {}
    falhas = []
    if SEMINORM_ERRORS & set(cfg.errors) or cfg.eta.mode == "adaptive":
        h = hardy_term(exp.f, exp.spec, exp.params, exp.quad)
        resultados["hardy"] = h.value
        resultados["hardy_verdict"] = h.verdict
        if not h.finite and not _support_inside(exp):
            falhas.append(f"termo de Hardy {h.verdict}: a convergência da seminorma não está garantida")
    if exp.weight is not None:
        wc = weight_condition(exp.weight, exp.spec, exp.params, exp.quad)
        resultados["weight_condition"] = wc.value
        resultados["weight_verdict"] = wc.verdict
        if wc.verdict == DIVERGENT:
            falhas.append("condição de integrabilidade do peso diverge")
    if exp.kernel is not None:
        ka = kernel_admissibility(exp.kernel, exp.spec.dim, exp.params.p, exp.quad)
        resultados["kernel_admissibility"] = ka.value
        resultados["kernel_verdict"] = ka.verdict
        if ka.verdict == DIVERGENT:
            falhas.append("integral de admissibilidade do núcleo diverge")
    colar = collar_mass(exp)
    resultados["collar_mass"] = colar
    tol_lp = cfg.tolerances.get("lp", math.inf)
    exp.prechecks = resultados
    if falhas:
        if cfg.override_precheck:
            for msg in falhas:
                logger.warning("pré-checagem ignorada: %s", msg)
        else:
            raise PreconditionError("; ".join(falhas))
    if colar > tol_lp and not cfg.override_precheck:
        raise TruncationCollarError(
            f"massa de f no colar de truncamento ({colar:.3g}) acima da tolerância L^p; aumente G")
    return resultados


# ==================== CONVERGÊNCIA ====================

@dataclass
class ReportRow:
    entry_kind: str
    entry: float
    eta_max: float
    lp_error: float = math.nan
    lp_error_estimate: float = math.nan
    seminorm_error: float = math.nan
    seminorm_error_estimate: float = math.nan
    weighted_lp_error: float = math.nan
    weighted_lp_error_estimate: float = math.nan
    weighted_seminorm_error: float = math.nan
    weighted_seminorm_error_estimate: float = math.nan
    kernel_error: float = math.nan
    kernel_error_estimate: float = math.nan
    hardy: float = math.nan
    envelope: float = math.nan
    envelope_ok: float = math.nan
    wall_time: float = 0.0

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]


def envelope_bound(d, p, k):
    """2·(M/k)^{1/p} com M = 12^{d(p−1)}."""
    M = 12.0 ** (d * (p - 1))
    return ENVELOPE_SLACK * (M / k) ** (1 / p)


def _schedule(exp, entrada):
    cfg = exp.config
    if cfg.eta.mode == "uniform":
        return uniform_eta(exp.decomp, entrada)
    return select_eta(exp.f, exp.pou, int(entrada), exp.params.s, exp.params.p, mode=cfg.eta.target,
                      weight=exp.weight, kernel=exp.kernel, quad=exp.quad, seed=cfg.seed)


def _band_for(eta, band):
    """Faixa diagonal das seminormas bem abaixo do menor η da agenda."""
    positivos = eta.values[eta.values > 0]
    return min(band, float(positivos.min()) / BAND_DIVISOR) if positivos.size else band


def convergence_row(exp, entrada):
    cfg = exp.config
    inicio = time.perf_counter()
    eta = _schedule(exp, entrada)
    dif = smoothed(exp.f, exp.pou, eta, order=exp.quad.order, strict=False) - exp.f
    regiao, p, quad = exp.region, exp.params.p, exp.quad
    quad_par = quad.replace(band=_band_for(eta, quad.band))
    linha = ReportRow("fraction" if cfg.eta.mode == "uniform" else "k", float(entrada), eta.eta_max)
    if "lp" in cfg.errors:
        r = lp_norm(dif, regiao, p, None, quad)
        linha.lp_error, linha.lp_error_estimate = r.value, r.error_estimate
    if "seminorm" in cfg.errors:
        r = gagliardo(dif, regiao, exp.params, quad_par)
        linha.seminorm_error, linha.seminorm_error_estimate = r.value, r.error_estimate
    if "weighted_lp" in cfg.errors:
        r = lp_norm(dif, regiao, p, exp.weight, quad)
        linha.weighted_lp_error, linha.weighted_lp_error_estimate = r.value, r.error_estimate
    if "weighted_seminorm" in cfg.errors:
        r = weighted_gagliardo(dif, regiao, exp.params, exp.weight, quad_par)
        linha.weighted_seminorm_error, linha.weighted_seminorm_error_estimate = r.value, r.error_estimate
    if "kernel" in cfg.errors:
        r = x_norm(dif, regiao, p, exp.kernel, quad_par)
        linha.kernel_error, linha.kernel_error_estimate = r.value, r.error_estimate
    linha.hardy = exp.prechecks.get("hardy", math.nan)
    if cfg.eta.mode == "adaptive" and "seminorm" in cfg.errors:
        linha.envelope = envelope_bound(exp.spec.dim, p, entrada)
        linha.envelope_ok = float(linha.seminorm_error <= linha.envelope)
    linha.wall_time = time.perf_counter() - inicio
    logger.info("linha %s=%g: η_max=%.3g, erro L^p=%.3g, seminorma=%.3g",
                linha.entry_kind, entrada, linha.eta_max, linha.lp_error, linha.seminorm_error)
    return linha


def run_convergence(config, experiment=None):
    """Uma linha por entrada do plano de η, do maior η para o menor."""
    exp = experiment or build_experiment(config)
    precheck(exp)
    linhas = [convergence_row(exp, e) for e in exp.config.eta.entries]
    linhas.sort(key=lambda r: -r.eta_max)
    return linhas


def check_tolerances(rows, tolerances):
    """Violações das tolerâncias na última linha (lista vazia quando tudo passa)."""
    if not rows:
        return ["nenhuma linha de convergência"]
    final = rows[-1]
    problemas = []
    colunas = {"lp": "lp_error", "seminorm": "seminorm_error", "weighted_lp": "weighted_lp_error",
               "weighted_seminorm": "weighted_seminorm_error", "kernel": "kernel_error"}
    for chave, tol in tolerances.items():
        valor = getattr(final, colunas.get(chave, ""), math.nan)
        if math.isnan(valor):
            continue
        if not valor <= tol:
            problemas.append(f"{chave}: erro final {valor:.4g} acima da tolerância {tol:g}")
    return problemas


# ==================== CENÁRIO: COMPLEMENTAR κ-PLUMP ====================

def plump_complement_scenario(radius=1.0, outer=1.8, kappa=0.5, fractions=(0.025, 0.0125), seed=0,
                              max_generation=10, samples=4000):
    """Convergência em Ω = ℝ² ∖ disco fechado, com bump anular que se anula no disco.

    O complementar (o disco) passa antes pelo teste de κ-plumpness.
    """
    caixa = 2.0 * radius
    texto = json.dumps({
        "domain": {"dim": 2, "shapes": [{"type": "exterior", "center": [0.0, 0.0], "radius": radius}],
                   "bbox": [[-caixa, -caixa], [caixa, caixa]]},
        "max_generation": max_generation,
        "function": {"name": "radial_bump", "params": {"center": [0.0, 0.0], "radius": outer, "inner": radius}},
        "sobolev": {"s": 0.5, "p": 2},
        "eta": {"mode": "uniform", "fractions": list(fractions)},
        "errors": ["lp", "seminorm"],
        "quadrature": {"method": "monte-carlo", "samples": samples, "resolution": 32},
        "seed": seed,
    }, sort_keys=True)
    cfg = parse_config(texto)
    veredito = is_plump(Complement(cfg.domain), kappa, 200, 200, seed)
    if not veredito.plump:
        raise PreconditionError(f"complementar não é {kappa}-plump (testemunha {veredito.witness_x})")
    return veredito, run_convergence(cfg)


# ==================== SUÍTE DE VALIDAÇÃO ====================

def _interval(dim=1):
    return OpenSetSpec(dim, (Box((0.0,) * dim, (1.0,) * dim),), ((0.0,) * dim, (1.0,) * dim))


def catalog_suite(spec):
    """As seis funções do catálogo usadas na conferência com a força bruta."""
    return [
        catalog_function("constant", spec, {"value": 2.0}),
        catalog_function("coordinate", spec),
        catalog_function("hat", spec, {"lo": [0.2], "hi": [0.8]}),
        catalog_function("indicator_box", spec, {"lo": [0.0], "hi": [0.5]}),
        catalog_function("distance_power", spec, {"beta": 1.0}),
        catalog_function("product", spec),
    ]


def run_validation(seeds=(1, 2, 3), quick=False, quad=None):
    """Todas as checagens estruturais; relatórios em ordem determinística de nome."""
    quad = quad or QuadratureConfig(resolution=64 if quick else 256)
    relatorios = []
    geracoes = {1: 6 if quick else 10, 2: 4 if quick else 6}
    decomps = {d: decompose(_interval(d), 0.1, geracoes[d]) for d in (1, 2)}
    pou1 = PartitionOfUnity(decomps[1])
    amostras = 2000 if quick else 10_000
    pares = 10_000 if quick else 100_000
    spec1 = decomps[1].spec
    bump = catalog_function("radial_bump", spec1, {"center": [0.5], "radius": 0.2})
    for seed in seeds:
        for d, dec in decomps.items():
            rep = check_overlap(dec, amostras, seed)
            rep.name = f"overlap[d={d}]"
            relatorios.append(rep)
            meio = int(np.argmin(np.linalg.norm(dec.centers - 0.5, axis=1)))
            rep = check_lemma_xy(dec, meio, pares, seed)
            rep.name = f"lemma_xy[d={d}]"
            relatorios.append(rep)
        relatorios.append(check_partition_sum(pou1, amostras, seed))
        relatorios.append(check_compact_support(bump, pou1, uniform_eta(decomps[1], 0.025), 500, seed))
        relatorios.append(check_uniform_collapse(bump, pou1, 0.025, 100, seed))
    params = SobolevParams(0.3, 1.0, 1)
    for f in catalog_suite(spec1):
        relatorios.append(check_brute_agreement(f, spec1, params, 128 if quick else 256, quad))
    relatorios.append(check_gn_sweep(catalog_function("coordinate", spec1), pou1, SobolevParams(0.5, 2.0, 1),
                                     quad, max_generation=3 if quick else 6))
    relatorios.sort(key=lambda r: (r.name, r.seed if r.seed is not None else -1))
    falhas = [r.name for r in relatorios if not r.passed]
    if falhas:
        logger.warning("validação: %d checagens falharam (%s)", len(falhas), ", ".join(falhas))
    else:
        logger.info("validação: %d checagens aprovadas", len(relatorios))
    return relatorios


def weighted_constants_table(exp):
    """(C_n, D_n) por cubo para o peso do experimento (diagnóstico do modo com peso)."""
    linhas = []
    for n in range(len(exp.decomp)):
        try:
            C, D = weighted_constants(exp.decomp, exp.weight, n, exp.params.s, exp.params.p, exp.quad)
        except DivergentIntegralError:
            C, D = math.nan, math.inf
        linhas.append({"cube": n, "edge": float(exp.decomp.edges[n]), "C_n": C, "D_n": D})
    return linhas
