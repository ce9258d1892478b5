# fracdense/oracles.py
"""Oráculos de força bruta e verificadores de desigualdades.

``brute_gagliardo`` não usa nada de ``norms``: é a conferência independente da seminorma.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DegenerateParameterError
from .geometry import OpenSetSpec, overlap_count
from .norms import gagliardo, lp_norm
from .partition import lipschitz_constant
from .quadrature import QuadratureConfig, QuadResult, compensated_sum, sphere_area
from .smoothing import EtaSchedule, apply_P, fpsi, mollify

logger = logging.getLogger(__name__)

MAX_GRID = 512
PAIR_BLOCK = 2_000_000


# ==================== RELATÓRIO ====================

@dataclass
class CheckReport:
    name: str
    passed: bool
    counterexample: dict | None = None
    samples: dict = field(default_factory=dict)
    seed: int | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(jsonable(self.to_dict()), sort_keys=True)


def jsonable(obj):
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


# ==================== GAGLIARDO POR FORÇA BRUTA ====================

def _grid(spec, n):
    lo, hi = spec.box_lo, spec.box_hi
    h = (hi - lo) / n
    eixos = [lo[i] + (np.arange(n) + 0.5) * h[i] for i in range(spec.dim)]
    X = np.array(np.meshgrid(*eixos, indexing="ij")).reshape(spec.dim, -1).T
    return X, h


def _double_sum(vals, X, cell, p, expo):
    """Σ_{i≠j} |f_i − f_j|^p |x_i − x_j|^{−expo}·cell², em blocos."""
    N = X.shape[0]
    passo = max(1, PAIR_BLOCK // max(N, 1))
    parciais = []
    for ini in range(0, N, passo):
        bloco = slice(ini, ini + passo)
        dist = np.linalg.norm(X[bloco, None, :] - X[None, :, :], axis=2)
        dif = np.abs(vals[bloco, None] - vals[None, :]) ** p
        with np.errstate(divide="ignore", invalid="ignore"):
            termo = np.where(dist > 0, dif / dist ** expo, 0.0)
        parciais.append(termo.sum())
    return compensated_sum(parciais) * cell ** 2


def _diagonal_bound(f, vals, X, h, p, s, d, cells):
    """Cota analítica para os pares na mesma célula."""
    a = p - d - s * p
    if d == 1:
        hh = float(h[0])
        if f.lipschitz is not None:
            lip = f.lipschitz
        else:
            lip = float(np.max(np.abs(np.diff(vals)))) / hh if vals.shape[0] > 1 else 0.0
        # ∫∫_{[0,h]²} |x − y|^a
        cota = lip ** p * 2 * hh ** (a + 2) / ((a + 1) * (a + 2)) * cells
        if f.jump_height > 0 and f.jump_perimeter > 0:
            sp = s * p
            if sp >= 1:
                return math.inf
            saltos = f.jump_perimeter
            cota += 2 * f.jump_height ** p * hh ** (1 - sp) * (2 - 2 ** (1 - sp)) / (sp * (1 - sp)) * saltos
        return cota
    lip = f.lipschitz if f.lipschitz is not None else 0.0
    diam = float(np.linalg.norm(h))
    vol = float(np.prod(h))
    # |x − y| ≤ diam na célula; integral radial de r^{a+d−1} até diam
    return lip ** p * vol * sphere_area(d) * diam ** (a + d) / (a + d) * cells


def brute_gagliardo(f, spec, params, grid_n=256):
    """Soma dupla em malha de pontos médios, sem as células diagonais, mais a cota da diagonal.

    Devolve a seminorma (potência 1/p) como QuadResult; o erro junta a cota da diagonal e a
    diferença para a malha com metade da resolução.
    """
    d = spec.dim
    if d not in (1, 2):
        raise DegenerateParameterError("brute_gagliardo só em d = 1 ou 2")
    grid_n = int(min(grid_n, MAX_GRID))
    p, s = params.p, params.s
    expo = d + s * p
    somas = []
    for n in (max(2, grid_n // 2), grid_n):
        X, h = _grid(spec, n)
        dentro = spec.contains(X)
        Xi = X[dentro]
        vals = f.values(Xi)
        cell = float(np.prod(h))
        somas.append((_double_sum(vals, Xi, cell, p, expo), vals, Xi, h, int(dentro.sum())))
    (s_meio, *_), (s_fino, vals, Xi, h, cells) = somas
    diag = _diagonal_bound(f, vals, Xi, h, p, s, d, cells)
    valor = (s_fino + diag / 2) ** (1 / p)
    topo = (s_fino + diag + abs(s_fino - s_meio)) ** (1 / p)
    return QuadResult(valor, topo - valor, "finite" if math.isfinite(topo) else "inconclusive",
                      "brute-midpoint", grid_n, None, "brute_gagliardo")


# ==================== LEMA |x − y| ≥ c|x − x_n| ====================

def lemma_constant(decomp):
    """c = ε/(ε + √d)."""
    return decomp.epsilon / (decomp.epsilon + math.sqrt(decomp.dim))


def check_lemma_xy(decomp, n, samples=100_000, seed=0, c=None):
    """Amostra y ∈ Q_n* e x ∈ Ω ∖ Q_n** e testa |x − y| ≥ c|x − x_n|.

    Metade das amostras fica rente às faces (x logo fora de Q_n**, y logo dentro de Q_n*),
    onde a desigualdade é mais apertada.
    """
    c = lemma_constant(decomp) if c is None else float(c)
    rng = np.random.default_rng(seed)
    d = decomp.dim
    xn = decomp.centers[n]
    l = float(decomp.edges[n])
    h1, h2 = decomp.star * l / 2, decomp.star2 * l / 2

    metade = samples // 2
    Y = xn + rng.uniform(-h1, h1, size=(samples, d))
    Y[:metade] = _near_faces(rng, xn, h1, -1e-3 * l, metade, d)

    lo, hi = decomp.spec.box_lo, decomp.spec.box_hi
    X = np.empty((0, d))
    tentativas = 0
    while X.shape[0] < samples and tentativas < 50:
        bruto = np.vstack([
            _near_faces(rng, xn, h2, 0.05 * l, samples, d),
            lo + (hi - lo) * rng.uniform(size=(samples, d)),
        ])
        ok = decomp.spec.contains(bruto) & np.any(np.abs(bruto - xn) >= h2, axis=1)
        X = np.vstack([X, bruto[ok]])
        tentativas += 1
    if X.shape[0] == 0:
        return CheckReport("lemma_xy", True, None, {"pairs": 0}, seed, {"c": c, "cube": n})
    X = X[:samples]
    Y = Y[:X.shape[0]]
    lhs = np.linalg.norm(X - Y, axis=1)
    rhs = c * np.linalg.norm(X - xn, axis=1)
    ruins = np.flatnonzero(lhs < rhs)
    detalhes = {"c": c, "cube": n, "min_ratio": float(np.min(lhs / np.maximum(rhs / c, 1e-300)))}
    if ruins.size:
        i = ruins[np.argmin(lhs[ruins] - rhs[ruins])]
        contra = {"x": X[i].tolist(), "y": Y[i].tolist(), "lhs": float(lhs[i]), "rhs": float(rhs[i])}
        logger.info("lemma_xy falhou no cubo %d com c=%.4g", n, c)
        return CheckReport("lemma_xy", False, contra, {"pairs": int(X.shape[0])}, seed, detalhes)
    return CheckReport("lemma_xy", True, None, {"pairs": int(X.shape[0])}, seed, detalhes)


def _near_faces(rng, centro, half, folga, m, d):
    """Pontos a distância |folga| da face da caixa de meia-aresta ``half`` (fora se folga > 0)."""
    P = centro + rng.uniform(-half, half, size=(m, d))
    eixo = rng.integers(0, d, size=m)
    lado = rng.choice([-1.0, 1.0], size=m)
    dist = np.abs(folga) * rng.uniform(0.0, 1.0, size=m)
    P[np.arange(m), eixo] = centro[eixo] + lado * (half + np.sign(folga) * dist)
    return P


# ==================== COTA DE ‖g_n‖ ====================

def calibrated_c(d, p, s, c_star):
    """2^p·max(1, C*^{sp}·∫(|z|^p ∧ 1)|z|^{−d−sp} dz)."""
    sp = s * p
    integral = sphere_area(d) * (1 / (p - sp) + 1 / sp)
    return 2 ** p * max(1.0, c_star ** sp * integral)


def _star_region(decomp, n):
    lo, hi = decomp.box(n, decomp.star).bounds()
    spec = decomp.spec
    lo = np.maximum(lo, spec.box_lo)
    hi = np.minimum(hi, spec.box_hi)
    return OpenSetSpec(spec.dim, spec.shapes, (tuple(lo), tuple(hi)), spec.holes, spec.boundary_resolution)


def check_gn_bound(f, pou, n, params, calibrated, quad=None):
    """‖g_n‖^p ≤ c·([f]^p_{W^{s,p}(Q_n*)} + ‖f‖^p_{L^p(Q_n*)}·l(Q_n)^{−sp})."""
    quad = quad or QuadratureConfig()
    dec = pou.decomp
    p, sp = params.p, params.sp
    lhs_res = gagliardo(fpsi(f, pou, n), dec.spec, params, quad)
    regiao = _star_region(dec, n)
    semi = gagliardo(f, regiao, params, quad)
    norma = lp_norm(f, regiao, p, None, quad)
    rhs = semi.value ** p + norma.value ** p * float(dec.edges[n]) ** (-sp)
    detalhes = {"cube": n, "calibrated_c": calibrated, "lhs_verdict": lhs_res.verdict}
    if not lhs_res.finite:
        contra = {"cube": n, "lhs": "inf", "rhs": rhs}
        return CheckReport("gn_bound", False, contra, {"resolution": quad.resolution}, quad.seed, detalhes)
    lhs = lhs_res.value ** p
    passou = lhs <= calibrated * rhs + 1e-12
    contra = None if passou else {"cube": n, "lhs": lhs, "rhs": rhs, "c_rhs": calibrated * rhs}
    detalhes.update({"lhs": lhs, "rhs": rhs})
    return CheckReport("gn_bound", passou, contra, {"resolution": quad.resolution}, quad.seed, detalhes)


def check_gn_sweep(f, pou, params, quad=None, max_generation=6, samples=2000, seed=0):
    """check_gn_bound em todos os cubos até a geração dada, com C* estimado uma vez."""
    dec = pou.decomp
    cubos = [n for n in range(len(dec)) if dec.gens[n] <= max_generation]
    c_star = lipschitz_constant(pou, samples, seed, cubos)
    c = calibrated_c(dec.dim, params.p, params.s, c_star)
    for n in cubos:
        rep = check_gn_bound(f, pou, n, params, c, quad)
        if not rep.passed:
            rep.details["c_star"] = c_star
            return rep
    return CheckReport("gn_bound", True, None, {"cubes": len(cubos)}, seed, {"calibrated_c": c, "c_star": c_star})


# ==================== SOBREPOSIÇÃO E IDENTIDADES ====================

def check_overlap(decomp, samples=10_000, seed=0):
    """max #{n : x ∈ Q_n**} ≤ 12^d em pontos amostrados na caixa envolvente."""
    rng = np.random.default_rng(seed)
    d = decomp.dim
    lo, hi = decomp.spec.box_lo, decomp.spec.box_hi
    X = lo + (hi - lo) * rng.uniform(size=(samples, d))
    counts = overlap_count(decomp, X)
    limite = 12 ** d
    i = int(np.argmax(counts))
    passou = int(counts[i]) <= limite
    contra = None if passou else {"x": X[i].tolist(), "count": int(counts[i]), "bound": limite}
    return CheckReport("overlap", passou, contra, {"points": samples}, seed,
                       {"max_count": int(counts[i]), "bound": limite,
                        "histogram": np.bincount(counts).tolist()})


def check_partition_sum(pou, samples=10_000, seed=0, tol=1e-12):
    """Σψ_n = 1 na região coberta."""
    rng = np.random.default_rng(seed)
    dec = pou.decomp
    lo, hi = dec.spec.box_lo, dec.spec.box_hi
    X = lo + (hi - lo) * rng.uniform(size=(4 * samples, dec.dim))
    X = X[dec.safe(X, 1.0) & dec.spec.contains(X)][:samples]
    soma = pou.partition_sum(X) if X.shape[0] else np.zeros(0)
    erro = np.abs(soma - 1.0)
    i = int(np.argmax(erro)) if erro.size else 0
    passou = not erro.size or float(erro[i]) <= tol
    contra = None if passou else {"x": X[i].tolist(), "sum": float(soma[i])}
    return CheckReport("partition_sum", passou, contra, {"points": int(X.shape[0])}, seed,
                       {"max_error": float(erro.max()) if erro.size else 0.0})


def check_compact_support(f, pou, eta, samples=2000, seed=0):
    """P^η f = 0 (exatamente) fora da união dos Q_n** cujo Q_n* encontra supp f."""
    dec = pou.decomp
    rng = np.random.default_rng(seed)
    flo, fhi = f.support.bounds()
    slo, shi = np.zeros((len(dec), dec.dim)), np.zeros((len(dec), dec.dim))
    for n in range(len(dec)):
        slo[n], shi[n] = dec.box(n, dec.star).bounds()
    encontra = np.all((slo < fhi) & (shi > flo), axis=1)
    lo, hi = dec.spec.box_lo, dec.spec.box_hi
    X = lo + (hi - lo) * rng.uniform(size=(4 * samples, dec.dim))
    X = X[dec.safe(X, 2.0)]
    pt, cubo = dec.locate(X, dec.star2)
    coberto = np.zeros(X.shape[0], dtype=bool)
    coberto[pt[encontra[cubo]]] = True
    fora = X[~coberto][:samples]
    vals = apply_P(f, pou, eta, fora) if fora.shape[0] else np.zeros(0)
    nz = np.flatnonzero(vals != 0.0)
    passou = nz.size == 0
    contra = None if passou else {"x": fora[nz[0]].tolist(), "value": float(vals[nz[0]])}
    return CheckReport("compact_support", passou, contra, {"points": int(fora.shape[0])}, seed, {})


def check_uniform_collapse(f, pou, fraction, samples=200, seed=0, tol=1e-6):
    """Com η = δ constante nos cubos que importam, P^η f = f * h_δ longe da fronteira.

    δ = fraction·ℓ₀, onde ℓ₀ é a menor aresta dos cubos cujo Q** encontra o suporte de f.
    """
    dec = pou.decomp
    flo, fhi = f.support.bounds()
    lo2, hi2 = np.zeros((len(dec), dec.dim)), np.zeros((len(dec), dec.dim))
    for n in range(len(dec)):
        lo2[n], hi2[n] = dec.box(n, dec.star2).bounds()
    relevantes = np.all((lo2 < fhi) & (hi2 > flo), axis=1)
    ell0 = float(dec.edges[relevantes].min())
    delta = fraction * ell0
    valores = np.where(relevantes, delta, fraction * dec.edges)
    eta = EtaSchedule.from_values(dec, valores, mode="uniform", fraction=fraction)
    rng = np.random.default_rng(seed)
    X = flo + (fhi - flo) * rng.uniform(size=(samples, dec.dim))
    X = X[dec.safe(X, 2.0)]
    a = apply_P(f, pou, eta, X)
    b = mollify(f, delta, X)
    erro = np.abs(a - b)
    i = int(np.argmax(erro)) if erro.size else 0
    passou = not erro.size or float(erro[i]) <= tol
    contra = None if passou else {"x": X[i].tolist(), "P": float(a[i]), "conv": float(b[i])}
    return CheckReport("uniform_collapse", passou, contra, {"points": int(X.shape[0])}, seed,
                       {"delta": delta, "max_error": float(erro.max()) if erro.size else 0.0})


def check_brute_agreement(f, spec, params, grid_n=256, quad=None):
    """gagliardo e brute_gagliardo dentro da soma das barras de erro."""
    quad = quad or QuadratureConfig()
    a = gagliardo(f, spec, params, quad)
    b = brute_gagliardo(f, spec, params, grid_n)
    folga = a.error_estimate + b.error_estimate
    passou = abs(a.value - b.value) <= folga
    contra = None if passou else {"function": f.name, "gagliardo": a.value, "brute": b.value, "tolerance": folga}
    return CheckReport(f"brute_agreement[{f.name}]", passou, contra, {"grid_n": grid_n}, quad.seed,
                       {"gagliardo": a.value, "brute": b.value, "tolerance": folga})
