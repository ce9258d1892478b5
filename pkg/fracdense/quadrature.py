# fracdense/quadrature.py
"""Regras de quadratura, registro de resultados e testes de finitude por camadas."""

from __future__ import annotations

import dataclasses
import json
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate
from scipy.special import gamma as gamma_fn

from .errors import DegenerateParameterError
from .geometry import sphere_directions

logger = logging.getLogger(__name__)

METHODS = ("auto", "tensor-grid", "monte-carlo")
FINITE, DIVERGENT, INCONCLUSIVE = "finite", "divergent", "inconclusive"

# regra radial (em log r) usada nas integrais duplas
RADIAL_PANELS = 12
RADIAL_ORDER = 8
PANEL_ORDER = 8
# limite de nós por eixo em grades tensoriais com d ≥ 2
MAX_TENSOR_NODES = 2_000_000


# ==================== CONFIGURAÇÃO ====================

@dataclass(frozen=True)
class QuadratureConfig:
    method: str = "auto"
    resolution: int = 256
    order: int = 32
    band: float = 1e-3
    samples: int = 20000
    seed: int = 0
    report_error: bool = True

    def __post_init__(self):
        problemas = []
        if self.method not in METHODS:
            problemas.append(f"método de quadratura desconhecido: {self.method!r}")
        if self.resolution <= 0:
            problemas.append("resolução deve ser positiva")
        if self.order < 2:
            problemas.append("ordem de Gauss–Legendre deve ser ≥ 2")
        if self.band < 0:
            problemas.append("faixa diagonal deve ser ≥ 0")
        if self.samples <= 0:
            problemas.append("número de amostras deve ser positivo")
        if problemas:
            raise DegenerateParameterError("; ".join(problemas))

    def method_for(self, dim):
        if self.method != "auto":
            return self.method
        return "tensor-grid" if dim == 1 else "monte-carlo"

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def coarser(self, factor):
        """Mesma configuração com resolução/amostras divididas e faixa multiplicada por ``factor``."""
        return self.replace(
            resolution=max(8, self.resolution // factor),
            samples=max(64, self.samples // factor),
            band=self.band * factor,
        )

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, raw):
        campos = {f.name for f in dataclasses.fields(cls)}
        return cls(**{k: v for k, v in (raw or {}).items() if k in campos})


@dataclass
class QuadResult:
    value: float
    error_estimate: float
    verdict: str = FINITE
    method: str = ""
    resolution: int = 0
    seed: int | None = None
    name: str = ""

    @property
    def finite(self):
        return self.verdict == FINITE

    def to_dict(self):
        return dataclasses.asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, default=float)


# ==================== REGRAS BÁSICAS ====================

@lru_cache(maxsize=None)
def gauss_legendre(order):
    x, w = leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def sphere_area(dim):
    """|S^{d-1}| = 2π^{d/2}/Γ(d/2)."""
    return 2 * math.pi ** (dim / 2) / gamma_fn(dim / 2)


def compensated_sum(values):
    return math.fsum(np.asarray(values, float).ravel())


def seed_streams(seed, count):
    """Geradores independentes e reprodutíveis, um por tarefa."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def panel_rule(edges, order=PANEL_ORDER):
    """Gauss–Legendre composta sobre as arestas dadas (ordenadas)."""
    x, w = gauss_legendre(order)
    edges = np.asarray(edges, float)
    a, b = edges[:-1], edges[1:]
    meio, semi = (a + b) / 2, (b - a) / 2
    nodes = (meio[:, None] + semi[:, None] * x[None, :]).ravel()
    weights = (semi[:, None] * w[None, :]).ravel()
    return nodes, weights


def graded_edges(u, v, panels, levels):
    """Painéis uniformes em [u, v] com refinamento geométrico nas duas pontas."""
    uniforme = np.linspace(u, v, panels + 1)
    w = (v - u) / panels
    frac = np.exp2(-np.arange(1, levels + 1, dtype=float))
    return np.unique(np.concatenate([uniforme, u + w * frac, v - w * frac]))


def graded_rule_1d(a, b, breaks=(), order=PANEL_ORDER, panels=32, levels=12):
    """Regra composta em [a, b], cortada nos ``breaks`` e graduada perto de cada corte."""
    pontos = [a] + sorted(c for c in set(breaks) if a < c < b) + [b]
    nodes, weights = [], []
    for u, v in zip(pontos[:-1], pontos[1:]):
        n, w = panel_rule(graded_edges(u, v, panels, levels), order)
        nodes.append(n)
        weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)


def segments_rule(segments, breaks=(), order=PANEL_ORDER, panels=32, levels=12):
    """Regra graduada sobre uma lista de intervalos, com painéis proporcionais ao comprimento."""
    total = sum(b - a for a, b in segments)
    nodes, weights = [np.zeros(0)], [np.zeros(0)]
    for a, b in segments:
        p = max(2, int(round(panels * (b - a) / total))) if total > 0 else 2
        n, w = graded_rule_1d(a, b, breaks, order, p, levels)
        nodes.append(n)
        weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)


def tensor_rule(lo, hi, resolution, order=PANEL_ORDER):
    """Gauss–Legendre composta tensorial numa caixa; retorna nós (N, d) e pesos (N,)."""
    lo, hi = np.asarray(lo, float), np.asarray(hi, float)
    d = lo.shape[0]
    por_eixo = min(resolution, int(MAX_TENSOR_NODES ** (1.0 / d)))
    panels = max(1, por_eixo // order)
    eixos = [panel_rule(np.linspace(lo[i], hi[i], panels + 1), order) for i in range(d)]
    malha = np.meshgrid(*[e[0] for e in eixos], indexing="ij")
    pesos = np.meshgrid(*[e[1] for e in eixos], indexing="ij")
    nodes = np.column_stack([m.ravel() for m in malha])
    weights = np.prod(np.column_stack([p.ravel() for p in pesos]), axis=1)
    return nodes, weights


def log_rule(lo, hi, panels=RADIAL_PANELS, order=RADIAL_ORDER):
    """Regra em t = log r para cada par (lo_i, hi_i); pesos já incluem o jacobiano r.

    Pares com hi ≤ lo recebem peso zero.
    """
    lo = np.asarray(lo, float)
    hi = np.asarray(hi, float)
    ok = (hi > lo) & (lo > 0)
    lo_s = np.where(ok, lo, 1.0)
    hi_s = np.where(ok, hi, 2.0)
    t0, t1 = np.log(lo_s), np.log(hi_s)
    x, w = gauss_legendre(order)
    k = np.arange(panels)
    # (M, panels, order)
    frac = (k[:, None] + (x[None, :] + 1) / 2) / panels
    t = t0[:, None, None] + (t1 - t0)[:, None, None] * frac[None, :, :]
    r = np.exp(t).reshape(lo.shape[0], -1)
    pesos = ((t1 - t0)[:, None, None] / panels * w[None, None, :] / 2).repeat(panels, axis=1)
    pesos = pesos.reshape(lo.shape[0], -1) * r
    pesos[~ok] = 0.0
    return r, pesos


# ==================== INTEGRAIS DUPLAS EM COORDENADAS POLARES ====================

def polar_pairs_1d(x_nodes, x_weights, y_segments, cuts, band, r_max, pair_fn,
                   r_breaks=(), panels=RADIAL_PANELS, order=RADIAL_ORDER, chunk=128):
    """∑_x w_x ∑_{θ=±1} ∫_{band}^{r_max} F(x, x+θr, r) dr para y restrito aos ``y_segments``.

    O intervalo radial de cada (x, θ) é cortado nas extremidades dos segmentos, nos
    ``cuts`` (saltos em y) e nos ``r_breaks`` (saltos do núcleo), e cada pedaço usa a
    regra em log r. ``pair_fn(ix, Y, R)`` recebe índices em ``x_nodes`` e devolve o
    integrando (núcleo incluído).
    """
    band = max(band, 1e-14 * r_max)
    segs = np.asarray(y_segments, float).reshape(-1, 2)
    extremos = segs[np.isfinite(segs)].ravel()
    cortes = np.unique(np.concatenate([extremos, np.asarray(list(cuts), float)]))
    rb = np.asarray(list(r_breaks), float)
    parciais = []
    for ini in range(0, x_nodes.shape[0], chunk):
        xs = x_nodes[ini:ini + chunk]
        wx = x_weights[ini:ini + chunk]
        ix_local = np.arange(xs.shape[0])
        soma = np.zeros(xs.shape[0])
        for theta in (-1.0, 1.0):
            rc = theta * (cortes[None, :] - xs[:, None])
            if rb.size:
                rc = np.column_stack([rc, np.broadcast_to(rb, (xs.shape[0], rb.size))])
            rc = np.where((rc > band) & (rc < r_max), rc, band)
            cs = np.sort(np.column_stack([np.full(xs.shape[0], band), rc, np.full(xs.shape[0], r_max)]), axis=1)
            lo, hi = cs[:, :-1], cs[:, 1:]
            meio = xs[:, None] + theta * (lo + hi) / 2
            dentro = np.zeros(lo.shape, dtype=bool)
            for a, b in segs:
                dentro |= (meio > a) & (meio < b)
            dentro &= hi > lo
            if not dentro.any():
                continue
            linhas, cols = np.nonzero(dentro)
            r, wr = log_rule(lo[linhas, cols], hi[linhas, cols], panels, order)
            ix = np.repeat(linhas, r.shape[1])
            R = r.ravel()
            Y = xs[ix] + theta * R
            vals = pair_fn(ini + ix_local[ix], Y, R) * wr.ravel()
            soma += np.bincount(ix, weights=vals, minlength=xs.shape[0])
        parciais.append(wx * soma)
    return compensated_sum(np.concatenate(parciais)) if parciais else 0.0


def polar_pairs_mc(lo, hi, samples, band, r_max, pair_fn, rng):
    """Estimador de Monte Carlo estratificado da integral dupla em coordenadas polares.

    x é estratificado na caixa [lo, hi]; θ é uniforme na esfera e r log-uniforme em
    [band, r_max]. ``pair_fn(X, Y, R)`` devolve o integrando (núcleo e máscaras incluídos).
    Retorna (estimativa, erro padrão).
    """
    band = max(band, 1e-9 * r_max)
    lo, hi = np.asarray(lo, float), np.asarray(hi, float)
    d = lo.shape[0]
    n = max(1, int(math.ceil(samples ** (1.0 / d))))
    celulas = np.stack(np.meshgrid(*[np.arange(n)] * d, indexing="ij"), axis=-1).reshape(-1, d)
    X = lo + (celulas + rng.uniform(size=celulas.shape)) * (hi - lo) / n
    theta = rng.normal(size=X.shape)
    theta /= np.linalg.norm(theta, axis=1, keepdims=True)
    log_span = math.log(r_max / band)
    R = np.exp(rng.uniform(math.log(band), math.log(r_max), size=X.shape[0]))
    Y = X + R[:, None] * theta
    vals = pair_fn(X, Y, R) * R ** d
    escala = float(np.prod(hi - lo)) * sphere_area(d) * log_span
    media = compensated_sum(vals) / vals.shape[0]
    erro = escala * float(np.std(vals)) / math.sqrt(vals.shape[0])
    return escala * media, erro


# ==================== CAMADAS E TESTE GEOMÉTRICO ====================

def geometric_verdict(contribs, tol=1e-4):
    """Decide finitude de ∑ c_j a partir das razões das últimas camadas.

    Retorna (veredito, soma parcial, cauda estimada). Razões todas < 1 - tol ⇒ finito com
    cauda geométrica; todas ≥ 1 - tol ⇒ divergente; mistura ⇒ inconclusivo.
    """
    a = np.abs(np.asarray(contribs, float))
    if a.size == 0:
        return FINITE, 0.0, 0.0
    if not np.all(np.isfinite(a)):
        return DIVERGENT, math.inf, math.inf
    soma = compensated_sum(a)
    ult = a[-4:]
    if ult[-1] == 0.0:
        return FINITE, soma, 0.0
    if np.any(ult == 0.0):
        return INCONCLUSIVE, soma, math.nan
    razoes = ult[1:] / ult[:-1]
    if np.all(razoes >= 1 - tol):
        return DIVERGENT, math.inf, math.inf
    if np.all(razoes < 1 - tol):
        rho = float(razoes.max())
        return FINITE, soma, float(ult[-1] * rho / (1 - rho))
    return INCONCLUSIVE, soma, math.nan


def combine_verdicts(verdicts):
    verdicts = list(verdicts)
    if DIVERGENT in verdicts:
        return DIVERGENT
    if INCONCLUSIVE in verdicts:
        return INCONCLUSIVE
    return FINITE


def layered_result(sequences, name, method, resolution=0, seed=None, base=0.0):
    """Junta várias sequências de camadas num único QuadResult."""
    vereditos, total, caudas = [], base, []
    for seq in sequences:
        v, s, cauda = geometric_verdict(seq)
        vereditos.append(v)
        total += s
        caudas.append(cauda)
    verdict = combine_verdicts(vereditos)
    if verdict == DIVERGENT:
        value, erro = math.inf, math.inf
    elif verdict == INCONCLUSIVE:
        value, erro = total, math.inf
    else:
        cauda = math.fsum(caudas)
        value, erro = total + cauda, cauda
    if verdict != FINITE:
        logger.warning("%s: veredito %s", name, verdict)
    return QuadResult(value, erro, verdict, method, resolution, seed, name)


def quad_layers_1d(fn, pieces, points=()):
    """Integral adaptativa (scipy) de ``fn`` em cada intervalo de ``pieces``."""
    out = []
    for a, b in pieces:
        if not b > a:
            out.append(0.0)
            continue
        internos = [p for p in points if a < p < b]
        val, _ = integrate.quad(fn, a, b, points=internos or None, limit=200, epsabs=0.0, epsrel=1e-10)
        out.append(val)
    return out


def dyadic_pieces(center, r0, levels, inward):
    """Cascas diádicas [r0 2^{-j-1}, r0 2^{-j}] (inward) ou [r0 2^j, r0 2^{j+1}] ao redor do centro."""
    j = np.arange(levels, dtype=float)
    if inward:
        return list(zip(r0 * np.exp2(-j - 1), r0 * np.exp2(-j)))
    return list(zip(r0 * np.exp2(j), r0 * np.exp2(j + 1)))


def clip_to_segments(a, b, segments):
    """Interseção de [a, b] com a união de segmentos, como lista de intervalos."""
    out = []
    for u, v in segments:
        lo, hi = max(a, u), min(b, v)
        if hi > lo:
            out.append((lo, hi))
    return out


def shells_1d(fn, center, segments, r0, levels, inward, points=()):
    """Contribuição de cada casca diádica (dois lados do centro) para ∫ fn sobre os segmentos."""
    contribs = []
    for ra, rb in dyadic_pieces(0.0, r0, levels, inward):
        pedacos = clip_to_segments(center + ra, center + rb, segments)
        pedacos += clip_to_segments(center - rb, center - ra, segments)
        contribs.append(math.fsum(quad_layers_1d(fn, pedacos, points)))
    return contribs


def shells_nd(fn, center, mask_fn, dim, r0, levels, inward, directions=None, order=16):
    """Versão polar das cascas para d ≥ 2: direções quase uniformes × Gauss–Legendre em r."""
    count = directions or (512 if dim == 2 else 2048)
    dirs = sphere_directions(dim, count)
    peso_dir = sphere_area(dim) / dirs.shape[0]
    x, w = gauss_legendre(order)
    c = np.asarray(center, float)
    contribs = []
    for ra, rb in dyadic_pieces(0.0, r0, levels, inward):
        r = (ra + rb) / 2 + (rb - ra) / 2 * x
        wr = (rb - ra) / 2 * w * r ** (dim - 1)
        P = c + (r[:, None, None] * dirs[None, :, :]).reshape(-1, dim)
        vals = fn(P) * mask_fn(P)
        contribs.append(compensated_sum(vals.reshape(r.shape[0], -1) * wr[:, None]) * peso_dir)
    return contribs
