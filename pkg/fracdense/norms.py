# fracdense/norms.py
"""Normas L^p, seminormas de Gagliardo (simples, com peso, com núcleo) e integrais de admissibilidade.

Todas as funções recebem uma *região* no lugar de Ω: um ``OpenSetSpec`` (Ω ∩ caixa
envolvente) ou uma ``CoveredRegion``. Basta que ela ofereça ``dim``, ``contains``,
``box_lo``/``box_hi``, ``diameter`` e, em d = 1, ``segments()``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import DegenerateParameterError
from .geometry import OpenSetSpec, as_points, decompose, intervals_1d, sphere_directions
from .quadrature import (
    DIVERGENT, FINITE, INCONCLUSIVE, QuadratureConfig, QuadResult, compensated_sum, dyadic_pieces,
    gauss_legendre, layered_result, log_rule, polar_pairs_1d, polar_pairs_mc, quad_layers_1d, seed_streams,
    segments_rule, shells_1d, shells_nd, sphere_area, tensor_rule,
)

logger = logging.getLogger(__name__)

HARDY_LAYERS = 48
SHELL_LEVELS = 48
# divisores da resolução; a faixa diagonal δ fica fixa entre os níveis
LEVELS = (4, 2, 1)
GROWTH = 1.5


# ==================== PARÂMETROS ====================

@dataclass(frozen=True)
class SobolevParams:
    s: float
    p: float
    d: int = 1

    def __post_init__(self):
        if not 0 < self.s < 1:
            raise DegenerateParameterError(f"s = {self.s} fora de (0, 1)")
        if not 1 <= self.p < math.inf:
            raise DegenerateParameterError(f"p = {self.p} fora de [1, ∞)")
        if self.d not in (1, 2, 3):
            raise DegenerateParameterError(f"dimensão {self.d} não suportada")

    @property
    def sp(self):
        return self.s * self.p

    @property
    def exponent(self):
        return self.d + self.sp

    def to_dict(self):
        return {"s": self.s, "p": self.p, "d": self.d}


# ==================== PESOS ====================

WEIGHT_CLASSES = ("locally-comparable", "continuous")


@dataclass(frozen=True, eq=False)
class Weight:
    """w ≥ 0 avaliada em lote; ``zeros`` são os zeros conhecidos de w e ``zero_set`` os declarados."""
    dim: int
    evaluator: Callable
    kind: str = "locally-comparable"
    zero_set: tuple = ()
    zeros: tuple = ()
    center: tuple | None = None
    name: str = ""

    def __post_init__(self):
        if self.kind not in WEIGHT_CLASSES:
            raise DegenerateParameterError(f"classe de peso desconhecida: {self.kind!r}")

    def values(self, X):
        X = np.asarray(X, float)
        return np.asarray(self.evaluator(X), float).reshape(-1) if X.shape[0] else np.zeros(0)

    def __call__(self, x):
        X, single = as_points(x, self.dim)
        v = self.values(X)
        return float(v[0]) if single else v

    def zeros_in(self, spec):
        if not self.zeros:
            return ()
        Z = np.asarray(self.zeros, float).reshape(-1, self.dim)
        return tuple(tuple(z) for z in Z[spec.contains(Z)])

    def reduced_domain(self, spec):
        """Ω' = Ω ∖ {w = 0}: os zeros declarados viram furos de Ω."""
        if not self.zero_set:
            return spec
        Z = np.asarray(self.zero_set, float).reshape(-1, self.dim)
        dentro = Z[spec.contains(Z)]
        return spec.with_holes(dentro) if dentro.shape[0] else spec

    def sup_on(self, X):
        v = self.values(X)
        return float(np.max(v)) if v.size else 0.0


def constant_weight(dim, value=1.0, kind="locally-comparable", zero_set=()):
    v = float(value)
    if v < 0:
        raise DegenerateParameterError("peso deve ser não negativo")
    return Weight(dim, lambda X: np.full(X.shape[0], v), kind, tuple(zero_set), name=f"constant({v:g})")


def power_weight(dim, beta, center=None, kind=None, zero_set=()):
    """w(x) = |x − center|^β (β > 0 zera no centro; β < 0 é singular nele)."""
    b = float(beta)
    c = np.zeros(dim) if center is None else np.atleast_1d(np.asarray(center, float))
    if c.shape[0] != dim:
        raise DegenerateParameterError("centro do peso com dimensão incorreta")
    if kind is None:
        kind = "continuous" if b > 0 else "locally-comparable"

    def ev(X):
        r = np.linalg.norm(X - c, axis=1)
        with np.errstate(divide="ignore"):
            return r ** b

    zeros = (tuple(c),) if b > 0 else ()
    return Weight(dim, ev, kind, tuple(tuple(np.atleast_1d(z)) for z in zero_set), zeros, tuple(c),
                  name=f"|x−c|^{b:g}")


WEIGHTS = {"constant": constant_weight, "power": power_weight}


def make_weight(name, dim, params=None, kind=None, zero_set=()):
    try:
        factory = WEIGHTS[name]
    except KeyError:
        raise DegenerateParameterError(f"peso desconhecido: {name!r}") from None
    kwargs = dict(params or {})
    if kind is not None:
        kwargs["kind"] = kind
    kwargs["zero_set"] = tuple(zero_set or ())
    return factory(dim, **kwargs)


@dataclass
class LocalComparability:
    inf: float
    sup: float
    constant: float
    comparable: bool


def local_comparability(w, box, samples=4096, seed=0):
    """inf/sup amostrados de w numa caixa compacta e se 1/C ≤ w ≤ C vale para algum C."""
    lo, hi = box.bounds()
    rng = np.random.default_rng(seed)
    cantos = np.array(np.meshgrid(*zip(lo, hi), indexing="ij")).reshape(w.dim, -1).T
    X = np.vstack([lo + (hi - lo) * rng.uniform(size=(samples, w.dim)), cantos, ((lo + hi) / 2)[None]])
    v = w.values(X)
    vmin, vmax = float(np.min(v)), float(np.max(v))
    ok = vmin > 0 and math.isfinite(vmax)
    const = max(vmax, 1 / vmin) if ok else math.inf
    return LocalComparability(vmin, vmax, const, ok)


# ==================== NÚCLEOS ====================

@dataclass(frozen=True, eq=False)
class KernelSpec:
    """Núcleo radial K(r) ≥ 0; ``breaks`` marca descontinuidades em r."""
    evaluator: Callable
    breaks: tuple = ()
    closed_form: Callable | None = None
    name: str = ""

    def __call__(self, r):
        r = np.asarray(r, float)
        with np.errstate(divide="ignore", over="ignore"):
            return np.asarray(self.evaluator(r), float)

    def admissibility_closed_form(self, d, p):
        return None if self.closed_form is None else self.closed_form(d, p)


def _power_closed_form(alpha):
    def cf(d, p):
        if not d < alpha < p + d:
            return math.inf
        return 1 / (p + d - alpha) + 1 / (alpha - d)
    return cf


def power_kernel(alpha):
    a = float(alpha)
    return KernelSpec(lambda r: r ** -a, (), _power_closed_form(a), f"r^-{a:g}")


def fractional_kernel(d, s, p):
    """K(r) = r^{−d−sp}: recupera a seminorma de Gagliardo."""
    k = power_kernel(d + s * p)
    return KernelSpec(k.evaluator, (), k.closed_form, f"fractional(s={s:g}, p={p:g})")


def truncated_power_kernel(alpha, radius=1.0):
    a, R = float(alpha), float(radius)
    return KernelSpec(lambda r: np.where(r < R, r ** -a, 0.0), (R,), None, f"1(r<{R:g})·r^-{a:g}")


def exp_power_kernel(alpha, rate=1.0):
    a, c = float(alpha), float(rate)
    return KernelSpec(lambda r: np.exp(-c * r) * r ** -a, (), None, f"e^(-{c:g}r)·r^-{a:g}")


def box_kernel(radius=1.0, height=1.0):
    R, h = float(radius), float(height)
    return KernelSpec(lambda r: np.where(r < R, h, 0.0), (R,), None, f"box({R:g})")


def zero_kernel():
    return KernelSpec(lambda r: np.zeros_like(r), (), lambda d, p: 0.0, "zero")


KERNELS = {
    "fractional": fractional_kernel,
    "power": power_kernel,
    "truncated_power": truncated_power_kernel,
    "exp_power": exp_power_kernel,
    "box": box_kernel,
    "zero": zero_kernel,
}


def make_kernel(name, params=None, sobolev=None):
    try:
        factory = KERNELS[name]
    except KeyError:
        raise DegenerateParameterError(f"núcleo desconhecido: {name!r}") from None
    kwargs = dict(params or {})
    if name == "fractional" and sobolev is not None:
        kwargs.setdefault("d", sobolev.d)
        kwargs.setdefault("s", sobolev.s)
        kwargs.setdefault("p", sobolev.p)
    try:
        return factory(**kwargs)
    except TypeError as exc:
        raise DegenerateParameterError(f"parâmetros inválidos para o núcleo {name}: {exc}") from None


# ==================== AUXILIARES DE REGIÃO ====================

def _values_in(f, region, X):
    """f só nos pontos da região (zero fora), sem avaliar f fora dela."""
    out = np.zeros(X.shape[0])
    m = region.contains(X)
    if m.any():
        out[m] = f.values(X[m])
    return out


def _volume(region, quad):
    if region.dim == 1:
        return float(sum(b - a for a, b in region.segments()))
    X, w = tensor_rule(region.box_lo, region.box_hi, min(quad.resolution, 64), 4)
    return float(np.sum(w[region.contains(X)]))


def _region_rule(region, breaks, quad, factor=1):
    if region.dim == 1:
        xs, ws = segments_rule(region.segments(), breaks, panels=max(2, quad.resolution // factor))
        return xs[:, None], ws
    X, w = tensor_rule(region.box_lo, region.box_hi, max(8, quad.resolution // factor))
    m = region.contains(X)
    return X[m], w[m]


def lp_norm(f, spec, p, w=None, quad=None):
    """(∫ |f|^p w)^{1/p} sobre a região, com erro pela comparação com a malha na metade."""
    quad = quad or QuadratureConfig()
    if p < 1:
        raise DegenerateParameterError(f"p = {p} < 1")
    integrais = []
    for fator in (2, 1):
        X, wq = _region_rule(spec, f.breakpoints, quad, fator)
        vals = np.abs(f.values(X)) ** p
        if w is not None:
            vals = vals * w.values(X)
        integrais.append(compensated_sum(wq * vals))
    grosso, fino = integrais
    valor = fino ** (1 / p)
    erro = abs(valor - grosso ** (1 / p)) if quad.report_error else 0.0
    return QuadResult(valor, erro, FINITE, "tensor-grid", quad.resolution, None, "lp_norm")


# ==================== MOTOR DAS SEMINORMAS ====================

def _lipschitz_hint(F, region, delta, rng, samples=4000):
    """Constante de Lipschitz declarada ou estimada (×1.5) em pares que não cruzam saltos."""
    if F.lipschitz is not None:
        return F.lipschitz
    d = region.dim
    if d == 1:
        xs, _ = segments_rule(region.segments(), F.breakpoints, panels=64, levels=4)
        X = rng.choice(xs, size=samples)[:, None]
    else:
        X = region.box_lo + (region.box_hi - region.box_lo) * rng.uniform(size=(samples, d))
    theta = rng.normal(size=X.shape)
    theta /= np.linalg.norm(theta, axis=1, keepdims=True)
    h = delta * rng.uniform(1.0, 4.0, size=X.shape[0])
    Y = X + h[:, None] * theta
    ok = region.contains(X) & region.contains(Y)
    if d == 1 and F.breakpoints:
        b = np.asarray(F.breakpoints)
        lo, hi = np.minimum(X[:, 0], Y[:, 0]), np.maximum(X[:, 0], Y[:, 0])
        ok &= ~np.any((lo[:, None] <= b[None, :]) & (b[None, :] <= hi[:, None]), axis=1)
    if not ok.any():
        return 0.0
    dif = np.abs(F.values(X[ok]) - F.values(Y[ok])) / h[ok]
    return 1.5 * float(np.max(dif))


def band_bound(F, region, p, kernel, delta, quad, weight_sup=1.0, lipschitz=None):
    """Cota para a contribuição dos pares com |x − y| < δ (vai para a barra de erro)."""
    if delta <= 0:
        return 0.0
    d = region.dim
    S = sphere_area(d)
    vol = _volume(region, quad)
    i_lip, _ = integrate.quad(lambda r: r ** (p + d - 1) * float(kernel(r)), 0.0, delta, limit=200)
    termo = (lipschitz or 0.0) ** p * vol * S * i_lip
    if F.jump_perimeter > 0 and F.jump_height > 0:
        i_salto, _ = integrate.quad(lambda r: r ** d * float(kernel(r)), 0.0, delta, limit=200)
        termo += F.jump_height ** p * F.jump_perimeter * S * i_salto
    return termo * weight_sup ** 2


def _pairs_1d(F, region, p, kernel, weight, quad, fator, delta):
    segs = region.segments()
    if not segs:
        return 0.0, 0.0
    xs, wx = segments_rule(segs, F.breakpoints, panels=max(2, quad.resolution // fator))
    Fx = F.values(xs[:, None])
    Wx = weight.values(xs[:, None]) if weight is not None else None

    def pair_fn(ix, Y, R):
        vals = np.abs(Fx[ix] - F.values(Y[:, None])) ** p * kernel(R)
        if Wx is not None:
            vals = vals * Wx[ix] * weight.values(Y[:, None])
        return vals

    total = polar_pairs_1d(xs, wx, segs, F.breakpoints, delta, region.diameter, pair_fn,
                           r_breaks=kernel.breaks)
    return total, 0.0


def _pairs_mc(F, region, p, kernel, weight, quad, fator, delta, rng):
    def pair_fn(X, Y, R):
        m = region.contains(X) & region.contains(Y)
        vals = np.zeros(X.shape[0])
        if m.any():
            v = np.abs(F.values(X[m]) - F.values(Y[m])) ** p * kernel(R[m])
            if weight is not None:
                v = v * weight.values(X[m]) * weight.values(Y[m])
            vals[m] = v
        return vals

    return polar_pairs_mc(region.box_lo, region.box_hi, max(64, quad.samples // fator), delta,
                          region.diameter, pair_fn, rng)


def pair_seminorm(F, region, p, kernel, weight=None, quad=None, name="seminorm"):
    """(∫∫ |F(x) − F(y)|^p w(x)w(y) K(|x − y|))^{1/p} em três níveis de refinamento.

    Níveis N/4, N/2 e N com a mesma faixa δ. O erro soma a variação entre os dois últimos níveis,
    a cota da faixa diagonal e, em Monte Carlo, dois erros padrão. Crescimento ≥ 1.5 em dois
    refinamentos seguidos marca divergência.
    """
    quad = quad or QuadratureConfig()
    d = region.dim
    metodo = quad.method_for(d)
    rngs = seed_streams(quad.seed, len(LEVELS) + 1)
    valores, desvios = [], []
    delta = quad.band
    for fator, rng in zip(LEVELS, rngs):
        if metodo == "tensor-grid" and d == 1:
            v, sd = _pairs_1d(F, region, p, kernel, weight, quad, fator, delta)
        elif metodo == "tensor-grid":
            v, sd = _pairs_grid(F, region, p, kernel, weight, quad, fator, delta)
        else:
            v, sd = _pairs_mc(F, region, p, kernel, weight, quad, fator, delta, rng)
        valores.append(v)
        desvios.append(sd)
    grosso, medio, fino = valores
    resolucao = quad.resolution if metodo == "tensor-grid" else quad.samples
    semente = quad.seed if metodo == "monte-carlo" else None
    if not all(math.isfinite(v) for v in valores) or (
            grosso > 0 and medio > 0 and medio / grosso >= GROWTH and fino / medio >= GROWTH):
        logger.warning("%s: estimativa cresce sob refinamento, marcada como divergente", name)
        return QuadResult(math.inf, math.inf, DIVERGENT, metodo, resolucao, semente, name)
    if not quad.report_error:
        return QuadResult(fino ** (1 / p), 0.0, FINITE, metodo, resolucao, semente, name)
    w_sup = 1.0
    if weight is not None:
        X, _ = _region_rule(region, (), quad.replace(resolution=64), 1)
        w_sup = weight.sup_on(X)
    lip = _lipschitz_hint(F, region, quad.band, rngs[-1])
    erro_int = abs(fino - medio) + band_bound(F, region, p, kernel, quad.band, quad, w_sup, lip) + 2 * desvios[-1]
    valor = fino ** (1 / p)
    erro = (fino + erro_int) ** (1 / p) - valor
    return QuadResult(valor, erro, FINITE, metodo, resolucao, semente, name)


def _pairs_grid(F, region, p, kernel, weight, quad, fator, delta):
    """Versão determinística para d ≥ 2: x na malha tensorial, (r, θ) em regra polar."""
    d = region.dim
    X, wx = _region_rule(region, (), quad.replace(resolution=max(8, quad.resolution // 8)), fator)
    if X.shape[0] == 0:
        return 0.0, 0.0
    dirs = _directions(d)
    peso_dir = sphere_area(d) / dirs.shape[0]
    r, wr = _radial_rule(delta, region.diameter)
    Fx = F.values(X)
    total = 0.0
    for j in range(dirs.shape[0]):
        Y = (X[:, None, :] + r[None, :, None] * dirs[j][None, None, :]).reshape(-1, d)
        fy = _values_in(F, region, Y)
        dentro = region.contains(Y)
        vals = np.abs(np.repeat(Fx, r.shape[0]) - fy) ** p * np.tile(kernel(r) * r ** (d - 1) * wr, X.shape[0])
        vals = np.where(dentro, vals, 0.0)
        if weight is not None:
            vals = vals * np.repeat(weight.values(X), r.shape[0]) * np.where(dentro, weight.values(Y), 0.0)
        total += compensated_sum(vals.reshape(X.shape[0], -1).sum(axis=1) * wx) * peso_dir
    return total, 0.0


def _directions(d):
    return sphere_directions(d, 64 if d == 2 else 256)


def _radial_rule(delta, r_max):
    r, w = log_rule(np.array([max(delta, 1e-12)]), np.array([r_max]))
    return r[0], w[0]


# ==================== SEMINORMAS PÚBLICAS ====================

def gagliardo(f, spec, params, quad=None):
    """[f]_{W^{s,p}} sobre a região."""
    k = fractional_kernel(spec.dim, params.s, params.p)
    return pair_seminorm(f, spec, params.p, k, None, quad, "gagliardo")


def weighted_gagliardo(f, spec, params, w, quad=None):
    """Seminorma com peso w(x)w(y); pesos contínuos usam Ω' = Ω ∖ {w = 0}."""
    regiao = spec
    if w.kind == "continuous" and isinstance(spec, OpenSetSpec):
        regiao = w.reduced_domain(spec)
    k = fractional_kernel(spec.dim, params.s, params.p)
    return pair_seminorm(f, regiao, params.p, k, w, quad, "weighted_gagliardo")


def kernel_seminorm(f, spec, p, K, quad=None):
    return pair_seminorm(f, spec, p, K, None, quad, "kernel_seminorm")


def x_norm(f, spec, p, K, quad=None):
    """‖f‖_X = (‖f‖_p^p + [f]_K^p)^{1/p}."""
    a = lp_norm(f, spec, p, None, quad)
    b = kernel_seminorm(f, spec, p, K, quad)
    if not b.finite:
        return QuadResult(math.inf, math.inf, b.verdict, b.method, b.resolution, b.seed, "x_norm")
    valor = (a.value ** p + b.value ** p) ** (1 / p)
    topo = ((a.value + a.error_estimate) ** p + (b.value + b.error_estimate) ** p) ** (1 / p)
    return QuadResult(valor, topo - valor, FINITE, b.method, b.resolution, b.seed, "x_norm")


# ==================== TERMO DE HARDY ====================

def hardy_term(f, spec, params, quad=None):
    """∫ |f|^p / γ^{sp} por camadas junto a ∂Ω, com teste geométrico de finitude."""
    quad = quad or QuadratureConfig()
    p, sp = params.p, params.sp
    if spec.dim == 1:
        def fn(x):
            X = np.array([[x]])
            g = spec.gamma_points(X)[0]
            return float(abs(f.values(X)[0]) ** p / g ** sp) if g > 0 else 0.0

        sequencias = []
        for a, b in spec.segments():
            h = (b - a) / 2
            esquerda = [(a + u, a + v) for u, v in dyadic_pieces(0.0, h, HARDY_LAYERS, True)]
            direita = [(b - v, b - u) for u, v in dyadic_pieces(0.0, h, HARDY_LAYERS, True)]
            sequencias.append(quad_layers_1d(fn, esquerda, f.breakpoints))
            sequencias.append(quad_layers_1d(fn, direita, f.breakpoints))
        return layered_result(sequencias, "hardy_term", "layered-quad")
    return _hardy_whitney(f, spec, params, quad)


def _hardy_whitney(f, spec, params, quad):
    """d ≥ 2: contribuição por geração de cubos de Whitney; a cauda é extrapolada."""
    base = spec.spec if hasattr(spec, "decomp") else spec
    G = 8 if spec.dim == 2 else 6
    dec = decompose(base, max_generation=G)
    x, w = gauss_legendre(6)
    malha = np.array(np.meshgrid(*[x] * spec.dim, indexing="ij")).reshape(spec.dim, -1).T
    pesos = np.prod(np.array(np.meshgrid(*[w] * spec.dim, indexing="ij")).reshape(spec.dim, -1), axis=0)
    por_geracao = np.zeros(G + 1)
    for n in range(len(dec)):
        c, l = dec.centers[n], dec.edges[n]
        P = c + (l / 2) * malha
        m = spec.contains(P)
        if not m.any():
            continue
        g = spec.gamma_points(P[m])
        vals = np.abs(f.values(P[m])) ** params.p / g ** params.sp
        por_geracao[dec.gens[n]] += compensated_sum(vals * pesos[m]) * (l / 2) ** spec.dim
    nz = np.flatnonzero(por_geracao)
    seq = por_geracao[nz[0]:] if nz.size else por_geracao
    return layered_result([seq], "hardy_term", "whitney-layers", G)


# ==================== CONDIÇÕES DE ADMISSIBILIDADE ====================

def weight_condition(w, spec, params, quad=None):
    """∫_Ω w(x)/(1+|x|)^{d+sp}: cascas diádicas internas e externas em torno do centro do peso."""
    d = spec.dim
    centro = np.zeros(d) if w.center is None else np.asarray(w.center, float)
    expo = d + params.sp

    def integrando(P):
        return w.values(P) / (1 + np.linalg.norm(P, axis=1)) ** expo

    if d == 1:
        segs = intervals_1d(spec)
        pontos = tuple(float(h[0]) for h in spec.holes) + (float(centro[0]),)

        def fn(x):
            return float(integrando(np.array([[x]]))[0])

        dentro = shells_1d(fn, centro[0], segs, 1.0, SHELL_LEVELS, True, pontos)
        fora = shells_1d(fn, centro[0], segs, 1.0, SHELL_LEVELS, False, pontos)
    else:
        def mask(P):
            return spec.contains(P).astype(float)

        dentro = shells_nd(integrando, centro, mask, d, 1.0, SHELL_LEVELS, True)
        fora = shells_nd(integrando, centro, mask, d, 1.0, SHELL_LEVELS, False)
    res = layered_result([dentro, fora], "weight_condition", "dyadic-shells", SHELL_LEVELS)
    if res.verdict == INCONCLUSIVE:
        logger.warning("condição do peso inconclusiva no limite de %d cascas", SHELL_LEVELS)
    return res


def kernel_admissibility(K, d, p, quad=None):
    """∫_0^∞ (x^p ∧ 1) K(x) x^{d−1} dx, separada em (0, 1] e [1, ∞)."""
    def fn(x):
        return min(x ** p, 1.0) * float(K(x)) * x ** (d - 1)

    dentro = quad_layers_1d(fn, dyadic_pieces(0.0, 1.0, SHELL_LEVELS, True), K.breaks)
    fora = quad_layers_1d(fn, dyadic_pieces(0.0, 1.0, SHELL_LEVELS, False), K.breaks)
    return layered_result([dentro, fora], "kernel_admissibility", "dyadic-shells", SHELL_LEVELS)
