# fracdense/smoothing.py
"""Mollificador h_δ, operador P^η, funções g_n, módulos de translação e escolha de η.

P^η f = Σ_n (fψ_n) * h_{η(Q_n)}; em cada x só entram os cubos com x ∈ Q_n**.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import pandas as pd

from .catalog import FunctionOracle
from .errors import (
    DegenerateParameterError, DivergentIntegralError, InadmissibleScheduleError, IterationCapError,
    MissingSupportError, TruncationCollarError,
)
from .geometry import Box, as_points, intervals_1d
from .partition import bump_values
from .quadrature import (
    DIVERGENT, INCONCLUSIVE, QuadratureConfig, compensated_sum, gauss_legendre, geometric_verdict,
    graded_rule_1d, polar_pairs_1d, polar_pairs_mc, shells_1d, shells_nd, tensor_rule,
)

logger = logging.getLogger(__name__)

CONV_ORDER = 32
MAX_CONV_NODES = 20_000
HALVING_CAP = 60
# regras (mais leves) usadas nos módulos de g_n dentro da seleção de η
MODULUS_X_PANELS = 4
MODULUS_X_LEVELS = 6
MODULUS_ORDER = 6
MODULUS_R_PANELS = 6
PAIR_CHUNK = 400_000
D_SHELLS = 48


# ==================== MOLLIFICADOR ====================

def mollifier(delta, y, dim=1):
    """h_δ(y) = δ^{-d} h(y/δ)."""
    if not delta > 0:
        raise DegenerateParameterError(f"raio do mollificador δ = {delta} deve ser positivo")
    Y, single = as_points(y, dim)
    vals = bump_values(Y / delta) / delta ** dim
    return float(vals[0]) if single else vals


@lru_cache(maxsize=None)
def convolution_nodes(dim, order=CONV_ORDER):
    """Nós ξ ∈ B(0, 1) e pesos ω ∝ W·h(ξ) (soma 1) da regra tensorial de Gauss–Legendre."""
    order = min(order, int(round(MAX_CONV_NODES ** (1.0 / dim))))
    x, w = gauss_legendre(order)
    malha = np.array(np.meshgrid(*[x] * dim, indexing="ij")).reshape(dim, -1).T
    pesos = np.prod(np.array(np.meshgrid(*[w] * dim, indexing="ij")).reshape(dim, -1), axis=0)
    omega = pesos * bump_values(malha)
    ok = omega > 0
    xi, omega = malha[ok], omega[ok] / omega[ok].sum()
    xi.setflags(write=False)
    omega.setflags(write=False)
    return xi, omega


def mollify(f, delta, x, order=CONV_ORDER):
    """(f * h_δ)(x) com a mesma regra usada por P^η."""
    X, single = as_points(x, f.dim)
    xi, omega = convolution_nodes(f.dim, order)
    out = np.zeros(X.shape[0])
    passo = max(1, PAIR_CHUNK // xi.shape[0])
    for ini in range(0, X.shape[0], passo):
        xs = X[ini:ini + passo]
        Y = (xs[:, None, :] - delta * xi[None, :, :]).reshape(-1, f.dim)
        out[ini:ini + passo] = f.values(Y).reshape(xs.shape[0], -1) @ omega
    return float(out[0]) if single else out


# ==================== AGENDA η ====================

@dataclass(frozen=True, eq=False)
class EtaSchedule:
    """η(Q_n) por cubo, sempre com η(Q_n) < (ε/2)·l(Q_n)."""
    decomp: object
    values: np.ndarray
    k: int | None = None
    mode: str = "uniform"
    fraction: float | None = None
    moduli: np.ndarray | None = None
    thresholds: np.ndarray | None = None
    halvings: np.ndarray | None = None

    def __post_init__(self):
        v = np.asarray(self.values, float)
        if v.shape != (len(self.decomp),):
            raise InadmissibleScheduleError(f"agenda com {v.shape} valores para {len(self.decomp)} cubos")
        limite = self.decomp.epsilon / 2 * self.decomp.edges
        ruins = np.flatnonzero(~((v > 0) & (v < limite)))
        if ruins.size:
            raise InadmissibleScheduleError(
                f"η(Q) < (ε/2)·l(Q) violada em {ruins.size} cubos (primeiro: {int(ruins[0])})")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_values(cls, decomp, values, **meta):
        return cls(decomp, np.asarray(values, float), **meta)

    def __len__(self):
        return self.values.shape[0]

    @property
    def eta_max(self):
        return float(self.values.max()) if len(self) else 0.0

    def to_frame(self):
        n = len(self)
        vazio = np.full(n, np.nan)
        return pd.DataFrame({
            "cube": np.arange(n),
            "generation": self.decomp.gens,
            "edge": self.decomp.edges,
            "eta": self.values,
            "modulus": vazio if self.moduli is None else self.moduli,
            "threshold": vazio if self.thresholds is None else self.thresholds,
            "halvings": np.zeros(n, dtype=int) if self.halvings is None else self.halvings,
        })

    def dump_csv(self, path):
        self.to_frame().to_csv(path, index=False, float_format="%.17g")


def uniform_eta(decomp, fraction):
    """η(Q) = fraction·l(Q), com fraction ∈ (0, ε/2)."""
    if not 0 < fraction < decomp.epsilon / 2:
        raise InadmissibleScheduleError(f"fração {fraction} fora de (0, ε/2) = (0, {decomp.epsilon / 2})")
    return EtaSchedule(decomp, fraction * decomp.edges, mode="uniform", fraction=float(fraction))


# ==================== OPERADOR P^η ====================

def apply_P(f, pou, eta, x, order=CONV_ORDER, strict=True):
    """P^η f(x) somando só os cubos com x ∈ Q_n**.

    Com ``strict`` os pontos fora de ``safe(x, 2)`` (que dependeriam de cubos além da
    geração G) levantam TruncationCollarError.
    """
    dec = pou.decomp
    if eta.decomp is not dec:
        raise InadmissibleScheduleError("agenda η construída para outra decomposição")
    X, single = as_points(x, dec.dim)
    if strict and X.shape[0]:
        fora = ~dec.safe(X, 2.0)
        if fora.any():
            raise TruncationCollarError(
                f"{int(fora.sum())} pontos no colar de truncamento (ex.: {X[np.argmax(fora)].tolist()})")
    pt, cubo = dec.locate(X, dec.star2)
    xi, omega = convolution_nodes(dec.dim, order)
    q = xi.shape[0]
    total = np.zeros(X.shape[0])
    passo = max(1, PAIR_CHUNK // q)
    for ini in range(0, pt.shape[0], passo):
        pp, cc = pt[ini:ini + passo], cubo[ini:ini + passo]
        Y = (X[pp][:, None, :] - eta.values[cc][:, None, None] * xi[None, :, :]).reshape(-1, dec.dim)
        idx = np.repeat(cc, q)
        vals = f.values(Y) * pou.psi_pairs(idx, Y)
        contrib = vals.reshape(pp.shape[0], q) @ omega
        total += np.bincount(pp, weights=contrib, minlength=X.shape[0])
    return float(total[0]) if single else total


def smoothed(f, pou, eta, order=CONV_ORDER, strict=True):
    """P^η f como FunctionOracle."""
    return FunctionOracle(
        f.dim,
        lambda X: apply_P(f, pou, eta, X, order, strict),
        spec=pou.decomp.spec,
        breakpoints=f.breakpoints,
        name=f"P^η {f.name}",
    )


# ==================== fψ_n E g_n ====================

def _star_breaks(decomp, n):
    if decomp.dim != 1:
        return ()
    c, l = decomp.centers[n, 0], decomp.edges[n]
    return tuple(c + sgn * fat * l / 2 for sgn in (-1, 1) for fat in (1.0, decomp.star))


def fpsi(f, pou, n):
    """fψ_n, suportada em Q_n*."""
    estrela = pou.star_box(n)

    def ev(X):
        return f.values(X) * pou.psi_pairs(np.full(X.shape[0], n), X)

    return FunctionOracle(f.dim, ev, spec=f.spec, support=estrela,
                          breakpoints=tuple(sorted(set(f.breakpoints) | set(_star_breaks(pou.decomp, n)))),
                          name=f"{f.name}·ψ_{n}")


@dataclass(frozen=True, eq=False)
class PairOracle:
    """g_n(x, y) = (fψ_n(x) − fψ_n(y))/|x − y|^{d/p+s} em Ω × Ω, zero fora.

    Com ``kernel`` vira (fψ_n(x) − fψ_n(y))·K(|x − y|)^{1/p}. Na diagonal vale 0. O suporte
    é (Q_n* × Ω) ∪ (Ω × Q_n*), com Ω recortado pela caixa envolvente.
    """
    F: FunctionOracle
    spec: object
    star: Box
    n: int
    s: float
    p: float
    kernel: object = None

    @property
    def base_dim(self):
        return self.F.dim

    @property
    def dim(self):
        return 2 * self.F.dim

    @property
    def support(self):
        lo, hi = self.spec.box_lo, self.spec.box_hi
        return Box(tuple(np.concatenate([lo, lo])), tuple(np.concatenate([hi, hi])))

    @property
    def breakpoints(self):
        return self.F.breakpoints

    def omega(self, X):
        return self.spec.contains(X) & np.all((X > self.spec.box_lo) & (X < self.spec.box_hi), axis=1)

    def weight_r(self, R):
        """Fator em r: |x − y|^{−(d/p+s)} ou K(r)^{1/p}."""
        with np.errstate(divide="ignore"):
            if self.kernel is None:
                return R ** -(self.base_dim / self.p + self.s)
            return self.kernel(R) ** (1 / self.p)

    def kernel_p(self, R):
        """|fator em r|^p, que multiplica |Δ|^p nos módulos."""
        with np.errstate(divide="ignore"):
            if self.kernel is None:
                return R ** -(self.base_dim + self.s * self.p)
            return self.kernel(R)

    def values(self, X, Y):
        X = np.asarray(X, float)
        Y = np.asarray(Y, float)
        R = np.linalg.norm(X - Y, axis=1)
        ok = self.omega(X) & self.omega(Y) & (R > 0)
        out = np.zeros(X.shape[0])
        if ok.any():
            out[ok] = (self.F.values(X[ok]) - self.F.values(Y[ok])) * self.weight_r(R[ok])
        return out

    def __call__(self, z):
        Z, single = as_points(z, self.dim)
        d = self.base_dim
        vals = self.values(Z[:, :d], Z[:, d:])
        return float(vals[0]) if single else vals


def make_gn(f, pou, n, s, p, kernel=None):
    if not 0 < s < 1 or p < 1:
        raise DegenerateParameterError(f"(s, p) = ({s}, {p}) fora de (0, 1) × [1, ∞)")
    return PairOracle(fpsi(f, pou, n), pou.decomp.spec, pou.star_box(n), n, float(s), float(p), kernel)


# ==================== MÓDULOS DE TRANSLAÇÃO ====================

def _as_shift(t, dim):
    t = np.atleast_1d(np.asarray(t, float)).reshape(-1)
    if t.shape[0] != dim:
        raise DegenerateParameterError(f"translação com {t.shape[0]} coordenadas em dimensão {dim}")
    return t


def _diagonal_shift(t, d):
    t = np.atleast_1d(np.asarray(t, float)).reshape(-1)
    if t.shape[0] == d:
        return t
    if t.shape[0] == 2 * d and np.allclose(t[:d], t[d:]):
        return t[:d]
    raise DegenerateParameterError("g_n só admite translações diagonais (t, t) em ℝ^{2d}")


def _hull(box, u):
    lo, hi = box.bounds()
    return np.minimum(lo, lo + u), np.maximum(hi, hi + u)


def translation_modulus(g, t, p, quad=None):
    """‖τ_t g − g‖_{L^p}, com τ_t g(x) = g(x − t).

    Para g_n a translação é diagonal, τ_u g_n(x, y) = g_n(x − u, y − u).
    """
    quad = quad or QuadratureConfig()
    if p < 1:
        raise DegenerateParameterError(f"p = {p} < 1")
    if isinstance(g, PairOracle):
        u = _diagonal_shift(t, g.base_dim)
        if not np.any(u):
            return 0.0
        return _pair_modulus_p(g, u, quad) ** (1 / p)
    if g.support is None:
        raise MissingSupportError(f"{g.name or 'função'} sem suporte compacto declarado")
    u = _as_shift(t, g.dim)
    if not np.any(u):
        return 0.0
    return _function_modulus_p(g, u, p, quad) ** (1 / p)


def _function_modulus_p(g, u, p, quad):
    lo, hi = _hull(g.support, u)
    if g.dim == 1:
        br = set(g.breakpoints) | {float(v) + u[0] for v in g.breakpoints} | {lo[0], hi[0]}
        base_lo, base_hi = g.support.bounds()
        br |= {base_lo[0], base_hi[0], base_lo[0] + u[0], base_hi[0] + u[0]}
        xs, w = graded_rule_1d(lo[0], hi[0], br, panels=max(8, quad.resolution // 8), levels=8)
        X = xs[:, None]
    else:
        X, w = tensor_rule(lo, hi, min(quad.resolution, 128))
    dif = np.abs(g.values(X - u) - g.values(X)) ** p
    return compensated_sum(w * dif)


def _pair_modulus_p(g, u, quad):
    """∫∫ |g_n(x − u, y − u) − g_n(x, y)|^p, em polares com y = x + rθ.

    Com A = hull(Q_n* ∪ (Q_n* + u)), o integrando só não se anula se x ∈ A ou y ∈ A, e é
    simétrico em (x, y); por isso basta x ∈ A com peso 2 − 1_A(y).
    """
    F, d = g.F, g.base_dim
    lo, hi = _hull(g.star, u)
    r_max = g.spec.diameter + float(np.linalg.norm(u))
    band = 1e-9 * float(np.min(hi - lo))

    def delta(X, Y, Fx, Fxu, Ox, Oxu):
        Oy, Oyu = g.omega(Y), g.omega(Y - u)
        novo = np.where(Oxu & Oyu, Fxu - F.values(Y - u), 0.0)
        velho = np.where(Ox & Oy, Fx - F.values(Y), 0.0)
        return np.abs(novo - velho)

    def em_A(Y):
        return np.all((Y > lo) & (Y < hi), axis=1)

    if d == 1:
        segs = g.spec.segments()
        uniao = _merge(segs + [(a + u[0], b + u[0]) for a, b in segs])
        br = set(g.breakpoints) | {lo[0], hi[0]}
        br |= {v + u[0] for v in g.breakpoints} | {v for ab in uniao for v in ab}
        xs, wx = graded_rule_1d(lo[0], hi[0], br, order=MODULUS_ORDER, panels=MODULUS_X_PANELS,
                                levels=MODULUS_X_LEVELS)
        X = xs[:, None]
        Fx, Fxu = F.values(X), F.values(X - u)
        Ox, Oxu = g.omega(X), g.omega(X - u)

        def pair_fn(ix, Y, R):
            Y = Y[:, None]
            D = delta(X[ix], Y, Fx[ix], Fxu[ix], Ox[ix], Oxu[ix])
            return D ** g.p * g.kernel_p(R) * (2.0 - em_A(Y))

        r_breaks = g.kernel.breaks if g.kernel is not None else ()
        return polar_pairs_1d(xs, wx, uniao, sorted(br), band, r_max, pair_fn, r_breaks=r_breaks,
                              panels=MODULUS_R_PANELS, order=MODULUS_ORDER)

    rng = np.random.default_rng(quad.seed)

    def pair_fn_mc(X, Y, R):
        D = delta(X, Y, F.values(X), F.values(X - u), g.omega(X), g.omega(X - u))
        return D ** g.p * g.kernel_p(R) * (2.0 - em_A(Y))

    valor, _ = polar_pairs_mc(lo, hi, max(256, quad.samples // 4), band, r_max, pair_fn_mc, rng)
    return max(valor, 0.0)


def _merge(segs):
    out = []
    for a, b in sorted(segs):
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


# ==================== CONSTANTES C_n E D_n ====================

def weighted_constants(decomp, w, n, s, p, quad=None):
    """C_n = sup_{Q_n**} w e D_n = C_n c^{−d−sp} ∫_{Ω∖Q_n**} w(y)/|y − x_n|^{d+sp} dy.

    c = ε/(ε + √d). A integral usa cascas diádicas a partir da meia-aresta de Q_n**.
    """
    d = decomp.dim
    caixa = decomp.box(n, decomp.star2)
    lo, hi = caixa.bounds()
    m = 65 if d == 1 else 17
    malha = np.array(np.meshgrid(*[np.linspace(a, b, m) for a, b in zip(lo, hi)], indexing="ij"))
    C = float(np.max(w.values(malha.reshape(d, -1).T)))
    if C == 0:
        return 0.0, 0.0
    c = decomp.epsilon / (decomp.epsilon + math.sqrt(d))
    expo = d + s * p
    xn = decomp.centers[n]
    r0 = decomp.star2 * decomp.edges[n] / 2

    def integrando(P):
        return w.values(P) / np.linalg.norm(P - xn, axis=1) ** expo

    spec = decomp.spec
    if d == 1:
        segs = intervals_1d(spec)
        pontos = tuple(float(h[0]) for h in spec.holes)
        if w.center is not None:
            pontos += (float(w.center[0]),)

        def fn(y):
            return float(integrando(np.array([[y]]))[0])

        contrib = shells_1d(fn, xn[0], segs, r0, D_SHELLS, False, pontos)
    else:
        def mask(P):
            fora = ~np.all((P > lo) & (P < hi), axis=1)
            return (spec.contains(P) & fora).astype(float)

        contrib = shells_nd(integrando, xn, mask, d, r0, D_SHELLS, False)
    verdict, soma, cauda = geometric_verdict(contrib)
    if verdict == DIVERGENT:
        raise DivergentIntegralError(f"D_{n} diverge: a condição de integrabilidade do peso falha")
    if verdict == INCONCLUSIVE:
        logger.warning("D_%d: teste de cauda inconclusivo, usando a soma parcial", n)
        cauda = 0.0
    return C, C * c ** (-expo) * (soma + cauda)


# ==================== ESCOLHA ADAPTATIVA DE η ====================

MODES = ("plain", "lp", "weighted", "weighted_lp", "kernel")


def _directions(d, seed):
    """Eixos mais 2d direções aleatórias, sem repetir direções opostas."""
    rng = np.random.default_rng(seed)
    aleat = rng.normal(size=(2 * d, d))
    dirs = np.vstack([np.eye(d), aleat / np.linalg.norm(aleat, axis=1, keepdims=True)])
    sinal = np.sign(dirs[np.arange(dirs.shape[0]), np.argmax(np.abs(dirs) > 1e-12, axis=1)])
    dirs = dirs * sinal[:, None]
    _, unicos = np.unique(np.round(dirs, 12), axis=0, return_index=True)
    return dirs[np.sort(unicos)]


def _tests_for(mode, f, pou, n, k, s, p, kernel, constants):
    """Lista de (oráculo, limiar para módulo^p) exigidos pelo modo."""
    idx = n + 1
    base = 1.0 / (k * 2.0 ** idx)

    def inv(x):
        return math.inf if x == 0 else 1.0 / x

    if mode == "plain":
        return [(make_gn(f, pou, n, s, p), base)]
    if mode == "lp":
        return [(fpsi(f, pou, n), base)]
    if mode == "kernel":
        return [(make_gn(f, pou, n, s, p, kernel), base)]
    C, D = constants
    if mode == "weighted":
        return [(make_gn(f, pou, n, s, p), base / 2 * inv(C ** 2)), (fpsi(f, pou, n), base / 4 * inv(D))]
    return [(fpsi(f, pou, n), base / 2 * inv(C))]


def select_eta(f, pou, k, s, p, mode="plain", weight=None, kernel=None, quad=None, seed=0):
    """Agenda η_k: por cubo parte de (ε/2k)·l·½ e divide por 2 até os módulos ficarem abaixo dos limiares.

    O índice j de divisões é achado por busca galopante seguida de bissecção, supondo o
    módulo amostrado monótono em η. Os módulos são o máximo sobre as direções de
    ``_directions``, em |t| = η.
    """
    if k < 1:
        raise DegenerateParameterError(f"k = {k} < 1")
    if mode not in MODES:
        raise DegenerateParameterError(f"modo de escolha de η desconhecido: {mode!r}")
    if mode in ("weighted", "weighted_lp") and weight is None:
        raise DegenerateParameterError(f"modo {mode} exige um peso")
    if mode == "kernel" and kernel is None:
        raise DegenerateParameterError("modo kernel exige um núcleo")
    quad = quad or QuadratureConfig()
    dec = pou.decomp
    M = len(dec)
    sementes = np.random.SeedSequence(seed).spawn(M)
    valores = np.zeros(M)
    moduli = np.zeros(M)
    limiares = np.zeros(M)
    halvings = np.zeros(M, dtype=int)
    travados = []
    for n in range(M):
        semente = int(sementes[n].generate_state(1)[0])
        dirs = _directions(dec.dim, semente)
        q_cubo = quad.replace(seed=semente)
        consts = weighted_constants(dec, weight, n, s, p, quad) if mode in ("weighted", "weighted_lp") else None
        testes = _tests_for(mode, f, pou, n, k, s, p, kernel, consts)
        eta0 = dec.epsilon / (2 * k) * dec.edges[n] / 2
        cache = {}

        def avalia(j):
            if j not in cache:
                eta = eta0 * 2.0 ** (-j)
                pior, mod_principal = -math.inf, 0.0
                for i, (g, thr) in enumerate(testes):
                    m = max(translation_modulus(g, eta * e, p, q_cubo) ** p for e in dirs)
                    if i == 0:
                        mod_principal = m
                    pior = max(pior, m / thr if math.isfinite(thr) else -math.inf)
                cache[j] = (pior < 1.0, mod_principal)
            return cache[j]

        j = _first_passing(avalia)
        if j is None:
            travados.append(n)
            j = HALVING_CAP
        valores[n] = eta0 * 2.0 ** (-j)
        moduli[n] = avalia(j)[1]
        limiares[n] = testes[0][1]
        halvings[n] = j
        logger.debug("cubo %d: η = %.3g após %d divisões", n, valores[n], j)
    agenda = EtaSchedule(dec, valores, k=k, mode=mode, moduli=moduli, thresholds=limiares, halvings=halvings)
    if travados:
        erro = IterationCapError(f"limite de {HALVING_CAP} divisões atingido em {len(travados)} cubos", travados)
        erro.schedule = agenda
        raise erro
    logger.info("agenda η (k=%d, modo %s) escolhida para %d cubos", k, mode, M)
    return agenda


def _first_passing(avalia):
    """Menor j ∈ [0, HALVING_CAP] com avalia(j) aprovado, ou None."""
    if avalia(0)[0]:
        return 0
    ruim, j = 0, 1
    while True:
        if avalia(j)[0]:
            bom = j
            break
        ruim = j
        if j == HALVING_CAP:
            return None
        j = min(2 * j, HALVING_CAP)
    while bom - ruim > 1:
        meio = (bom + ruim) // 2
        if avalia(meio)[0]:
            bom = meio
        else:
            ruim = meio
    return bom
