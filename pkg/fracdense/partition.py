# fracdense/partition.py
"""Perfil de bump h e partição da unidade {ψ_n} subordinada aos cubos Q_n*."""

from __future__ import annotations

import logging
import math
from functools import lru_cache

import numpy as np
import pandas as pd
from scipy import integrate
from scipy.spatial import cKDTree
from scipy.special import expit

from .errors import UndefinedRegionError
from .geometry import as_points
from .quadrature import sphere_area

logger = logging.getLogger(__name__)

# lotes de pares (ponto, cubo) avaliados de uma vez
CHUNK = 200_000


# ==================== BUMP ====================

@lru_cache(maxsize=None)
def bump_constant(dim):
    """c_d tal que ∫ c_d·exp(−1/(1−|x|²)) dx = 1."""
    val, _ = integrate.quad(lambda r: math.exp(-1.0 / (1.0 - r * r)) * r ** (dim - 1), 0.0, 1.0,
                            epsabs=0.0, epsrel=1e-13, limit=200)
    return 1.0 / (sphere_area(dim) * val)


def bump_values(X):
    """h em lote (N, d); zero exato para |x| ≥ 1."""
    r2 = np.einsum("ij,ij->i", X, X)
    out = np.zeros(X.shape[0])
    ok = r2 < 1
    out[ok] = bump_constant(X.shape[1]) * np.exp(-1.0 / (1.0 - r2[ok]))
    return out


def bump(dim, x):
    X, single = as_points(x, dim)
    vals = bump_values(X)
    return float(vals[0]) if single else vals


# ==================== RAMPAS ====================

def ramp(t):
    """Degrau C^∞: 0 para t ≤ 0, 1 para t ≥ 1."""
    t = np.asarray(t, float)
    out = (t >= 1).astype(float)
    meio = (t > 0) & (t < 1)
    tm = t[meio]
    out[meio] = expit(1 / (1 - tm) - 1 / tm)
    return out


class PartitionOfUnity:
    """ψ_n = σ_n / Σ_m σ_m, com σ_n = 1 em Q_n e 0 fora de Q_n*.

    A soma no denominador só envolve os vizinhos de n (cubos com Q_m* ∩ Q_n* ≠ ∅),
    guardados numa tabela (M, K) preenchida com −1.
    """

    def __init__(self, decomp):
        self.decomp = decomp
        self.epsilon = decomp.epsilon
        self.neighbors = self._neighbor_table()
        logger.info("partição da unidade: %d cubos, até %d vizinhos", len(decomp), self.neighbors.shape[1])

    @property
    def dim(self):
        return self.decomp.dim

    def _neighbor_table(self):
        dec = self.decomp
        star = dec.star
        listas = [[] for _ in range(len(dec))]
        gens = np.unique(dec.gens)
        grupos = {int(g): np.flatnonzero(dec.gens == g) for g in gens}
        arvores = {g: cKDTree(dec.centers[ids]) for g, ids in grupos.items()}
        for gn, ids_n in grupos.items():
            ln = dec.root_edge * 2.0 ** (-gn)
            for gm, ids_m in grupos.items():
                lm = dec.root_edge * 2.0 ** (-gm)
                raio = star * (ln + lm) / 2
                achados = arvores[gm].query_ball_point(dec.centers[ids_n], r=raio, p=np.inf)
                for n, locais in zip(ids_n, achados):
                    if not locais:
                        continue
                    cand = ids_m[np.asarray(locais)]
                    dist = np.max(np.abs(dec.centers[cand] - dec.centers[n]), axis=1)
                    listas[n].extend(int(m) for m in cand[dist < raio])
        K = max((len(v) for v in listas), default=1)
        tabela = np.full((len(dec), K), -1, dtype=np.int64)
        for n, v in enumerate(listas):
            v = sorted(set(v))
            tabela[n, :len(v)] = v
        tabela.setflags(write=False)
        return tabela

    def sigma(self, idx, Y):
        """σ_idx(Y) para índices (…,) e pontos (…, d) compatíveis."""
        c = self.decomp.centers[idx]
        l = self.decomp.edges[idx][..., None]
        t = ((1 + self.epsilon) * l / 2 - np.abs(Y - c)) / (self.epsilon * l / 2)
        return np.prod(ramp(t), axis=-1)

    def psi_pairs(self, idx, Y):
        """ψ_idx(Y) ponto a ponto, sem checar a região coberta (0 onde Σσ = 0)."""
        idx = np.asarray(idx, dtype=np.int64)
        Y = np.asarray(Y, float)
        out = np.zeros(idx.shape[0])
        passo = max(1, CHUNK // max(1, self.neighbors.shape[1]))
        for ini in range(0, idx.shape[0], passo):
            ii, yy = idx[ini:ini + passo], Y[ini:ini + passo]
            num = self.sigma(ii, yy)
            if not num.any():
                continue
            viz = self.neighbors[ii]
            valido = viz >= 0
            den = self.sigma(np.where(valido, viz, 0), yy[:, None, :])
            den = np.sum(np.where(valido, den, 0.0), axis=1)
            ok = den > 0
            out[ini:ini + passo][ok] = num[ok] / den[ok]
        return out

    def in_star(self, n, X):
        half = self.decomp.star * self.decomp.edges[n] / 2
        return np.all(np.abs(X - self.decomp.centers[n]) < half, axis=1)

    def star_box(self, n):
        return self.decomp.box(n, self.decomp.star)

    def psi(self, n, x):
        X, single = as_points(x, self.dim)
        dentro = self.in_star(n, X)
        out = np.zeros(X.shape[0])
        if dentro.any():
            if not self.decomp.safe(X[dentro], 1.0).all():
                raise UndefinedRegionError(f"ψ_{n} avaliada fora da região coberta")
            out[dentro] = self.psi_pairs(np.full(int(dentro.sum()), n), X[dentro])
        return float(out[0]) if single else out

    def partition_sum(self, x):
        X, single = as_points(x, self.dim)
        if not self.decomp.safe(X, 1.0).all():
            raise UndefinedRegionError("Σψ_n avaliada fora da região coberta")
        pt, cubo = self.decomp.locate(X, self.decomp.star)
        vals = self.psi_pairs(cubo, X[pt])
        soma = np.bincount(pt, weights=vals, minlength=X.shape[0])
        return float(soma[0]) if single else soma


# ==================== CONSTANTE DE LIPSCHITZ ====================

def psi_lipschitz_estimate(pou, n, samples=2000, seed=0, region=None):
    """sup amostrado de |ψ_n(x) − ψ_n(y)|·l(Q_n)/|x − y|.

    x é sorteado em ``region`` (Q_n** por padrão) e y = x + hθ com h log-uniforme em
    l·[10⁻³, 1/2]. Pares que tocam o colar de truncamento dentro de Q_n* são descartados.
    """
    dec = pou.decomp
    d = dec.dim
    l = float(dec.edges[n])
    box = region if region is not None else dec.box(n, dec.star2)
    lo, hi = box.bounds()
    rng = np.random.default_rng(seed)
    X = lo + (hi - lo) * rng.uniform(size=(samples, d))
    theta = rng.normal(size=(samples, d))
    theta /= np.linalg.norm(theta, axis=1, keepdims=True)
    h = l * np.exp(rng.uniform(math.log(1e-3), math.log(0.5), size=samples))
    Y = X + h[:, None] * theta

    def usavel(P):
        return ~pou.in_star(n, P) | dec.safe(P, 1.0)

    ok = usavel(X) & usavel(Y)
    if not ok.any():
        return 0.0
    idx = np.full(int(ok.sum()), n)
    dif = np.abs(pou.psi_pairs(idx, X[ok]) - pou.psi_pairs(idx, Y[ok]))
    return float(np.max(dif * l / h[ok]))


def lipschitz_table(pou, samples=2000, seed=0, cubes=None):
    """Estimativa por cubo (diagnóstico em CSV) com sementes independentes por cubo."""
    cubes = range(len(pou.decomp)) if cubes is None else cubes
    cubes = list(cubes)
    seeds = np.random.SeedSequence(seed).spawn(len(cubes))
    linhas = []
    for n, ss in zip(cubes, seeds):
        est = psi_lipschitz_estimate(pou, n, samples, int(ss.generate_state(1)[0]))
        linhas.append({"cube": n, "generation": int(pou.decomp.gens[n]),
                       "edge": float(pou.decomp.edges[n]), "lipschitz": est})
    return pd.DataFrame(linhas, columns=["cube", "generation", "edge", "lipschitz"])


def lipschitz_constant(pou, samples=2000, seed=0, cubes=None):
    """C* = máximo das estimativas por cubo."""
    tabela = lipschitz_table(pou, samples, seed, cubes)
    return float(tabela["lipschitz"].max()) if len(tabela) else 0.0

