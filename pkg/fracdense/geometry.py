# fracdense/geometry.py
"""Conjuntos abertos com distância exata ao complementar e decomposição de Whitney truncada.

Ω é descrito como união finita de primitivas (caixa, bola, semiespaço, espaço furado,
exterior de bola) menos um conjunto finito de pontos (``holes``). Cada primitiva sabe a
sua distância ao próprio complementar; a união combina essas distâncias.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import asdict, dataclass
from functools import cached_property

import numpy as np
import pandas as pd
from scipy.linalg import null_space
from scipy.spatial import cKDTree
from scipy.spatial.distance import pdist

from .errors import ComplementEmptyError, DegenerateParameterError, GeometryError

logger = logging.getLogger(__name__)

# ==================== CONSTANTES ====================
DEFAULT_EPSILON = 0.1
MAX_DIM = 3
MAX_GENERATION = 20
BOUNDARY_RESOLUTION = 200


def as_points(x, dim):
    """Converte ponto único ou lote em array (N, d).

    Retorna ``(pontos, unico)``. Para d = 1 um vetor de comprimento N é lido como N pontos.
    """
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        return arr.reshape(1, 1), True
    if arr.ndim == 1:
        if dim == 1:
            return arr.reshape(-1, 1), arr.shape[0] == 1
        if arr.shape[0] != dim:
            raise GeometryError(f"ponto com {arr.shape[0]} coordenadas em dimensão {dim}")
        return arr.reshape(1, dim), True
    if arr.ndim == 2 and arr.shape[1] == dim:
        return arr, False
    raise GeometryError(f"formato de pontos {arr.shape} incompatível com dimensão {dim}")


def sphere_directions(dim, count):
    """Direções quase uniformes na esfera unitária (Fibonacci em 3D)."""
    if dim == 1:
        return np.array([[-1.0], [1.0]])
    if dim == 2:
        ang = 2 * np.pi * (np.arange(count) + 0.5) / count
        return np.column_stack([np.cos(ang), np.sin(ang)])
    k = np.arange(count) + 0.5
    phi = np.arccos(1 - 2 * k / count)
    theta = np.pi * (1 + 5 ** 0.5) * k
    return np.column_stack([np.cos(theta) * np.sin(phi), np.sin(theta) * np.sin(phi), np.cos(phi)])


# ==================== PRIMITIVAS ====================
# Convenções (X: (N, d); LO, HI: (M, d) cantos de cubos fechados):
#   depth(X)       dist(x, P^c), 0 fora de P
#   outside(X)     dist(x, fecho de P), 0 dentro
#   cube_depth     dist(Q, P^c) quando Q ⊂ P, senão 0
#   misses         Q ∩ P = ∅

@dataclass(frozen=True)
class Box:
    lo: tuple
    hi: tuple
    kind = "box"

    @property
    def dim(self):
        return len(self.lo)

    @property
    def center(self):
        return tuple((a + b) / 2 for a, b in zip(self.lo, self.hi))

    @property
    def edges(self):
        return tuple(b - a for a, b in zip(self.lo, self.hi))

    def contains(self, X):
        return np.all((X > np.asarray(self.lo)) & (X < np.asarray(self.hi)), axis=1)

    def depth(self, X):
        lo, hi = np.asarray(self.lo), np.asarray(self.hi)
        return np.maximum(np.minimum(X - lo, hi - X).min(axis=1), 0.0)

    def outside(self, X):
        lo, hi = np.asarray(self.lo), np.asarray(self.hi)
        return np.linalg.norm(X - np.clip(X, lo, hi), axis=1)

    def cube_depth(self, LO, HI):
        lo, hi = np.asarray(self.lo), np.asarray(self.hi)
        return np.maximum(np.minimum(LO - lo, hi - HI).min(axis=1), 0.0)

    def misses(self, LO, HI):
        lo, hi = np.asarray(self.lo), np.asarray(self.hi)
        return np.any((HI <= lo) | (LO >= hi), axis=1)

    def bounds(self):
        return np.asarray(self.lo, float), np.asarray(self.hi, float)

    def volume(self):
        return float(np.prod(self.edges))

    def boundary_samples(self, window, m):
        lo, hi = np.asarray(self.lo, float), np.asarray(self.hi, float)
        d = self.dim
        pts = []
        for axis in range(d):
            others = [i for i in range(d) if i != axis]
            grids = [np.linspace(lo[i], hi[i], m) for i in others]
            mesh = np.array(list(itertools.product(*grids))) if grids else np.zeros((1, 0))
            for side in (lo[axis], hi[axis]):
                block = np.empty((mesh.shape[0], d))
                block[:, others] = mesh
                block[:, axis] = side
                pts.append(block)
        return np.vstack(pts)

    def to_dict(self):
        return {"type": "box", "lo": list(self.lo), "hi": list(self.hi)}


@dataclass(frozen=True)
class Ball:
    center: tuple
    radius: float
    kind = "ball"

    @property
    def dim(self):
        return len(self.center)

    def contains(self, X):
        return np.linalg.norm(X - np.asarray(self.center), axis=1) < self.radius

    def depth(self, X):
        return np.maximum(self.radius - np.linalg.norm(X - np.asarray(self.center), axis=1), 0.0)

    def outside(self, X):
        return np.maximum(np.linalg.norm(X - np.asarray(self.center), axis=1) - self.radius, 0.0)

    def cube_depth(self, LO, HI):
        c = np.asarray(self.center)
        far = np.linalg.norm(np.maximum(np.abs(LO - c), np.abs(HI - c)), axis=1)
        return np.maximum(self.radius - far, 0.0)

    def misses(self, LO, HI):
        c = np.asarray(self.center)
        return np.linalg.norm(c - np.clip(c, LO, HI), axis=1) >= self.radius

    def bounds(self):
        c = np.asarray(self.center, float)
        return c - self.radius, c + self.radius

    def boundary_samples(self, window, m):
        count = m if self.dim < 3 else m * m // 4
        return np.asarray(self.center) + self.radius * sphere_directions(self.dim, count)

    def to_dict(self):
        return {"type": "ball", "center": list(self.center), "radius": self.radius}


@dataclass(frozen=True)
class HalfSpace:
    """Ω = {x : x·normal < offset}, com ``normal`` unitária."""
    normal: tuple
    offset: float
    kind = "halfspace"

    @classmethod
    def build(cls, normal, offset):
        n = np.asarray(normal, float)
        norm = np.linalg.norm(n)
        if norm == 0:
            raise GeometryError("semiespaço com normal nula")
        return cls(tuple(n / norm), float(offset) / norm)

    @property
    def dim(self):
        return len(self.normal)

    def _proj(self, X):
        return X @ np.asarray(self.normal)

    def contains(self, X):
        return self._proj(X) < self.offset

    def depth(self, X):
        return np.maximum(self.offset - self._proj(X), 0.0)

    def outside(self, X):
        return np.maximum(self._proj(X) - self.offset, 0.0)

    def _extremes(self, LO, HI):
        n = np.asarray(self.normal)
        centro = (LO + HI) / 2 @ n
        raio = (HI - LO) / 2 @ np.abs(n)
        return centro - raio, centro + raio

    def cube_depth(self, LO, HI):
        return np.maximum(self.offset - self._extremes(LO, HI)[1], 0.0)

    def misses(self, LO, HI):
        return self._extremes(LO, HI)[0] >= self.offset

    def bounds(self):
        return np.full(self.dim, -np.inf), np.full(self.dim, np.inf)

    def boundary_samples(self, window, m):
        wlo, whi = window
        n = np.asarray(self.normal)
        base = self.offset * n
        if self.dim == 1:
            return base.reshape(1, 1)
        basis = null_space(n[None, :])
        reach = np.linalg.norm(whi - wlo) + np.linalg.norm(base - (wlo + whi) / 2)
        t = np.linspace(-reach, reach, m)
        coords = np.array(list(itertools.product(t, repeat=self.dim - 1)))
        pts = base + coords @ basis.T
        inside = np.all((pts >= wlo) & (pts <= whi), axis=1)
        return pts[inside]

    def to_dict(self):
        return {"type": "halfspace", "normal": list(self.normal), "offset": self.offset}


@dataclass(frozen=True)
class Punctured:
    """ℝ^d ∖ {point}."""
    point: tuple
    kind = "punctured"

    @property
    def dim(self):
        return len(self.point)

    def contains(self, X):
        return np.any(X != np.asarray(self.point), axis=1)

    def depth(self, X):
        return np.linalg.norm(X - np.asarray(self.point), axis=1)

    def outside(self, X):
        return np.zeros(X.shape[0])

    def cube_depth(self, LO, HI):
        p = np.asarray(self.point)
        return np.linalg.norm(p - np.clip(p, LO, HI), axis=1)

    def misses(self, LO, HI):
        return np.zeros(LO.shape[0], dtype=bool)

    def bounds(self):
        return np.full(self.dim, -np.inf), np.full(self.dim, np.inf)

    def boundary_samples(self, window, m):
        return np.asarray(self.point, float).reshape(1, -1)

    def to_dict(self):
        return {"type": "punctured", "point": list(self.point)}


@dataclass(frozen=True)
class Exterior:
    """ℝ^d ∖ bola fechada B̄(center, radius)."""
    center: tuple
    radius: float
    kind = "exterior"

    @property
    def dim(self):
        return len(self.center)

    def contains(self, X):
        return np.linalg.norm(X - np.asarray(self.center), axis=1) > self.radius

    def depth(self, X):
        return np.maximum(np.linalg.norm(X - np.asarray(self.center), axis=1) - self.radius, 0.0)

    def outside(self, X):
        return np.maximum(self.radius - np.linalg.norm(X - np.asarray(self.center), axis=1), 0.0)

    def cube_depth(self, LO, HI):
        c = np.asarray(self.center)
        near = np.linalg.norm(c - np.clip(c, LO, HI), axis=1)
        return np.maximum(near - self.radius, 0.0)

    def misses(self, LO, HI):
        c = np.asarray(self.center)
        far = np.linalg.norm(np.maximum(np.abs(LO - c), np.abs(HI - c)), axis=1)
        return far <= self.radius

    def bounds(self):
        return np.full(self.dim, -np.inf), np.full(self.dim, np.inf)

    def boundary_samples(self, window, m):
        count = m if self.dim < 3 else m * m // 4
        return np.asarray(self.center) + self.radius * sphere_directions(self.dim, count)

    def to_dict(self):
        return {"type": "exterior", "center": list(self.center), "radius": self.radius}


@dataclass(frozen=True)
class Space:
    """ℝ^d inteiro; só serve para expressar Ω sem complementar."""
    dimension: int
    kind = "space"

    @property
    def dim(self):
        return self.dimension

    def contains(self, X):
        return np.ones(X.shape[0], dtype=bool)

    def depth(self, X):
        return np.full(X.shape[0], np.inf)

    def outside(self, X):
        return np.zeros(X.shape[0])

    def cube_depth(self, LO, HI):
        return np.full(LO.shape[0], np.inf)

    def misses(self, LO, HI):
        return np.zeros(LO.shape[0], dtype=bool)

    def bounds(self):
        return np.full(self.dim, -np.inf), np.full(self.dim, np.inf)

    def boundary_samples(self, window, m):
        return np.zeros((0, self.dim))

    def to_dict(self):
        return {"type": "space"}


def shape_from_dict(raw, dim):
    tipo = raw.get("type")
    try:
        if tipo == "box":
            return Box(tuple(map(float, raw["lo"])), tuple(map(float, raw["hi"])))
        if tipo == "ball":
            return Ball(tuple(map(float, raw["center"])), float(raw["radius"]))
        if tipo == "halfspace":
            return HalfSpace.build(raw["normal"], raw.get("offset", 0.0))
        if tipo == "punctured":
            return Punctured(tuple(map(float, raw.get("point", [0.0] * dim))))
        if tipo == "exterior":
            return Exterior(tuple(map(float, raw["center"])), float(raw["radius"]))
        if tipo == "space":
            return Space(dim)
    except KeyError as e:
        raise GeometryError(f"primitiva '{tipo}' sem o parâmetro {e}") from e
    raise GeometryError(f"primitiva desconhecida: {tipo!r}")


# ==================== CONJUNTO ABERTO ====================

@dataclass(frozen=True)
class OpenSetSpec:
    dim: int
    shapes: tuple
    bbox: tuple
    holes: tuple = ()
    boundary_resolution: int = BOUNDARY_RESOLUTION

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise GeometryError(f"dimensão {self.dim} não suportada (use 1, 2 ou 3)")
        if not self.shapes:
            raise GeometryError("Ω vazio: nenhuma primitiva informada")
        for s in self.shapes:
            if s.dim != self.dim:
                raise GeometryError(f"primitiva {s.kind} com dimensão {s.dim} ≠ {self.dim}")
        lo, hi = self.bbox
        if len(lo) != self.dim or len(hi) != self.dim:
            raise GeometryError("caixa envolvente com dimensão incorreta")
        if not all(np.isfinite(lo)) or not all(np.isfinite(hi)) or any(a >= b for a, b in zip(lo, hi)):
            raise GeometryError("caixa envolvente deve ser finita com lo < hi")
        for h in self.holes:
            if len(h) != self.dim:
                raise GeometryError("ponto removido com dimensão incorreta")

    # --- Construção / serialização ---
    @classmethod
    def from_dict(cls, raw):
        dim = int(raw.get("dim", 0))
        shapes = tuple(shape_from_dict(s, dim) for s in raw.get("shapes", []))
        bbox = raw.get("bbox")
        if bbox is None:
            raise GeometryError("caixa envolvente (bbox) é obrigatória")
        if dim == 1 and len(bbox) == 2 and np.ndim(bbox[0]) == 0:
            bbox = [[bbox[0]], [bbox[1]]]
        lo, hi = (tuple(map(float, b)) for b in bbox)
        holes = tuple(tuple(map(float, h)) if np.ndim(h) else (float(h),) for h in raw.get("holes", []))
        return cls(dim, shapes, (lo, hi), holes, int(raw.get("boundary_resolution", BOUNDARY_RESOLUTION)))

    def to_dict(self):
        return {
            "dim": self.dim,
            "shapes": [s.to_dict() for s in self.shapes],
            "bbox": [list(self.bbox[0]), list(self.bbox[1])],
            "holes": [list(h) for h in self.holes],
        }

    def with_holes(self, points):
        extra = tuple(tuple(map(float, np.atleast_1d(p))) for p in points)
        return OpenSetSpec(self.dim, self.shapes, self.bbox, self.holes + extra, self.boundary_resolution)

    # --- Propriedades geométricas ---
    @property
    def box_lo(self):
        return np.asarray(self.bbox[0], float)

    @property
    def box_hi(self):
        return np.asarray(self.bbox[1], float)

    @property
    def diameter(self):
        return float(np.linalg.norm(self.box_hi - self.box_lo))

    @property
    def box_volume(self):
        return float(np.prod(self.box_hi - self.box_lo))

    @property
    def complement_empty(self):
        return any(s.kind == "space" for s in self.shapes) and not self.holes

    def segments(self):
        """Componentes de Ω ∩ caixa envolvente (só em d = 1)."""
        lo, hi = self.bbox[0][0], self.bbox[1][0]
        out = []
        for a, b in intervals_1d(self):
            a, b = max(a, lo), min(b, hi)
            if b > a:
                out.append((a, b))
        return out

    @cached_property
    def exact(self):
        """True quando γ da união é exatamente o máximo das distâncias por primitiva."""
        if len(self.shapes) == 1:
            return True
        for a, b in itertools.combinations(self.shapes, 2):
            alo, ahi = a.bounds()
            blo, bhi = b.bounds()
            if np.all(np.isfinite(alo)) and np.all(np.isfinite(blo)):
                if np.any((ahi < blo) | (bhi < alo)):
                    continue
            return False
        return True

    @cached_property
    def _boundary_tree(self):
        # pontos de ∂Ω: amostras de ∂P_i fora de todas as outras primitivas
        margem = 0.1 * (self.box_hi - self.box_lo)
        window = (self.box_lo - margem, self.box_hi + margem)
        blocos = []
        for i, s in enumerate(self.shapes):
            pts = s.boundary_samples(window, self.boundary_resolution)
            if pts.size == 0:
                continue
            livre = np.ones(pts.shape[0], dtype=bool)
            for j, o in enumerate(self.shapes):
                if j != i:
                    livre &= ~o.contains(pts)
            blocos.append(pts[livre])
        blocos.extend(np.asarray(h, float).reshape(1, -1) for h in self.holes)
        pts = np.vstack(blocos) if blocos else np.zeros((0, self.dim))
        if pts.shape[0] == 0:
            return None
        return cKDTree(pts)

    @property
    def resolution(self):
        """Resolução da amostragem de fronteira usada quando a união não é exata."""
        if self.exact:
            return 0.0
        return 1.2 * self.diameter / self.boundary_resolution

    def contains(self, x):
        X, _ = as_points(x, self.dim)
        inside = np.zeros(X.shape[0], dtype=bool)
        for s in self.shapes:
            inside |= s.contains(X)
        for h in self.holes:
            inside &= np.any(X != np.asarray(h), axis=1)
        return inside

    def _hole_distance(self, X):
        if not self.holes:
            return np.full(X.shape[0], np.inf)
        H = np.asarray(self.holes, float)
        return np.min(np.linalg.norm(X[:, None, :] - H[None, :, :], axis=2), axis=1)

    def gamma_points(self, X):
        base = np.zeros(X.shape[0])
        for s in self.shapes:
            base = np.maximum(base, s.depth(X))
        if not self.exact:
            inside = self.contains(X)
            tree = self._boundary_tree
            if tree is not None and inside.any():
                d_amostra, _ = tree.query(X[inside])
                base[inside] = np.maximum(base[inside], d_amostra)
            base[~inside] = 0.0
        return np.minimum(base, self._hole_distance(X))

    def outside_distance(self, x):
        """dist(x, Ω̄); exata para qualquer união."""
        X, single = as_points(x, self.dim)
        out = np.full(X.shape[0], np.inf)
        for s in self.shapes:
            out = np.minimum(out, s.outside(X))
        return out[0] if single else out

    def cube_distance(self, LO, HI):
        """dist(Q, Ω^c) para cubos fechados; exata ou cota inferior conservadora."""
        dist = np.zeros(LO.shape[0])
        for s in self.shapes:
            dist = np.maximum(dist, s.cube_depth(LO, HI))
        if not self.exact:
            centro = (LO + HI) / 2
            meia_diag = np.linalg.norm(HI - LO, axis=1) / 2
            dist = np.maximum(dist, self.gamma_points(centro) - meia_diag - self.resolution)
            dist = np.maximum(dist, 0.0)
        for h in self.holes:
            p = np.asarray(h, float)
            dist = np.minimum(dist, np.linalg.norm(p - np.clip(p, LO, HI), axis=1))
        return dist

    def misses(self, LO, HI):
        miss = np.ones(LO.shape[0], dtype=bool)
        for s in self.shapes:
            miss &= s.misses(LO, HI)
        return miss


def gamma(spec, x):
    """γ(x) = dist(x, Ω^c); 0 exatamente fora de Ω."""
    X, single = as_points(x, spec.dim)
    g = spec.gamma_points(X)
    return float(g[0]) if single else g


def intervals_1d(spec):
    """Componentes abertas de Ω ⊂ ℝ (podem ter extremos infinitos), já separadas nos furos."""
    if spec.dim != 1:
        raise GeometryError("intervals_1d só vale em dimensão 1")
    brutos = []
    for s in spec.shapes:
        if s.kind == "box":
            brutos.append((s.lo[0], s.hi[0]))
        elif s.kind == "ball":
            brutos.append((s.center[0] - s.radius, s.center[0] + s.radius))
        elif s.kind == "halfspace":
            n, b = s.normal[0], s.offset
            brutos.append((-np.inf, b) if n > 0 else (-b, np.inf))
        elif s.kind == "punctured":
            brutos += [(-np.inf, s.point[0]), (s.point[0], np.inf)]
        elif s.kind == "exterior":
            brutos += [(-np.inf, s.center[0] - s.radius), (s.center[0] + s.radius, np.inf)]
        elif s.kind == "space":
            brutos.append((-np.inf, np.inf))
    brutos.sort()
    merged = []
    for a, b in brutos:
        if merged and a < merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    cortes = sorted(h[0] for h in spec.holes)
    out = []
    for a, b in merged:
        pedaco_a = a
        for c in cortes:
            if pedaco_a < c < b:
                out.append((pedaco_a, c))
                pedaco_a = c
        out.append((pedaco_a, b))
    return out


# ==================== DECOMPOSIÇÃO DE WHITNEY ====================

@dataclass(frozen=True)
class WhitneyCube:
    generation: int
    index: tuple
    center: tuple
    edge: float
    dist: float


def enlarge(cube, factor):
    """Caixa com o mesmo centro e aresta multiplicada por ``factor``."""
    if factor < 1:
        raise DegenerateParameterError(f"fator de ampliação {factor} < 1")
    half = cube.edge * factor / 2
    return Box(tuple(c - half for c in cube.center), tuple(c + half for c in cube.center))


class WhitneyDecomposition:
    """Família truncada de cubos de Whitney, imutável depois de construída."""

    def __init__(self, spec, epsilon, max_generation, origin, root_edge, gens, coords, dists):
        self.spec = spec
        self.epsilon = float(epsilon)
        self.max_generation = int(max_generation)
        self.origin = np.asarray(origin, float)
        self.root_edge = float(root_edge)
        self.gens = np.asarray(gens, dtype=np.int64)
        self.coords = np.asarray(coords, dtype=np.int64).reshape(-1, spec.dim)
        self.edges = self.root_edge * np.exp2(-self.gens.astype(float))
        self.centers = self.origin + (self.coords + 0.5) * self.edges[:, None]
        self.dists = np.asarray(dists, float)
        self.tau = 5 * math.sqrt(spec.dim) * self.root_edge * 2.0 ** (-self.max_generation)
        for arr in (self.gens, self.coords, self.edges, self.centers, self.dists):
            arr.setflags(write=False)
        self._index = {}
        for g in np.unique(self.gens):
            ids = np.flatnonzero(self.gens == g)
            codes = self._encode(self.coords[ids], int(g))
            order = np.argsort(codes)
            self._index[int(g)] = (codes[order], ids[order])

    # --- Acesso ---
    @property
    def dim(self):
        return self.spec.dim

    @property
    def star(self):
        return 1 + self.epsilon

    @property
    def star2(self):
        return (1 + self.epsilon) ** 2

    def __len__(self):
        return self.gens.shape[0]

    @cached_property
    def cubes(self):
        return [
            WhitneyCube(int(g), tuple(int(c) for c in co), tuple(float(v) for v in ce), float(e), float(dd))
            for g, co, ce, e, dd in zip(self.gens, self.coords, self.centers, self.edges, self.dists)
        ]

    def box(self, n, factor=1.0):
        return enlarge(self.cubes[n], factor)

    # --- Índice espacial ---
    def _encode(self, coords, g):
        base = (1 << g) + 2
        code = np.zeros(coords.shape[0], dtype=np.int64)
        mult = 1
        for i in range(self.dim):
            code += (coords[:, i] + 1) * mult
            mult *= base
        return code

    def locate(self, points, factor=1.0):
        """Pares (ponto, cubo) com o ponto dentro do cubo aberto ampliado por ``factor``.

        Usa a malha diádica de cada geração: um ponto em factor·Q está na célula de Q ou
        numa célula vizinha, desde que factor ≤ 3.
        """
        if not 1.0 <= factor <= 3.0:
            raise DegenerateParameterError(f"fator {factor} fora de [1, 3] no índice espacial")
        X, _ = as_points(points, self.dim)
        pares_pt, pares_cubo = [], []
        offsets = np.array(list(itertools.product((-1, 0, 1), repeat=self.dim)), dtype=np.int64)
        for g, (codes, ids) in self._index.items():
            s = self.root_edge * 2.0 ** (-g)
            cell = np.floor((X - self.origin) / s).astype(np.int64)
            for off in offsets:
                cc = cell + off
                ok = np.all((cc >= 0) & (cc < (1 << g)), axis=1)
                if not ok.any():
                    continue
                pts = np.flatnonzero(ok)
                code = self._encode(cc[pts], g)
                pos = np.searchsorted(codes, code)
                pos = np.minimum(pos, codes.shape[0] - 1)
                hit = codes[pos] == code
                if not hit.any():
                    continue
                pts, cubos = pts[hit], ids[pos[hit]]
                half = factor * s / 2
                dentro = np.all(np.abs(X[pts] - self.centers[cubos]) < half, axis=1)
                pares_pt.append(pts[dentro])
                pares_cubo.append(cubos[dentro])
        if not pares_pt:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        pt = np.concatenate(pares_pt)
        cubo = np.concatenate(pares_cubo)
        order = np.lexsort((cubo, pt))
        return pt[order], cubo[order]

    def _root_distance(self, X):
        return np.minimum(X - self.origin, self.origin + self.root_edge - X).min(axis=1)

    def safe(self, points, margin=1.0):
        """Pontos onde a família truncada enxerga todos os cubos que a família completa teria.

        Exige γ(x) > margin·τ_G e, para Ω que ultrapassa a caixa raiz, afastamento das faces
        da raiz maior que max(margin·τ_G, 2εγ(x)).
        """
        X, _ = as_points(points, self.dim)
        g = self.spec.gamma_points(X)
        limite = margin * self.tau
        face = self._root_distance(X)
        return (g > limite) & (face > np.maximum(limite, 2 * self.epsilon * g))

    def safe_segments(self, margin=2.0):
        """Versão em intervalos de ``safe`` para d = 1, recortada à caixa envolvente."""
        if self.dim != 1:
            raise GeometryError("safe_segments só vale em dimensão 1")
        r_lo, r_hi = self.origin[0], self.origin[0] + self.root_edge
        lo, hi = self.spec.bbox[0][0], self.spec.bbox[1][0]
        lim = margin * self.tau
        e2 = 2 * self.epsilon
        out = []
        for a, b in intervals_1d(self.spec):
            if a >= r_lo:
                left = a + lim
            else:
                left = max(r_lo + lim, (r_lo + e2 * b) / (1 + e2)) if np.isfinite(b) else r_lo + lim
            if b <= r_hi:
                right = b - lim
            else:
                right = min(r_hi - lim, (r_hi + e2 * a) / (1 + e2)) if np.isfinite(a) else r_hi - lim
            left, right = max(left, lo), min(right, hi)
            if right > left:
                out.append((float(left), float(right)))
        return out

    # --- Saída tabular ---
    def to_frame(self):
        cols = {"generation": self.gens}
        for i in range(self.dim):
            cols[f"center_{i}"] = self.centers[:, i]
        cols["edge"] = self.edges
        cols["dist_to_complement"] = self.dists
        return pd.DataFrame(cols)

    def dump_csv(self, path):
        self.to_frame().to_csv(path, index=False, float_format="%.17g")


def decompose(spec, epsilon=DEFAULT_EPSILON, max_generation=10):
    """Subdivisão diádica a partir da caixa raiz.

    Aceita Q quando l(Q) ≤ dist(Q, Ω^c) e sup_Q γ ≤ 4√d·l(Q); descarta cubos fora de Ω;
    subdivide os demais até a geração G, onde a família é truncada.
    """
    if not (epsilon > 0 and (1 + epsilon) ** 2 < 1.25):
        raise DegenerateParameterError(f"ε = {epsilon} viola (1+ε)² < 5/4")
    if not 1 <= max_generation <= MAX_GENERATION:
        raise DegenerateParameterError(f"geração máxima {max_generation} fora de [1, {MAX_GENERATION}]")
    if spec.complement_empty:
        raise ComplementEmptyError("Ω = ℝ^d não admite decomposição de Whitney")

    d = spec.dim
    sqd = math.sqrt(d)
    edge = float(np.max(spec.box_hi - spec.box_lo))
    root = 2.0 ** math.ceil(math.log2(edge))
    origin = spec.box_lo
    filhos = np.array(list(itertools.product((0, 1), repeat=d)), dtype=np.int64)

    coords = np.zeros((1, d), dtype=np.int64)
    aceitos_g, aceitos_c, aceitos_d = [], [], []
    for g in range(max_generation + 1):
        if coords.shape[0] == 0:
            break
        s = root * 2.0 ** (-g)
        LO = origin + coords * s
        HI = LO + s
        keep = ~spec.misses(LO, HI)
        coords, LO, HI = coords[keep], LO[keep], HI[keep]
        dist = spec.cube_distance(LO, HI)
        upper = spec.gamma_points((LO + HI) / 2) + sqd * s / 2
        perto = dist < s
        longe = ~perto & (upper > 4 * sqd * s)
        if g == 0 and longe.any():
            raise GeometryError("caixa envolvente longe demais de Ω^c: aproxime-a da fronteira")
        aceito = ~perto & ~longe
        aceitos_g.append(np.full(int(aceito.sum()), g))
        aceitos_c.append(coords[aceito])
        aceitos_d.append(dist[aceito])
        sub = coords[~aceito]
        coords = (sub[:, None, :] * 2 + filhos[None, :, :]).reshape(-1, d)

    gens = np.concatenate(aceitos_g) if aceitos_g else np.zeros(0, np.int64)
    cs = np.vstack(aceitos_c) if aceitos_c else np.zeros((0, d), np.int64)
    ds = np.concatenate(aceitos_d) if aceitos_d else np.zeros(0)
    # geração crescente, lexicográfica dentro da geração
    order = np.lexsort(tuple(cs[:, i] for i in reversed(range(d))) + (gens,))
    decomp = WhitneyDecomposition(spec, epsilon, max_generation, origin, root, gens[order], cs[order], ds[order])
    logger.info("decomposição com %d cubos (G=%d, τ_G=%.3g)", len(decomp), max_generation, decomp.tau)
    return decomp


def overlap_count(decomp, x):
    """Número de cubos com x ∈ Q_n**."""
    X, single = as_points(x, decomp.dim)
    pt, _ = decomp.locate(X, decomp.star2)
    counts = np.bincount(pt, minlength=X.shape[0])
    return int(counts[0]) if single else counts


class CoveredRegion:
    """Parte de Ω ∩ caixa envolvente onde P^η é avaliado sem tocar o colar de truncamento."""

    def __init__(self, decomp, margin=2.0):
        self.decomp = decomp
        self.spec = decomp.spec
        self.margin = margin

    @property
    def dim(self):
        return self.spec.dim

    @property
    def box_lo(self):
        return self.spec.box_lo

    @property
    def box_hi(self):
        return self.spec.box_hi

    @property
    def diameter(self):
        return self.spec.diameter

    @property
    def box_volume(self):
        return self.spec.box_volume

    def contains(self, x):
        X, _ = as_points(x, self.dim)
        inside = self.spec.contains(X) & np.all((X > self.box_lo) & (X < self.box_hi), axis=1)
        return inside & self.decomp.safe(X, self.margin)

    def segments(self):
        return self.decomp.safe_segments(self.margin)

    def gamma_points(self, X):
        return self.spec.gamma_points(X)


# ==================== κ-PLUMPNESS ====================
# Conjuntos fechados A descritos por: depth(Z) = dist(z, A^c), sample(n, rng) ⊂ Ā, diameter.


@dataclass(frozen=True)
class Complement:
    """A = ℝ^d ∖ Ω, observado dentro de uma janela (a caixa de Ω, ampliada)."""
    spec: OpenSetSpec
    window_scale: float = 1.5

    @property
    def dim(self):
        return self.spec.dim

    @property
    def diameter(self):
        # estimado pelas amostras
        return None

    def _window(self):
        c = (self.spec.box_lo + self.spec.box_hi) / 2
        half = self.window_scale * (self.spec.box_hi - self.spec.box_lo) / 2
        return c - half, c + half

    def depth(self, Z):
        return self.spec.outside_distance(Z)

    def sample(self, n, rng):
        lo, hi = self._window()
        pontos = [np.asarray(h, float).reshape(1, -1) for h in self.spec.holes]
        for s in self.spec.shapes:
            if s.kind == "punctured":
                pontos.append(np.asarray(s.point, float).reshape(1, -1))
        tentativas = 0
        while sum(p.shape[0] for p in pontos) < n and tentativas < 20:
            Z = rng.uniform(lo, hi, size=(4 * n, self.dim))
            pontos.append(Z[~self.spec.contains(Z)])
            tentativas += 1
        pts = np.vstack(pontos) if pontos else np.zeros((0, self.dim))
        return pts[:n]


@dataclass(frozen=True)
class Segment:
    a: tuple
    b: tuple

    @property
    def dim(self):
        return len(self.a)

    @property
    def diameter(self):
        return float(np.linalg.norm(np.subtract(self.b, self.a)))

    def depth(self, Z):
        return np.zeros(Z.shape[0])

    def sample(self, n, rng):
        t = rng.uniform(0, 1, size=(n, 1))
        return np.asarray(self.a) + t * (np.asarray(self.b) - np.asarray(self.a))


@dataclass(frozen=True)
class PointSet:
    points: tuple

    @property
    def dim(self):
        return len(self.points[0])

    @property
    def diameter(self):
        P = np.asarray(self.points, float)
        return float(pdist(P).max()) if P.shape[0] > 1 else 0.0

    def depth(self, Z):
        return np.zeros(Z.shape[0])

    def sample(self, n, rng):
        P = np.asarray(self.points, float)
        return P[rng.integers(0, P.shape[0], size=n)]


@dataclass
class PlumpVerdict:
    plump: bool
    kappa: float
    checked: int
    seed: int
    witness_x: tuple | None = None
    witness_r: float | None = None

    def to_dict(self):
        return asdict(self)


def is_plump(closed_set, kappa, r_samples=1000, x_samples=1000, seed=0):
    """Verificação Monte-Carlo de κ-plumpness; "plump" significa sem contraexemplo.

    Para cada x amostrado em Ā e cada r em (0, diam A) procura z ∈ B̄(x, r) com
    dist(z, A^c) ≥ κr. Candidatos: passos a partir de x em direções fixas e as próprias
    amostras de A dentro da bola.
    """
    if not 0 < kappa < 1:
        raise DegenerateParameterError(f"κ = {kappa} fora de (0, 1)")
    rng = np.random.default_rng(seed)
    d = closed_set.dim
    xs = closed_set.sample(x_samples, rng)
    diam = closed_set.diameter
    if diam is None:
        diam = float(pdist(xs).max()) if xs.shape[0] > 1 else 0.0
    if diam <= 0 or xs.shape[0] == 0:
        # um ponto (ou nada): nenhuma bola cabe
        x0 = tuple(float(v) for v in xs[0]) if xs.shape[0] else None
        return PlumpVerdict(False, kappa, 0, seed, x0, 0.0)

    eixos = np.vstack([np.eye(d), -np.eye(d)])
    aleat = rng.normal(size=(2 * d + 4, d))
    dirs = np.vstack([eixos, aleat / np.linalg.norm(aleat, axis=1, keepdims=True)])
    passos = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
    desloc = np.unique((passos[:, None, None] * dirs[None, :, :]).reshape(-1, d), axis=0)
    prof_amostras = closed_set.depth(xs)

    checked = 0
    for x in xs:
        r = diam * np.exp(rng.uniform(np.log(1e-4), 0.0, size=r_samples)) * (1 - 1e-9)
        Z = x[None, None, :] + r[:, None, None] * desloc[None, :, :]
        prof = closed_set.depth(Z.reshape(-1, d)).reshape(r.shape[0], -1)
        ok = np.any(prof >= kappa * r[:, None], axis=1)
        # melhor profundidade entre as amostras a distância ≤ r
        dist = np.linalg.norm(xs - x, axis=1)
        ordem = np.argsort(dist)
        melhor = np.maximum.accumulate(prof_amostras[ordem])
        pos = np.searchsorted(dist[ordem], r, side="right") - 1
        ok |= (pos >= 0) & (melhor[np.maximum(pos, 0)] >= kappa * r)
        checked += r.shape[0]
        if not ok.all():
            bad = int(np.flatnonzero(~ok)[0])
            logger.info("contraexemplo de plumpness em x=%s, r=%.3g", x, r[bad])
            return PlumpVerdict(False, kappa, checked, seed, tuple(float(v) for v in x), float(r[bad]))
    return PlumpVerdict(True, kappa, checked, seed)
