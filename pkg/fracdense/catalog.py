# fracdense/catalog.py
"""Funções-alvo avaliáveis ponto a ponto, estendidas por zero fora de Ω."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateParameterError
from .geometry import Box, OpenSetSpec, as_points


@dataclass(frozen=True, eq=False)
class FunctionOracle:
    """f: ℝ^d → ℝ com f = 0 fora de ``spec`` (quando informado).

    ``evaluator`` recebe um lote (N, d) e devolve (N,). Os demais campos são dicas usadas
    pelas quadraturas: suporte compacto, constante de Lipschitz da parte suave, medida da
    superfície de salto e a altura do salto, sup|f| e, em d = 1, os pontos de salto/quebra.
    """
    dim: int
    evaluator: Callable
    spec: OpenSetSpec | None = None
    support: Box | None = None
    lipschitz: float | None = None
    jump_perimeter: float = 0.0
    jump_height: float = 0.0
    sup_abs: float | None = None
    breakpoints: tuple = ()
    name: str = ""

    def values(self, X):
        X = np.asarray(X, float)
        out = np.zeros(X.shape[0])
        if X.shape[0] == 0:
            return out
        mask = self.spec.contains(X) if self.spec is not None else np.ones(X.shape[0], dtype=bool)
        if self.support is not None:
            lo, hi = self.support.bounds()
            mask &= np.all((X >= lo) & (X <= hi), axis=1)
        if mask.any():
            out[mask] = np.asarray(self.evaluator(X[mask]), float).reshape(-1)
        return out

    def __call__(self, x):
        X, single = as_points(x, self.dim)
        vals = self.values(X)
        return float(vals[0]) if single else vals

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    # --- Álgebra ---
    def _combine(self, other, sign):
        if other.dim != self.dim:
            raise DegenerateParameterError("funções com dimensões diferentes")
        a, b = self, other
        spec = a.spec if a.spec is b.spec else None
        return FunctionOracle(
            self.dim,
            lambda X: a.values(X) + sign * b.values(X),
            spec=spec,
            support=_union_box(a.support, b.support),
            lipschitz=_sum_or_none(a.lipschitz, b.lipschitz),
            jump_perimeter=a.jump_perimeter + b.jump_perimeter,
            jump_height=a.jump_height + b.jump_height,
            sup_abs=_sum_or_none(a.sup_abs, b.sup_abs),
            breakpoints=tuple(sorted(set(a.breakpoints) | set(b.breakpoints))),
            name=f"({a.name} {'+' if sign > 0 else '-'} {b.name})",
        )

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __mul__(self, scalar):
        c = float(scalar)
        base = self
        return FunctionOracle(
            self.dim,
            lambda X: c * base.values(X),
            spec=self.spec,
            support=self.support,
            lipschitz=None if self.lipschitz is None else abs(c) * self.lipschitz,
            jump_perimeter=self.jump_perimeter if c else 0.0,
            jump_height=abs(c) * self.jump_height,
            sup_abs=None if self.sup_abs is None else abs(c) * self.sup_abs,
            breakpoints=self.breakpoints,
            name=f"{c:g}·{self.name}",
        )

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def restricted(self, mask_fn, extra_breaks=()):
        """f·1_A, com A dado por ``mask_fn`` (lote → máscara booleana)."""
        base = self
        return self.replace(
            evaluator=lambda X: np.where(mask_fn(X), base.values(X), 0.0),
            breakpoints=tuple(sorted(set(self.breakpoints) | set(extra_breaks))),
            name=f"{self.name}|A",
        )

    def permuted(self, perm):
        """x ↦ f(x_perm); usado nos testes de simetria."""
        base = self
        perm = list(perm)
        inv = np.argsort(perm)
        support = None
        if self.support is not None:
            lo, hi = self.support.bounds()
            support = Box(tuple(lo[inv]), tuple(hi[inv]))
        return self.replace(evaluator=lambda X: base.values(X[:, perm]), support=support, spec=None,
                            name=f"{self.name}∘σ")


def _sum_or_none(a, b):
    return None if a is None or b is None else a + b


def _union_box(a, b):
    if a is None or b is None:
        return None
    alo, ahi = a.bounds()
    blo, bhi = b.bounds()
    return Box(tuple(np.minimum(alo, blo)), tuple(np.maximum(ahi, bhi)))


# ==================== CATÁLOGO ====================

def _bounds(spec, lo, hi):
    lo = spec.box_lo if lo is None else np.atleast_1d(np.asarray(lo, float))
    hi = spec.box_hi if hi is None else np.atleast_1d(np.asarray(hi, float))
    if lo.shape[0] != spec.dim or hi.shape[0] != spec.dim or np.any(lo >= hi):
        raise DegenerateParameterError("caixa do catálogo inválida (dimensão ou lo ≥ hi)")
    return lo, hi


def _breaks_1d(spec, *values):
    return tuple(sorted({float(v) for v in values})) if spec.dim == 1 else ()


def constant(spec, value=1.0):
    v = float(value)
    return FunctionOracle(spec.dim, lambda X: np.full(X.shape[0], v), spec=spec, lipschitz=0.0,
                          sup_abs=abs(v), name=f"constant({v:g})")


def coordinate(spec, axis=0, scale=1.0):
    if not 0 <= axis < spec.dim:
        raise DegenerateParameterError(f"eixo {axis} inexistente em dimensão {spec.dim}")
    c = float(scale)
    sup = float(np.max(np.abs([spec.box_lo[axis], spec.box_hi[axis]]))) * abs(c)
    return FunctionOracle(spec.dim, lambda X: c * X[:, axis], spec=spec, lipschitz=abs(c), sup_abs=sup,
                          name=f"coordinate({axis})")


def hat(spec, lo=None, hi=None):
    """Tenda tensorial: 1 no centro da caixa, 0 na fronteira."""
    lo, hi = _bounds(spec, lo, hi)
    c, w = (lo + hi) / 2, hi - lo

    def ev(X):
        return np.prod(np.clip(1 - np.abs(2 * (X - c) / w), 0.0, None), axis=1)

    return FunctionOracle(spec.dim, ev, spec=spec, support=Box(tuple(lo), tuple(hi)),
                          lipschitz=float(np.linalg.norm(2 / w)), sup_abs=1.0,
                          breakpoints=_breaks_1d(spec, lo[0], c[0], hi[0]), name="hat")


def indicator_box(spec, lo=None, hi=None):
    if hi is None:
        hi = (spec.box_lo + spec.box_hi) / 2
    lo, hi = _bounds(spec, lo, hi)
    box = Box(tuple(lo), tuple(hi))

    def ev(X):
        return box.contains(X).astype(float)

    return FunctionOracle(spec.dim, ev, spec=spec, support=box, lipschitz=0.0,
                          jump_perimeter=_inner_perimeter(spec, box), jump_height=1.0, sup_abs=1.0,
                          breakpoints=_breaks_1d(spec, lo[0], hi[0]), name="indicator_box")


def _inner_perimeter(spec, box):
    """Medida das faces de ``box`` que ficam dentro de Ω (salto visto pelo integrando)."""
    lo, hi = box.bounds()
    d = spec.dim
    total = 0.0
    for axis in range(d):
        outras = [i for i in range(d) if i != axis]
        area = float(np.prod((hi - lo)[outras])) if outras else 1.0
        for lado in (lo[axis], hi[axis]):
            centro = (lo + hi) / 2
            centro[axis] = lado
            if spec.contains(centro.reshape(1, -1))[0]:
                total += area
    return total


def distance_power(spec, beta=1.0):
    """γ(x)^β, que se anula em ∂Ω."""
    b = float(beta)
    if b <= 0:
        raise DegenerateParameterError("β deve ser positivo")
    raio = spec.diameter / 2
    lip = b * raio ** (b - 1) if b >= 1 else None
    return FunctionOracle(spec.dim, lambda X: spec.gamma_points(X) ** b, spec=spec, lipschitz=lip,
                          sup_abs=raio ** b, name=f"distance_power({b:g})")


def product(spec, lo=None, hi=None):
    """∏ (x_i − lo_i)(hi_i − x_i) na caixa, zero fora; x(1−x) em (0, 1)."""
    lo, hi = _bounds(spec, lo, hi)
    w = hi - lo
    fator = w ** 2 / 4
    grad = np.array([w[i] * np.prod(np.delete(fator, i)) for i in range(spec.dim)])
    return FunctionOracle(spec.dim, lambda X: np.prod((X - lo) * (hi - X), axis=1), spec=spec,
                          support=Box(tuple(lo), tuple(hi)), lipschitz=float(np.linalg.norm(grad)),
                          sup_abs=float(np.prod(fator)), breakpoints=_breaks_1d(spec, lo[0], hi[0]),
                          name="product")


def _bump_profile(t):
    t = np.clip(t, 0.0, 1.0)
    u = t * (1 - t)
    out = np.zeros_like(t)
    ok = u > 0
    out[ok] = np.exp(4 - 1 / u[ok])
    return out


def radial_bump(spec, center=None, radius=1.0, inner=0.0):
    """Bump C^∞ radial com máximo 1.

    Com ``inner`` = 0 é exp(1 − 1/(1 − t²)), t = |x − c|/radius; com ``inner`` > 0 vive
    no anel inner < |x − c| < radius e se anula no disco interno.
    """
    c = np.zeros(spec.dim) if center is None else np.atleast_1d(np.asarray(center, float))
    R, r0 = float(radius), float(inner)
    if not 0 <= r0 < R:
        raise DegenerateParameterError("raios do bump exigem 0 ≤ inner < radius")
    grade = np.linspace(0, 1, 4001)
    if r0 == 0:
        def perfil(t):
            t = np.clip(t, 0.0, 1.0)
            out = np.zeros_like(t)
            ok = t < 1
            out[ok] = np.exp(1 - 1 / (1 - t[ok] ** 2))
            return out
    else:
        perfil = _bump_profile
    lip = float(np.max(np.abs(np.diff(perfil(grade)))) / (grade[1] - grade[0])) / (R - r0)

    def ev(X):
        return perfil((np.linalg.norm(X - c, axis=1) - r0) / (R - r0))

    return FunctionOracle(spec.dim, ev, spec=spec, support=Box(tuple(c - R), tuple(c + R)),
                          lipschitz=1.05 * lip, sup_abs=1.0, name="radial_bump")


FUNCTIONS = {
    "constant": constant,
    "coordinate": coordinate,
    "hat": hat,
    "indicator_box": indicator_box,
    "distance_power": distance_power,
    "product": product,
    "radial_bump": radial_bump,
}


def catalog_function(name, spec, params=None):
    """Constrói a função ``name`` do catálogo sobre Ω."""
    try:
        factory = FUNCTIONS[name]
    except KeyError:
        raise DegenerateParameterError(f"função desconhecida no catálogo: {name!r}") from None
    try:
        return factory(spec, **(params or {}))
    except TypeError as exc:
        raise DegenerateParameterError(f"parâmetros inválidos para {name}: {exc}") from None


def support_is_compact(f):
    return f.support is not None and all(math.isfinite(v) for v in np.concatenate(f.support.bounds()))
