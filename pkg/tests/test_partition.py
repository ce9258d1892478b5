# tests/test_partition.py

import numpy as np
import pytest

from fracdense.errors import UndefinedRegionError
from fracdense.partition import bump, bump_constant, lipschitz_constant, ramp


def _seguros(dec, m, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.uniform(size=(4 * m, dec.dim))
    return X[dec.safe(X, 1.0)][:m]


# ==================== BUMP E RAMPA ====================

def test_bump_integra_um():
    x = np.linspace(-1, 1, 200_001)
    vals = bump(1, x[:, None])
    assert np.trapezoid(vals, x) == pytest.approx(1.0, rel=1e-6)
    assert bump_constant(1) > 0


def test_ramp_extremos():
    t = np.array([-1.0, 0.0, 0.5, 1.0, 2.0])
    r = ramp(t)
    assert r[0] == 0.0 and r[1] == 0.0
    assert r[3] == 1.0 and r[4] == 1.0
    assert 0 < r[2] < 1


# ==================== PARTIÇÃO DA UNIDADE ====================

@pytest.mark.parametrize("nome", ["pou1", "pou2"])
def test_soma_igual_a_um(nome, request):
    pou = request.getfixturevalue(nome)
    X = _seguros(pou.decomp, 3000)
    assert np.max(np.abs(pou.partition_sum(X) - 1.0)) <= 1e-12


def test_psi_suportada_na_estrela(pou1):
    dec = pou1.decomp
    n = int(np.argmin(np.abs(dec.centers[:, 0] - 0.5)))
    l, c = dec.edges[n], dec.centers[n, 0]
    fora = np.array([[c + 0.6 * dec.star * l], [c - 0.6 * dec.star * l]])
    fora = fora[dec.safe(fora, 1.0)]
    assert np.all(pou1.psi(n, fora) == 0.0)
    assert pou1.psi(n, [c]) > 0


def test_psi_entre_zero_e_um(pou2):
    X = _seguros(pou2.decomp, 2000, seed=1)
    for n in range(0, len(pou2.decomp), max(1, len(pou2.decomp) // 20)):
        v = pou2.psi(n, X)
        assert np.all((v >= 0) & (v <= 1 + 1e-15))


def test_fora_da_regiao_coberta(pou1):
    tau = pou1.decomp.tau
    with pytest.raises(UndefinedRegionError):
        pou1.partition_sum(np.array([[tau / 2]]))


def test_lipschitz_finita(pou1):
    dec = pou1.decomp
    cubos = [n for n in range(len(dec)) if dec.gens[n] <= 4]
    c_star = lipschitz_constant(pou1, 500, 0, cubos)
    assert 0 < c_star < np.inf
