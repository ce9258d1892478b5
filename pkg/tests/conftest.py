# tests/conftest.py

import json

import pytest

from fracdense.geometry import Box, OpenSetSpec, decompose
from fracdense.partition import PartitionOfUnity
from fracdense.quadrature import QuadratureConfig


def intervalo(dim=1):
    return OpenSetSpec(dim, (Box((0.0,) * dim, (1.0,) * dim),), ((0.0,) * dim, (1.0,) * dim))


@pytest.fixture(scope="session")
def spec1():
    return intervalo(1)


@pytest.fixture(scope="session")
def spec2():
    return intervalo(2)


@pytest.fixture(scope="session")
def dec1(spec1):
    return decompose(spec1, 0.1, 10)


@pytest.fixture(scope="session")
def dec2(spec2):
    return decompose(spec2, 0.1, 5)


@pytest.fixture(scope="session")
def pou1(dec1):
    return PartitionOfUnity(dec1)


@pytest.fixture(scope="session")
def pou2(dec2):
    return PartitionOfUnity(dec2)


@pytest.fixture
def quad():
    return QuadratureConfig(resolution=128, order=16)


@pytest.fixture
def config_texto():
    """Experimento barato em (0, 1): tenda com suporte compacto, só erro L^p."""
    def monta(**extra):
        raw = {
            "domain": {"dim": 1, "shapes": [{"type": "box", "lo": [0], "hi": [1]}], "bbox": [[0], [1]]},
            "epsilon": 0.1,
            "max_generation": 8,
            "function": {"name": "hat", "params": {"lo": [0.2], "hi": [0.8]}},
            "sobolev": {"s": 0.5, "p": 2},
            "eta": {"mode": "uniform", "fractions": [0.04, 0.01]},
            "errors": ["lp"],
            "quadrature": {"resolution": 64, "order": 16},
            "tolerances": {"lp": 0.05},
            "seed": 0,
        }
        raw.update(extra)
        return json.dumps(raw)
    return monta
