import numpy as np
import pytest

from app.datasources.model_sets import make_mesh
from app.services.indexing import dims
from app.services.polyspace import FieldWeight, WeightComponent, constant


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def interval3():
    return make_mesh("interval", 3)


@pytest.fixture
def unit_weight():
    return constant(1.0)


@pytest.fixture
def mixed_weight():
    return FieldWeight([WeightComponent("constant", 1.0), WeightComponent("gaussian", 0.5)])


@pytest.fixture
def d121():
    return dims(1, 2, 1)


@pytest.fixture(autouse=True)
def _isolated_settings(tmp_path, monkeypatch):
    monkeypatch.setenv("FEKETE_OUTPUT_DIR", str(tmp_path / "out"))
    from app.config import get_settings

    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
