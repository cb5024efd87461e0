import pytest
from pydantic import ValidationError

from app.errors import validation_error_body
from app.schemas import ExperimentConfig


def test_defaults():
    cfg = ExperimentConfig()
    assert cfg.set_name == "interval"
    assert cfg.components == 1
    assert cfg.n == 1
    assert cfg.degrees((2, 4)) == [2, 3, 4]
    assert len(cfg.t_values) == 11
    assert cfg.t_values[0] == -1.0 and cfg.t_values[-1] == 1.0


def test_degrees_prefer_range_over_single_degree():
    assert ExperimentConfig(r=5).degrees((2, 4)) == [5]
    assert ExperimentConfig(r=5, r_range=(1, 3)).degrees((2, 4)) == [1, 2, 3]


def test_set_accepts_alias_and_field_name():
    assert ExperimentConfig.model_validate({"set": "square"}).n == 2
    assert ExperimentConfig(set_name="cube").n == 3


def test_unknown_keys_are_rejected_with_their_path():
    with pytest.raises(ValidationError) as info:
        ExperimentConfig.model_validate({"set": "interval", "degre": 3})
    assert validation_error_body(info.value)["field"] == "degre"
    with pytest.raises(ValidationError) as info:
        ExperimentConfig.model_validate({"tolerances": {"greedy": 0.9}})
    assert validation_error_body(info.value)["field"] == "tolerances.greedy"


@pytest.mark.parametrize(
    "payload,field",
    [
        ({"r": -1}, "r"),
        ({"set": "sphere"}, "set"),
        ({"weight": [{"kind": "constant", "c": 0.0}]}, "weight.0"),
        ({"weight": [{"kind": "gaussian", "c": -1.0}]}, "weight.0"),
        ({"workers": 0}, "workers"),
        ({"r_range": [5, 2]}, "r_range"),
    ],
)
def test_out_of_range_values(payload, field):
    with pytest.raises(ValidationError) as info:
        ExperimentConfig.model_validate(payload)
    assert validation_error_body(info.value)["field"] == field


def test_weight_broadcast_and_mismatch():
    cfg = ExperimentConfig(s=3)
    assert cfg.weight_specs() == [{"kind": "constant", "c": 1.0}] * 3
    with pytest.raises(ValidationError):
        ExperimentConfig.model_validate({"s": 3, "weight": [{"kind": "constant"}, {"kind": "gaussian"}]})


def test_forms_must_match_the_set():
    assert ExperimentConfig.model_validate({"set": "cube", "forms": {"n": 3, "k": 2}}).forms.k == 2
    with pytest.raises(ValidationError):
        ExperimentConfig.model_validate({"set": "square", "forms": {"n": 3, "k": 1}})
    with pytest.raises(ValidationError):
        ExperimentConfig.model_validate({"set": "square", "forms": {"n": 2, "k": 3}})
