"""Preset and random model generation."""

import pytest

from finhopf.algebroid import check_axioms
from finhopf.modelio import carrier_from_model, validate_model
from finhopf.models import (
    PRESETS,
    build_model,
    funs3_model,
    pairh3_model,
    random_model,
    z2line_model,
)


def test_presets_are_wired_up():
    assert set(PRESETS) == {"z2line", "pairh3", "funs3"}
    for name in PRESETS:
        validate_model(build_model(name))


def test_build_model_random_and_unknown():
    assert build_model("random", seed=4) == random_model(4)
    with pytest.raises(ValueError):
        build_model("no-such-preset")


def test_preset_shapes():
    z = z2line_model()
    assert z["kind"] == "convolution"
    assert len(z["groupoid"]["arrows"]) == 2
    assert z["truncation"] == 4

    p = pairh3_model()
    assert len(p["groupoid"]["arrows"]) == 4
    assert {b["point"] for b in p["bundle"]} == {"x", "y"}

    f = funs3_model()
    assert f["kind"] == "table"
    assert len(f["table"]["basis"]) == 6


def test_random_models_validate_and_stay_small():
    for seed in range(50):
        model = random_model(seed)
        validate_model(model)
        carrier = carrier_from_model(model)
        assert carrier.validate() == []
        assert len(carrier.groupoid.arrows) <= 8


def test_random_model_is_deterministic():
    assert random_model(17) == random_model(17)
    assert random_model(17) != random_model(18)


def test_random_models_pass_the_axiom_suite():
    for seed in (2, 9, 31):
        carrier = carrier_from_model(random_model(seed))
        assert check_axioms(carrier, samples=25, seed=seed).ok
