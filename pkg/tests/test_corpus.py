import json
import shutil

import pytest

from mealylearn import InvalidArgumentError, MealyError, SINK_OUTPUT, is_minimal, save_dot
from mealylearn.corpus import (
    CORPUS_DIR,
    CorpusEntry,
    get_model,
    load_corpus,
    load_model,
    read_manifest,
    resolve_model,
)
from mealylearn.synth import ble_like, mqtt_like

SHAPES = {
    "CC2640R2-no-feature": (11, 8), "CC2640R2-no-pairing": (6, 8), "CC2650": (5, 9),
    "CC2652R1": (4, 7), "CYBLE-416045-02": (3, 9), "CYW43455": (4, 7), "nRF52832": (5, 9),
    "ActiveMQ": (18, 9), "emqtt": (18, 9), "HBMQTT": (17, 9), "mosquitto": (18, 9),
    "VerneMQ": (17, 9),
}


def test_manifest_shapes():
    entries = {e.name: e for e in read_manifest()}
    assert {n: (e.n_states, e.n_inputs) for n, e in entries.items()} == SHAPES
    assert {e.family for e in entries.values()} == {"ble", "mqtt"}
    assert all(e.provenance == "synthetic" for e in entries.values())


def test_every_model_loads_and_is_minimal():
    models = load_corpus()
    assert len(models) == 12
    for e, m in models:
        assert is_minimal(m), e.name
        assert (e.path.split("/")[0]) == e.family


def test_models_are_distinct():
    texts = [(CORPUS_DIR / e.path).read_text() for e in read_manifest()]
    assert len(set(texts)) == len(texts)


def test_files_match_generator_arguments():
    from mealylearn import isomorphic

    for e, m in load_corpus():
        args = dict(e.generator)
        gen = args.pop("generator")
        if gen == "ble_like":
            rebuilt = ble_like(e.n_states, e.n_inputs, **args)
        else:
            rebuilt = mqtt_like(e.n_states, e.n_inputs, **args)
        assert isomorphic(rebuilt, m), e.name


def test_family_filter():
    assert len(load_corpus("ble")) == 7
    with pytest.raises(InvalidArgumentError):
        load_corpus("zigbee")


def test_shape_mismatch(tmp_path):
    shutil.copytree(CORPUS_DIR, tmp_path / "c")
    manifest = tmp_path / "c" / "manifest.json"
    data = json.loads(manifest.read_text())
    data["models"][0]["n_states"] += 1
    manifest.write_text(json.dumps(data))
    with pytest.raises(MealyError, match="expected"):
        load_corpus(root=tmp_path / "c")


def test_unknown_provenance():
    with pytest.raises(InvalidArgumentError):
        CorpusEntry("x", "ble", "ble/x.dot", 1, 1, provenance="borrowed")


def test_sink_output_reserved(tmp_path):
    from mealylearn import MealyMachine

    m = MealyMachine({"s": {"a": ("s", SINK_OUTPUT)}}, "s")
    save_dot(m, tmp_path / "bad.dot")
    with pytest.raises(MealyError, match="reserved"):
        load_model(tmp_path / "bad.dot")


def test_resolve_model(tmp_path, fig2c):
    assert len(resolve_model("CYW43455")) == 4
    save_dot(fig2c, tmp_path / "f.dot")
    assert len(resolve_model(str(tmp_path / "f.dot"))) == 2
    with pytest.raises(InvalidArgumentError):
        get_model("no-such-model")
