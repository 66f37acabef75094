import json

import pytest

import tsf


def test_builders_listed():
    names = tsf.builders()
    assert "heisenberg5" in names
    assert "kodaira_thurston" in names


def test_torus_betti_is_binomial():
    assert tsf.basic_betti("torus2") == [1, 4, 6, 4, 1]


def test_validate_exit_code():
    code, report = tsf.run_json("validate", "--builder", "heisenberg5")
    assert code == 0
    assert report["verdict"] == "pass"
    assert report["schema_version"] == tsf.SCHEMA_VERSION
    assert report["tool"]["version"] == tsf.__version__


def test_lefschetz_failure_on_kodaira_thurston():
    code, report = tsf.run_json("lefschetz", "--builder", "kodaira_thurston")
    assert code == 1
    bad = [d for d in report["sections"]["lefschetz"] if not d["iso"]]
    assert [d["k"] for d in bad] == [1]


def test_input_error():
    code, out, err = tsf.run(["validate", "--builder", "nope"])
    assert code == 2
    assert "nope" in err
    with pytest.raises(ValueError):
        tsf.basic_betti("nope")


def test_model_hash_matches():
    m = tsf.model_json("torus1")
    _, report = tsf.run_json("validate", "--builder", "torus1")
    assert report["model"]["hash"] == "fnv1a64:%016x" % tsf.fnv1a64(m)
    assert json.loads(m)["name"] == "torus1"
