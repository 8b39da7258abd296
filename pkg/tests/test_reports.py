import json

import numpy as np
import pytest

from ringqed.reports import sha256_file, write_csv, write_gnuplot, write_sidecar


def test_csv_round_trip_full_precision(tmp_path):
    rng = np.random.default_rng(3)
    x = rng.uniform(1e-8, 1e8, size=20)
    y = rng.standard_normal(20)
    path = write_csv(tmp_path / "table.csv", ["x", "y"], [x, y])
    data = np.genfromtxt(path, delimiter=",", names=True)
    # %.17g preserves doubles exactly
    np.testing.assert_array_equal(data["x"], x)
    np.testing.assert_array_equal(data["y"], y)


def test_csv_mixed_types(tmp_path):
    path = write_csv(
        tmp_path / "mixed.csv",
        ["n", "label", "value"],
        [np.array([1, 2]), np.array(["a", "b"]), np.array([0.5, 1.5])],
    )
    lines = path.read_text().splitlines()
    assert lines[0] == "n,label,value"
    assert lines[1] == "1,a,0.5"


def test_csv_shape_validation(tmp_path):
    with pytest.raises(ValueError):
        write_csv(tmp_path / "bad.csv", ["a", "b"], [np.arange(3)])
    with pytest.raises(ValueError):
        write_csv(
            tmp_path / "bad2.csv", ["a", "b"], [np.arange(3), np.arange(4)]
        )


def test_sidecar_contents_and_hashes(tmp_path):
    csv = write_csv(tmp_path / "data.csv", ["x"], [np.arange(4.0)])
    side = write_sidecar(
        tmp_path / "data.json",
        config={"trials": 10, "sigma": 0.5, "field": np.complex128(1 + 2j)},
        seed=1234,
        data_files=[csv],
        fit={"fwhm": 1.05},
    )
    payload = json.loads(side.read_text())
    assert payload["config"]["trials"] == 10
    assert payload["config"]["field"] == {"re": 1.0, "im": 2.0}
    assert payload["seed"] == 1234
    assert payload["fit"]["fwhm"] == 1.05
    assert payload["data_files"]["data.csv"] == sha256_file(csv)
    assert payload["generator"].startswith("ringqed ")


def test_sidecar_hash_changes_with_data(tmp_path):
    a = write_csv(tmp_path / "a.csv", ["x"], [np.array([1.0])])
    h1 = sha256_file(a)
    write_csv(tmp_path / "a.csv", ["x"], [np.array([2.0])])
    assert sha256_file(a) != h1


def test_gnuplot_script(tmp_path):
    path = write_gnuplot(
        tmp_path / "plot.gp",
        "data.csv",
        title="decay",
        xlabel="N",
        ylabel="rate",
        series=[(1, 2, "line"), (1, 3, "ring")],
        logy=True,
    )
    text = path.read_text()
    assert "set logscale y" in text
    assert "set logscale x" not in text
    assert "'data.csv' using 1:2" in text
    assert "'data.csv' using 1:3" in text
