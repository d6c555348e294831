import json

import numpy as np
import pytest

from csst.cli import main
from csst.io import read_codebook_json, read_matrix_csv, read_pgm


def test_gen_peaks(tmp_path):
    out = tmp_path / "d.csv"
    assert main(["gen", "peaks", "--n", "49", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 2402
    manifest = json.loads((tmp_path / "d.manifest.json").read_text())
    assert manifest["parameters"] == {"kind": "peaks", "n": 49}


def test_gen_gauss(tmp_path):
    out = tmp_path / "g.csv"
    args = ["gen", "gauss", "--n", "50", "--sep", "10", "--bridge", "0.2", "--seed", "3", "--out", str(out)]
    assert main(args) == 0
    assert len(out.read_text().splitlines()) == 101


def test_gen_missing_out(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gen", "peaks", "--n", "49"])
    assert exc.value.code == 2
    assert "--out" in capsys.readouterr().err


def test_gen_invalid_parameter(tmp_path, capsys):
    assert main(["gen", "peaks", "--n", "1", "--out", str(tmp_path / "d.csv")]) == 1
    assert "grid_n" in capsys.readouterr().err


def test_train_missing_file(tmp_path):
    assert main(["train", "--data", str(tmp_path / "nope.csv"), "--out-dir", str(tmp_path)]) == 1


def test_train_bad_csv(tmp_path, capsys):
    (tmp_path / "d.csv").write_text("x,y\n1,2\n3\n")
    assert main(["train", "--data", str(tmp_path / "d.csv"), "--out-dir", str(tmp_path)]) == 1
    assert "line 3" in capsys.readouterr().err


@pytest.fixture(scope="module")
def small_run(tmp_path_factory):
    root = tmp_path_factory.mktemp("run")
    data = root / "d.csv"
    assert main(["gen", "peaks", "--n", "25", "--out", str(data)]) == 0
    assert main(["train", "--data", str(data), "--out-dir", str(root), "--rows", "6", "--cols", "5"]) == 0
    return root, data


def test_train_outputs(small_run):
    root, _ = small_run
    cb = read_codebook_json(root / "codebook.json")
    assert cb.n_neurons == 30
    assert read_pgm(root / "umatrix.pgm").shape == (11, 9)
    assert len((root / "umatrix.csv").read_text().splitlines()) == 11
    manifest = json.loads((root / "train_manifest.json").read_text())
    assert manifest["quantization_error_after"] < manifest["quantization_error_before"]
    assert manifest["parameters"]["rows"] == 6
    assert set(manifest["outputs"]) == {"codebook.json", "umatrix.csv", "umatrix.pgm"}


def test_train_tiny_grid(tmp_path, small_run):
    _, data = small_run
    assert main(["train", "--data", str(data), "--out-dir", str(tmp_path), "--rows", "2", "--cols", "2"]) == 0
    assert read_pgm(tmp_path / "umatrix.pgm").shape == (3, 3)


def test_analyze_defaults_and_k(tmp_path, small_run):
    root, data = small_run
    common = ["analyze", "--data", str(data), "--codebook", str(root / "codebook.json")]
    for k in ("2", "10"):
        out = tmp_path / f"k{k}"
        assert main(common + ["--out-dir", str(out), "--k", k, "--m", "8", "--min-support", "3"]) == 0
        manifest = json.loads((out / "analyze_manifest.json").read_text())
        assert manifest["parameters"]["k"] == int(k)
        m = read_matrix_csv(out / "csst.csv")
        assert m.values.shape == (8, 8)
        assert read_pgm(out / "csst.pgm").shape == (8, 8)
        assert read_pgm(out / "euclid.pgm").shape == (8, 8)


def test_analyze_manual_regions(tmp_path, small_run):
    root, data = small_run
    common = ["analyze", "--data", str(data), "--codebook", str(root / "codebook.json"), "--out-dir", str(tmp_path)]
    assert main(common + ["--regions", "3,17,22"]) == 0
    m = read_matrix_csv(tmp_path / "euclid.csv")
    assert list(m.labels) == [3, 17, 22]
    np.testing.assert_array_equal(m.values, m.values.T)


def test_analyze_duplicate_regions(small_run):
    root, data = small_run
    with pytest.raises(SystemExit) as exc:
        main(["analyze", "--data", str(data), "--codebook", str(root / "codebook.json"),
              "--out-dir", str(root / "x"), "--regions", "1,1"])
    assert exc.value.code == 2


def test_analyze_bad_region_index(tmp_path, small_run):
    root, data = small_run
    args = ["analyze", "--data", str(data), "--codebook", str(root / "codebook.json"),
            "--out-dir", str(tmp_path), "--regions", "1,999"]
    assert main(args) == 1


def test_analyze_dimension_mismatch(tmp_path, small_run):
    root, _ = small_run
    (tmp_path / "d2.csv").write_text("a,b\n1,2\n3,4\n")
    args = ["analyze", "--data", str(tmp_path / "d2.csv"), "--codebook", str(root / "codebook.json"),
            "--out-dir", str(tmp_path)]
    assert main(args) == 1
