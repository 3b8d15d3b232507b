import json

import numpy as np
import pytest

from faithdp.cli import main
from faithdp.fileio import read_fdpm, read_labels, write_fdpm


@pytest.fixture
def blobs_dir(tmp_path):
    out = tmp_path / "ds"
    assert main(["gen", "--kind", "blobs", "--n", "240", "--clusters", "3", "--seed", "1", "--out", str(out)]) == 0
    return out


def test_gen_spirals(tmp_path):
    out = tmp_path / "ds"
    assert main(["gen", "--kind", "spirals5", "--n", "500", "--seed", "7", "--out", str(out)]) == 0
    X = read_fdpm(out / "points.fdpm")
    assert X.shape == (500, 2)
    assert sorted(set(read_labels(out / "labels.csv").tolist())) == [0, 1, 2, 3, 4]


def test_gen_blobs(blobs_dir):
    assert sorted(set(read_labels(blobs_dir / "labels.csv").tolist())) == [0, 1, 2]


def test_gen_missing_out():
    with pytest.raises(SystemExit) as info:
        main(["gen", "--kind", "blobs", "--n", "10"])
    assert info.value.code == 2


def test_cluster_oracle_eval(blobs_dir, tmp_path, capsys):
    pts = str(blobs_dir / "points.fdpm")
    c1, c8, o = tmp_path / "c1", tmp_path / "c8", tmp_path / "o"
    common = ["--input", pts, "--clusters", "3", "--kernel", "cutoff"]
    assert main(["cluster", *common, "--workers", "1", "--batch", "32", "--vectors", "--out", str(c1)]) == 0
    assert main(["cluster", *common, "--workers", "8", "--batch", "32", "--vectors", "--out", str(c8)]) == 0
    assert main(["oracle", *common, "--out", str(o)]) == 0
    assert (c1 / "labels.csv").read_bytes() == (c8 / "labels.csv").read_bytes()
    assert (c1 / "labels.csv").read_bytes() == (o / "labels.csv").read_bytes()
    assert (c1 / "vectors.csv").read_bytes() == (o / "vectors.csv").read_bytes()
    assert len((o / "vectors.csv").read_text().splitlines()) == 241
    report = json.loads((c8 / "report.json").read_text())
    assert report["config"]["kernel"] == "cutoff"
    assert report["workers"] == 8 and report["n_clusters"] == 3
    assert {"stage1", "stage2", "stage3"} <= set(report["timings"])
    assert report["peak_block_entries"] > 0
    capsys.readouterr()
    assert main(["eval", "--pred", str(c1 / "labels.csv"), "--truth", str(blobs_dir / "labels.csv")]) == 0
    scores = json.loads(capsys.readouterr().out)
    assert scores["nmi"] == pytest.approx(1.0) and scores["ari"] == pytest.approx(1.0)


def test_cluster_is_deterministic(blobs_dir, tmp_path):
    pts = str(blobs_dir / "points.fdpm")
    for name in ("a", "b"):
        assert main(["cluster", "--input", pts, "--auto-c", "--out", str(tmp_path / name)]) == 0
    assert (tmp_path / "a" / "labels.csv").read_bytes() == (tmp_path / "b" / "labels.csv").read_bytes()


def test_env_workers(blobs_dir, tmp_path, monkeypatch):
    monkeypatch.setenv("FAITHDP_WORKERS", "3")
    out = tmp_path / "c"
    assert main(["cluster", "--input", str(blobs_dir / "points.fdpm"), "--batch", "50", "--out", str(out)]) == 0
    assert json.loads((out / "report.json").read_text())["workers"] == 3


def test_eval_identical_and_mismatch(tmp_path, capsys):
    a = tmp_path / "a.csv"
    a.write_text("0,0\n1,0\n2,1\n3,1\n")
    b = tmp_path / "b.csv"
    b.write_text("0,1\n1,0\n2,1\n3,0\n")
    short = tmp_path / "s.csv"
    short.write_text("0,0\n1,1\n")
    assert main(["eval", "--pred", str(a), "--truth", str(a)]) == 0
    assert json.loads(capsys.readouterr().out) == {"nmi": 1.0, "ari": 1.0}
    assert main(["eval", "--pred", str(a), "--truth", str(b)]) == 0
    scores = json.loads(capsys.readouterr().out)
    assert scores["ari"] == pytest.approx(-0.5) and scores["nmi"] == pytest.approx(0.0, abs=1e-12)
    assert main(["eval", "--pred", str(a), "--truth", str(short)]) == 2


def test_precomputed_paths(tmp_path):
    X = np.random.default_rng(3).normal(size=(50, 2))
    D = np.sqrt(((X[:, None] - X[None]) ** 2).sum(-1))
    good = tmp_path / "d.fdpm"
    write_fdpm(good, D)
    assert main(["cluster", "--input", str(good), "--metric", "precomputed", "--clusters", "2",
                 "--out", str(tmp_path / "p")]) == 0
    bad = D.copy()
    bad[0, 1] += 1.0
    write_fdpm(tmp_path / "bad.fdpm", bad)
    assert main(["cluster", "--input", str(tmp_path / "bad.fdpm"), "--metric", "precomputed",
                 "--out", str(tmp_path / "q")]) == 4


def test_error_exit_codes(tmp_path, monkeypatch):
    assert main(["cluster", "--input", str(tmp_path / "missing.fdpm"), "--out", str(tmp_path / "x")]) == 3
    nan = tmp_path / "nan.csv"
    nan.write_text("1,2\nnan,3\n4,5\n")
    assert main(["cluster", "--input", str(nan), "--out", str(tmp_path / "y")]) == 4
    ok = tmp_path / "ok.csv"
    ok.write_text("1,2\n2,3\n4,5\n")
    assert main(["cluster", "--input", str(ok), "--k", "5", "--out", str(tmp_path / "z")]) == 2
    import faithdp.cli as cli

    monkeypatch.setattr(cli, "MAX_ORACLE_N", 2)
    assert main(["oracle", "--input", str(ok), "--out", str(tmp_path / "o")]) == 5


def test_bench(tmp_path):
    out = tmp_path / "bench.csv"
    args = ["bench", "--sizes", "300,600,900", "--batch", "128", "--workers", "2", "--out", str(out)]
    assert main(args) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 4
    first = lines[1:]
    assert main(args) == 0
    second = out.read_text().splitlines()[1:]
    header = lines[0].split(",")
    for a, b in zip(first, second):
        ra, rb = dict(zip(header, a.split(","))), dict(zip(header, b.split(",")))
        assert (ra["nmi"], ra["ari"], ra["dc"]) == (rb["nmi"], rb["ari"], rb["dc"])
