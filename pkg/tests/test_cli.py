import json

import pytest

from qhdcalc.cli import main
from qhdcalc.graph import parse_graph


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


SEED_A = "v 1 -1\nv 2 -3\nv 3 -3\nv 4 -3\ne 1 2\ne 1 3\ne 1 4\n"
CHAIN = "v 1 -2\nv 2 -5\ne 1 2\n"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_validate_ok(tmp_path, capsys):
    code, out = run(capsys, "validate", write(tmp_path, "g.txt", SEED_A))
    assert code == 0
    assert json.loads(out) == {"ok": True, "violations": []}


def test_validate_fail_exit_code(tmp_path, capsys):
    path = write(tmp_path, "g.txt", "v 1 -1\nv 2 -1\ne 1 2\n")
    code, out = run(capsys, "validate", path)
    assert code == 0  # structural invariants hold; weights are fine too
    path = write(tmp_path, "h.txt", "v 1 0\n")
    code, out = run(capsys, "validate", path)
    assert code == 2
    assert not json.loads(out)["ok"]


def test_parse_error_exit_code(tmp_path, capsys):
    path = write(tmp_path, "bad.txt", "v 1 -4\ne 1 2\n")
    code, _ = run(capsys, "validate", path)
    assert code == 2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 1


def test_matrix_and_negdef(tmp_path, capsys):
    path = write(tmp_path, "g.txt", SEED_A)
    code, out = run(capsys, "matrix", path)
    data = json.loads(out)
    assert code == 0 and data["det"] == 0
    code, out = run(capsys, "negdef", path)
    assert json.loads(out) == {"negative_definite": False}


def test_blowup_blowdown_roundtrip(tmp_path, capsys):
    path = write(tmp_path, "g.txt", SEED_A)
    code, out = run(capsys, "blowup", path, "B1")
    assert code == 0
    g = parse_graph(out)
    assert sorted(g.weights.values()) == [-3, -3, -3, -2, -1]
    path2 = write(tmp_path, "g2.txt", out)
    code, out = run(capsys, "blowdown", path2, "5")
    assert code == 0
    assert parse_graph(out).weights == parse_graph(SEED_A).weights


def test_augment_minimalize(tmp_path, capsys):
    path = write(tmp_path, "g.txt", SEED_A)
    code, out = run(capsys, "augment", path, "--type", "A")
    assert code == 0
    sharp = write(tmp_path, "sharp.txt", out)
    code, out = run(capsys, "minimalize", sharp, "--type", "A")
    assert code == 0
    assert sorted(parse_graph(out).weights.values()) == [-4, -3, -3, -3]


def test_enumerate_output(capsys):
    code, out = run(capsys, "enumerate", "--type", "A", "--max-ops", "1")
    assert code == 0
    recs = [json.loads(line) for line in out.strip().splitlines()]
    assert len(recs) == 3
    assert all(
        set(r) >= {"key", "weights", "node_count", "det", "negdef", "witness"}
        for r in recs
    )


def test_classify(tmp_path, capsys):
    path = write(tmp_path, "g.txt", CHAIN)
    code, out = run(capsys, "classify", path)
    assert json.loads(out)["shape"] == "linear"


def test_cyclic_chain_and_recognize(tmp_path, capsys):
    code, out = run(capsys, "cyclic", "chain", "3", "2")
    assert code == 0
    path = write(tmp_path, "c.txt", out)
    code, out = run(capsys, "cyclic", "recognize", path)
    assert json.loads(out)["witness"] == [3, 1]
    path = write(tmp_path, "n.txt", "v 1 -2\nv 2 -2\ne 1 2\n")
    code, out = run(capsys, "cyclic", "recognize", path)
    assert json.loads(out)["witness"] is None


def test_h1_with_cycle_and_dump(tmp_path, capsys):
    path = write(tmp_path, "g.txt", CHAIN)
    dump = tmp_path / "m.mtx"
    code, out = run(
        capsys, "h1", path, "--cycle", "2,2", "--dump-matrix", str(dump)
    )
    assert code == 0
    assert json.loads(out)["h1"] == 0
    assert dump.exists()
    for line in dump.read_text().strip().splitlines():
        r, c, frac = line.split()
        int(r), int(c)
        assert "/" in frac


def test_h1_stabilized(tmp_path, capsys):
    path = write(tmp_path, "g.txt", CHAIN)
    code, out = run(capsys, "h1", path)
    data = json.loads(out)
    assert code == 0 and data["h1"] == 0
    assert data["trace"] == [[2, 0], [3, 0]]


def test_qhd_modes(capsys):
    code, out = run(capsys, "qhd", "seed=A ops=B2@1-2,B1,B1 mod=yes")
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "no_qhd_smoothing"
    assert data["dim_bound"] == 0 and data["stage"] == "extended"


def test_qhd_bad_history(capsys):
    code, _ = run(capsys, "qhd", "seed=A ops=B9 mod=yes")
    assert code == 2


def test_qhd_out_of_scope(capsys):
    code, _ = run(capsys, "qhd", "seed=C ops=B1,B1,B2@5-6,B1 mod=yes")
    assert code == 2


def test_census_file_and_determinism(tmp_path, capsys):
    out1 = tmp_path / "census1.jsonl"
    out2 = tmp_path / "census2.jsonl"
    code, _ = run(
        capsys, "census", "--max-ops", "2", "--out", str(out1)
    )
    assert code == 0
    code, _ = run(
        capsys, "census", "--max-ops", "2", "--out", str(out2)
    )
    assert code == 0
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().strip().splitlines()
    summary = json.loads(lines[-1])["summary"]
    assert summary["anomaly_count"] == 0


def test_export_dot(tmp_path, capsys):
    path = write(tmp_path, "g.txt", SEED_A)
    code, out = run(capsys, "export-dot", path)
    assert code == 0 and out.startswith("graph")


def test_stdin_input(tmp_path, capsys, monkeypatch):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(SEED_A))
    code, out = run(capsys, "matrix", "-")
    assert code == 0 and json.loads(out)["det"] == 0
