import csv
import json

import pytest

from polyssp.cli import main


@pytest.fixture
def x0_file(tmp_path):
    p = tmp_path / "X0.json"
    p.write_text(json.dumps({"n": 2, "X": [[2, 1], [1, 1]]}))
    return p


def run(capsys, *args):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_planted_pipeline(tmp_path, x0_file, capsys):
    z, s = tmp_path / "z.json", tmp_path / "s.json"
    assert run(capsys, "gen-zoe", "--k", 3, "--mode", "planted", "--seed", 7, "-o", z)[0] == 0
    assert run(capsys, "reduce", z, "--matrix", x0_file, "-o", s)[0] == 0
    code, out, _ = run(capsys, "solve", s)
    assert code == 0
    assert json.loads(out)["positive"] is True
    code, out, _ = run(capsys, "solve", s, "--solver", "mitm")
    assert json.loads(out)["positive"] is True
    code, out, _ = run(capsys, "verify", z, "--matrix", x0_file)
    assert json.loads(out)["verdicts_agree"] is True


def test_collect_command(capsys):
    code, out, _ = run(capsys, "collect", "--r", 2, "--c", 2, "--word", "x2 x1")
    assert code == 0
    assert json.loads(out) == {"basis": ["x1", "x2", "[x1,x2]"], "alphas": [1, 1, -1]}


def test_table_command(x0_file, capsys):
    code, out, _ = run(capsys, "table", "--matrix", x0_file, "--kmax", 3)
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert [int(r["norm_sq"]) for r in rows] == [5, 34, 233]


def test_plan_command(x0_file, capsys):
    code, out, _ = run(capsys, "plan", "--matrix", x0_file, "--lambda", 2, "--count", 3)
    assert code == 0
    obj = json.loads(out)
    assert obj["indices"] == [1, 2, 3]
    assert obj["witnesses"][0] == "x^-1 e1 x"


def test_round_trip_bit_identical(tmp_path, x0_file, capsys):
    from polyssp.io import dumps, load_json
    from polyssp.reduction import SspInstance, ZoeInstance

    z, s = tmp_path / "z.json", tmp_path / "s.json"
    run(capsys, "gen-zoe", "--k", 4, "--seed", 3, "-o", z)
    run(capsys, "reduce", z, "--matrix", x0_file, "-o", s)
    assert dumps(ZoeInstance.from_json(load_json(z)).to_json()) == z.read_text()
    assert dumps(SspInstance.from_json(load_json(s)).to_json()) == s.read_text()


def test_determinism(tmp_path, x0_file, capsys):
    outs = []
    for i in range(2):
        z, s = tmp_path / f"z{i}.json", tmp_path / f"s{i}.json"
        run(capsys, "gen-zoe", "--k", 5, "--mode", "planted", "--density", 0.3, "--seed", 11, "-o", z)
        run(capsys, "reduce", z, "--matrix", x0_file, "-o", s)
        outs.append((z.read_bytes(), s.read_bytes(), run(capsys, "solve", s)[1]))
    assert outs[0] == outs[1]


def test_exit_codes(tmp_path, x0_file, capsys):
    assert run(capsys, "solve", tmp_path / "missing.json")[0] == 3
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "solve", bad)
    assert code == 3 and len(err.strip().splitlines()) == 1
    u = tmp_path / "U.json"
    u.write_text("[[1, 1], [0, 1]]")
    assert run(capsys, "plan", "--matrix", u, "--lambda", 2, "--count", 2)[0] == 3
    with pytest.raises(SystemExit) as exc:
        main(["gen-zoe"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["gen-zoe", "--k", "3", "--seed", "-1"])
    assert exc.value.code == 2
    wrong = tmp_path / "w.json"
    wrong.write_text(json.dumps({"group": {"n": 2, "X": [[2, 1], [1, 1]]}, "items": ["y"], "target": ""}))
    assert run(capsys, "solve", wrong)[0] == 3


def test_negative_verdict_exits_zero(tmp_path, capsys):
    s = tmp_path / "s.json"
    s.write_text(json.dumps({"group": {"n": 2, "X": [[2, 1], [1, 1]]}, "items": ["e1"], "target": "e2"}))
    code, out, _ = run(capsys, "solve", s)
    assert code == 0 and json.loads(out)["positive"] is False


def _verdicts(text):
    return [(r["file"], r["verdict"]) for r in csv.DictReader(text.splitlines())]


def test_corpus(tmp_path, capsys):
    empty = tmp_path / "empty"
    empty.mkdir()
    code, out, _ = run(capsys, "corpus", empty)
    assert code == 0 and out == "file,k,verdict,nodes,seconds\n"

    d = tmp_path / "c"
    _, brute, _ = run(capsys, "corpus", d, "--generate", 10, "--k", 8)
    _, mitm, _ = run(capsys, "corpus", d, "--solver", "mitm")
    vb = _verdicts(brute)
    assert len(vb) == 10 and all(v == "positive" for _, v in vb)
    assert vb == _verdicts(mitm)
    assert [f for f, _ in vb] == sorted(f for f, _ in vb)

    (d / "zz_broken.json").write_text("[")
    _, out, _ = run(capsys, "corpus", d)
    assert _verdicts(out)[-1] == ("zz_broken.json", "error")
    assert len(_verdicts(out)) == 11


def test_bench_command(capsys):
    code, out, _ = run(capsys, "bench", "--k", 6, "--seeds", 1)
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert {r["backend"] for r in rows} >= {"python"}
    by_key = {}
    for r in rows:
        by_key.setdefault((r["family"], r["k"], r["seed"], r["solver"]), set()).add((r["verdict"], r["nodes"]))
    assert all(len(v) == 1 for v in by_key.values())


def test_selftest_command(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert len([l for l in out.splitlines() if l.startswith("[PASS]")]) == 11
