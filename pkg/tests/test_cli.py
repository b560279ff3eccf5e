import json
import subprocess
import sys

import pytest

from lierecog.cli import main


def run(args, capsys):
    code = main(args)
    return code, capsys.readouterr().out


def test_build_verify_highweight(tmp_path, capsys):
    out = tmp_path / "g2.mats"
    code, text = run(["build", "--type", "G2", "--q", "3^1", "--out", str(out)], capsys)
    assert code == 0 and json.loads(text)["d"] == 14
    man = json.loads((tmp_path / "g2.mats.json").read_text())
    assert man["version"] == "v1" and len(man["slots"]) == 4
    code, text = run(["verify", "--type", "G2", "--q", "3", "--in", str(out)], capsys)
    rep = json.loads(text)
    assert code == 0 and rep["pass"] and rep["total"] == 72
    code, text = run(["highweight", "--in", str(out)], capsys)
    assert json.loads(text)["high_weight"] == [1, 0]


def test_verify_fails_on_corrupted_file(tmp_path, capsys):
    out = tmp_path / "g2.mats"
    run(["build", "--type", "G2", "--q", "5", "--out", str(out)], capsys)
    lines = out.read_text().splitlines()
    # swap the first two generator blocks
    d = 14
    body = lines[1:]
    body = body[d:2 * d] + body[:d] + body[2 * d:]
    out.write_text("\n".join([lines[0]] + body) + "\n")
    code, text = run(["verify", "--in", str(out)], capsys)
    assert code == 1 and not json.loads(text)["pass"]


def test_recognize_is_reproducible(tmp_path, capsys):
    src = tmp_path / "conj.mats"
    run(["build", "--type", "G2", "--q", "3", "--out", str(src), "--conjugate", "--seed", "7"], capsys)
    reports = []
    for name in ("a", "b"):
        code, text = run(["recognize", "--type", "G2", "--q", "3", "--in", str(src), "--seed", "7",
                          "--out", str(tmp_path / f"{name}.mats")], capsys)
        assert code == 0
        rep = json.loads(text)
        rep.pop("timing")
        rep.pop("out")
        reports.append(rep)
    assert reports[0] == reports[1] and reports[0]["pass"] and reports[0]["seed"] == 7
    assert (tmp_path / "a.mats").read_bytes() == (tmp_path / "b.mats").read_bytes()
    man = json.loads((tmp_path / "a.mats.json").read_text())
    assert all(s.strip().splitlines()[-1].split()[0] in ("MUL", "INV", "GEN") for s in man["slps"])
    code, text = run(["verify", "--in", str(tmp_path / "a.mats")], capsys)
    assert code == 0


def test_bound_and_estimate(capsys):
    code, text = run(["bound", "--eps", "+", "--q", "8", "--table"], capsys)
    rep = json.loads(text)
    assert code == 0 and rep["below_one"] and rep["bound"] == "237942499/553912320"
    assert len(rep["table"]) == 6
    code, text = run(["estimate", "--scenario", "trivial", "--q", "4", "--trials", "3", "--format", "csv"], capsys)
    assert code == 0 and text.splitlines()[1].startswith("trivial,4,3,3,0,")


def test_errors(tmp_path, capsys):
    assert main(["verify", "--in", str(tmp_path / "missing.mats")]) == 2
    assert main(["bound", "--eps", "+", "--q", "6"]) == 2
    assert main(["recognize", "--type", "G2", "--q", "3", "--in", "x", "--epsilon", "2"]) == 2
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "lierecog", "bound", "--eps", "-", "--q", "16", "--format", "text"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "below_one: True" in r.stdout
