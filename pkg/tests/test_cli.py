import json

import pytest

from polyconn import cli, verify
from polyconn.serialize import dumps, instance_json


def run(tmp_path, *args, name="out.json"):
    out = tmp_path / name
    code = cli.main(list(args) + ["--out", str(out)])
    return code, out.read_text() if out.exists() else None


def test_gen_is_byte_stable(tmp_path):
    c1, a = run(tmp_path, "gen", "--d", "3", "--n", "2", "--count", "2", "--seed", "4", name="a.json")
    c2, b = run(tmp_path, "gen", "--d", "3", "--n", "2", "--count", "2", "--seed", "4", name="b.json")
    assert c1 == c2 == 0 and a == b
    obj = json.loads(a)
    assert [i["spec"]["seed"] for i in obj["instances"]] == [4, 5]


def test_verify_theorem_report_independent_of_workers(tmp_path):
    c1, a = run(tmp_path, "verify-theorem", "--d", "3", "--count", "3", "--workers", "1", name="a.json")
    c2, b = run(tmp_path, "verify-theorem", "--d", "3", "--count", "3", "--workers", "2", name="b.json")
    assert c1 == c2 == 0 and a == b
    rep = json.loads(a)
    assert rep["ok"] and rep["pass_rate"] == 1.0 and "timings" not in rep["records"][0]
    assert rep["records"][0]["pi1_X"] in ("Trivial", "Inconclusive")


@pytest.mark.parametrize("cmd,extra", [
    ("verify-base", ["--d", "3"]),
    ("verify-lemma", ["--d", "3", "--n", "2"]),
    ("morse-report", ["--d", "3"]),
    ("homology", ["--d", "3", "--n", "2"]),
])
def test_commands_succeed(tmp_path, cmd, extra):
    code, text = run(tmp_path, cmd, "--count", "2", *extra)
    assert code == 0
    json.loads(text)


def test_failures_exit_nonzero(tmp_path, monkeypatch):
    monkeypatch.setattr(cli, "verify_theorem", lambda **kw: {"ok": False})
    assert run(tmp_path, "verify-theorem", "--count", "1")[0] == 1
    assert run(tmp_path, "verify-base", "--n", "2")[0] == 2


def test_workers_env(monkeypatch):
    monkeypatch.setenv(verify.WORKERS_ENV, "3")
    assert verify.default_workers() == 3
    monkeypatch.setenv(verify.WORKERS_ENV, "junk")
    assert verify.default_workers() == 1


def test_homology_and_svg_from_instance_file(tmp_path, line):
    inst = tmp_path / "line.json"
    inst.write_text(dumps(instance_json([line])))
    code, text = run(tmp_path, "homology", "--instance", str(inst))
    res = json.loads(text)["results"][0]
    assert code == 0 and res["X"]["betti"] == [1, 0] and res["cone"]["betti"] == [1, 2]
    code, svg = run(tmp_path, "render-svg", "--instance", str(inst), name="line.svg")
    assert code == 0 and svg.count("<line") == 3
    assert run(tmp_path, "render-svg", "--instance", str(inst), name="again.svg")[1] == svg


def test_render_svg_two_curves_and_morse(tmp_path):
    code, svg = run(tmp_path, "render-svg", "--seed", "3", "--morse", name="m.svg")
    assert code == 0 and "<polygon" in svg and "<path" in svg
    code, svg = run(tmp_path, "render-svg", "--d", "3", name="bad.svg")
    assert code == 2
