import io
import json

import pytest

from btkit.cli import main
from btkit.tree import ball_size, parse_ball_json


def run(argv, capsys, monkeypatch, stdin=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin if isinstance(stdin, str) else json.dumps(stdin)))
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cartan(capsys, monkeypatch):
    code, out, _ = run(["cartan", "--p", "2", "-"], capsys, monkeypatch, [["2", "0"], ["0", "1/2"]])
    assert code == 0
    data = json.loads(out)
    assert data["f"] == [1, -1] == data["oracle_f"]
    assert data["n"] == 2


def test_cartan_from_file(tmp_path, capsys, monkeypatch):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"matrix": [["3", "1"], ["6", "5"]]}))
    code, out, _ = run(["cartan", "--p", "3", str(path)], capsys, monkeypatch)
    assert code == 0
    assert json.loads(out)["f"] == [2, 0]


@pytest.mark.parametrize(
    "argv,stdin,code",
    [
        (["cartan", "--p", "2"], [["1", "2"], ["2", "4"]], 2),
        (["cartan", "--p", "2"], "not json", 1),
        (["cartan", "--p", "2"], [["1.5", "0"], ["0", "1"]], 1),
        (["cartan", "--p", "4"], [["1", "0"], ["0", "1"]], 1),
        (["cartan", "--p", "2"], [["1", "0", "0"], ["0", "1"]], 1),
        (["dist", "--p", "2"], [1, 2], 1),
        (["vertex", "--p", "2"], {"generators": [["1", "0"]]}, 1),
        (["bogus"], None, 1),
    ],
)
def test_error_codes(argv, stdin, code, capsys, monkeypatch):
    assert run(argv, capsys, monkeypatch, stdin)[0] == code


def test_missing_file(capsys, monkeypatch):
    assert run(["cartan", "--p", "2", "/nonexistent.json"], capsys, monkeypatch)[0] == 1


def test_vertex(capsys, monkeypatch):
    payload = {"generators": [["2", "0"], ["0", "2"], ["1", "1"]]}
    code, out, _ = run(["vertex", "--p", "2"], capsys, monkeypatch, payload)
    data = json.loads(out)
    assert code == 0
    assert data["lattice"] == ["0", "1", "1"]
    assert data["vertex"] == ["0", "1", "1"]
    assert data["even"] is False


def test_dist(capsys, monkeypatch):
    payload = {"a": [["1", "0"], ["0", "1"]], "b": [["8", "0"], ["0", "1"]]}
    code, out, _ = run(["dist", "--p", "2"], capsys, monkeypatch, payload)
    assert code == 0
    assert json.loads(out)["dist"] == 3


def test_neighbours(capsys, monkeypatch):
    code, out, _ = run(["neighbours", "--p", "3"], capsys, monkeypatch, ["0", "0", "0"])
    assert code == 0
    assert len(json.loads(out)["neighbours"]) == 4


def test_ball_dot(capsys, monkeypatch):
    code, out, _ = run(["ball", "--p", "2", "--radius", "3", "--format", "dot"], capsys, monkeypatch)
    assert code == 0
    assert out.startswith("graph bruhat_tits {")
    nodes = [l for l in out.splitlines() if "[label=" in l]
    edges = [l for l in out.splitlines() if " -- " in l]
    assert len(nodes) == 22 and len(edges) == 21
    assert sum(l.strip().startswith("n0 --") or l.strip().endswith("-- n0;") for l in edges) == 3


def test_ball_json_roundtrip_and_determinism(capsys, monkeypatch):
    argv = ["ball", "--p", "3", "--radius", "2", "--root", "1,0,0"]
    first = run(argv, capsys, monkeypatch)[1]
    second = run(argv, capsys, monkeypatch)[1]
    assert first == second
    b = parse_ball_json(first)
    assert b.num_vertices == ball_size(3, 2)
    assert str(b.root) == "(1,0,0)"


def test_laplace_and_preimage(capsys, monkeypatch):
    code, out, _ = run(["laplace", "--p", "2", "--radius", "2"], capsys, monkeypatch,
                       {"cochain": [1] * 9})
    assert code == 0
    values = json.loads(out)["values"]
    assert values[0] == "3"
    assert values.count(None) == 6
    f = [1] + [0] * 3 + [None] * 6
    code, out, _ = run(["preimage", "--p", "2", "--radius", "2", "--weight", "parity"],
                       capsys, monkeypatch, {"f": f})
    assert code == 0
    h = json.loads(out)["cochain"]
    code, out, _ = run(["laplace", "--p", "2", "--radius", "2", "--weight", "parity"],
                       capsys, monkeypatch, {"cochain": h})
    assert json.loads(out)["values"][:4] == ["1", "0", "0", "0"]


def test_laplace_wrong_length(capsys, monkeypatch):
    assert run(["laplace", "--p", "2", "--radius", "2"], capsys, monkeypatch, {"cochain": [1]})[0] == 1


def test_solve(capsys, monkeypatch):
    cycle = {"vertices": 4, "edges": [[0, 1], [1, 2], [2, 3], [3, 0]], "f": ["1", "0", "0", "0"]}
    code, out, _ = run(["solve", "--p", "2"], capsys, monkeypatch, cycle)
    assert code == 0
    data = json.loads(out)
    assert data["feasible"] is False
    assert data["certificate"] == ["-1", "1", "-1", "1"] or data["certificate"] == ["1", "-1", "1", "-1"]
    tri = {"vertices": 3, "edges": [[0, 1], [1, 2], [2, 0]], "f": ["1/2", "3", "-1"]}
    code, out, _ = run(["solve", "--p", "2"], capsys, monkeypatch, tri)
    assert json.loads(out)["feasible"] is True


def test_solve_file_weights(capsys, monkeypatch):
    path = {"vertices": 2, "edges": [[0, 1]], "f": ["1", "-1"], "weights": [1, -1]}
    code, out, _ = run(["solve", "--p", "2", "--weight", "file"], capsys, monkeypatch, path)
    assert json.loads(out) == {"feasible": True, "solution": ["1"]}
    path["weights"] = [2, 1]
    assert run(["solve", "--p", "2", "--weight", "file"], capsys, monkeypatch, path)[0] == 1


def test_selftest(capsys, monkeypatch):
    monkeypatch.setenv("BTKIT_SEED", "7")
    code, out, _ = run(["selftest", "--p", "3", "--trials", "5"], capsys, monkeypatch)
    assert code == 0
    assert json.loads(out)["failures"] == 0
