import json
import subprocess
import sys

import pytest

from spantrees.cli import analyze, decompose, main
from spantrees.generators import complete, cycle, multiply, path
from spantrees.graph import MultiGraph
from spantrees.io import emit_graph

from conftest import small_multigraphs


@pytest.fixture
def write(tmp_path):
    def _write(name, content):
        p = tmp_path / name
        p.write_text(content if isinstance(content, str) else json.dumps(content))
        return str(p)

    return _write


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_examples():
    assert analyze(complete(4)) == {
        "vertices": 4, "edges": 6, "colouring_number": 4,
        "edge_connectivity": 3, "min_cover_number": 2, "max_packing_size": 2,
    }
    c5 = analyze(cycle(5))
    assert (c5["colouring_number"], c5["edge_connectivity"], c5["min_cover_number"], c5["max_packing_size"]) == (3, 2, 2, 1)
    one = analyze(MultiGraph(1))
    assert one["colouring_number"] == 1 and one["edge_connectivity"] is None
    assert one["min_cover_number"] == 1 and one["max_packing_size"] == 1
    split = analyze(MultiGraph(3, ((0, 1),)))
    assert split["edge_connectivity"] == 0 and split["min_cover_number"] is None


def test_analyze_command(capsys, write):
    code, out, _ = run_cli(capsys, "analyze", write("a.txt", "vertex a\n"))
    assert code == 0 and json.loads(out)["colouring_number"] == 1
    code, _, err = run_cli(capsys, "analyze", write("b.txt", "a b\nb b\n"))
    assert code == 3 and "line 2" in err
    code, _, _ = run_cli(capsys, "analyze", "/nonexistent/graph.txt")
    assert code == 3


def test_order_command(capsys, write):
    code, out, _ = run_cli(capsys, "order", write("c5.json", emit_graph(cycle(5))))
    data = json.loads(out)
    assert code == 0 and data["mu"] == 3 and sorted(data["order"]) == list(range(5))
    assert sorted(e for b in data["blocks"] for e in b) == list(range(5))


def test_decompose_examples():
    payload, code, trace = decompose(multiply(path(2), 2), 2)
    assert code == 0 and payload["trees"] == [[0], [1]] and payload["swaps"] == 0
    payload, code, _ = decompose(cycle(5), 2)
    assert code == 1 and payload["reason"] == "no-packing"
    w = payload["witness"]
    assert w["cross_edges"] < 2 * (len(w["parts"]) - 1)
    payload, code, trace = decompose(multiply(path(3), 2), 2)
    assert code == 0 and trace.swaps == 0 and len(trace.records) == 4
    payload, code, _ = decompose(MultiGraph(3, ((0, 1),)), 1)
    assert code == 1 and payload["reason"] == "disconnected"
    # K4 has a 1-packing but col 4 > 2
    payload, code, _ = decompose(complete(4), 1)
    assert code == 1 and payload["reason"] == "colouring-number"


def test_decompose_output_reverifies(capsys, write, tmp_path):
    checked = 0
    for i, g in enumerate(small_multigraphs(40, seed=5)):
        gpath = write(f"g{i}.json", emit_graph(g))
        for k in (1, 2):
            cert = tmp_path / f"cert{i}_{k}.json"
            trace = tmp_path / f"trace{i}_{k}.jsonl"
            code, _, _ = run_cli(capsys, "decompose", gpath, "-k", k, "--out", cert, "--trace", trace)
            if code == 0:
                assert run_cli(capsys, "verify", gpath, cert)[0] == 0
                assert trace.exists()
                checked += 1
            else:
                assert code == 1 and json.loads(cert.read_text())["status"] == "refused"
    assert checked > 0


def test_verify_command(capsys, write):
    g = write("k2.txt", "a b\na b\n")
    good = write("good.json", {"kind": "decomposition", "k": 2, "trees": [[0], [1]]})
    assert run_cli(capsys, "verify", g, good)[0] == 0
    shared = write("shared.json", {"kind": "packing", "k": 2, "trees": [[0], [0]]})
    code, out, _ = run_cli(capsys, "verify", g, shared)
    assert code == 1 and "edge 0" in json.loads(out)["reason"]
    missing = write("missing.json", {"kind": "covering", "k": 1, "trees": [[0]]})
    code, out, _ = run_cli(capsys, "verify", g, missing)
    assert code == 1 and "edge 1" in json.loads(out)["reason"]
    broken = write("broken.json", {"k": 1})
    assert run_cli(capsys, "verify", g, broken)[0] == 3


def test_pack_and_cover(capsys, write):
    k4 = write("k4.json", emit_graph(complete(4)))
    code, out, _ = run_cli(capsys, "pack", k4, "-k", 2)
    assert code == 0 and json.loads(out)["kind"] == "packing"
    code, out, _ = run_cli(capsys, "pack", k4, "-k", 3, "--mode", "exhaustive")
    assert code == 1 and json.loads(out)["status"] == "failed"
    code, out, _ = run_cli(capsys, "cover", k4, "-k", 2)
    assert code == 0 and json.loads(out)["kind"] == "covering"
    code, out, _ = run_cli(capsys, "cover", k4, "-k", 1, "--mode", "exhaustive")
    data = json.loads(out)
    assert code == 1 and data["edge_count"] > data["bound"]


def test_generate_command(capsys, tmp_path):
    code, out, err = run_cli(capsys, "generate", "prop32", "--levels", 1, "--c", 2)
    g = json.loads(out)
    assert code == 0 and g["vertex_count"] == 4 and len(g["edges"]) == 5
    code, out, err = run_cli(capsys, "generate", "random_multigraph", "--n", 5, "--m", 8, "--seed", 7,
                             "--format", "text")
    assert code == 0 and "seed=7" in err and len(out.splitlines()) == 5 + 8
    code, out2, _ = run_cli(capsys, "generate", "random_multigraph", "--n", 5, "--m", 8, "--seed", 7,
                            "--format", "text")
    assert out2 == out
    code, _, _ = run_cli(capsys, "generate", "complete")
    assert code == 3
    dest = tmp_path / "k4.dot"
    assert run_cli(capsys, "generate", "complete", "--n", 4, "--format", "dot", "--out", dest)[0] == 0
    assert dest.read_text().count("--") == 6


def test_usage_errors_exit_3(capsys):
    with pytest.raises(SystemExit) as info:
        main(["pack"])
    assert info.value.code == 3
    with pytest.raises(SystemExit) as info:
        main(["simulate", "no_such_family"])
    assert info.value.code == 3


def test_simulate_examples(capsys, tmp_path):
    out = tmp_path / "run"
    code, text, _ = run_cli(capsys, "simulate", "comb_star", "-k", 2, "-N", 500, "--out", out)
    summary = json.loads(text)
    assert code == 0 and summary["swaps"] > 0 and summary["invariants"]["clean"]
    assert (out / "trace.jsonl").read_text().count("\n") == 500
    assert json.loads((out / "summary.json").read_text())["overlays"]
    code, text, _ = run_cli(capsys, "simulate", "multiplied_ray", "--m", 3, "-k", 2, "-N", 10)
    summary = json.loads(text)
    assert code == 2 and summary["obstruction"]["kind"] == "NoEligibleTree"
    assert summary["obstruction"]["step"] == 2
    code, text, _ = run_cli(capsys, "simulate", "doubled_ray", "-k", 2, "-N", 100)
    assert code == 0 and json.loads(text)["swaps"] == 0


def test_module_entry_point(tmp_path):
    p = tmp_path / "k4.json"
    p.write_text(emit_graph(complete(4)))
    res = subprocess.run([sys.executable, "-m", "spantrees", "analyze", str(p)],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and json.loads(res.stdout)["edge_connectivity"] == 3
