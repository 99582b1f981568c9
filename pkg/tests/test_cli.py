import json

import pytest

from nonzero_cycles import cli, groups
from nonzero_cycles.graphs import decode_graph


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gen_wall_r6_has_96_vertices(tmp_path, capsys):
    out = tmp_path / "w.json"
    code, _, _ = run(["gen", "wall", "--r", "6", "--out", str(out)], capsys)
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["kind"] == "wall"
    assert len(doc["graph"]["vertices"]) == 96


def test_gen_wall_missing_r_is_parse_error(capsys):
    code, _, err = run(["gen", "wall"], capsys)
    assert code == 2
    assert "--r" in err


def test_gen_bad_group_descriptor(capsys):
    code, _, _ = run(["gen", "random", "--groups", "zoo(3"], capsys)
    assert code == 2


def test_gen_roundtrip_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        code, _, _ = run(
            ["gen", "random", "--seed", "9", "--out", str(out)], capsys
        )
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    decode_graph(json.loads(a.read_text())["graph"])  # parses back


def test_gen_obstruction_and_verify(tmp_path, capsys):
    inst = tmp_path / "o.json"
    cert = tmp_path / "c.json"
    code, _, _ = run(
        ["gen", "obstruction", "--h", "1", "--p", "nested", "--q", "series",
         "--out", str(inst)],
        capsys,
    )
    assert code == 0
    cert.write_text(json.dumps({"type": "obstruction", "h": 1}))
    code, out, _ = run(["verify", str(inst), str(cert)], capsys)
    assert code == 0
    assert json.loads(out)["nu_ok"] is True


def test_verify_bad_transversal_names_uncovered_cycle(tmp_path, capsys):
    inst = tmp_path / "e.json"
    cert = tmp_path / "c.json"
    run(["gen", "escher", "--h", "1", "--out", str(inst)], capsys)
    cert.write_text(json.dumps({"type": "transversal", "vertices": []}))
    code, _, err = run(["verify", str(inst), str(cert)], capsys)
    assert code == 1
    assert "misses the doubly nonzero cycle" in err


def test_verify_good_transversal(tmp_path, capsys):
    inst = tmp_path / "e.json"
    cert = tmp_path / "c.json"
    run(["gen", "escher", "--h", "1", "--out", str(inst)], capsys)
    graph = decode_graph(json.loads(inst.read_text())["graph"])
    # the attachment middle is the degree-2 vertex on a nonzero-labeled edge
    middles = sorted(
        {
            v
            for e in graph.edges.values()
            if not groups.is_zero(e.label)
            for v in (e.tail, e.head)
            if len(graph.incident(v)) == 2
        }
    )
    cert.write_text(json.dumps({"type": "transversal", "vertices": middles}))
    code, out, _ = run(["verify", str(inst), str(cert)], capsys)
    assert code == 0
    assert json.loads(out)["verified"] is True


def test_analyze_reports_all_checks(tmp_path, capsys):
    inst = tmp_path / "r.json"
    run(["gen", "random", "--seed", "3", "--out", str(inst)], capsys)
    code, out, _ = run(["analyze", str(inst)], capsys)
    assert code == 0
    doc = json.loads(out)
    assert {"bipartite", "robust", "classify"} <= set(doc)


def test_analyze_unknown_check(tmp_path, capsys):
    inst = tmp_path / "r.json"
    run(["gen", "random", "--seed", "3", "--out", str(inst)], capsys)
    code, _, _ = run(["analyze", str(inst), "--checks", "nope"], capsys)
    assert code == 2


def test_limit_exceeded_exit_code(tmp_path, capsys):
    inst = tmp_path / "e.json"
    run(["gen", "escher", "--h", "2", "--out", str(inst)], capsys)
    code, _, err = run(
        ["analyze", str(inst), "--checks", "classify", "--limit", "3"], capsys
    )
    assert code == 3
    assert "limit" in err.lower() or "cycles" in err.lower()


def test_reduce_outputs_decodable_graph(tmp_path, capsys):
    inst = tmp_path / "r.json"
    run(["gen", "random", "--seed", "4", "--out", str(inst)], capsys)
    code, out, _ = run(["reduce", str(inst), "odd"], capsys)
    assert code == 0
    doc = json.loads(out)
    reduced = decode_graph(doc["graph"])
    assert reduced.descriptor.kind == "SUM"


def test_pack_and_cover_agree(tmp_path, capsys):
    inst = tmp_path / "r.json"
    run(["gen", "random", "--seed", "8", "--out", str(inst)], capsys)
    code, out, _ = run(["pack", str(inst)], capsys)
    assert code == 0
    pack_doc = json.loads(out)
    code, out, _ = run(["cover", str(inst)], capsys)
    assert code == 0
    assert json.loads(out)["tau"] == pack_doc["tau"]


@pytest.mark.parametrize("seed", [1, 2])
def test_experiment_deterministic(tmp_path, capsys, seed):
    outs = []
    for name in ("a.txt", "b.txt"):
        path = tmp_path / name
        code, _, _ = run(
            ["experiment", "--seed", str(seed), "--count", "15",
             "--out", str(path)],
            capsys,
        )
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    text = outs[0].decode()
    assert text.startswith("index\tn\tm\tnu\tnu_half\ttau\n")
    assert "max tau/nu_half" in text
