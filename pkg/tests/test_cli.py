import json
import re

import pytest

from rabuild.cli import (
    EXIT_FAIL,
    EXIT_HYPOTHESES,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_RESOURCE,
    SpecError,
    dump_spec,
    fixture_path,
    load_fixture,
    main,
    parse_spec,
)

FOUR_CYCLE = """
generators = [{ name = 1, q = 3 }, { name = 2, q = 3 }, { name = 3, q = 3 }, { name = 4, q = 3 }]
m = [
  { i = 1, j = 2, m = 2 }, { i = 2, j = 3, m = 2 }, { i = 3, j = 4, m = 2 },
  { i = 1, j = 4, m = 2 }, { i = 1, j = 3, m = "inf" }, { i = 2, j = 4, m = "inf" },
]
"""


@pytest.mark.parametrize("name", ["dihedral", "pentagon", "split3", "selftest_corrupt"])
def test_roundtrip(name):
    sf = load_fixture(name)
    again = parse_spec(dump_spec(sf))
    assert again.spec == sf.spec
    assert again.spec.diagram.generators == sf.spec.diagram.generators
    assert again.defaults == sf.defaults and again.debug == sf.debug


@pytest.mark.parametrize("text, fragment", [
    ('generators = [{ name = "a", q = 3 }]\nextra = 1\n', "unknown field"),
    ('generators = [{ name = "a", q = 3, colour = 1 }]\n', "unknown field"),
    ('generators = [{ name = "a", q = 1 }]\n', ">= 2"),
    ('generators = []\n', "nonempty"),
    ('generators = [{ name = "a", q = 3 }, { name = "b", q = 3 }]\n', "no order"),
    ('generators = [\n', "TOML"),
    ('generators = [{ name = "a", q = 3 }]\n[defaults]\nradius = -1\n', "non-negative"),
    ('generators = [{ name = "a", q = 3 }]\n[debug]\ncorrupt = "everything"\n', "corrupt"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(SpecError, match=fragment):
        parse_spec(text)


def test_check_passes_and_json_to_stdout(capsys):
    code = main(["check", str(fixture_path("dihedral")), "--suite", "gate", "--json", "-"])
    out, err = capsys.readouterr()
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["schema_version"] == 1 and report["status"] == "pass"
    (rep,) = report["reports"]
    assert set(rep) >= {"name", "status", "counts", "counterexample", "seed", "elapsed_ms"}
    assert "PASS gate" in err


def test_check_json_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["check", str(fixture_path("split3")), "--suite", "parallel_equivalence", "--radius", "2", "--json", str(out)])
    assert code == EXIT_OK
    assert json.loads(out.read_text())["reports"][0]["name"] == "parallel_equivalence"
    assert "PASS" in capsys.readouterr().out


def test_corrupt_selftest_fails(capsys):
    code = main(["check", str(fixture_path("selftest_corrupt")), "--suite", "gate", "--json", "-"])
    report = json.loads(capsys.readouterr().out)
    assert code == EXIT_FAIL
    assert report["status"] == "fail"
    assert report["reports"][0]["counterexample"]["instance"]


def test_malformed_order_names_pair(capsys):
    code = main(["check", str(fixture_path("malformed_m3"))])
    err = capsys.readouterr().err
    assert code == EXIT_PARSE
    assert "'a', 'b'" in err


def test_unreadable_and_unknown_suite(tmp_path, capsys):
    assert main(["check", str(tmp_path / "missing.toml")]) == EXIT_PARSE
    assert main(["check", str(fixture_path("dihedral")), "--suite", "bogus"]) == EXIT_PARSE
    assert main(["check", str(fixture_path("dihedral")), "--radius", "0"]) == EXIT_PARSE


def test_resource_limit(capsys):
    assert main(["export", str(fixture_path("pentagon")), "--what", "ball", "--radius", "9"]) == EXIT_RESOURCE


def test_ends(capsys, tmp_path):
    assert main(["ends", str(fixture_path("dihedral")), "--json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out) == {"schema_version": 1, "result": "Partition", "I0": [], "I1": ["a"], "I2": ["b"]}
    assert main(["ends", str(fixture_path("pentagon"))]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "OneEnded"
    path = tmp_path / "cycle.toml"
    path.write_text(FOUR_CYCLE)
    assert main(["ends", str(path)]) == EXIT_HYPOTHESES
    assert "reducible" in capsys.readouterr().err


def _dot_graph(text):
    nodes = re.findall(r"^  (\w+) \[", text, re.M)
    edges = re.findall(r"^  (\w+) -- (\w+)", text, re.M)
    return nodes, edges


def test_export_ball(capsys):
    assert main(["export", str(fixture_path("dihedral")), "--what", "ball", "--radius", "2"]) == EXIT_OK
    nodes, edges = _dot_graph(capsys.readouterr().out)
    assert len(nodes) == 13
    # 13 chambers of a tree-like chamber graph: each panel is a triangle
    assert len(edges) == 18


def test_export_tree_is_acyclic(capsys, tmp_path):
    out = tmp_path / "tree.dot"
    assert main(["export", str(fixture_path("dihedral")), "--what", "tree", "--radius", "3", "--dot", str(out)]) == EXIT_OK
    nodes, edges = _dot_graph(out.read_text())
    parent = {v: v for v in nodes}

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    for a, b in edges:
        ra, rb = find(a), find(b)
        assert ra != rb
        parent[ra] = rb
    assert len(edges) == len(nodes) - 1


def test_export_tree_one_ended(capsys):
    assert main(["export", str(fixture_path("pentagon")), "--what", "tree"]) == EXIT_HYPOTHESES


def test_export_wings(capsys):
    assert main(["export", str(fixture_path("pentagon")), "--what", "wings", "--panel", "1", "--radius", "1"]) == EXIT_OK
    text = capsys.readouterr().out
    assert sorted(set(re.findall(r"wing=(\d)", text))) == ["0", "1", "2"]
    assert main(["export", str(fixture_path("pentagon")), "--what", "wings", "--panel", "9"]) == EXIT_PARSE
