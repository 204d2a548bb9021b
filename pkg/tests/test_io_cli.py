import io
import json
import subprocess
import sys

import pytest

from synchro import catalogue, cli
from synchro.classify import (
    EndomorphismWitness,
    Multiset,
    SectionRegularWitness,
    SeparationWitness,
    SpreadingWitness,
)
from synchro.io import (
    REPORT_SCHEMA,
    InputError,
    automaton_from_document,
    automaton_to_document,
    format_edge_list,
    group_from_document,
    group_to_document,
    load_automaton,
    load_graph,
    load_group,
    parse_edge_list,
)
from synchro import graphs
from synchro.transform import cerny_automaton


def run(*argv):
    buf = io.StringIO()
    code = cli.run(list(argv), buf)
    text = buf.getvalue()
    return code, (json.loads(text) if text else None), text


# ------------------------------------------------------------------ documents

def test_group_round_trip(tmp_path):
    G = catalogue.petersen_aut()
    path = tmp_path / "g.json"
    path.write_text(json.dumps(group_to_document(G)))
    H = load_group(path)
    assert H.degree == 10 and H.generators == G.generators and H.name == G.name
    doc = {"degree": 4, "generators": ["(0 1 2 3)", [1, 0, 2, 3]]}
    assert len(group_from_document(doc).elements()) == 24


@pytest.mark.parametrize("doc", [
    [0, 0, 1],
    {"degree": 0, "generators": ["()"]},
    {"degree": 3, "generators": []},
    {"degree": 3, "generators": ["(0 1 5)"]},
    {"degree": 3, "generators": [[0, 0, 1]]},
    {"degree": True, "generators": ["(0 1)"]},
    {"degree": 3, "generators": [7]},
])
def test_malformed_groups(doc):
    with pytest.raises(InputError):
        group_from_document(doc)


def test_automaton_round_trip(tmp_path):
    a = cerny_automaton(5)
    path = tmp_path / "a.json"
    path.write_text(json.dumps(automaton_to_document(a)))
    assert load_automaton(path) == a


@pytest.mark.parametrize("doc", [
    {"states": 3, "letters": {"a": [0, 1]}},
    {"states": 3, "letters": {"a": [0, 1, 3]}},
    {"states": 3, "letters": {}},
    {"states": -1, "letters": {"a": []}},
    "cerny",
])
def test_malformed_automata(doc):
    with pytest.raises(InputError):
        automaton_from_document(doc)


def test_edge_list_round_trip(tmp_path):
    P = graphs.petersen()
    text = format_edge_list(P)
    assert parse_edge_list(text) == P
    path = tmp_path / "p.txt"
    path.write_text("# the Petersen graph\n" + text)
    assert load_graph(path) == P
    assert parse_edge_list("3\n") == graphs.null(3)


@pytest.mark.parametrize("text", ["", "3\n0 3\n", "3\n1 1\n", "x\n", "3\n0 1 2\n", "2 2\n"])
def test_malformed_edge_lists(text):
    with pytest.raises(InputError):
        parse_edge_list(text)


def test_missing_and_unparseable_files(tmp_path):
    with pytest.raises(InputError):
        load_group(tmp_path / "nope.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{degree: 3")
    with pytest.raises(InputError, match="line 1"):
        load_group(bad)


# ------------------------------------------------------------------ commands

def test_cerny_command():
    code, doc, _ = run("cerny", "4")
    assert code == 0
    assert doc["schema"] == REPORT_SCHEMA and doc["command"] == "cerny"
    assert doc["shortest"]["word"]["length"] == 9
    assert doc["within_cerny_bound"] is True


def test_classify_group_petersen_and_revalidate():
    code, doc, _ = run("classify-group", "petersen-aut")
    assert code == 0
    rep = doc["report"]
    assert rep["flags"]["synchronizing"] == "YES"
    assert rep["flags"]["spreading"] == "NO"
    assert "timing" not in rep
    w = rep["witnesses"]["spreading"]
    G = group_from_document(doc["input"])
    SpreadingWitness(Multiset(tuple(w["A"])), tuple(w["B"]), w["lambda"]).validate(G)


def test_classify_group_refuted_witnesses_revalidate():
    code, doc, _ = run("classify-group", "subsets:6:2", "--no-ns")
    assert code == 1
    G = group_from_document(doc["input"])
    ws = doc["report"]["witnesses"]
    SectionRegularWitness(tuple(map(tuple, ws["synchronizing"]["partition"])),
                          tuple(ws["synchronizing"]["section"])).validate(G)
    SeparationWitness(tuple(ws["separating"]["A"]), tuple(ws["separating"]["B"])).validate(G)


def test_ns_ranks_command_witnesses():
    code, doc, _ = run("ns-ranks", "imprimitive-wreath:2:3")
    assert code == 0
    assert doc["ns_ranks"] == [2, 3, 4, 5]
    G = group_from_document(doc["input"])
    for r, w in doc["witnesses"].items():
        assert w["rank"] == int(r)
        EndomorphismWitness(tuple(w["graph_orbits"]), tuple(map(tuple, w["edges"])), tuple(w["map"])).validate(G)


def test_reports_are_byte_identical():
    for argv in (("classify-group", "grid"), ("bounds", "cyclic:7", "--map", "0,0,2,3,4,5,6"),
                 ("graph", "petersen"), ("random-experiment", "n=6", "k=2", "samples=20", "seed=3")):
        assert run(*argv)[2] == run(*argv)[2]


def test_group_file_input(tmp_path):
    path = tmp_path / "c4.json"
    path.write_text(json.dumps({"degree": 4, "generators": ["(0 1 2 3)"]}))
    code, doc, _ = run("classify-group", str(path))
    assert code == 1
    assert doc["report"]["flags"]["primitive"] == "NO"


def test_reset_word_with_group_and_map():
    # the group is synchronizing, so a reset word exists even though the greedy gets stuck
    code, doc, _ = run("reset-word", "--group", "petersen-aut", "--map", "0,7,0,3,4,4,9,7,3,9")
    assert code == 0
    assert not doc["spreading_greedy"]["success"]
    assert doc["spreading_greedy"]["stuck_set"] == [3, 6, 8, 9]
    code, doc, _ = run("reset-word", "--group", "cyclic:4", "--map", "0,0,2,2")
    assert code == 1
    code, doc, _ = run("reset-word", "--group", "cyclic:5", "--map", "1,1,2,3,4")
    assert code == 0
    assert doc["shortest"]["word"]["length"] == 16
    assert doc["spreading_greedy"]["success"]


def test_automaton_file_input(tmp_path):
    path = tmp_path / "d.json"
    path.write_text(json.dumps({"states": 4, "letters": {"Blue": [2, 2, 0, 0], "Red": [2, 0, 3, 1]}}))
    code, doc, _ = run("classify-automaton", str(path))
    assert code == 0
    assert doc["shortest"]["word"]["length"] == 3


def test_graph_command():
    code, doc, _ = run("graph", "cycle:6")
    assert code == 0
    assert doc["clique_number"] == 2 and doc["chromatic_number"]["upper"] == 2
    assert len(doc["core"]["vertices"]) == 2


def test_fixtures_command():
    code, doc, _ = run("fixtures")
    assert code == 0
    assert doc["passed"] == doc["total"] >= 20


@pytest.mark.parametrize("argv", [
    ("classify-group", "no-such-group"),
    ("classify-group", "/nonexistent/file.json"),
    ("reset-word", "--group", "cyclic:5", "--map", "1,2,3,4,0"),
    ("reset-word", "--group", "cyclic:5", "--map", "0,0,1"),
    ("reset-word", "--group", "cyclic:5"),
    ("bounds", "cyclic:5", "--map", "a,b"),
    ("cerny", "1"),
    ("graph", "nosuchfamily:3"),
    ("no-such-command",),
    ("random-experiment", "n=0", "k=2", "samples=5", "seed=1"),
])
def test_malformed_input_exit_code(argv):
    assert run(*argv)[0] == 2


def test_malformed_file_exit_code(tmp_path):
    path = tmp_path / "g.json"
    path.write_text("[0,0,1]")
    assert run("classify-group", str(path))[0] == 2
    path.write_text(json.dumps({"degree": 4, "generators": ["(0 1)"]}))
    assert run("bounds", str(path))[0] == 2


def test_budget_exit_code(monkeypatch):
    assert run("cerny", "8", "--state-cap", "10")[0] == 3
    monkeypatch.setenv("SYNCHRO_STATE_CAP", "10")
    assert run("cerny", "8")[0] == 3


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "synchro", "cerny", "3"], capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["shortest"]["word"]["length"] == 4
