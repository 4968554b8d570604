import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from adjunct import catalog
from adjunct.cli.documents import KINDS, ParseError, dumps, normalize, parse, render, to_document
from adjunct.cli.enumerate import enumerate_documents
from adjunct.cli.main import main
from adjunct.cli.tasks import OPS, parse_report, render as render_report, run_task

GOLDENS = Path(__file__).parent / "goldens"
DOCS = sorted((GOLDENS / "documents").glob("*.json"))
TASKS = sorted((GOLDENS / "tasks").glob("*.json"))


def run_cli(*argv, stdin=None):
    """Call ``main`` in-process, capturing stdout and stderr."""
    out, err = io.StringIO(), io.StringIO()
    old = sys.stdout, sys.stderr, sys.stdin
    sys.stdout, sys.stderr = out, err
    if stdin is not None:
        sys.stdin = io.TextIOWrapper(io.BytesIO(stdin.encode()))
    try:
        code = main(list(argv))
    finally:
        sys.stdout, sys.stderr, sys.stdin = old
    return code, out.getvalue(), err.getvalue()


# -- goldens ----------------------------------------------------------------------


def test_goldens_cover_every_kind():
    kinds = {json.loads(p.read_text())["kind"] for p in DOCS}
    assert kinds == set(KINDS)
    assert len(DOCS) + len(TASKS) >= 10


@pytest.mark.parametrize("path", DOCS, ids=lambda p: p.stem)
def test_document_normalizes_to_golden(path):
    assert render(parse(path.read_bytes())) == (GOLDENS / "normalized" / path.name).read_text()


@pytest.mark.parametrize("path", DOCS, ids=lambda p: p.stem)
def test_normalized_form_is_a_fixed_point(path):
    once = (GOLDENS / "normalized" / path.name).read_text()
    assert render(parse(once)) == once


@pytest.mark.parametrize("path", TASKS, ids=lambda p: p.stem)
def test_task_report_matches_golden(path):
    code, out, _ = run_cli("run", str(path), "--format", "machine")
    expected = (GOLDENS / "reports" / path.name).read_text()
    assert out == expected
    assert code == {"pass": 0, "fail": 1}[json.loads(expected)["verdict"]]


@pytest.mark.parametrize("path", TASKS, ids=lambda p: p.stem)
def test_reports_are_deterministic(path):
    first = run_cli("run", str(path))[1]
    assert first == run_cli("run", str(path))[1]
    assert first.startswith("verdict: ")


def test_report_round_trip():
    for path in TASKS:
        report = run_task(parse(path.read_bytes()).value)
        assert parse_report(render_report(report, "machine")) == report


def test_timing_is_opt_in():
    path = str(GOLDENS / "tasks" / "m3-category.json")
    assert "timing" not in json.loads(run_cli("run", path, "--format", "machine")[1])
    assert "timing" in json.loads(run_cli("run", path, "--format", "machine", "--timing")[1])


def test_seed_does_not_change_reports():
    path = str(GOLDENS / "tasks" / "closure-z2.json")
    assert run_cli("run", path, "--seed", "1")[1] == run_cli("run", path, "--seed", "99")[1]


# -- independent checks on the golden verdicts ---------------------------------------


def golden_report(name):
    return json.loads((GOLDENS / "reports" / f"{name}.json").read_text())


def test_golden_verdicts_agree_with_hand_counts():
    assert golden_report("finset-bijection")["counts"]["forms"] == 2 ** (2 * 2)
    assert golden_report("finset-bijection-sets")["counts"]["forms"] == 3 ** 0
    # the walking arrow's two loops go to identities, its arrow to any arrow
    assert golden_report("count-transports")["counts"]["transports"] == 6
    assert golden_report("limit-continuity")["counts"]["monotone"] == 10
    # a.(a.b) = a.1 = a but (a.a).b = 1.b = b
    assert golden_report("m3-category")["witnesses"] == [["a", "a", "b"]]
    # on a single loop, f(i,i) decomposes iff f(i,i) = f(i,i).f(i,i); g.g = 1
    rt = golden_report("round-trip-z2")
    assert rt["details"]["non_decomposable"]["edge_map"] == [[["i", "i"], "g"]]
    assert (rt["counts"]["forms"], rt["counts"]["decomposable"]) == (2, 1)
    # (0+1) max (1+0) = 1 but max(0,1) + max(1,0) = 2
    assert golden_report("tropical-meets")["witnesses"] == [["0", "1", "1", "0"]]


# -- parse errors -----------------------------------------------------------------


def parse_error(doc) -> ParseError:
    text = doc if isinstance(doc, str) else json.dumps(doc)
    with pytest.raises(ParseError) as info:
        parse(text)
    return info.value


def test_unknown_vertex_is_positioned():
    e = parse_error({"schema": 1, "kind": "graph", "vertices": ["a"],
                     "edges": [{"label": "e", "src": "a", "dst": "b"}]})
    assert e.path == "$.edges[0].dst"
    assert "'b'" in e.message


def test_non_monotone_quantale_names_the_cell():
    t = {("0", x): x for x in "012"} | {(x, "0"): x for x in "012"}
    t |= {("1", "1"): "2", ("1", "2"): "1", ("2", "1"): "1", ("2", "2"): "2"}
    e = parse_error({"schema": 1, "kind": "quantale", "elements": ["0", "1", "2"],
                     "leq": [["0", "1"], ["1", "2"], ["0", "2"]], "unit": "0",
                     "tensor": [[x, y, z] for (x, y), z in t.items()]})
    assert e.path == "$.tensor"
    assert "monotone" in e.message


def test_syntax_errors_carry_line_and_column():
    e = parse_error('{"schema": 1,\n  "kind": "set",\n  "elements": [1,]}')
    assert (e.line, e.column) == (3, 18)
    assert str(e).startswith("line 3, column 18")


@pytest.mark.parametrize("doc,path,fragment", [
    ({"schema": 1, "kind": "mapping", "source": "S", "target": "S", "assignment": {}}, "$.source", "dangling"),
    ({"schema": 1, "kind": "mapping", "defs": {"S": "S"}, "source": "S", "target": "S", "assignment": {}},
     "$.defs.S", "cyclic"),
    ({"schema": 1, "kind": "widget"}, "$.kind", "unknown kind"),
    ({"schema": 2, "kind": "set", "elements": []}, "$.schema", "schema"),
    ({"schema": 1, "kind": "set"}, "$", "elements"),
    ({"schema": 1, "kind": "poset", "elements": ["a", "b"], "leq": [["a", "b"], ["b", "a"]]}, "$.leq", "non-poset"),
    ({"schema": 1, "kind": "original_graph", "graph": "@z2", "units": {"*": "1"}, "contact": [["1", "1", "1"]]},
     "$.contact", "no entry"),
    ({"schema": 1, "kind": "task", "op": "quantale.validate", "args": {"quantale": "@nothing"}},
     "$.args.quantale", "built-in"),
])
def test_structural_errors(doc, path, fragment):
    e = parse_error(doc)
    assert e.path == path
    assert fragment in e.message


def test_invalid_utf8_is_an_error():
    with pytest.raises(ParseError):
        parse(b'{"schema": 1, "kind": "set", "elements": ["\xff"]}')


# -- round trips ------------------------------------------------------------------


@pytest.mark.parametrize("make", [catalog.walking_arrow, catalog.composable_pair, catalog.z2, catalog.m3,
                                  catalog.chain_monoid, catalog.ordered_arrow])
def test_fixtures_round_trip(make):
    doc = to_document(make())
    assert normalize(doc) == doc
    assert normalize(json.loads(render(parse(dumps(doc))))) == doc


def test_enumerated_documents_round_trip():
    for kind in ("set", "poset", "graph", "magma"):
        for doc in enumerate_documents(kind, 2):
            assert normalize(doc) == doc


# -- exit codes and subcommands -------------------------------------------------------


def test_exit_codes_in_process():
    assert run_cli("run", str(GOLDENS / "tasks" / "finset-bijection.json"))[0] == 0
    assert run_cli("run", str(GOLDENS / "tasks" / "m3-category.json"))[0] == 1
    code, out, _ = run_cli("run", str(GOLDENS / "tasks" / "finset-bijection.json"), "--budget", "0")
    assert code == 2 and out.startswith("verdict: exhausted")
    code, out, err = run_cli("run", "-", stdin='{"schema": 1, "kind": "task", "op": "no.such"}')
    assert code == 2 and out == "" and "unknown task" in err
    code, _, err = run_cli("run", "-", stdin=json.dumps({"schema": 1, "kind": "set", "elements": []}))
    assert code == 2 and "expected a task document" in err
    assert run_cli("run", "/nonexistent/task.json")[0] == 2


def test_hypothesis_failure_is_an_error():
    doc = json.loads((GOLDENS / "tasks" / "closure-z2.json").read_text())
    doc["args"]["require_hypotheses"] = True
    code, _, err = run_cli("run", "-", stdin=json.dumps(doc))
    assert code == 2 and err.startswith("adjunct: error:")


def test_exit_codes_as_subprocess():
    def run(*args, stdin=None):
        return subprocess.run([sys.executable, "-m", "adjunct.cli", *args], input=stdin,
                              capture_output=True, text=True)

    assert run("run", str(GOLDENS / "tasks" / "finset-bijection.json")).returncode == 0
    assert run("run", str(GOLDENS / "tasks" / "m3-category.json")).returncode == 1
    bad = run("parse", "-", stdin='{"schema": 1, "kind": "graph", "vertices": [1]}')
    assert bad.returncode == 2 and "$.vertices[0]" in bad.stderr


def test_parse_subcommand_prints_normalized_form():
    path = GOLDENS / "documents" / "poset.json"
    code, out, _ = run_cli("parse", str(path))
    assert code == 0 and out == (GOLDENS / "normalized" / "poset.json").read_text()


def test_tasks_subcommand_lists_every_op():
    code, out, _ = run_cli("tasks")
    assert code == 0 and out.split() == sorted(OPS)


@pytest.mark.parametrize("args,count", [
    (("poset", "--size", "3"), 19),
    (("poset", "--size", "2"), 3),
    (("set", "--size", "3"), 4),
    (("graph", "--size", "1"), 2),
    (("graph", "--size", "2", "--max-edges", "1"), 16),
])
def test_enumerate_counts(args, count):
    code, out, _ = run_cli("enumerate", *args)
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == count
    assert all(json.loads(x)["schema"] == 1 for x in lines)


def test_first_nonassociative_magma_is_m3():
    code, out, _ = run_cli("enumerate", "magma", "--size", "3", "--nonassociative")
    first = json.loads(out.splitlines()[0])
    assert first == to_document(catalog.m3())
