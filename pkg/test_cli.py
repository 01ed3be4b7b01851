import json

import pytest

import cli
from utils import get_settings, set_settings


@pytest.fixture(autouse=True)
def restore_settings():
    saved = get_settings()
    yield
    set_settings(saved)


def write_corpus(tmp_path, cases, schema=1):
    path = tmp_path / "corpus.json"
    path.write_text(json.dumps({"schema": schema, "cases": cases}), encoding="utf-8")
    return str(path)


def test_classify_prints_a_table(capsys):
    assert cli.main(["classify", "--family", "l2-prime", "--q", "7", "--pi", "2,3"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "SYM4" in out
    assert "DIHEDRAL(8)" in out


def test_classify_json_is_byte_stable(capsys):
    argv = ["classify", "--family", "l2-prime", "--q", "13", "--pi", "3,2", "--json"]
    cli.main(argv)
    first = capsys.readouterr().out
    cli.main(argv)
    assert capsys.readouterr().out == first
    payload = json.loads(first)
    assert payload["pi"] == [2, 3]
    assert [r["descriptor"]["kind"] for r in payload["records"]] == ["DIHEDRAL", "ALT4"]


def test_classify_l3_3_needs_no_q(capsys):
    assert cli.main(["classify", "--family", "l3-3", "--pi", "2,13", "--json"]) == cli.EXIT_OK
    assert json.loads(capsys.readouterr().out)["q"] == 3


def test_empty_pi_regime(capsys):
    assert cli.main(["classify", "--family", "l2-2p", "--q", "8", "--pi", "5", "--json"]) == cli.EXIT_OK
    assert json.loads(capsys.readouterr().out)["regime"] == "EMPTY_PI"


@pytest.mark.parametrize("argv", [
    ["classify", "--family", "l2-2p", "--q", "16", "--pi", "2,3"],
    ["classify", "--family", "l2-prime", "--q", "7", "--pi", "2,2"],
    ["classify", "--family", "l2-prime", "--q", "7", "--pi", "2,x"],
    ["classify", "--family", "l2-prime", "--pi", "2,3"],
    ["verify", "--family", "l2-prime", "--q", "7", "--pi", "2,3", "--budget", "0"],
])
def test_invalid_input_exits_two(argv, capsys):
    assert cli.main(argv) == cli.EXIT_INVALID
    assert capsys.readouterr().out == ""


def test_verify_small_case(capsys):
    argv = ["verify", "--family", "l2-prime", "--q", "7", "--pi", "2,3", "--json", "--threads", "2"]
    assert cli.main(argv) == cli.EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["verdict"] == "MATCH"
    assert "seconds" not in payload


def test_tiny_budget_exits_three():
    argv = ["verify", "--family", "l2-prime", "--q", "7", "--pi", "2,3", "--tier", "targeted",
            "--budget", "5"]
    assert cli.main(argv) == cli.EXIT_LIMIT


@pytest.mark.slow
def test_cap_exceeded_exits_three():
    assert cli.main(["verify", "--family", "sz", "--q", "32", "--pi", "2,5"]) == cli.EXIT_LIMIT


def test_empty_corpus(tmp_path, capsys):
    assert cli.main(["corpus", "--file", write_corpus(tmp_path, [])]) == cli.EXIT_OK
    summary = json.loads(capsys.readouterr().out)
    assert summary["cases"] == 0


def test_corpus_writes_reports_in_order(tmp_path, capsys):
    cases = [
        {"family": "l2-prime", "q": 7, "pi": [3, 7]},
        {"family": "l2-2p", "q": 4, "pi": [2, 3]},
        {"family": "l2-prime", "q": 7, "pi": []},
    ]
    out = tmp_path / "reports.jsonl"
    argv = ["corpus", "--file", write_corpus(tmp_path, cases), "--out", str(out), "--threads", "3"]
    assert cli.main(argv) == cli.EXIT_OK
    summary = json.loads(capsys.readouterr().out)
    assert summary["match"] == 3
    lines = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines()]
    assert [(r["q"], r["pi"]) for r in lines] == [(7, [3, 7]), (4, [2, 3]), (7, [])]

    cli.main(argv)
    assert json.loads(capsys.readouterr().out)["digest"] == summary["digest"]


def test_corpus_expectation_mismatch_exits_one(tmp_path):
    cases = [{"family": "l2-prime", "q": 7, "pi": [3, 7], "expect": []}]
    assert cli.main(["corpus", "--file", write_corpus(tmp_path, cases)]) == cli.EXIT_MISMATCH


@pytest.mark.parametrize("cases,message", [
    ([{"family": "l2-prime", "q": 7}], "missing field 'pi'"),
    ([{"family": "l2-prime", "q": 7, "pi": [2], "tier": "quick"}], "field 'tier'"),
    ([{"family": "l2-prime", "q": 11, "pi": [2]}], "case 0"),
])
def test_malformed_corpus_exits_two(tmp_path, cases, message):
    with pytest.raises(cli.InvalidInputError, match=message):
        cli.load_corpus(write_corpus(tmp_path, cases))
    assert cli.main(["corpus", "--file", write_corpus(tmp_path, cases)]) == cli.EXIT_INVALID


def test_corpus_schema_and_syntax(tmp_path):
    assert cli.main(["corpus", "--file", write_corpus(tmp_path, [], schema=2)]) == cli.EXIT_INVALID
    broken = tmp_path / "broken.json"
    broken.write_text("{\n  \"schema\": 1,\n  \"cases\": [\n", encoding="utf-8")
    with pytest.raises(cli.InvalidInputError, match="line"):
        cli.load_corpus(str(broken))
