import json

import pytest

from cfharm.cli import main
from cfharm.scenario_io import read_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


@pytest.fixture
def tb_doc():
    return read_json("tb.json")


def write(tmp_path, doc, name="s.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(path)


class TestValidate:
    def test_bundled(self, capsys):
        assert run(capsys, "validate", "tb.json")[0] == 0

    def test_mass_five_sixths(self, capsys, tmp_path, tb_doc):
        tb_doc["treatments"][0]["marginal"] = {"y1": "1/6", "y4": "4/6"}
        code, _, err = run(capsys, "validate", write(tmp_path, tb_doc))
        assert code == 1 and "MassNotOne" in err

    def test_malformed_rational(self, capsys, tmp_path, tb_doc):
        tb_doc["treatments"][0]["marginal"]["y1"] = "1//6"
        code, _, err = run(capsys, "validate", write(tmp_path, tb_doc))
        assert code == 1 and "ParseError" in err and "1//6" in err

    def test_bad_json_position(self, capsys, tmp_path):
        code, _, err = run(capsys, "validate", write(tmp_path, '{"outcomes": [\n  1,,\n]}'))
        assert code == 1 and "line 2" in err

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "validate", str(tmp_path / "nope.json"))[0] == 1

    def test_order_violation(self, capsys, tmp_path, tb_doc):
        tb_doc["utilities"][0]["values"]["y2"] = "9"
        code, _, err = run(capsys, "validate", write(tmp_path, tb_doc))
        assert code == 1 and "NotOrderPreserving" in err


class TestBounds:
    def test_rct1(self, capsys):
        code, doc = run_json(capsys, "bounds", "tb.json", "--new", "a2", "--ref", "a1")
        assert code == 0
        assert (doc["benefit"]["lo"], doc["benefit"]["hi"]) == ("1/2", "2/3")
        assert (doc["harm"]["lo"], doc["harm"]["hi"]) == ("1/3", "1/2")

    def test_combined(self, capsys):
        _, doc = run_json(capsys, "bounds", "tb.json", "--new", "a3", "--ref", "a1")
        assert (doc["benefit"]["lo"], doc["benefit"]["hi"]) == ("1/6", "1/3")
        assert (doc["harm"]["lo"], doc["harm"]["hi"]) == ("2/3", "5/6")

    def test_self(self, capsys):
        _, doc = run_json(capsys, "bounds", "tb.json", "--new", "a1", "--ref", "a1")
        assert (doc["benefit"]["lo"], doc["benefit"]["hi"]) == ("0", "0")
        assert (doc["tie"]["lo"], doc["tie"]["hi"]) == ("1", "1")

    def test_weighted(self, capsys):
        code, out, _ = run(capsys, "bounds", "tb.json", "--new", "a2", "--ref", "a1", "--w", "3/2")
        assert code == 0 and "Inconclusive" in out and "-1/4" in out

    def test_table_matches_json(self, capsys):
        _, out, _ = run(capsys, "bounds", "tb.json", "--new", "a2", "--ref", "a1")
        for value in ("1/2", "2/3", "1/3"):
            assert value in out

    def test_unknown_treatment(self, capsys):
        code, _, err = run(capsys, "bounds", "tb.json", "--new", "a9", "--ref", "a1")
        assert code == 1 and "a9" in err


class TestRank:
    def test_mu2(self, capsys):
        _, doc = run_json(capsys, "rank", "tb.json", "--utility", "mu2")
        got = [(r["treatment"], r["expected_utility"]) for r in doc["ranking"]]
        assert got == [("a2", "6"), ("a3", "5"), ("a1", "25/6")]

    def test_mu1_tie(self, capsys):
        _, doc = run_json(capsys, "rank", "tb.json", "--utility", "mu1")
        assert {r["expected_utility"] for r in doc["ranking"]} == {"7/2"}
        assert {r["rank"] for r in doc["ranking"]} == {1}

    def test_unknown_utility(self, capsys):
        code, _, err = run(capsys, "rank", "tb.json", "--utility", "mu9")
        assert code == 1 and "UnknownUtility" in err


class TestAudit:
    def test_cycle_exit_two(self, capsys):
        code, doc = run_json(capsys, "audit", "tb.json", "--rule", "counterfactual", "--w", "1")
        assert code == 2
        assert [c["members"] for c in doc["cycles"]] == [["a1", "a2", "a3"]]

    def test_mu3(self, capsys):
        code, doc = run_json(capsys, "audit", "tb.json", "--rule", "interventionist", "--utility", "mu3")
        assert code == 0 and doc["order"] == ["a1", "a3", "a2"]

    def test_w3(self, capsys):
        code, doc = run_json(capsys, "audit", "tb.json", "--rule", "counterfactual", "--w", "3")
        assert code == 0 and doc["cycles"] == []

    def test_table_mentions_cycle(self, capsys):
        code, out, _ = run(capsys, "audit", "tb.json", "--rule", "counterfactual", "--w", "1")
        assert code == 2 and "a1" in out and "cycle" in out.lower()

    def test_missing_w(self, capsys):
        assert run(capsys, "audit", "tb.json", "--rule", "counterfactual")[0] == 1

    def test_missing_utility(self, capsys):
        assert run(capsys, "audit", "tb.json", "--rule", "interventionist")[0] == 1


class TestSearchUtility:
    @pytest.mark.parametrize("order", ["a2,a3,a1", "a1,a3,a2"])
    def test_feasible(self, capsys, order):
        code, doc = run_json(capsys, "search-utility", "tb.json", "--order", order, "--min-gap", "1/6", "--range", "0..10")
        assert code == 0 and doc["feasible"] and doc["verified"]

    def test_infeasible(self, capsys):
        code, doc = run_json(capsys, "search-utility", "tb.json", "--order", "a1,a2", "--min-gap", "20", "--range", "0..1")
        assert code == 0 and doc["feasible"] is False

    def test_repeated_id(self, capsys):
        assert run(capsys, "search-utility", "tb.json", "--order", "a1,a1,a2")[0] == 1

    def test_bad_range(self, capsys):
        assert run(capsys, "search-utility", "tb.json", "--order", "a1,a2,a3", "--range", "3..3")[0] == 1


class TestSimulate:
    ARGS = ("simulate", "tb.json", "--joint", "tb_joint.json", "--n", "2000", "--seed", "42", "--arms", "a1,a2")

    def test_summary(self, capsys):
        code, doc = run_json(capsys, *self.ARGS)
        assert code == 0 and doc["containment"] is True
        assert doc["true_stats"]["benefit"] == "2/3"

    def test_byte_identical_rerun(self, capsys):
        first = run(capsys, *self.ARGS)[1]
        assert run(capsys, *self.ARGS)[1] == first

    def test_zero_n(self, capsys):
        args = list(self.ARGS)
        args[args.index("2000")] = "0"
        assert run(capsys, *args)[0] == 1

    def test_bad_joint(self, capsys, tmp_path):
        doc = read_json("tb_joint.json")
        doc["cells"][0]["p"] = "1/3"
        doc["cells"][1]["p"] = "1/6"
        path = write(tmp_path, doc, "j.json")
        code, _, err = run(capsys, "simulate", "tb.json", "--joint", path, "--n", "10", "--seed", "1", "--arms", "a1,a2")
        assert code == 1 and "MarginalMismatch" in err


def test_no_command(capsys):
    assert run(capsys)[0] == 1


def test_json_keys_sorted(capsys):
    _, out, _ = run(capsys, "rank", "tb.json", "--utility", "mu3", "--format", "json")
    doc = json.loads(out)
    assert out.strip() == json.dumps(doc, indent=2, sort_keys=True)
