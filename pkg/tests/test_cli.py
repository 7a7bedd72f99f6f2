import itertools
import json

import pytest

from sflattice import FinPerm, IndexSet, ParseError, PartitionDesc, StepMismatch
from sflattice.cli import (
    OPERATIONS,
    Scenario,
    bundled_corpus,
    bundled_path,
    call,
    main,
    replay_transcript,
    run_scenario,
)
from sflattice.groups import PartitionGroup, gstar, gstar_subgroup
from sflattice.serialize import dumps, export, import_

BUNDLED = ["chain-pseudo-intersection", "e0e1-counterexample", "gstar-embedding",
           "lemma-super-coarsening", "pa-run", "pr-run", "rho-builder"]


def run(capsys, *argv):
    status = main(list(argv))
    return status, json.loads(capsys.readouterr().out)


class TestCommands:
    def test_perm(self, capsys):
        assert run(capsys, "perm", "compose", "(0 1)", "(1 2)") == (0, [[0, 1, 2]])
        assert run(capsys, "perm", "inverse", "[[0,1,2]]") == (0, [[0, 2, 1]])
        assert run(capsys, "perm", "at", "3")[1] == [[0, 1, 2]]
        assert run(capsys, "perm", "index", "(0 1 2)")[1] == 3

    def test_group_member(self, capsys):
        status, doc = run(capsys, "group", "member", "gstar", "(0 1)")
        assert status == 0 and doc["status"] == "member"
        assert doc["certificate"] == [[[[0, 1]], 1]]

    def test_orth_and_almost(self, capsys):
        assert run(capsys, "orth", "gstar:evens", "gstar:odds")[1]["status"] == "holds"
        status, doc = run(capsys, "almost", "partition:mod2", "partition:one", "--search", "1", "3")
        assert status in (0, 1)

    def test_metric(self, capsys):
        _, doc = run(capsys, "metric", "[[[0,1]]]", "trivial", "-N", "64")
        assert doc["value"]["float"] == pytest.approx(2 / 15)
        assert doc["tail_bound"] == {"num": 1, "den": 2 ** 63, "float": 2.0 ** -63}

    def test_construct(self, capsys):
        _, doc = run(capsys, "construct", "rho", '{"groups":["gstar"],"k":1,"m":0}',
                     "--window", "11")
        assert doc["rho"] == [[0, 5], [2, 10]] and doc["verified"]

    def test_force_round_trip(self, capsys, tmp_path):
        oracles = '[{"kind":"pr","group":"gstar","n":0},{"kind":"pr","group":"gstar","n":1}]'
        status, doc = run(capsys, "force", "pr", "--oracles", oracles)
        assert status == 0 and doc["verified"]
        path = tmp_path / "t.json"
        path.write_text(json.dumps(doc))
        status, out = run(capsys, "force", "verify", str(path))
        assert status == 0 and out["verified"]

    def test_window_flag_and_env(self, capsys, monkeypatch):
        _, doc = run(capsys, "group", "member", "gstar", "(0 70)")
        assert doc["status"] == "unknown"
        _, doc = run(capsys, "group", "member", "gstar", "(0 70)", "--window", "128")
        assert doc["status"] == "non_member"
        monkeypatch.setenv("LF_WINDOW", "128")
        assert run(capsys, "group", "member", "gstar", "(0 70)")[1]["status"] == "non_member"


class TestErrors:
    def test_malformed_perm(self, capsys):
        status, doc = run(capsys, "perm", "inverse", "[[1,1]]")
        assert status == 1 and doc["error"] == "parse_error"

    def test_unknown_command(self, capsys):
        status, doc = run(capsys, "nonsense")
        assert status == 1 and doc["error"] == "parse_error"

    def test_bad_env(self, capsys, monkeypatch):
        monkeypatch.setenv("LF_WINDOW", "abc")
        status, doc = run(capsys, "perm", "inverse", "(0 1)")
        assert status == 1 and doc["location"] == "LF_WINDOW"

    def test_not_found_is_reported(self, capsys):
        status, doc = run(capsys, "construct", "avoid", '{"group":[[[0,1]]],"m":2}')
        assert status == 1 and doc["error"] == "not_found_in_window"

    def test_missing_target(self, capsys):
        assert run(capsys, "scenario", "run")[0] == 1


class TestScenarios:
    def test_corpus(self):
        names = [s.name for s in bundled_corpus()]
        assert names == BUNDLED

    @pytest.mark.parametrize("name", BUNDLED)
    def test_bundled_pass_and_replay(self, name):
        tr = run_scenario(name)
        doc = json.loads(dumps(tr.to_json()))
        assert doc["window"] == 64 or name in ("pa-run",)
        assert doc["summary"]["verdict"] == "pass"
        assert doc["summary"]["checked"] >= 1
        assert replay_transcript(doc)
        assert dumps(run_scenario(name).to_json()) == dumps(tr.to_json())

    def test_alias(self):
        assert bundled_path("matet-e0e1") == bundled_path("e0e1-counterexample")
        assert run_scenario("matet-e0e1").scenario == "e0e1-counterexample"

    def test_empty(self):
        tr = run_scenario({"name": "empty", "steps": []})
        assert tr.steps == [] and tr.to_json()["summary"]["steps"] == 0

    def test_wrong_expectation(self):
        doc = {"name": "bad", "steps": [
            {"op": "perm.compose", "args": {"p": "(0 1)", "q": "(1 2)"}, "expect": [[0, 1, 2]]},
            {"op": "perm.inverse", "args": {"p": "(0 1 2)"}, "expect": [[0, 1, 2]]}]}
        with pytest.raises(StepMismatch) as err:
            run_scenario(doc)
        assert err.value.index == 1

    def test_tampered_replay(self):
        doc = json.loads(dumps(run_scenario("rho-builder").to_json()))
        doc["steps"][0]["output"] = {"rho": []}
        with pytest.raises(StepMismatch):
            replay_transcript(doc)

    def test_unknown_operation(self):
        with pytest.raises(ParseError):
            Scenario.from_json({"name": "x", "steps": [{"op": "perm.frobnicate"}]})

    def test_file_scenario(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text(json.dumps({"name": "f", "window": 16, "steps": [
            {"op": "orth", "args": {"G1": "gstar:evens", "G2": "gstar:odds"},
             "expect": {"status": "holds"}}]}))
        tr = run_scenario(str(path))
        assert tr.window == 16 and tr.steps[0]["checked"]
        (tmp_path / "broken.json").write_text("{")
        with pytest.raises(ParseError):
            run_scenario(str(tmp_path / "broken.json"))

    def test_every_operation_registered(self):
        assert {"perm.compose", "orth", "almost", "metric", "family", "construct.rho",
                "force.run", "force.verify"} <= set(OPERATIONS)
        assert call("perm.k_cycle", {"points": [3, 5, 7]}) == [[3, 5, 7]]


class TestExportImport:
    def test_all_perms_on_six_points(self):
        for img in itertools.permutations(range(6)):
            p = FinPerm.from_one_line(img)
            assert import_(export(p)) == p

    def test_identity(self):
        assert FinPerm().to_json() == []
        assert json.loads(export(FinPerm()))["value"] == []
        assert import_(b"[]") == FinPerm()

    def test_malformed(self):
        with pytest.raises(ParseError):
            import_(b"[[1,1]]")
        with pytest.raises(ParseError):
            import_(b"{not json")
        with pytest.raises(ParseError):
            import_(b'{"kind": "widget", "value": 1}')

    def test_other_kinds(self):
        values = [IndexSet.parse("mod3:1"), PartitionDesc.blocks(2),
                  gstar_subgroup(IndexSet.parse("evens")), PartitionGroup(PartitionDesc.mod(2)),
                  gstar()]
        for v in values:
            assert import_(export(v)) == v
        with pytest.raises(TypeError):
            export(object())
