import json

import pytest

from vstar.cli import run
from vstar.theories import catalog_text


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_defeq_json(capsys):
    code, out, _ = call(capsys, "defeq", "top-nei", "--max-atoms", "3", "--json")
    assert code == 0
    assert json.loads(out)["status"] == "verified"


def test_obstruct(capsys):
    code, out, _ = call(capsys, "obstruct", "set1", "set2", "--json")
    assert code == 2
    cx = json.loads(out)["counterexample"]
    assert {cx["group"]["order"]} | {g["order"] for g in cx["candidate_groups"]} == {1, 2}


def test_models(capsys):
    code, out, _ = call(capsys, "models", "top", "--atoms", "3", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["count"] == 29 and len(data["models"]) == 29
    code, out, _ = call(capsys, "models", "top", "--atoms", "2")
    assert code == 0 and "4 models" in out


def test_usage_errors(capsys):
    assert call(capsys, "frobnicate")[0] == 1
    assert call(capsys, "models", "top", "--bogus")[0] == 1
    assert call(capsys, "models", "nosuch")[0] == 1
    assert call(capsys, "models", "top", "--atoms", "9")[0] == 1
    assert call(capsys, "apply", "top_to_nei", "--model", "{@1} ; {")[0] == 1


def test_apply(capsys):
    code, out, _ = call(capsys, "apply", "nei_to_top", "--model",
                        "{@1, @2} ; {{{@1}, {@1, {{@1}, {@1, @2}}}}, {{@2}, {@2, {{@1, @2}}}}}", "--json")
    assert code == 0
    assert json.loads(out)["output"] == "{@1, @2} ; {{}, {@1}, {@1, @2}}"
    code, out, _ = call(capsys, "apply", "top_to_nei", "--model", "{@1, @2} ; {{}, {@1}, {@1, @2}}", "--native")
    assert code == 0
    # input not a model of the source theory
    assert call(capsys, "apply", "top_to_nei", "--model", "{@1, @2} ; {{}}")[0] == 1


def test_apply_refutation_replays(capsys, tmp_path):
    f = tmp_path / "bad.vst"
    f.write_text("interp top_bad : top -> top { tau_d = D; tau_s = sing(D); }\n", encoding="utf-8")
    code, out, _ = call(capsys, "apply", "top_bad", "--model", "{@1} ; {{}, {@1}}", "--file", str(f), "--json")
    assert code == 2
    assert json.loads(out)["status"] == "refuted"


def test_defeq_refuted_and_replayed(capsys):
    code, out, _ = call(capsys, "defeq", "bool-stone", "--json")
    assert code == 2
    cx = json.loads(out)["counterexample"]
    first = "bool_to_stone" if cx["composite"] == "s∘t" else "stone_to_bool"
    code, out, _ = call(capsys, "apply", first, "--model", cx["input"], "--json")
    assert code == 0 and json.loads(out)["output"] == cx["intermediate"]


def test_biint_and_computable(capsys):
    assert call(capsys, "biint", "bool-stone")[0] == 0
    assert call(capsys, "biint", "top_to_nei,nei_to_top")[0] == 0
    assert call(capsys, "computable", "top_to_nei")[0] == 0
    assert call(capsys, "computable", "sub_sigma")[0] == 3
    assert call(capsys, "defeq", "nonsense")[0] == 1


def test_cb(capsys):
    code, out, _ = call(capsys, "cb", "--example", "t-stopper", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["bijective"] and [s["branch"] for s in data["trace"]] == ["T-stopper", "T-stopper"]
    code, out, _ = call(capsys, "cb", "sub_id", "sub_compl", "--atoms", "2")
    assert code == 0 and "degenerate (u = t): True" in out
    assert call(capsys, "cb", "metr_to_metrble", "metrble_to_metr")[0] == 2
    assert call(capsys, "cb")[0] == 1


def test_cb_pair_file(capsys, tmp_path):
    p = tmp_path / "pair.json"
    p.write_text(json.dumps({"T": ["a0"], "S": ["b0", "b1"], "t": {"a0": "b0"}, "s": {"b1": "a0"}}))
    code, out, _ = call(capsys, "cb", "--pair-file", str(p), "--json")
    assert code == 0 and json.loads(out)["trace"][0]["branch"] == "S-stopper"
    p.write_text(json.dumps({"T": ["a0", "a1"], "S": ["b0"], "t": {"a0": "b0", "a1": "b0"}}))
    assert call(capsys, "cb", "--pair-file", str(p))[0] == 2


def test_check_theory(capsys, tmp_path):
    f = tmp_path / "cat.vst"
    f.write_text(catalog_text(), encoding="utf-8")
    code, out, _ = call(capsys, "check-theory", str(f))
    assert code == 0 and "theory top: Δ₀" in out
    code, out, _ = call(capsys, "check-theory", "top", "--model", "{@1, @2} ; {{}, {@1}, {@1, @2}}")
    assert code == 0
    assert call(capsys, "check-theory", "top", "--model", "{@1, @2} ; {{}}")[0] == 2
    bad = tmp_path / "bad.vst"
    bad.write_text("theory broken { forall X in d Y in d }\n", encoding="utf-8")
    assert call(capsys, "check-theory", str(bad))[0] == 1
    layered = tmp_path / "layer.vst"
    layered.write_text("theory finer { top and sing(D) subset d }\n", encoding="utf-8")
    assert call(capsys, "check-theory", str(layered))[0] == 1
    code, out, _ = call(capsys, "check-theory", str(layered), "--layered")
    assert code == 0 and "finer" in out


@pytest.mark.slow
def test_suite_json_is_stable(capsys):
    code, first, _ = call(capsys, "suite", "--json")
    assert code == 0
    code, second, _ = call(capsys, "suite", "--json")
    assert first == second
    assert all(c["passed"] for c in json.loads(first))
