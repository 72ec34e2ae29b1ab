from __future__ import annotations

import io
import json

import pytest

from charop.charexpr import FiniteCharacter
from charop.cli import run
from charop.database import sl2_database
from charop.rootdata import build_root_system
from charop.tilting import sl2_tilting_fixture


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def coeffs(obj, key="character"):
    return {tuple(w): int(c) for w, c in obj[key]}


def test_verma_example():
    code, out, _ = call("char", "verma", "--type", "A", "--rank", "1", "--p", "3", "--weight", "[0]",
                        "--depth", "4", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert coeffs(obj) == {(0,): 1, (-2,): 1, (-4,): 1, (-6,): 1, (-8,): 1}
    assert all(isinstance(c, str) for _, c in obj["character"])


def test_jantzen_example():
    code, out, _ = call("jantzen", "sum", "--type", "A", "--rank", "2", "--p", "3", "--weight", "[-1,-1]",
                        "--depth", "30", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["total"] == [] and all(r["character"] == [] for r in obj["per_root"])


def test_jantzen_sl2_check():
    code, out, _ = call("jantzen", "sl2-check", "--type", "A1", "--p", "3", "--weight", "[-5]", "--depth", "30",
                        "--format", "json")
    assert code == 0
    assert json.loads(out)["equal"] is True


def test_linked_example():
    code, out, _ = call("linkage", "linked", "--type", "A", "--rank", "1", "--p", "3", "--from", "[-2]",
                        "--to", "[0]", "--format", "json")
    assert code == 0 and json.loads(out)["strongly_linked"] is True
    code, out, _ = call("linkage", "linked", "--type", "A1", "--p", "3", "--from", "[-1]", "--to", "[0]",
                        "--format", "json")
    assert code == 0 and json.loads(out)["strongly_linked"] is False


def test_linkage_rep_and_split():
    code, out, _ = call("linkage", "rep", "--type", "A1", "--p", "3", "--weight", "[7]", "--format", "json")
    assert code == 0 and json.loads(out)["representative"] == [1]
    code, out, _ = call("linkage", "split", "--type", "A1", "--p", "3", "--expansion", "[[[0],1],[[-2],-1],[[-1],5]]",
                        "--format", "json")
    assert code == 0
    parts = {tuple(c["representative"]): coeffs(c, "expansion") for c in json.loads(out)["classes"]}
    assert parts == {(0,): {(0,): 1, (-2,): -1}, (-1,): {(-1,): 5}}


def test_translate():
    code, out, _ = call("translate", "--type", "A1", "--p", "3", "--expansion", "[[[0],1],[[-2],-1]]",
                        "--from", "[0]", "--to", "[1]", "--format", "json")
    assert code == 0
    assert coeffs(json.loads(out), "expansion") == {(1,): 1, (-3,): -1}


def test_decompose_and_simple():
    code, out, _ = call("decompose", "verma-basis", "--type", "A1", "--p", "3", "--of", "simple", "--weight", "[-2]",
                        "--depth", "10", "--format", "json")
    assert code == 0
    assert coeffs(json.loads(out), "expansion") == {(-2,): 1, (-6,): -1, (-8,): 1, (-12,): -1, (-14,): 1,
                                                    (-18,): -1, (-20,): 1}
    code, out, _ = call("char", "simple", "--type", "A1", "--p", "3", "--weight", "[-2]", "--depth", "6",
                        "--format", "tsv")
    assert code == 0
    assert out.splitlines() == ["weight\tcoefficient", "-2\t1", "-4\t1", "-8\t1", "-10\t1", "-14\t1"]


def test_finite_queries_need_no_depth():
    code, out, _ = call("char", "weyl", "--type", "A2", "--p", "3", "--weight", "[1,0]", "--format", "json")
    assert code == 0 and coeffs(json.loads(out)) == {(1, 0): 1, (-1, 1): 1, (0, -1): 1}
    code, out, _ = call("char", "tilting", "--type", "A1", "--p", "3", "--weight", "[3]", "--format", "json")
    assert code == 0 and coeffs(json.loads(out)) == {(3,): 1, (1,): 2, (-1,): 2, (-3,): 1}


def test_infty_tilting():
    code, out, _ = call("char", "infty-tilting", "--type", "A1", "--p", "3", "--weight", "[-1]", "--depth", "10",
                        "--format", "json")
    assert code == 0 and coeffs(json.loads(out)) == {(-1 - 2 * i,): 1 for i in range(11)}


def test_json_round_trip():
    code, out, _ = call("char", "verma", "--type", "A2", "--p", "3", "--weight", "[1,-1]", "--depth", "5",
                        "--format", "json")
    obj = json.loads(out)
    rs = build_root_system("A", 2)
    back = FiniteCharacter.from_json(rs, {"window": obj["window"], "ceilings": obj["window"]["ceilings"],
                                          "coefficients": obj["character"]})
    assert json.loads(json.dumps(back.to_json()))["coefficients"] == obj["character"]


@pytest.mark.parametrize("weight", ["[-2]", "[4]", "[-7]"])
def test_window_monotone(weight):
    small = coeffs(json.loads(call("char", "simple", "--type", "A1", "--p", "3", "--weight", weight,
                                   "--depth", "5", "--format", "json")[1]))
    big = coeffs(json.loads(call("char", "simple", "--type", "A1", "--p", "3", "--weight", weight,
                                 "--depth", "12", "--format", "json")[1]))
    assert all(big.get(k) == v for k, v in small.items())
    top = int(weight.strip("[]"))
    assert all(k in small for k in big if top - k[0] <= 10)


def test_exit_codes():
    assert call("char", "verma", "--type", "A1", "--p", "3", "--weight", "[0]")[0] == 2
    assert call("nonsense")[0] == 2
    assert call("char", "verma", "--type", "A1", "--p", "3", "--weight", "[0", "--depth", "2")[0] == 2
    code, _, err = call("char", "verma", "--type", "A1", "--p", "4", "--weight", "[0]", "--depth", "2")
    assert code == 3 and "4" in err
    code, _, err = call("jantzen", "sum", "--type", "A2", "--p", "3", "--weight", "[0,-1]", "--depth", "5")
    assert code == 3 and "[0, -1]" in err
    code, _, err = call("char", "simple", "--type", "A2", "--p", "5", "--weight", "[1,0]", "--depth", "5")
    assert code == 3 and "A2" in err
    code, _, err = call("char", "tilting", "--type", "A2", "--p", "2", "--weight", "[1,1]")
    assert code == 3
    code, _, err = call("char", "simple", "--type", "A2", "--p", "2", "--weight", "[-1,0]", "--depth", "30",
                        "--cap", "3")
    assert code == 4 and "[-1, 0]" in err
    code, _, _ = call("char", "verma", "--type", "A3", "--p", "3", "--weight", "[0,0,0]", "--depth", "400")
    assert code == 4


def test_db_validate(tmp_path):
    path = tmp_path / "sl2.json"
    sl2_database(5).save(path)
    code, out, _ = call("db", "validate", "--db", str(path), "--format", "json")
    assert code == 0 and json.loads(out)["valid"] is True
    tpath = tmp_path / "t.json"
    sl2_tilting_fixture(3).save(tpath)
    assert call("db", "validate", "--tilting-db", str(tpath))[0] == 0
    bad = json.loads(path.read_text())
    bad["entries"][1]["char"][0][1] = "2"
    path.write_text(json.dumps(bad))
    assert call("db", "validate", "--db", str(path))[0] == 3
    assert call("db", "validate")[0] == 2


def test_missing_entry_named(tmp_path):
    path = tmp_path / "partial.json"
    db = sl2_database(5)
    obj = db.to_json()
    obj["entries"] = [e for e in obj["entries"] if e["weight"] != [3]]
    path.write_text(json.dumps(obj))
    code, _, err = call("char", "simple", "--type", "A1", "--p", "5", "--db", str(path), "--weight", "[3]")
    assert code == 3 and "[3]" in err


def test_user_database(tmp_path):
    path = tmp_path / "sl2.json"
    sl2_database(3).save(path)
    code, out, _ = call("char", "simple", "--type", "A1", "--p", "3", "--db", str(path), "--weight", "[4]",
                        "--format", "json")
    assert code == 0 and coeffs(json.loads(out)) == {(4,): 1, (2,): 1, (-2,): 1, (-4,): 1}


def test_rootsys_info():
    code, out, _ = call("rootsys", "info", "--type", "B", "--rank", "2", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["coxeter_number"] == 4 and obj["weyl_group_order"] == 8
