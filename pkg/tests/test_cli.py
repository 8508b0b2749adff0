import json
import subprocess
import sys

import pytest

from brdkit.chain_terms import parse_chain_term
from brdkit.cli import Config, cache_types, main, render, run
from brdkit.corpus import data_dir

STRUCT = data_dir() / "structures"
WIT = data_dir() / "witnesses"


def ok(argv):
    code, report = run(argv)
    assert code == 0, report
    return report["outputs"]


def test_rank_and_truncate():
    assert ok(["rank", "(w (w 1))"])["rank"] == 2
    assert ok(["rank", "(+ (w 1) 1)"])["rank_bounds"] == [1, 2]
    out = ok(["truncate", "(w* 1)", "--m", "3"])
    assert out == {"size": 3, "branches": ["(w*2)", "(w*1)", "(w*0)"]}


def test_types(tmp_path):
    out = ok(["types", "(w 1 1)", "--n", "2"])
    assert out["count"] == 5 and out["m_star"] <= 4
    fixed = ok(["types", "(w 1 1)", "--n", "2", "--m", "4"])
    assert fixed["types"] == out["types"]


def test_spectrum():
    assert ok(["spectrum", "w^w"])["finite"] is False
    out = ok(["spectrum", "w^3*2 + w"])
    assert out == {"finite": True, "normal_form": "w^3*2 + w^1*1"}


def test_structure_commands():
    assert ok(["decompose", str(STRUCT / "path3.json")])["blocks"] == [[0, 2], [1]]
    assert ok(["decompose", str(STRUCT / "path3.json")])["block_mapping"]["ok"]
    assert ok(["chainable", str(STRUCT / "path3.json")]) == {"chainable": False, "order": None}
    assert ok(["chainable", str(STRUCT / "chain4.json")]) == {"chainable": True, "order": [0, 1, 2, 3]}
    out = ok(["pullback", str(STRUCT / "betweenness4.json"), "--order", "0,1,2,3", "--map", "3,2,1,0"])
    assert out["order"] == [3, 2, 1, 0]


def test_arrow_and_mint():
    out = ok(["arrow", "6", "3", "2", "2", "1"])
    assert out["holds"] and out["counterexample"] is None
    out = ok(["arrow", "5", "3", "2", "2", "1"])
    assert not out["holds"] and len(out["counterexample"]) == 10
    out = ok(["arrow", "5", "3", "2", "2", "1", "--random-trials", "5000", "--seed", "4"])
    assert out["found_by"] == "random" and not out["holds"]
    assert ok(["mint", "5", "3", "2", "2"])["min_t"] == 2


def test_witness_commands(tmp_path):
    out = ok(["witness-verify", str(WIT / "pq_oplus.json"), "--k", "2"])
    assert out == {"verified": True, "transfer_holds": True, "transfer_k": 2}
    out = ok(["witness-compose", str(WIT / "emb_1_1_to_1_2.json"), str(WIT / "emb_1_2_to_1_3.json")])
    assert out["verified"]
    path = tmp_path / "c.json"
    path.write_text(json.dumps(out["witness"]))
    assert ok(["witness-verify", str(path)])["verified"]


def test_pq_encode():
    out = ok(["pq-encode", "(w 1)", "--branches", "(w1);(w4)"])
    assert out["round_trip"] and out["code"] == {"entries": {"0": "1", "1": "-1/2"}, "n": 2}


@pytest.mark.parametrize(
    "argv,code",
    [
        (["rank", "(w"], 1),
        (["rank", "Q"], 1),
        (["spectrum", "w^x"], 1),
        (["decompose", "/nonexistent.json"], 1),
        (["decompose", str(STRUCT / "k33.json"), "--cap", "5"], 1),
        (["arrow", "6", "3", "2", "2", "1", "--budget", "10"], 1),
        (["pq-encode", "(+ 1 1)", "--branches", "i0;i1"], 1),
        (["frobnicate"], 2),
        (["rank"], 2),
        (["arrow", "6", "3"], 2),
        (["rank", "1", "--workers", "0"], 2),
    ],
)
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code
    captured = capsys.readouterr()
    if code == 1:
        assert json.loads(captured.out)["status"] == "error"


def test_output_is_byte_deterministic(capsys):
    argv = ["decompose", str(STRUCT / "k2_plus_k2.json")]
    outs = []
    for _ in range(3):
        main(argv)
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1] == outs[2]
    assert "timing" not in outs[0]
    main(argv + ["--timing"])
    assert "wall_seconds" in capsys.readouterr().out


def test_out_flag(tmp_path, capsys):
    target = tmp_path / "r.json"
    assert main(["rank", "(w 1)", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    report = json.loads(target.read_text())
    assert report["outputs"]["rank"] == 1
    assert list(report) == sorted(report)


def test_cache(tmp_path):
    sigma = parse_chain_term("(+ (w 1) (w* 1))")
    first, m1, hit1 = cache_types(sigma, 2, tmp_path)
    second, m2, hit2 = cache_types(sigma, 2, tmp_path)
    assert (hit1, hit2) == (False, True)
    assert first == second and m1 == m2
    files = list(tmp_path.glob("types-*.json"))
    assert len(files) == 1
    files[0].write_text("{not json")
    third, _, hit3 = cache_types(sigma, 2, tmp_path)
    assert not hit3 and third == first
    assert json.loads(files[0].read_text())["term"] == "(+ (w 1) (w* 1))"
    _, _, hit4 = cache_types(parse_chain_term("(+ (w 1) (w* 1))"), 3, tmp_path)
    assert not hit4


def test_cache_through_cli(tmp_path):
    argv = ["types", "(w (w 1))", "--n", "2", "--cache", str(tmp_path)]
    a, b = ok(argv), ok(argv)
    assert (a.pop("cache_hit"), b.pop("cache_hit")) == (False, True)
    assert a == b


def test_config_rejects_nonpositive():
    with pytest.raises(ValueError):
        Config(workers=0)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "brdkit", "rank", "(w* (w 1))"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["outputs"]["rank"] == 2
    assert render(json.loads(res.stdout)) == res.stdout
