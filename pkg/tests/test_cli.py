import json

from abext.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_ext_verb_example(capsys):
    code, out = run(capsys, "ext", "--A", "Z(4)", "--B", "Z(6)")
    assert code == 0
    assert json.loads(out) == {"group": {"rank": 0, "factors": ["2"]}}


def test_classify_torsion_example(capsys):
    code, data = run_json(capsys, "classify-torsion", "U(2)")
    assert code == 0
    assert data["universal_TZ"] is False
    assert data["witness_prime"] == "2"


def test_witness_example(capsys):
    code, data = run_json(capsys, "witness", "--p", "2", "--N", "4")
    assert code == 0
    assert data["order"] == "16"
    assert data["method"] == "brute-force"


def test_ab4_witness(capsys):
    code, data = run_json(capsys, "ab4-witness", "--p", "5", "--N", "2")
    assert code == 0 and data["order"] == "25"


def test_snf_verb(capsys):
    code, data = run_json(capsys, "snf", "--matrix", '[["2","4"],["6","8"]]')
    assert code == 0
    assert data["D"] == [["2", "0"], ["0", "4"]]


def test_canon_verb(capsys):
    code, data = run_json(capsys, "canon", "--presentation", '[["2","4"],["6","8"]]')
    assert code == 0
    assert data["group"] == {"rank": 0, "factors": ["2", "4"]}


def test_group_json_round_trip(capsys):
    code, data = run_json(capsys, "ext", "--A", "Z(4)", "--B", "Z(6)")
    back = json.dumps(data["group"])
    code2, data2 = run_json(capsys, "hom", "--A", back, "--B", "Z(4)")
    assert code2 == 0
    assert data2["group"] == {"rank": 0, "factors": ["2"]}


def test_realize_classify_round_trip(capsys):
    cls = {"A": {"rank": 0, "factors": ["4"]}, "B": {"rank": 0, "factors": ["2"]}, "coords": ["1"]}
    code, data = run_json(capsys, "realize", "--class", json.dumps(cls))
    assert code == 0
    seq = data["sequence"]
    code, data = run_json(capsys, "classify", "--sequence", json.dumps(seq))
    assert code == 0
    assert data["class"] == cls


def test_baer_and_act(capsys):
    c = {"A": {"rank": 0, "factors": ["4"]}, "B": {"rank": 0, "factors": ["4"]}, "coords": ["1"]}
    code, data = run_json(capsys, "baer", "--c1", json.dumps(c), "--c2", json.dumps(c))
    assert code == 0 and data["class"]["coords"] == ["2"]
    ident = {
        "source": {"rank": 0, "factors": ["4"]},
        "target": {"rank": 0, "factors": ["4"]},
        "matrix": [["1"]],
    }
    code, data = run_json(capsys, "act", "--class", json.dumps(c), "--map", json.dumps(ident), "--side", "pull")
    assert code == 0 and data["class"]["coords"] == ["1"]


def test_delta_verb(capsys):
    cls = {"A": {"rank": 0, "factors": ["2"]}, "B": {"rank": 0, "factors": ["2"]}, "coords": ["1"]}
    code, data = run_json(capsys, "realize", "--class", json.dumps(cls))
    seq = json.dumps(data["sequence"])
    code, data = run_json(capsys, "delta", "--sequence", seq, "--T", "Z(2)")
    assert code == 0
    assert data["map"]["matrix"] == [["1"]]


def test_psi_verb(capsys):
    code, data = run_json(capsys, "psi", "--summands", "Z(2);Z(2)", "--B", "Z(2)")
    assert code == 0
    assert data["bijective"] is True
    code, data = run_json(capsys, "psi", "--summands", "Z(2);Z(4)", "--B", "Z(4)", "--phi")
    assert code == 0 and data["bijective"] is True


def test_univ_ext_verbs(capsys):
    code, data = run_json(capsys, "univ-ext", "--B", "Z(2)", "--A", "Z(2)")
    assert code == 0
    assert data["X_size"] == 2
    assert data["middle"] == {"rank": 0, "factors": ["2", "4"]}
    assert all(c["passed"] for c in data["conditions"].values())
    assert "sequence" not in data
    code, data = run_json(capsys, "univ-ext", "--B", "Z(2)", "--A", "Z(2)", "--full")
    assert "sequence" in data and "class" in data
    code, data = run_json(capsys, "univ-coext", "--B", "Z(2)", "--A", "Z(4)")
    assert code == 0 and data["X_size"] == 2


def test_cyclic_check_verb(capsys):
    code, data = run_json(capsys, "cyclic-check", "--B", "Z(2)", "--A", "Z(2)", "--samples", "3")
    assert code == 0 and data["passed"] and len(data["witnesses"]) == 3


def test_parse_and_cotorsion_verbs(capsys):
    code, data = run_json(capsys, "parse", "Z(12)")
    assert code == 0
    assert data["expression"] == "Z(2^2) + Z(3^1)"
    code, data = run_json(capsys, "cotorsion", "Z(2)^inf")
    assert code == 0 and data["cotorsion"] is True and data["bound"] == "2"
    code, data = run_json(capsys, "cotorsion", "W")
    assert data["cotorsion"] is False


def test_parse_error_exit_code_and_position(capsys):
    code, data = run_json(capsys, "parse", "Z(4^2)")
    assert code == 1
    assert data["error"]["code"] == "parse-error"
    assert data["error"]["position"] == 2


def test_domain_error_exit_code(capsys):
    code, data = run_json(capsys, "ext", "--A", "Z(2^inf)", "--B", "Z(2)")
    assert code == 1
    assert "error" in data


def test_usage_error_exit_code(capsys):
    code = main(["ext", "--A", "Z(2)"])  # missing --B
    capsys.readouterr()
    assert code == 2
    code = main(["no-such-verb"])
    capsys.readouterr()
    assert code == 2


def test_deterministic_output(capsys):
    _, out1 = run(capsys, "univ-ext", "--B", "Z(2)", "--A", "Z(4)", "--full")
    _, out2 = run(capsys, "univ-ext", "--B", "Z(2)", "--A", "Z(4)", "--full")
    assert out1 == out2
    _, p1 = run(capsys, "witness", "--p", "2", "--N", "3")
    _, p2 = run(capsys, "witness", "--p", "2", "--N", "3")
    assert p1 == p2


def test_torsion_verbs_reject_free_parts(capsys):
    code, data = run_json(capsys, "classify-torsion", "Z + Z(2)")
    assert code == 1 and data["error"]["code"] == "parse-error"


def test_suite_smoke(capsys):
    code, data = run_json(capsys, "suite", "--only", "8,9,10")
    assert code == 0
    assert data["all_passed"] is True
    assert [c["id"] for c in data["criteria"]] == [8, 9, 10]


def test_budget_env_default(capsys, monkeypatch):
    monkeypatch.setenv("ABEXT_BUDGET", "1024")
    # at budget 1024 the N=5 search space (2^15) exceeds it: fast path
    code, data = run_json(capsys, "witness", "--p", "2", "--N", "5")
    assert code == 0 and data["method"] == "fast-path" and data["order"] == "32"
    monkeypatch.delenv("ABEXT_BUDGET")
    code, data = run_json(capsys, "witness", "--p", "2", "--N", "5")
    assert data["method"] == "brute-force"
