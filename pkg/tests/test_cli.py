"""CLI contract: output formats, exit statuses, determinism."""

import json

import pytest

from bidual.cli import main, parse_relations, UsageError


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_extend_single_perm(capsys):
    code, out, _ = run_cli(capsys, "extend", "--template", "a b* c", "--perm", "3")
    assert code == 0
    assert out.strip() == "(m ◊ n*) □ p"


def test_extend_all_json(capsys):
    code, out, _ = run_cli(
        capsys,
        "extend", "--template", "a b* c", "--all",
        "--relations", "commutative", "--json",
    )
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == "bidual/extensions/v1"
    assert len(data["extensions"]) == 6
    assert data["classes"] == [[0], [1], [2], [3], [4], [5]]
    assert data["regular"] is False


def test_extend_pairing_template_identical(capsys):
    code, out, _ = run_cli(
        capsys, "extend", "--template", "<phi,a> <psi,b> c", "--all", "--json"
    )
    data = json.loads(out)
    assert len(set(data["extensions"])) == 1
    assert data["regular"] is True


def test_extend_parse_error_exit_2(capsys):
    code, _, err = run_cli(capsys, "extend", "--template", "a b* ?")
    assert code == 2
    assert "position" in err


def test_unknown_relation_exit_2(capsys):
    code, _, err = run_cli(
        capsys, "extend", "--template", "a b* c", "--relations", "bogus"
    )
    assert code == 2 and "unknown relation" in err


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["extend", "--template", "a b* c", "--frobnicate"])
    assert exc.value.code == 2


def test_jordan_pass(capsys):
    code, out, _ = run_cli(
        capsys,
        "jordan", "--system", "cstar:3", "--trials", "10",
        "--tol", "1e-10", "--seed", "42", "--json",
    )
    assert code == 0
    data = json.loads(out)
    assert data["pass"] is True
    assert data["max_jordan_rel"] <= 1e-10


def test_jordan_bad_system_exit_2(capsys):
    code, _, err = run_cli(capsys, "jordan", "--system", "cube:9")
    assert code == 2 and "system spec" in err


def test_peirce_ranks(capsys):
    code, out, _ = run_cli(
        capsys,
        "peirce", "--system", "cstar:2", "--tripotent", "e11",
        "--samples", "20", "--json",
    )
    assert code == 0
    data = json.loads(out)
    assert data["projections"]["ranks"] == [1, 2, 1]
    assert data["pass"] is True


def test_peirce_tripotent_file(capsys, tmp_path):
    path = tmp_path / "e11.json"
    path.write_text(json.dumps([[[1, 0], [0, 0]], [[0, 0], [0, 0]]]))
    code, out, _ = run_cli(
        capsys,
        "peirce", "--system", "cstar:2", "--tripotent", str(path),
        "--samples", "5", "--json",
    )
    assert code == 0
    assert json.loads(out)["projections"]["ranks"] == [1, 2, 1]


def test_witness_l1z(capsys):
    code, out, _ = run_cli(
        capsys,
        "witness", "--space", "l1z", "--functional", "heaviside", "--N", "100",
        "--json",
    )
    assert code == 0
    data = json.loads(out)
    assert data["bilinear"]["gap_exact"] == "1"
    assert data["trilinear"]["gap_exact"] == "1"
    values = sorted(e["value"] for e in data["bilinear"]["entries"])
    assert values == ["0", "1"]


def test_witness_l1n_gap_zero(capsys):
    code, out, _ = run_cli(
        capsys, "witness", "--space", "l1n", "--N", "60", "--json"
    )
    assert code == 0
    data = json.loads(out)
    assert data["bilinear"]["gap_exact"] == "0"
    assert data["trilinear"]["gap_exact"] == "0"
    assert len(data["trilinear"]["entries"]) == 6


def test_witness_config_file(capsys, tmp_path):
    cfg = tmp_path / "exp.json"
    cfg.write_text(
        json.dumps(
            {
                "space": "l1z",
                "functional": "heaviside",
                "families": ["delta", "const", "delta_neg"],
                "orders": [0, 2],
                "N": 50,
            }
        )
    )
    code, out, _ = run_cli(capsys, "witness", "--config", str(cfg), "--json")
    assert code == 0
    data = json.loads(out)
    assert data["report"]["gap_exact"] == "1"


def test_witness_requires_space_or_config(capsys):
    code, _, err = run_cli(capsys, "witness")
    assert code == 2 and "required" in err


def test_centers_output(capsys):
    code, out, _ = run_cli(
        capsys,
        "centers", "--template", "a b c", "--slot", "1", "--triple", "0,2,3",
    )
    assert code == 0
    assert "m □ n □ p" in out


def test_centers_invalid_triple_exit_2(capsys):
    code, _, err = run_cli(
        capsys, "centers", "--template", "a b c", "--slot", "1", "--triple", "0,1,2"
    )
    assert code == 2 and "distinct values" in err


def test_out_file(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = run_cli(
        capsys,
        "extend", "--template", "a b* c", "--perm", "0", "--json",
        "--out", str(path),
    )
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["rendered"] == "m □ n* □ p"


def test_selftest_deterministic_and_green(capsys, tmp_path):
    args = [
        "selftest", "--seed", "42", "--trials", "5", "--samples", "5",
        "--N", "30", "--json",
    ]
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["--out", str(f1)]) == 0
    assert main(args + ["--out", str(f2)]) == 0
    b1, b2 = f1.read_bytes(), f2.read_bytes()
    assert b1 == b2
    assert json.loads(b1)["pass"] is True
    capsys.readouterr()


def test_selftest_fails_on_golden_mismatch(capsys, monkeypatch, tmp_path):
    # corrupting one golden string must flip the exit status to 1
    from bidual import golden

    broken = ((golden.GOLDEN[0][0], dict(golden.GOLDEN[0][1])),) + golden.GOLDEN[1:]
    broken[0][1][0] = "m □ n* □ q"
    monkeypatch.setattr(golden, "GOLDEN", broken)
    code = main(
        ["selftest", "--trials", "3", "--samples", "3", "--N", "25",
         "--out", str(tmp_path / "r.json")]
    )
    assert code == 1
    capsys.readouterr()


def test_parse_relations_helper():
    rel = parse_relations("commutative,trace:phi,trace:psi")
    assert rel.base_commutative and not rel.arens_regular
    assert rel.functional_trace == frozenset({"phi", "psi"})
    with pytest.raises(UsageError):
        parse_relations("sideways")
