"""CLI contract tests: subcommand outputs, exit codes, config files, and
the output-directory environment override.  All in-process via cli.run."""

import json

import pytest

from deltalab.cli import run


def out_of(capsys):
    return capsys.readouterr().out


def test_tuple_json(capsys):
    assert run(["tuple", "--order", "5", "--json"]) == 0
    d = json.loads(out_of(capsys))
    assert d["a"] == "139/194"
    assert d["b"] == "13/194"
    assert d["eps_on"] == ["b", "eta"]


def test_tuple_text_and_eval(capsys):
    assert run(["tuple", "--order", "4", "--eval-M", "1", "--eval-T", "1"]) == 0
    text = out_of(capsys)
    assert "a = 1/2" in text
    assert "b = 13/84 (+eps)" in text
    assert "bound(1.0, 1.0) = 4" in text


def test_tuple_validation_exit_code(capsys):
    assert run(["tuple", "--order", "3"]) == 1


def test_unknown_subcommand_exit_code(capsys):
    assert run(["frobnicate"]) == 1


def test_derive_text(capsys):
    assert run(["derive"]) == 0
    text = out_of(capsys)
    assert "n_choice: D^(55/173)*Dmax^(-291/346)*x^(181/346)" in text
    assert "simplified: D^(527/1038)*x^(511/1038)*x^eps" in text


def test_derive_json(capsys):
    assert run(["derive", "--report", "json"]) == 0
    d = json.loads(out_of(capsys))
    assert len(d["pipeline"]["final"]) == 4
    assert d["pipeline"]["simplified"] == "D^(527/1038)*x^(511/1038)*x^eps"


def test_compare_explicit(capsys):
    assert run(["compare", "--ours", "511/1038", "--theirs", "2498/5073"]) == 0
    text = out_of(capsys)
    assert "511/1038 < 2498/5073 (exact)" in text
    assert "0.492293 vs 0.492411" in text


def test_compare_default_records_both_pairs(capsys):
    assert run(["compare"]) == 0
    text = out_of(capsys)
    assert "x_exponent: 511/1038 < 2498/5073" in text
    assert "D_exponent: 527/1038 > 2575/5073" in text
    assert "remark_39_77_vs_39_79" in text
    assert "remark_2500_5077_vs_2498_5073" in text


def test_character_table(capsys):
    assert run(["character", "--disc", "-4", "--table", "8"]) == 0
    assert "1 0 -1 0 1 0 -1 0" in out_of(capsys)


def test_character_invalid_disc(capsys):
    assert run(["character", "--disc", "9"]) == 1


def test_gauss_range(capsys):
    assert run(["gauss", "--disc", "5", "--m", "1..3", "--json"]) == 0
    d = json.loads(out_of(capsys))
    assert [row["m"] for row in d["values"]] == [1, 2, 3]
    assert float(d["values"][0]["abs"]) == pytest.approx(5**0.5, rel=1e-9)


def test_lfunction(capsys):
    assert run(["lfunction", "--disc", "-4", "--derivative"]) == 0
    text = out_of(capsys)
    assert "L(1) = 0.785398163397" in text
    assert "L'(1) = 0.192901316797" in text


def test_tables_csv(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert run(["tables", "--disc", "-4", "--limit", "50", "--dump", "csv",
                "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ("n,lambda,nu,lambda_prime,rho,Lambda,rho_star,"
                        "rho_substar,Lambda_star,Lambda_substar")
    assert len(lines) == 51
    assert lines[1] == "1,1,1,0,1,0,1,0,0,0"
    row2 = lines[2].split(",")
    assert row2[0] == "2" and row2[3] == "0.69314718056"


def test_tables_out_env_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("DELTALAB_OUT", str(tmp_path))
    assert run(["tables", "--disc", "5", "--limit", "10", "--dump", "csv",
                "--out", "sub/t.csv"]) == 0
    assert (tmp_path / "sub" / "t.csv").exists()


def test_divisor_sum(capsys):
    assert run(["divisor-sum", "--f", "rho", "--x", "100", "--disc", "-4",
                "--residual"]) == 0
    text = out_of(capsys)
    # independent oracle: rho = 1*1*chi, so the partial sum is a triple loop
    from deltalab import make_character

    chi = make_character(-4)
    brute = sum(
        chi(c)
        for a in range(1, 101)
        for b in range(1, 100 // a + 1)
        for c in range(1, 100 // (a * b) + 1)
    )
    assert f"sum = {brute}" in text
    assert "normalized =" in text


def test_psi_short(capsys):
    assert run(["psi-short", "--x", "100", "--y", "10", "--disc", "-4"]) == 0
    text = out_of(capsys)
    assert "psi = 4.5747109785" in text
    assert "pi_count = 1" in text


def test_psi_short_needs_y_or_alpha(capsys):
    assert run(["psi-short", "--x", "100", "--disc", "-4"]) == 1


def test_delta_naive_check(capsys):
    assert run(["delta", "--d1", "1", "--d2", "1", "--d3", "-4", "--x", "2000",
                "--naive-check", "--json"]) == 0
    d = json.loads(out_of(capsys))
    assert d["result"]["naive_check"] == "passed"
    assert d["result"]["raw_sum"] == d["result"]["naive_raw"]


def test_delta_cap_exit(capsys):
    assert run(["delta", "--d1", "1", "--d2", "1", "--d3", "1", "--x", "1e7",
                "--cap", "1e6"]) == 1


def test_delta_sweep_csv(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert run(["delta-sweep", "--d1", "1", "--d2", "1", "--d3", "-4",
                "--x-grid", "100:10000:geometric:5", "--out", str(out),
                "--threads", "2"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,d1,d2,d3,raw_sum,residue,delta,bound_value,ratio"
    assert len(lines) == 6
    text = out_of(capsys)
    assert "max |delta|/bound" in text


def test_delta_sweep_thread_independence(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(["delta-sweep", "--d1", "-4", "--d2", "1", "--d3", "5",
         "--x-grid", "100:5000:geometric:4", "--out", str(a), "--threads", "1"])
    run(["delta-sweep", "--d1", "-4", "--d2", "1", "--d3", "5",
         "--x-grid", "100:5000:geometric:4", "--out", str(b), "--threads", "2"])
    assert a.read_bytes() == b.read_bytes()


def test_expsum_default_modulus(capsys):
    assert run(["expsum", "--n1", "3", "--n2", "7", "--d3", "5", "--x", "1e6",
                "--range", "1000:1100", "--m", "2"]) == 0
    text = out_of(capsys)
    assert "length = 101" in text
    assert "abs =" in text


def test_feasibility_check_and_minimal(capsys):
    assert run(["feasibility", "--theta", "0.4923", "--r", "433433"]) == 0
    assert "= True" in out_of(capsys)
    assert run(["feasibility", "--theta", "0.4923", "--minimal"]) == 0
    assert "minimal_r(4923/10000) = 429673" in out_of(capsys)
    assert run(["feasibility", "--theta", "0.492293", "--minimal"]) == 0
    assert "infeasible" in out_of(capsys)
    assert run(["feasibility", "--theta", "0.4923"]) == 1  # needs --r or --minimal


def test_config_file_overrides(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("order=6\n# comment line\n")
    assert run(["tuple", "--order", "5", "--config", str(cfg), "--json"]) == 0
    d = json.loads(out_of(capsys))
    assert d["order"] == 6


def test_config_file_unknown_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("nonsense=1\n")
    assert run(["tuple", "--order", "5", "--config", str(cfg)]) == 1


def test_config_echoed(capsys):
    assert run(["feasibility", "--theta", "0.4923", "--minimal"]) == 0
    first = out_of(capsys).splitlines()[0]
    assert first.startswith("# config command=feasibility seed=0")
    assert "theta=0.4923" in first


def test_tau_moment(capsys):
    assert run(["tau-moment", "--cap", "10", "--A", "1"]) == 0
    assert "sum = 6.00238095238" in out_of(capsys)


def test_verify_all_reduced(capsys):
    code = run(["verify-all", "--quick", "--table-limit", "2000",
                "--delta-limit", "500"])
    text = out_of(capsys)
    assert code == 0, text
    assert "[ok ] exponent-recursion" in text
    assert "gating checks passed" in text
    assert "[recorded]" in text
