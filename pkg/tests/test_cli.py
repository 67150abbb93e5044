import pytest

from cli import main

SWAP = "(·,·) | (1 2) | (·,·)"
IDENTITY = "· | () | ·"


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_forest_normal_form(capsys):
    assert run(capsys, "nf", "--forest", "3,1") == (0, "1,4\n")
    assert run(capsys, "nf", "--forest", "") == (0, "\n")


def test_element_normal_form(capsys):
    code, out = run(capsys, "nf", "--system", "symmetric", "--element", "(·,·) | () | (·,·)")
    assert code == 0
    assert out == IDENTITY + "\n"


def test_element_normal_form_needs_a_system(capsys):
    assert main(["nf", "--element", SWAP]) == 2


def test_verify_symmetric(capsys):
    code, out = run(capsys, "verify", "--system", "symmetric", "--nmax", "3", "--samples", "50")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# cloneforge verify seed=1729 system=symmetric"
    assert lines[1] == "axiom\tn\tstatus\tmode\tchecked\twitness"
    assert len(lines) > 2


def test_verify_is_deterministic(capsys):
    argv = ["verify", "--system", "power:Z/3", "--nmax", "4", "--samples", "40", "--seed", "99"]
    first = run(capsys, *argv)
    assert run(capsys, *argv) == first
    assert first[1].startswith("# cloneforge verify seed=99 ")


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("CLONEFORGE_SEED", "5")
    _, out = run(capsys, "verify", "--system", "symmetric", "--nmax", "2", "--samples", "10")
    assert out.startswith("# cloneforge verify seed=5 ")


def test_verify_failure_exit(capsys):
    code, out = run(capsys, "verify", "--system", "iota:Z/2", "--nmax", "3", "--samples", "20")
    assert code == 1
    assert "\tfail\t" in out


def test_element_commands(capsys):
    assert run(capsys, "mul", "--system", "symmetric", SWAP, SWAP) == (0, IDENTITY + "\n")
    assert run(capsys, "inv", "--system", "symmetric", SWAP) == (0, SWAP + "\n")
    assert run(capsys, "eq", "--system", "symmetric", SWAP, SWAP) == (0, "true\n")
    assert run(capsys, "eq", "--system", "symmetric", SWAP, IDENTITY) == (1, "false\n")


def test_homology_matching(capsys):
    code, out = run(capsys, "homology", "--matching", "--n", "4..5", "--field", "F2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# cloneforge homology seed=1729"
    assert lines[1] == "n\tdegree\trank_F2\tbound\twithin_bound"
    assert "5\t0\t0\t0\tyes" in lines


def test_homology_dlk_needs_a_system(capsys):
    assert main(["homology", "--dlk", "--n", "4"]) == 2


def test_homology_export(capsys, tmp_path):
    single = tmp_path / "l4.txt"
    assert main(["homology", "--matching", "--n", "4", "--export", str(single)]) == 0
    assert single.read_text(encoding="utf-8") == "dim 1 vertices 3\n1 2\n2 1 3\n"
    ranged = tmp_path / "range"
    assert main(["homology", "--matching", "--n", "4..5", "--export", str(ranged)]) == 0
    assert (tmp_path / "range.n4").exists()
    assert (tmp_path / "range.n5").exists()


def test_out_writes_a_file(capsys, tmp_path):
    target = tmp_path / "report.tsv"
    code, out = run(capsys, "stein", "--system", "trivial", "--feet-max", "3", "--out", str(target))
    assert code == 0
    assert out == ""
    text = target.read_text(encoding="utf-8")
    assert text.startswith("# cloneforge stein seed=1729 system=trivial\n")
    assert "vertices\t3\t2\n" in text


def test_budget_exit(capsys):
    assert main(["homology", "--matching", "--n", "20", "--budget", "10"]) == 3


def test_validation_errors(capsys):
    assert main(["verify", "--system", "nothing", "--nmax", "3"]) == 2
    assert "Unknown system" in capsys.readouterr().err
    assert main(["verify", "--system", "symmetric", "--nmax", "0"]) == 2


def test_bad_arguments_exit_through_argparse():
    with pytest.raises(SystemExit) as error:
        main(["verify", "--system", "symmetric"])
    assert error.value.code == 2
    with pytest.raises(SystemExit):
        main(["homology", "--matching", "--dlk", "--n", "3"])
