import io
import subprocess
import sys

import pytest

from fracwave.cli import build_scenario, main, parse_config, parse_config_text
from fracwave.errors import ConfigurationError
from fracwave.nonlinearity import Kind


def run(argv):
    buf = io.StringIO()
    code = main(argv, stdout=buf)
    return code, buf.getvalue()


def test_mlf_subcommand():
    assert run(["mlf", "--alpha", "1", "--beta", "1", "--z", "1"]) == (0, "2.718281828459045\n")


def test_params_examples():
    code, out = run(["params"])
    assert code == 0
    vals = dict(line.split(" = ") for line in out.strip().split("\n"))
    assert float(vals["q"]) == 3.0
    assert float(vals["eps_max"]) == pytest.approx(1.0 / 4.5)
    code, out = run(["params", "--set", "problem.rho=2.3333333333333335", "--set", "problem.eps=0.2"])
    vals = dict(line.split(" = ") for line in out.strip().split("\n"))
    assert float(vals["q"]) == pytest.approx(2.0) and float(vals["eps_max"]) == pytest.approx(2.0 / 7.0)
    assert float(vals["r"]) == pytest.approx(float(vals["mu"]) / (4 * float(vals["M"])))


def test_params_inadmissible_q():
    code, out = run(["params", "--set", "problem.N=1"])
    assert code == 3 and "admissible" in out


def test_alpha_out_of_range_names_key(capsys):
    code, _ = run(["solve", "--alpha", "2.5"])
    err = capsys.readouterr().err
    assert code == 1
    assert "problem.alpha" in err and "(1, 2)" in err


def test_unknown_subcommand_and_key(capsys):
    assert run(["bogus"])[0] == 1
    assert "usage" in capsys.readouterr().err
    assert run(["solve", "--set", "problem.beta=1"])[0] == 1
    assert run([])[0] == 1


def test_config_file(tmp_path):
    path = tmp_path / "lin.cfg"
    path.write_text("# minimal linear scenario\nproblem.kind = zero\ndata.u0 = mode\n"
                    "data.u0_amplitude = 1\nsolver.n_steps = 16\n")
    sc = parse_config(path)
    assert sc.problem.f.kind is Kind.ZERO
    assert sc.solver.n_steps == 16 and sc.solver.t_end == 1.0
    assert sc.problem.u0.coeffs[0] == 1.0
    with pytest.raises(ConfigurationError):
        parse_config(tmp_path / "missing.cfg")


def test_config_text_errors():
    with pytest.raises(ConfigurationError) as err:
        parse_config_text("solver.n_steps = 1")
    assert str(err.value).startswith("solver.n_steps")
    with pytest.raises(ConfigurationError):
        parse_config_text("just words")
    with pytest.raises(ConfigurationError):
        build_scenario("solve", {"problem.eps": "0.5"})


def test_solve_writes_csv(tmp_path):
    out = tmp_path / "run.csv"
    code, text = run(["solve", "--n-steps", "16", "--modes", "8", "--out", str(out)])
    assert code == 0 and "passed" in text
    lines = out.read_text().split("\n")
    assert lines[0].startswith("# scenario=solve seed=1 version=")
    assert lines[1] == "t,weighted_norm,picard_iters,picard_change"
    assert "# status=completed" in lines


def test_solve_picard_failure_exit_code():
    assert run(["solve", "--n-steps", "16", "--set", "solver.picard_max=1"])[0] == 2


def test_failed_verification_exit_code():
    code, _ = run(["convergence", "--modes", "8", "--set", "experiment.min_order=5",
                   "--set", "experiment.ladder=16,32,64"])
    assert code == 3


def test_demo_illposed():
    code, out = run(["demo-illposed"])
    assert code == 0
    assert "# crossing_time=3.09074301344082" in out
    assert out.split("\n")[1] == "t,forward_multiplier,wellposed_multiplier"


def test_uniqueness_subcommand():
    assert run(["uniqueness", "--n-steps", "32"])[0] == 0


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "fracwave", "mlf", "--alpha", "2", "--z", "0"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and float(out.stdout) == 1.0
