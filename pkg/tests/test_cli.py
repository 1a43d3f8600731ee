import pytest

from worker import run_pipeline
from worker.pipeline.formats import dump_cnf, dump_solution, load_graph
from worker.pipeline.generators import gen_sat
from worker.pipeline.models import Formula
from worker.run_pipeline import EXIT_CAPACITY, EXIT_INPUT, EXIT_INTERNAL, EXIT_OK, EXIT_VERIFY, main


@pytest.fixture
def cycle_file(tmp_path):
    path = tmp_path / "cycle.hc"
    path.write_text("p hc 3 3 directed\n1 2\n2 3\n3 1\n")
    return path


@pytest.fixture
def clause8_file(tmp_path):
    path = tmp_path / "clause8.cnf"
    dump_cnf(Formula.from_dimacs(8, [list(range(1, 9))]), path)
    return path


def test_sat_build_reports_dimension(clause8_file, tmp_path, capsys):
    out = tmp_path / "f.qubo"
    assert main(["--mode=sat_build", "--cnf", str(clause8_file), "--out", str(out)]) == EXIT_OK
    stdout = capsys.readouterr().out
    assert "n=16" in stdout
    assert "ancilla_levels=[4, 3, 1]" in stdout
    assert out.read_text().startswith("qubo 16 ")
    assert "clause 0 1 8 9 10 11" in out.read_text()


def test_sat_build_malformed_header(tmp_path):
    bad = tmp_path / "bad.cnf"
    bad.write_text("p cnf two 1\n1 0\n")
    assert main(["--mode=sat_build", "--cnf", str(bad), "--out", str(tmp_path / "x.qubo")]) == EXIT_INPUT


def test_sat_build_empty_formula(tmp_path):
    empty = tmp_path / "empty.cnf"
    empty.write_text("p cnf 2 0\n")
    assert main(["--mode=sat_build", "--cnf", str(empty), "--out", str(tmp_path / "x.qubo")]) == EXIT_INPUT


def test_missing_input_file(tmp_path):
    assert main(["--mode=sat_build", "--cnf", str(tmp_path / "nope.cnf"), "--out", str(tmp_path / "x")]) == EXIT_INPUT


def test_missing_required_flag(tmp_path):
    assert main(["--mode=hc_build", "--out", str(tmp_path / "x")]) == EXIT_INPUT


@pytest.mark.parametrize("baseline, n", [("ours", 4), ("lucas", 9)])
def test_hc_build(cycle_file, tmp_path, capsys, baseline, n):
    out = tmp_path / f"{baseline}.qubo"
    code = main(["--mode=hc_build", "--graph", str(cycle_file), "--out", str(out), f"--baseline={baseline}"])
    assert code == EXIT_OK
    assert f"n={n}" in capsys.readouterr().out


def test_hc_build_undirected(tmp_path, capsys):
    path = tmp_path / "tri.hc"
    path.write_text("p hc 3 3 undirected\n1 2\n2 3\n3 1\n")
    assert main(["--mode=hc_build", "--graph", str(path), "--out", str(tmp_path / "t.qubo")]) == EXIT_OK
    assert "n=8" in capsys.readouterr().out


def test_hc_solve_and_verify(cycle_file, tmp_path, capsys):
    qubo, sol = tmp_path / "c.qubo", tmp_path / "c.sol"
    main(["--mode=hc_build", "--graph", str(cycle_file), "--out", str(qubo)])
    assert main(["--mode=solve", "--qubo", str(qubo), "--method=exhaustive", "--out", str(sol)]) == EXIT_OK
    assert "energy=-12" in capsys.readouterr().out

    code = main(["--mode=verify", "--qubo", str(qubo), "--solution", str(sol), "--graph", str(cycle_file)])
    stdout = capsys.readouterr().out
    assert code == EXIT_OK
    assert "energy=-12" in stdout
    assert "cycle=1 2 3" in stdout


def test_lucas_verify(cycle_file, tmp_path):
    qubo, sol = tmp_path / "l.qubo", tmp_path / "l.sol"
    main(["--mode=hc_build", "--graph", str(cycle_file), "--out", str(qubo), "--baseline=lucas"])
    main(["--mode=solve", "--qubo", str(qubo), "--out", str(sol)])
    assert main(["--mode=verify", "--qubo", str(qubo), "--solution", str(sol), "--graph", str(cycle_file)]) == EXIT_OK


def test_verify_rejects_invalid_decode(cycle_file, tmp_path, capsys):
    qubo, sol = tmp_path / "c.qubo", tmp_path / "zero.sol"
    main(["--mode=hc_build", "--graph", str(cycle_file), "--out", str(qubo)])
    dump_solution([0, 0, 0, 0], sol)
    code = main(["--mode=verify", "--qubo", str(qubo), "--solution", str(sol), "--graph", str(cycle_file)])
    assert code == EXIT_VERIFY
    assert "no edge at position 1" in capsys.readouterr().out


def test_sat_solve_and_verify(tmp_path, capsys):
    cnf, qubo, sol = tmp_path / "f.cnf", tmp_path / "f.qubo", tmp_path / "f.sol"
    dump_cnf(gen_sat(6, 3, 4, seed=4), cnf)
    main(["--mode=sat_build", "--cnf", str(cnf), "--out", str(qubo)])
    assert main(["--mode=solve", "--qubo", str(qubo), "--out", str(sol)]) == EXIT_OK
    assert main(["--mode=verify", "--qubo", str(qubo), "--solution", str(sol), "--cnf", str(cnf)]) == EXIT_OK
    assert "valid=model" in capsys.readouterr().out


def test_verify_rejects_non_model(tmp_path):
    cnf, qubo, sol = tmp_path / "f.cnf", tmp_path / "f.qubo", tmp_path / "f.sol"
    dump_cnf(Formula.from_dimacs(2, [[1, 2]]), cnf)
    main(["--mode=sat_build", "--cnf", str(cnf), "--out", str(qubo)])
    dump_solution([0, 0], sol)
    assert main(["--mode=verify", "--qubo", str(qubo), "--solution", str(sol), "--cnf", str(cnf)]) == EXIT_VERIFY


def test_verify_rejects_foreign_qubo(cycle_file, tmp_path):
    cnf, qubo, sol = tmp_path / "f.cnf", tmp_path / "c.qubo", tmp_path / "f.sol"
    dump_cnf(Formula.from_dimacs(4, [[1, 2, 3, 4]]), cnf)
    main(["--mode=hc_build", "--graph", str(cycle_file), "--out", str(qubo)])
    dump_solution([0, 0, 0, 0], sol)
    assert main(["--mode=verify", "--qubo", str(qubo), "--solution", str(sol), "--cnf", str(cnf)]) == EXIT_VERIFY


def test_solve_capacity_error(tmp_path):
    cnf, qubo = tmp_path / "f.cnf", tmp_path / "f.qubo"
    dump_cnf(gen_sat(12, 4, 4, seed=1), cnf)
    main(["--mode=sat_build", "--cnf", str(cnf), "--out", str(qubo)])
    assert main(["--mode=solve", "--qubo", str(qubo), "--method=exhaustive"]) == EXIT_CAPACITY


def test_solve_sa_is_reproducible(tmp_path, capsys):
    cnf, qubo = tmp_path / "f.cnf", tmp_path / "f.qubo"
    dump_cnf(gen_sat(8, 4, 4, seed=2), cnf)
    main(["--mode=sat_build", "--cnf", str(cnf), "--out", str(qubo)])
    capsys.readouterr()
    args = ["--mode=solve", "--qubo", str(qubo), "--method=sa", "--seed=7", "--sweeps=300", "--restarts=5"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first
    assert "seed=7" in first


def test_solve_bad_temperatures(tmp_path):
    qubo = tmp_path / "q.qubo"
    qubo.write_text("qubo 1 0 1\n0 0 -1\nvar 0 x:1\n")
    args = ["--mode=solve", "--qubo", str(qubo), "--method=sa", "--t-initial=0.01", "--t-final=1"]
    assert main(args) == EXIT_INPUT


def test_scaling_figures(tmp_path, capsys):
    out = tmp_path / "fig3.csv"
    assert main(["--mode=scaling", "--figure=3", "--out", str(out)]) == EXIT_OK
    assert "crossover=19" in capsys.readouterr().out
    assert out.read_text().splitlines()[0] == "N,edges,lucas,ours"

    out1 = tmp_path / "fig1.csv"
    assert main(["--mode=scaling", "--figure=1", "--range=8:8", "--out", str(out1)]) == EXIT_OK
    assert out1.read_text() == "k,chancellor,ours\n8,8,8\n"

    assert main(["--mode=scaling", "--figure=2", "--range=9:5", "--out", str(out1)]) == EXIT_INPUT


def test_generate_modes(tmp_path):
    cnf, graph = tmp_path / "g.cnf", tmp_path / "g.hc"
    assert main(["--mode=generate_sat", "--vars=8", "--clauses=4", "--k=4", "--seed=1", "--out", str(cnf)]) == EXIT_OK
    assert cnf.read_text().splitlines()[1] == "p cnf 8 4"
    assert main(["--mode=generate_graph", "--vertices=5", "--edges=10", "--seed=1", "--out", str(graph)]) == EXIT_OK
    assert len(load_graph(graph).edges) == 10
    assert main(["--mode=generate_sat", "--vars=3", "--clauses=4", "--k=4", "--out", str(cnf)]) == EXIT_INPUT


def test_small_experiment_modes(tmp_path, capsys):
    out = tmp_path / "sat.csv"
    code = main(["--mode=experiment_sat", "--instances=2", "--out", str(out)])
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 4 * 2
    assert "sa_ok" in lines[0] and "exhaustive_ok" in lines[0]
    reports = [line for line in capsys.readouterr().out.splitlines() if line.startswith("k=")]
    assert len(reports) == 4
    all_passed = all("sa_solved=2/2" in line and "unrescued=0" in line for line in reports)
    assert code == (EXIT_OK if all_passed else EXIT_VERIFY)


def test_internal_failure_is_reported_apart_from_verification(cycle_file, tmp_path, monkeypatch, capsys):
    def broken(args):
        raise RuntimeError("predicted dimension 16 but built 17")

    monkeypatch.setitem(run_pipeline.MODES, "hc_build", broken)
    code = main(["--mode=hc_build", "--graph", str(cycle_file), "--out", str(tmp_path / "x")])
    stdout = capsys.readouterr().out
    assert code == EXIT_INTERNAL
    assert "internal error: RuntimeError: predicted dimension 16 but built 17" in stdout
    assert "invalid:" not in stdout
