import json
from pathlib import Path

import pytest

from trdh.bench import (
    COLUMNS,
    PRESETS,
    ConfigError,
    RunConfig,
    build_parser,
    config_hash,
    configs_from_args,
    format_csv,
    main,
    parse_csv,
    render,
    run,
    run_suite,
    strip_timing,
    table_grid,
)

SMALL = dict(m=40, n=100, k_nnz=3)


def small(solver="TRDH", **kw):
    return RunConfig.from_preset("bpdn", solver=solver, problem_params=dict(SMALL), **kw)


class TestConfig:
    def test_grid_has_fourteen_rows(self):
        rows = table_grid("bpdn")
        assert len(rows) == 14
        assert [c.solver for c in rows].count("TR") == 7
        assert len({(c.solver, c.diag, c.subsolver) for c in rows}) == 14

    def test_preset_tolerances(self):
        assert PRESETS["bpdn"]["options"]["eps_abs_inner"] == 1e-5
        assert PRESETS["fh"]["options"]["max_inner_iter"] == 200
        assert RunConfig.from_preset("svm-synthetic", solver="TR").hessian == "lbfgs"

    @pytest.mark.parametrize("kw, field", [
        (dict(problem="rosenbrock"), "problem"),
        (dict(solver="Newton"), "solver"),
        (dict(diag="bfgs"), "diag"),
        (dict(solver="TRDH", subsolver="r2"), "subsolver"),
        (dict(solver="TR", subsolver="cg"), "subsolver"),
        (dict(solver="TR", hessian="dfp"), "hessian"),
        (dict(options={"bogus": 1}), "options.bogus"),
        (dict(options={"eps_abs": -1}), "options"),
        (dict(seed=-1), "seed"),
    ])
    def test_validation(self, kw, field):
        base = dict(problem="bpdn")
        base.update(kw)
        with pytest.raises(ConfigError) as exc:
            RunConfig(**base).validate()
        assert exc.value.field == field

    def test_hash_depends_on_config(self):
        assert config_hash([small()]) == config_hash([small()])
        assert config_hash([small()]) != config_hash([small(seed=1)])


class TestRun:
    def test_record(self):
        rec = run(small())
        assert list(rec) == [name for name, _ in COLUMNS]
        assert rec["solver"] == "TRDH-Spec"
        assert rec["status"] == "first_order" and rec["exit_code"] == 0
        assert rec["h_over_lambda"] == 3
        assert rec["n_prox"] == 2 * rec["iterations"] - 1

    def test_max_iter_exit_code(self):
        rec = run(small(options={"max_iter": 2}))
        assert rec["status"] == "max_iter" and rec["exit_code"] == 2

    def test_error_becomes_row(self):
        rec = run(RunConfig(problem="bpdn", problem_params={"bogus": 1}))
        assert rec["status"] == "error" and rec["exit_code"] == 1
        assert "bogus" in rec["error"]

    def test_svm_accuracy_columns(self):
        rec = run(RunConfig.from_preset("svm-synthetic", solver="R2", problem_params={"n_samples": 60}))
        assert rec["train_acc"] is not None and rec["test_acc"] is not None

    def test_small_solution_reported(self):
        rec = run(RunConfig.from_preset("fh", solver="R2", options={"max_iter": 1}))
        assert len(rec["solution"]) == 5


class TestOutput:
    def test_csv_round_trip(self):
        summary = run_suite([small(), small(solver="R2"), RunConfig(problem="bpdn", problem_params={"x": 1})])
        rows = parse_csv(format_csv(summary["rows"]))
        assert rows == summary["rows"]

    def test_json_round_trip(self, tmp_path):
        out = tmp_path / "r.json"
        summary = run_suite([small()], out, "json")
        loaded = json.loads(out.read_text())
        assert loaded["rows"] == summary["rows"]
        assert loaded["metadata"]["config_sha256"] == config_hash([small()])
        assert loaded["metadata"]["configs"][0]["solver_options"]["eps_abs"] == 1e-5

    def test_table(self):
        text = render(run_suite([small()]), "table")
        assert "TRDH-Spec" in text and "#prox" in text

    def test_parallel_matches_serial(self):
        configs = [small(seed=s) for s in range(3)]
        serial = run_suite(configs)
        parallel = run_suite(configs, jobs=2)
        assert strip_timing(serial["rows"]) == strip_timing(parallel["rows"])

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            run_suite([])
        with pytest.raises(ValueError):
            run_suite([small()], fmt="xml")


class TestCli:
    def test_parse_sets(self):
        args = build_parser().parse_args(
            ["--preset", "bpdn", "--solver", "TR", "--subsolver", "itrdh", "--seed", "1", "2",
             "--set", "eta1=1e-3", "--set", "problem.m=40", "--set", "memory=3"])
        configs = configs_from_args(args)
        assert [c.seed for c in configs] == [1, 2]
        assert configs[0].options["eta1"] == 1e-3
        assert configs[0].problem_params == {"m": 40}
        assert configs[0].memory == 3 and configs[0].hessian == "lsr1"

    def test_main_writes_csv(self, tmp_path):
        out = tmp_path / "r.csv"
        code = main(["--preset", "bpdn", "--solver", "iTRDH", "--set", "problem.m=40", "--set", "problem.n=100",
                     "--set", "problem.k_nnz=3", "--format", "csv", "--out", str(out)])
        assert code == 0
        rows = parse_csv(out.read_text())
        assert rows[0]["solver"] == "iTRDH-Spec"

    def test_main_config_error(self, capsys):
        assert main(["--preset", "bpdn", "--solver", "R2", "--set", "nope=1"]) == 1
        assert "nope" in capsys.readouterr().err

    def test_main_needs_problem(self):
        assert main(["--solver", "R2"]) == 1


class TestSchema:
    def test_records_match_schema(self):
        jsonschema = pytest.importorskip("jsonschema")
        path = Path(__file__).resolve().parents[1] / "docs" / "result.schema.json"
        schema = json.loads(path.read_text())
        summary = run_suite([small(), small(solver="TR"), RunConfig(problem="bpdn", problem_params={"x": 1}),
                             RunConfig.from_preset("svm-synthetic", solver="R2", problem_params={"n_samples": 60})])
        for row in summary["rows"]:
            jsonschema.validate(row, schema)


class TestTableExamples:
    def test_bpdn_table_shape(self):
        rows = run_suite(table_grid("bpdn", seed=0))["rows"]
        assert len(rows) == 14
        assert all(r["status"] == "first_order" and r["h_over_lambda"] == 10 for r in rows)
        itrdh = next(r for r in rows if r["solver"] == "iTRDH-Spec")
        assert itrdh["n_prox"] == itrdh["iterations"]

    def test_empty_svm_path(self):
        rec = run(RunConfig.from_preset("svm", solver="R2", problem_params={"train_path": ""}))
        assert rec["status"] == "error" and rec["exit_code"] == 1

    def test_exit_codes(self):
        code = main(["--preset", "bpdn", "--solver", "R2", "--seed", "0", "--set", "max_iter=1",
                     "--set", "problem.m=40", "--set", "problem.n=100", "--set", "problem.k_nnz=3"])
        assert code == 2
        code = main(["--problem", "svm", "--solver", "R2", "--set", "problem.train_path=/nonexistent"])
        assert code == 1
