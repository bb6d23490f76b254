import pytest

from swaphedge.cli import main


def run_cli(argv):
    return main([str(a) for a in argv])


class TestListing:
    def test_list_names_every_experiment(self, capsys):
        assert run_cli(["list"]) == 0
        out = capsys.readouterr().out
        for name in ("table1", "step-sweep", "trajectory", "lambda-compare",
                     "error-distribution", "threshold-surface",
                     "init-compare", "memory-sweep"):
            assert name in out

    def test_unknown_subcommand_exits_with_usage(self):
        with pytest.raises(SystemExit) as info:
            run_cli(["tabel1"])
        assert info.value.code == 2


class TestRunOutputs:
    def test_tiny_run_writes_all_artifacts(self, tmp_path, capsys):
        config = tmp_path / "run.toml"
        config.write_text(
            "samples = 1000\n"
            "seed = 3\n"
            "[table1]\n"
            "tenors = [2]\n"
            "degrees = [0, 1]\n")
        out = tmp_path / "results"
        assert run_cli(["table1", "--config", config, "--out", out]) == 0
        printed = capsys.readouterr().out.splitlines()
        csv_path = out / "table1" / "table1.csv"
        manifest_path = out / "table1" / "manifest.json"
        assert csv_path.exists()
        assert manifest_path.exists()
        assert str(csv_path) in printed
        pngs = list((out / "table1").glob("*.png"))
        assert pngs, "figures expected by default"
        text = csv_path.read_text()
        assert text.startswith("# experiment=table1\n")
        assert "num_payments,degree,v_mean" in text

    def test_rerun_is_byte_identical(self, tmp_path, capsys):
        args = ["table1", "--samples", 1000, "--seed", 5,
                "--out", tmp_path, "--no-figures"]
        assert run_cli(args + ["--workers", 1]) == 0
        first = (tmp_path / "table1" / "table1.csv").read_bytes()
        first_manifest = (tmp_path / "table1" / "manifest.json").read_bytes()
        assert run_cli(args + ["--workers", 4]) == 0
        assert (tmp_path / "table1" / "table1.csv").read_bytes() == first
        assert ((tmp_path / "table1" / "manifest.json").read_bytes()
                == first_manifest)
        capsys.readouterr()

    def test_no_figures_skips_pngs(self, tmp_path, capsys):
        assert run_cli(["table1", "--samples", 1000, "--out", tmp_path,
                        "--no-figures"]) == 0
        assert not list((tmp_path / "table1").glob("*.png"))
        capsys.readouterr()

    def test_flags_beat_config(self, tmp_path, capsys):
        config = tmp_path / "run.toml"
        config.write_text(
            "samples = 1000\n"
            "seed = 3\n"
            "[trajectory]\n"
            "steps = 100\n"
            "points = 2\n")
        out = tmp_path / "results"
        assert run_cli(["trajectory", "--config", config, "--out", out,
                        "--steps", 200, "--no-figures"]) == 0
        capsys.readouterr()
        import json
        manifest = json.loads(
            (out / "trajectory" / "manifest.json").read_text())
        assert manifest["options"]["steps"] == 200  # flag wins
        assert manifest["options"]["points"] == 2   # section survives


class TestConfigErrors:
    def check_error(self, capsys, tmp_path, config_text, fragment,
                    experiment="table1"):
        config = tmp_path / "bad.toml"
        config.write_text(config_text)
        rc = run_cli([experiment, "--config", config, "--out",
                      tmp_path / "results", "--no-figures"])
        assert rc == 2
        err = capsys.readouterr().err
        assert fragment in err

    def test_unknown_top_level_key(self, capsys, tmp_path):
        self.check_error(capsys, tmp_path, "sede = 1\n",
                         "error: sede: unknown top-level key")

    def test_unknown_experiment_section(self, capsys, tmp_path):
        self.check_error(capsys, tmp_path, "[tabel1]\nseed = 1\n",
                         "error: tabel1: unknown experiment section")

    def test_unknown_section_option(self, capsys, tmp_path):
        self.check_error(capsys, tmp_path, "[table1]\ntenting = 1\n",
                         "error: table1.tenting: unknown option")

    def test_bad_option_value(self, capsys, tmp_path):
        self.check_error(capsys, tmp_path, "[table1]\ndegrees = [0, -1]\n",
                         "error: table1.degrees: [1]:")

    def test_missing_config_file(self, capsys, tmp_path):
        rc = run_cli(["table1", "--config", tmp_path / "absent.toml"])
        assert rc == 2
        assert "config file not found" in capsys.readouterr().err

    def test_toml_syntax_error(self, capsys, tmp_path):
        self.check_error(capsys, tmp_path, "samples = = 3\n", "error: ")

    def test_bad_worker_count(self, capsys, tmp_path):
        rc = run_cli(["table1", "--samples", 1000, "--workers", 0,
                      "--out", tmp_path])
        assert rc == 2
        assert "workers: expected an integer >= 1" in capsys.readouterr().err
