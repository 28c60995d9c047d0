"""End-to-end tests of the command-line entry point."""
from __future__ import annotations

import numpy as np
import pandas as pd
import pytest

from main import EXIT_INPUT_ERROR, EXIT_OK, EXIT_VIOLATION, _float_list, classify_network, main
from scenario.loader import load_scenario, parse_scenario

ZERO_START = """
name = "quiet"
[topology]
labels = ["A", "B", "C"]
[[topology.edges]]
from = "A"
to = "B"
[[topology.edges]]
from = "B"
to = "C"
[sim]
steps = 50
initial = "zero"
[rescale]
normalize = true
"""


@pytest.fixture(autouse=True)
def clean_env(monkeypatch, tmp_path):
    """Isolate every test from the caller's environment and working directory."""
    for name in ("LOG_LEVEL", "MICROGRID_SEED", "MICROGRID_OMEGA_MIN", "MICROGRID_OMEGA_MAX", "MICROGRID_OMEGA_POINTS"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("MICROGRID_OUTPUT_DIR", str(tmp_path / "results"))
    monkeypatch.chdir(tmp_path)


class TestFloatList:

    def test_space_and_comma_separated(self):
        assert _float_list(["1", "3", "6"]) == [1.0, 3.0, 6.0]
        assert _float_list(["1,3,6"]) == [1.0, 3.0, 6.0]
        assert _float_list(None) is None


class TestSpectrumAndClassify:

    def test_spectrum_nigeria(self, capsys):
        assert main(["spectrum", "--scenario", "nigeria"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "μ̃_max = 5.17" in out
        assert "d_max = 4, bracket [4, 8]" in out

    def test_classify_nigeria_sweep(self, capsys):
        assert main(["classify", "--scenario", "nigeria", "--damping", "1", "3", "6"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "network: ComplexModeExists (D=1 ≤ 4)" in out
        assert "network: ComplexModeExists (D=3 ≤ 4)" in out
        assert "network: AllRealGuaranteed (D=6 ≥ √32≈5.657)" in out
        assert "Kano: asymptotically_stable_spiral" in out

    def test_classify_two_grid_indeterminate(self, capsys):
        assert main(["classify", "--scenario", "two_grid"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "Indeterminate (2 < D=2.5 < √8≈2.828); by inspection: ComplexModeExists" in out
        assert "A: asymptotically_stable_node" in out

    def test_debug_dump(self, tmp_path, monkeypatch):
        monkeypatch.setenv("LOG_LEVEL", "debug")
        assert main(["classify", "--scenario", "two_grid"]) == EXIT_OK
        dumps = {path.name.split("-")[0] for path in (tmp_path / "debug").glob("*.json")}
        assert dumps == {"scenario", "network"}


class TestClassifyNetwork:

    PAIR = '[topology]\nlabels = ["A", "B"]\n[[topology.edges]]\nfrom = "A"\nto = "B"\n'

    def test_unit_network_uses_degree_bounds(self):
        nc = classify_network(load_scenario("nigeria").with_damping(6.0))
        assert nc.d_max == 4
        assert nc.bounds is not None

    def test_weighted_coupling_falls_back_to_spectrum(self):
        nc = classify_network(parse_scenario(self.PAIR + "T = 2.0\n"))
        assert nc.d_max is None
        assert nc.bounds is None

    def test_uniform_nonunit_inertia_falls_back_to_spectrum(self):
        nc = classify_network(parse_scenario(self.PAIR + "[params]\nM = 2.0\nD = 2.0\n"))
        assert nc.d_max is None
        assert nc.damping == pytest.approx(1.0)


class TestSimulate:

    def test_nigeria_damping_sweep(self, tmp_path):
        out = tmp_path / "sim"
        assert main(["simulate", "--scenario", "nigeria", "--damping", "1,3,6", "--out", str(out)]) == EXIT_OK
        for D in ("1", "3", "6"):
            frame = pd.read_csv(out / f"simulate-nigeria-D{D}.csv")
            assert len(frame) == 501
            f = frame.filter(like="f_").to_numpy()
            p = frame.filter(like="P_").to_numpy()
            assert f.shape == (501, 11)
            assert np.all((f >= 49.95 - 1e-9) & (f <= 50.05 + 1e-9))
            assert np.all((p >= 29.0 - 1e-9) & (p <= 31.0 + 1e-9))

    def test_same_seed_same_bytes(self, tmp_path):
        first = tmp_path / "a"
        second = tmp_path / "b"
        for out in (first, second):
            assert main(["simulate", "--scenario", "chain3", "--seed", "5", "--out", str(out)]) == EXIT_OK
        name = "simulate-chain3-D1.csv"
        assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_seed_from_environment(self, tmp_path, monkeypatch):
        out_env = tmp_path / "env"
        out_flag = tmp_path / "flag"
        monkeypatch.setenv("MICROGRID_SEED", "7")
        assert main(["simulate", "--scenario", "chain3", "--out", str(out_env)]) == EXIT_OK
        assert main(["simulate", "--scenario", "chain3", "--seed", "7", "--out", str(out_flag)]) == EXIT_OK
        name = "simulate-chain3-D1.csv"
        assert (out_env / name).read_bytes() == (out_flag / name).read_bytes()

    def test_default_output_dir(self, tmp_path):
        assert main(["simulate", "--scenario", "two_grid"]) == EXIT_OK
        assert (tmp_path / "results" / "simulate-two_grid-D2.5.csv").is_file()

    def test_zero_start_is_constant(self, tmp_path):
        path = tmp_path / "quiet.toml"
        path.write_text(ZERO_START, encoding="utf-8")
        assert main(["simulate", "--scenario", str(path), "--out", str(tmp_path / "q")]) == EXIT_OK
        frame = pd.read_csv(tmp_path / "q" / "simulate-quiet-D1.csv")
        assert np.all(frame.filter(like="f_").to_numpy() == 50.0)
        assert np.all(frame.filter(like="P_").to_numpy() == 30.0)

    def test_single_grid_xi_sweep(self, tmp_path):
        out = tmp_path / "xi"
        assert main(["simulate", "--scenario", "single_grid", "--xi", "1", "5", "10", "--out", str(out)]) == EXIT_OK
        for xi in ("1", "5", "10"):
            frame = pd.read_csv(out / f"simulate-single_grid-D1-xi{xi}.csv")
            assert list(frame.columns) == ["t", "f_grid", "P_grid"]
            assert np.all(np.isfinite(frame.to_numpy()))
            assert frame["f_grid"].between(49.95 - 1e-9, 50.05 + 1e-9).all()


class TestSprCheck:

    def test_certified(self, tmp_path, capsys):
        assert main(["spr-check", "--k", "2", "--out", str(tmp_path)]) == EXIT_OK
        assert "StrictlyPositiveReal (M=1, D=1, T=1, k=2)" in capsys.readouterr().out
        frame = pd.read_csv(tmp_path / "spr-k2.csv")
        assert len(frame) == 200
        assert (frame["min_eig"] > 0).all()

    def test_violated(self, capsys):
        code = main(["spr-check", "--M", "10", "--D", "0.01", "--T", "1", "--k", "10", "--omega-points", "50"])
        assert code == EXIT_VIOLATION
        assert "Violated (M=10, D=0.01, T=1, k=10)" in capsys.readouterr().out

    def test_grid_from_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv("MICROGRID_OMEGA_POINTS", "30")
        assert main(["spr-check", "--out", str(tmp_path)]) == EXIT_OK
        assert len(pd.read_csv(tmp_path / "spr-k1.csv")) == 30


class TestInputErrors:

    def test_missing_scenario(self, capsys):
        assert main(["classify", "--scenario", "atlantis"]) == EXIT_INPUT_ERROR
        assert "scenario not found" in capsys.readouterr().err

    def test_invalid_scenario(self, tmp_path, capsys):
        path = tmp_path / "bad.toml"
        path.write_text('[topology]\nlabels = ["A", "B"]\n[params]\nD = [-1.0, 1.0]\n', encoding="utf-8")
        assert main(["classify", "--scenario", str(path)]) == EXIT_INPUT_ERROR
        assert "params.D[0]" in capsys.readouterr().err

    def test_invalid_grid_parameter(self, capsys):
        assert main(["spr-check", "--D", "-1"]) == EXIT_INPUT_ERROR
        assert "error" in capsys.readouterr().err

    def test_invalid_omega_range(self):
        assert main(["spr-check", "--omega-min", "10", "--omega-max", "1"]) == EXIT_INPUT_ERROR


class TestReplicate:

    def test_both_campaigns(self, tmp_path, capsys):
        out = tmp_path / "campaigns"
        assert main(["replicate-paper", "--out", str(out), "--omega-points", "20"]) == EXIT_OK
        written = sorted(path.name for path in out.glob("*.csv"))
        assert written == [
            "campaign1-nigeria-D1.csv",
            "campaign1-nigeria-D3.csv",
            "campaign1-nigeria-D6.csv",
            "campaign2-single-D1-xi1.csv",
            "campaign2-single-D1-xi10.csv",
            "campaign2-single-D1-xi5.csv",
            "campaign2-single-D3-xi1.csv",
            "campaign2-single-D5-xi1.csv",
        ]
        stdout = capsys.readouterr().out
        assert "AllRealGuaranteed (D=6" in stdout
        assert stdout.count("StrictlyPositiveReal") == 3

        single = pd.read_csv(out / "campaign2-single-D1-xi10.csv")
        assert len(single) == 1001
        assert np.all(np.isfinite(single.to_numpy()))

    def test_second_campaign_in_physical_units(self, tmp_path):
        out = tmp_path / "campaigns"
        assert main(["replicate-paper", "--out", str(out), "--omega-points", "20"]) == EXIT_OK
        for path in sorted(out.glob("campaign2-*.csv")):
            frame = pd.read_csv(path)
            f = frame["f_grid"].to_numpy()
            p = frame["P_grid"].to_numpy()
            assert f.min() == pytest.approx(49.95) and f.max() == pytest.approx(50.05), path.name
            assert p.min() == pytest.approx(29.0) and p.max() == pytest.approx(31.0), path.name
