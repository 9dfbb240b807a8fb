import json
import textwrap

import numpy as np
import pytest

from cognet.cli import main

BASE_CONFIG = textwrap.dedent("""
    [scenario]
    rho_w = 4.0e-8
    region_radius_m = 500.0

    [antenna.pt]
    type = "ula"
    M = 4
    [antenna.pr]
    type = "ula"
    M = 4
    [antenna.st]
    type = "ula"
    M = 4
    [antenna.sr]
    type = "ula"
    M = 4

    [placement]
    type = 1
""")

OMNI_ANTENNAS = textwrap.dedent("""
    [antenna.pt]
    type = "omni"
    [antenna.pr]
    type = "omni"
    [antenna.st]
    type = "omni"
    [antenna.sr]
    type = "omni"
""")


def write_config(tmp_path, body, name="run.toml"):
    path = tmp_path / name
    path.write_text(body)
    return str(path)


def run_cli(args):
    return main(args)


class TestMapField:
    def config(self, tmp_path, antennas, resolution=16):
        body = textwrap.dedent(f"""
            [scenario]
            rho_w = 4.0e-8
            {antennas}
            [placement]
            type = 1
            [map_field]
            resolution = {resolution}
            extent_m = 200.0
            omega_s_deg = [0.0, 180.0]
        """)
        return write_config(tmp_path, body)

    def test_omni_map_constant_on_circles(self, tmp_path):
        out = tmp_path / "field.csv"
        code = run_cli(["--command", "map-field", "--config", self.config(tmp_path, OMNI_ANTENNAS), "--out", str(out)])
        assert code == 0
        rows = out.read_text().strip().splitlines()
        assert rows[0] == "x_m,y_m,omega_s_rad,map"
        data = np.loadtxt(rows[1:], delimiter=",")
        radii = np.round(np.hypot(data[:, 0], data[:, 1]), 9)
        for r in np.unique(radii):
            vals = data[radii == r, 3]
            assert float(np.max(vals) - np.min(vals)) < 1e-12

    def test_directional_map_varies_with_angle(self, tmp_path):
        out = tmp_path / "field.csv"
        antennas = BASE_CONFIG.split("[antenna.pt]")[1]
        run_cli(["--command", "map-field", "--config", self.config(tmp_path, "[antenna.pt]" + antennas.split("[placement]")[0]), "--out", str(out)])
        data = np.loadtxt(out.read_text().strip().splitlines()[1:], delimiter=",")
        radii = np.round(np.hypot(data[:, 0], data[:, 1]), 9)
        spreads = [float(np.ptp(data[(radii == r) & (data[:, 2] == 0.0), 3])) for r in np.unique(radii)[2:6]]
        assert max(spreads) > 1e-3

    def test_small_resolution_rejected(self, tmp_path):
        cfg = self.config(tmp_path, OMNI_ANTENNAS, resolution=8)
        assert run_cli(["--command", "map-field", "--config", cfg]) == 2


class TestSweeps:
    def test_af_sweep_schema_and_determinism(self, tmp_path):
        body = BASE_CONFIG + textwrap.dedent("""
            [sweep]
            lo = 1e-10
            hi = 1e-7
            count = 4
            m_p_values = [1, 4]
            m_s_values = [1]
        """)
        cfg = write_config(tmp_path, body)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run_cli(["--command", "af-sweep", "--config", cfg, "--out", str(out1)]) == 0
        assert run_cli(["--command", "af-sweep", "--config", cfg, "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        lines = out1.read_text().strip().splitlines()
        assert lines[0] == "rho_w,m_p,m_s,af"
        assert len(lines) == 1 + 4 * 2
        af = [float(l.split(",")[-1]) for l in lines[1:5]]
        assert all(b >= a for a, b in zip(af, af[1:]))  # monotone in rho

    def test_coverage_sweep_over_tau(self, tmp_path):
        body = BASE_CONFIG + textwrap.dedent("""
            [sweep]
            variable = "tau"
            scale = "db"
            lo = -6.0
            hi = 6.0
            count = 3
            outputs = ["p_cp", "p_cs", "p_c"]
        """)
        cfg = write_config(tmp_path, body)
        out = tmp_path / "cov.csv"
        assert run_cli(["--command", "coverage-sweep", "--config", cfg, "--out", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "tau,p_cp,p_cs,p_c"
        rows = [list(map(float, l.split(","))) for l in lines[1:]]
        for tau, p_cp, p_cs, p_c in rows:
            assert p_c == pytest.approx(p_cp + p_cs, rel=1e-12)
        assert rows[0][1] >= rows[-1][1]  # p_cp falls with tau

    def test_threads_do_not_change_output(self, tmp_path):
        body = BASE_CONFIG + textwrap.dedent("""
            [sweep]
            variable = "rho"
            lo = 1e-9
            hi = 1e-7
            count = 4
            outputs = ["p_cp"]
        """)
        cfg = write_config(tmp_path, body)
        out1, out2 = tmp_path / "s1.csv", tmp_path / "s2.csv"
        assert run_cli(["--command", "coverage-sweep", "--config", cfg, "--out", str(out1), "--threads", "1"]) == 0
        assert run_cli(["--command", "coverage-sweep", "--config", cfg, "--out", str(out2), "--threads", "2"]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_bad_sweep_variable(self, tmp_path):
        body = BASE_CONFIG + "\n[sweep]\nvariable = \"zeta\"\n"
        assert run_cli(["--command", "coverage-sweep", "--config", write_config(tmp_path, body)]) == 2


class TestFindRho:
    def test_json_shape(self, tmp_path):
        body = BASE_CONFIG + textwrap.dedent("""
            [qos]
            p_star = 0.7
            s_star = 0.5
            tau_star_db = -3.0
            setups = [1]
            m_values = [2, 4]
            n_placements = 200
        """)
        cfg = write_config(tmp_path, body)
        out = tmp_path / "rho.json"
        assert run_cli(["--command", "find-rho", "--config", cfg, "--out", str(out), "--seed", "5"]) == 0
        doc = json.loads(out.read_text())
        assert set(doc["results"]) == {"setup_1"}
        per_m = doc["results"]["setup_1"]
        assert set(per_m) == {"M_2", "M_4"}
        assert per_m["M_2"]["status"] == "feasible"
        assert per_m["M_2"]["rho_dagger_w"] > per_m["M_4"]["rho_dagger_w"]


class TestValidate:
    def test_validate_passes_and_reports(self, tmp_path):
        body = BASE_CONFIG + textwrap.dedent("""
            [mc]
            realizations = 400
            region_radius_m = 500.0
            tau_db = [0.0]
        """)
        cfg = write_config(tmp_path, body)
        out = tmp_path / "val.csv"
        code = run_cli(["--command", "validate", "--config", cfg, "--out", str(out), "--seed", "3"])
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "quantity,analytic,mc_mean,mc_se,z"
        names = [l.split(",")[0] for l in lines[1:]]
        assert names == ["map_probe", "af", "p_cp@0dB", "p_cs@0dB"]
        zs = [abs(float(l.split(",")[-1])) for l in lines[1:]]
        assert code == (3 if max(zs) > 4.0 else 0)
        assert code == 0


class TestUsageErrors:
    def test_unknown_flag_exits_two(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["--command", "validate", "--config", "x.toml", "--frobnicate"])
        assert exc.value.code == 2

    def test_missing_config_file(self):
        assert main(["--command", "validate", "--config", "/nonexistent/x.toml"]) == 2

    def test_invalid_config_contents(self, tmp_path):
        cfg = write_config(tmp_path, "[scenario]\nbogus = 1\n")
        assert main(["--command", "validate", "--config", cfg]) == 2
