import pytest

import salpeterbounds.cli_report as cli
from salpeterbounds.cli_report import (
    BOUNDS_HEADER,
    BoundsRow,
    ConfigError,
    SweepConfig,
    parse_config,
    run_bounds,
    run_critical,
    run_fcurves,
)
from salpeterbounds.potentials import Kind


def write_config(tmp_path, text, name="cfg.txt"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestParseConfig:
    def test_full_roundtrip(self, tmp_path):
        path = write_config(tmp_path, """
            # comment line
            potential = woods-saxon
            a = 1.0
            b = 0.2
            m = 1
            v_min = 1.0
            v_max = 3.5
            v_steps = 11
            threads = 4
            tol = 1e-6
            out = sweep.csv
        """)
        cfg = parse_config(path)
        assert cfg.kind is Kind.WOODS_SAXON
        assert cfg.coupling_grid() == pytest.approx([1.0 + 0.25 * i for i in range(11)])
        assert cfg.single_mass() == 1.0
        assert cfg.threads == 4

    def test_mass_grid(self, tmp_path):
        cfg = parse_config(write_config(tmp_path, "m_min = 0.1\nm_max = 0.5\nm_step = 0.1\n"))
        assert cfg.masses() == pytest.approx([0.1, 0.2, 0.3, 0.4, 0.5])

    def test_unknown_key_has_position(self, tmp_path):
        path = write_config(tmp_path, "potential = exponential\nbogus = 3\n")
        with pytest.raises(ConfigError, match=r":2"):
            parse_config(path)

    def test_bad_value_has_position(self, tmp_path):
        path = write_config(tmp_path, "v_min = banana\n")
        with pytest.raises(ConfigError, match=r":1"):
            parse_config(path)

    def test_missing_equals(self, tmp_path):
        path = write_config(tmp_path, "just a line\n")
        with pytest.raises(ConfigError, match="key = value"):
            parse_config(path)

    def test_unknown_potential(self, tmp_path):
        path = write_config(tmp_path, "potential = yukawa\n")
        with pytest.raises(ConfigError, match="yukawa"):
            parse_config(path)

    def test_incomplete_mass_grid(self, tmp_path):
        path = write_config(tmp_path, "m_min = 0.1\nm_max = 1.0\n")
        with pytest.raises(ConfigError, match="m_step"):
            parse_config(path)

    def test_set_overrides(self, tmp_path):
        path = write_config(tmp_path, "potential = exponential\nv = 2.0\n")
        cfg = parse_config(path, overrides=["v=4.5", "m=1"])
        assert cfg.single_coupling() == 4.5

    def test_set_without_file(self):
        cfg = parse_config(None, overrides=["potential=coulomb", "v=0.4", "m=1"])
        assert cfg.kind is Kind.COULOMB

    def test_bad_override(self):
        with pytest.raises(ConfigError):
            parse_config(None, overrides=["nonsense"])

    def test_threads_env_override(self, monkeypatch):
        cfg = SweepConfig(threads=2)
        monkeypatch.setenv("SALPETER_THREADS", "7")
        assert cfg.effective_threads() == 7
        monkeypatch.setenv("SALPETER_THREADS", "zap")
        with pytest.raises(ConfigError):
            cfg.effective_threads()

    def test_grid_override_requires_r_max(self):
        cfg = SweepConfig(grid_points=2048)
        with pytest.raises(ConfigError):
            cfg.grid_override()


class TestBoundsRow:
    def test_csv_empty_fields(self):
        row = BoundsRow(1.0, 1.0, None, None, None, None, None, "no-binding")
        assert row.csv() == "1,1,,,,,,no-binding"

    def test_ordering_check(self):
        good = BoundsRow(2.0, 1.0, 0.4, 0.5, 0.6, None, None, "bound")
        assert good.ordering_ok(1e-6)
        bad = BoundsRow(2.0, 1.0, 0.6, 0.5, 0.6, None, None, "bound")
        assert not bad.ordering_ok(1e-6)
        gauss_bad = BoundsRow(2.0, 1.0, 0.4, 0.7, 0.6, None, None, "bound")
        assert not gauss_bad.ordering_ok(1e-6)
        non_bound = BoundsRow(2.0, 1.0, None, None, None, None, None, "supercritical")
        assert non_bound.ordering_ok(1e-6)


class TestRunBounds:
    def test_single_row_sweep(self, tmp_path):
        cfg = parse_config(None, overrides=[
            "potential=exponential", "v_min=4.5", "v_max=4.5", "v_steps=1",
            "m=1", f"out={tmp_path / 'rows.csv'}",
        ])
        path, violations = run_bounds(cfg)
        assert violations == 0
        lines = path.read_text().splitlines()
        assert lines[0] == BOUNDS_HEADER
        fields = lines[1].split(",")
        assert fields[-1] == "bound"
        assert float(fields[2]) < float(fields[3])
        assert fields[4] == ""  # no Gaussian column for the exponential kind
        assert lines[-1] == "# ordering_violations=0"

    def test_no_binding_row_is_empty(self, tmp_path):
        cfg = parse_config(None, overrides=[
            "potential=exponential", "v=0.5", "m=1", f"out={tmp_path / 'rows.csv'}",
        ])
        path, violations = run_bounds(cfg)
        assert violations == 0
        line = path.read_text().splitlines()[1]
        assert line == "0.5,1,,,,,,no-binding"

    def test_requires_out(self):
        cfg = parse_config(None, overrides=["potential=exponential", "v=2", "m=1"])
        with pytest.raises(ConfigError):
            run_bounds(cfg)

    def test_determinism_across_threads(self, tmp_path):
        base = ["potential=exponential", "v_min=2.5", "v_max=4.5", "v_steps=2", "m=1"]
        outputs = []
        for threads in (1, 3):
            out = tmp_path / f"rows_{threads}.csv"
            cfg = parse_config(None, overrides=base + [f"threads={threads}", f"out={out}"])
            run_bounds(cfg)
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]


class TestRunFcurves:
    def test_coulomb_family(self, tmp_path):
        out_dir = tmp_path / "curves"
        cfg = parse_config(None, overrides=[
            "potential=coulomb", "v_min=0.3", "v_max=0.4", "v_steps=2",
            "m=1", "e_steps=21", f"out={out_dir}",
        ])
        paths = run_fcurves(cfg)
        names = sorted(p.name for p in paths)
        assert "parabolas.csv" in names and "intersections.csv" in names
        curve = (out_dir / "fcurve_v0.3.csv").read_text().splitlines()
        assert curve[0].startswith("# v=0.3 status=ok")
        assert curve[1] == "e,F,F_prime,delta"
        assert len(curve) > 2
        inter = (out_dir / "intersections.csv").read_text().splitlines()
        assert inter[0] == "v,m,e,status"
        assert len(inter) == 3
        assert all(line.endswith("bound") for line in inter[1:])

    def test_two_coupling_two_mass_reproduction(self, tmp_path):
        # exponential family at two couplings and two masses: two curve
        # files, parabola rows for both masses, four intersection records
        out_dir = tmp_path / "curves"
        cfg = parse_config(None, overrides=[
            "potential=exponential", "v_min=2.5", "v_max=4.5", "v_steps=2",
            "m_min=0.8", "m_max=1.0", "m_step=0.2", "e_steps=9",
            "threads=2", f"out={out_dir}",
        ])
        run_fcurves(cfg)
        for v in ("2.5", "4.5"):
            lines = (out_dir / f"fcurve_v{v}.csv").read_text().splitlines()
            assert lines[0].endswith("status=ok")
            assert len(lines) > 2
        parabolas = (out_dir / "parabolas.csv").read_text().splitlines()
        assert {row.split(",")[0] for row in parabolas[1:]} == {"0.8", "1"}
        inter = (out_dir / "intersections.csv").read_text().splitlines()
        assert len(inter) == 5
        records = [line.split(",") for line in inter[1:]]
        assert all(fields[3] == "bound" for fields in records)
        # the intersection energies respect mass monotonicity at fixed v
        by_v = {}
        for fields in records:
            by_v.setdefault(fields[0], {})[fields[1]] = float(fields[2])
        for v, masses in by_v.items():
            assert masses["1"] > masses["0.8"]

    def test_empty_curve_gets_status_header(self, tmp_path):
        out_dir = tmp_path / "curves"
        cfg = parse_config(None, overrides=[
            "potential=exponential", "v=0.2", "m=1", "e_steps=9", f"out={out_dir}",
        ])
        run_fcurves(cfg)
        lines = (out_dir / "fcurve_v0.2.csv").read_text().splitlines()
        assert lines[0] == "# v=0.2 status=empty"
        assert lines[1] == "e,F,F_prime,delta"
        assert len(lines) == 2

    def test_determinism_across_threads(self, tmp_path):
        outputs = []
        for threads in (1, 4):
            out_dir = tmp_path / f"curves_{threads}"
            cfg = parse_config(None, overrides=[
                "potential=coulomb", "v_min=0.2", "v_max=0.4", "v_steps=3",
                "m=1", "e_steps=15", f"threads={threads}", f"out={out_dir}",
            ])
            paths = run_fcurves(cfg)
            outputs.append({p.name: p.read_bytes() for p in paths})
        assert outputs[0] == outputs[1]

    def test_parabola_values(self, tmp_path):
        out_dir = tmp_path / "curves"
        cfg = parse_config(None, overrides=[
            "potential=coulomb", "v=0.4", "m=1", "e_steps=5", f"out={out_dir}",
        ])
        run_fcurves(cfg)
        rows = (out_dir / "parabolas.csv").read_text().splitlines()
        assert rows[0] == "m,e,g"
        m, e, g = (float(x) for x in rows[1].split(","))
        assert g == pytest.approx(e * e - m * m, rel=1e-12)


class TestRunCritical:
    def test_coulomb_is_usage_error(self):
        cfg = parse_config(None, overrides=["potential=coulomb", "v=0.4", "m=1"])
        with pytest.raises(ConfigError):
            run_critical(cfg)


class TestMainEntry:
    def test_config_error_exit_code(self, tmp_path, capsys):
        bad = write_config(tmp_path, "potential = nope\n")
        assert cli.main(["kg", "--config", str(bad)]) == 1
        assert "config error" in capsys.readouterr().err

    def test_kg_single_point(self, capsys):
        rc = cli.main(["kg", "--set", "potential=coulomb", "--set", "v=0.4", "--set", "m=1"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "status=bound" in out
        assert "e=0.894427191" in out

    def test_gaussian_single_point(self, capsys):
        rc = cli.main([
            "gaussian", "--set", "potential=woods-saxon", "--set", "v=2.5",
            "--set", "m=1", "--set", "a=1", "--set", "b=0.2",
        ])
        assert rc == 0
        assert "E_g=" in capsys.readouterr().out

    def test_gaussian_curve_export(self, tmp_path, capsys):
        out = tmp_path / "gauss_curve.csv"
        rc = cli.main([
            "gaussian", "--set", "potential=woods-saxon", "--set", "v=2.5",
            "--set", "m=1", "--set", "a=1", "--set", "b=0.2", "--set", f"out={out}",
        ])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "s,v,E_g,J1,J2,J3,J4"
        assert len(lines) == 201

    def test_gaussian_wrong_kind(self, capsys):
        rc = cli.main(["gaussian", "--set", "potential=exponential", "--set", "v=2.5", "--set", "m=1"])
        assert rc == 1

    def test_gaussian_out_of_range_coupling(self, capsys):
        rc = cli.main([
            "gaussian", "--set", "potential=woods-saxon", "--set", "v=0.5", "--set", "m=1",
        ])
        assert rc == 1
        assert "parametric span" in capsys.readouterr().err

    def test_salpeter_single_point(self, capsys):
        rc = cli.main([
            "salpeter", "--set", "potential=exponential", "--set", "v=4.5", "--set", "m=1",
        ])
        assert rc == 0
        out = capsys.readouterr().out
        assert "E=-0.28599" in out
        assert "converged=True" in out
