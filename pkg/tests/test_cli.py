from __future__ import annotations

import json

from ctxcert import serialize
from ctxcert.cli import main


def run(tmp_path, *argv) -> int:
    return main([str(a) for a in argv])


class TestMabkCommand:
    def test_three_qubit_pipeline(self, tmp_path):
        out = tmp_path / "m3"
        assert run(tmp_path, "mabk", "--n", 3, "--out", out) == 0
        cert = json.loads((out / "certificate.json").read_text())
        assert cert["concentration"]["rank"] == 7
        assert cert["alpha"]["alpha"] == 3 and cert["alpha"]["certified"]
        assert abs(cert["theta"]["theta"] - 4.0) < 1e-6
        assert cert["concentration"]["kernel_fidelity_flipped_state"] > 1 - 1e-10
        assert "config_hash" in cert
        graph = serialize.load_graph(out / "graph.json")
        assert graph.n_vertices == 16 and graph.n_edges == 72
        family = serialize.family_from_dict(
            serialize.read_json(out / "family.json"))
        assert family.n_events == 16

    def test_five_qubit_pipeline(self, tmp_path):
        out = tmp_path / "m5"
        assert run(tmp_path, "mabk", "--n", 5, "--tol", "1e-4",
                   "--out", out) == 0
        cert = json.loads((out / "certificate.json").read_text())
        assert cert["graph"]["n_vertices"] == 256
        assert abs(cert["theta"]["theta"] - 16.0) < 1e-4
        assert cert["concentration"]["rank"] == 31
        assert cert["alpha"]["alpha"] == 10

    def test_even_n_is_usage_error(self, tmp_path, capsys):
        assert run(tmp_path, "mabk", "--n", 4, "--out", tmp_path / "x") == 1
        assert "odd" in capsys.readouterr().err

    def test_out_of_range_n(self, tmp_path):
        assert run(tmp_path, "mabk", "--n", 9, "--out", tmp_path / "x") == 1


class TestGraphstateCommand:
    def test_star3(self, tmp_path):
        out = tmp_path / "star"
        assert run(tmp_path, "graphstate", "--star", 3, "--out", out) == 0
        report = json.loads((out / "paradox.json").read_text())
        assert report["event_family"]["rank"] == 7
        assert not report["lhv"]["feasible"]
        assert report["operators"] == ["+XZZ", "+YYZ", "-XYY", "+YZY"]

    def test_wheel5(self, tmp_path):
        out = tmp_path / "wheel"
        assert run(tmp_path, "graphstate", "--wheel", 5, "--out", out) == 0
        report = json.loads((out / "paradox.json").read_text())
        assert report["event_family"]["rank"] == 31
        assert not report["exponent_recipe_consistent"]

    def test_graph_file_input(self, tmp_path):
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps(
            {"n": 3, "edges": [[0, 1], [1, 2]]}))
        assert run(tmp_path, "graphstate", "--graph", spec_path,
                   "--out", tmp_path / "p3") == 0

    def test_no_universal_vertex_error(self, tmp_path, capsys):
        spec_path = tmp_path / "path5.json"
        spec_path.write_text(json.dumps(
            {"n": 5, "edges": [[0, 1], [1, 2], [2, 3], [3, 4]]}))
        assert run(tmp_path, "graphstate", "--graph", spec_path,
                   "--out", tmp_path / "x") == 1
        assert "universal" in capsys.readouterr().err

    def test_even_n_error(self, tmp_path):
        spec_path = tmp_path / "path4.json"
        spec_path.write_text(json.dumps(
            {"n": 4, "edges": [[0, 1], [0, 2], [0, 3]]}))
        assert run(tmp_path, "graphstate", "--graph", spec_path,
                   "--out", tmp_path / "x") == 1


class TestSolverCommands:
    def test_alpha_and_theta(self, tmp_path, graph3, capsys):
        gpath = tmp_path / "g.json"
        serialize.write_json(serialize.graph_to_dict(graph3), gpath)
        assert run(tmp_path, "alpha", "--graph", gpath,
                   "--out", tmp_path / "alpha.json") == 0
        assert json.loads((tmp_path / "alpha.json").read_text())["alpha"] == 3
        assert run(tmp_path, "theta", "--graph", gpath, "--tol", "1e-7",
                   "--out", tmp_path / "theta.json") == 0
        report = json.loads((tmp_path / "theta.json").read_text())
        assert abs(report["theta"] - 4.0) < 1e-6

    def test_exclusivity_command(self, tmp_path, family3, graph3):
        fpath = tmp_path / "family.json"
        serialize.write_json(serialize.family_to_dict(family3), fpath)
        gpath = tmp_path / "graph.json"
        assert run(tmp_path, "exclusivity", "--family", fpath,
                   "--out", gpath) == 0
        assert serialize.load_graph(gpath).edge_set() == graph3.edge_set()


class TestSimulateAnalyze:
    def test_noiseless_end_to_end(self, tmp_path):
        counts = tmp_path / "counts.csv"
        assert run(tmp_path, "simulate", "--n", 3, "--noiseless",
                   "--shots", 100_000, "--seed", 5, "--out", counts) == 0
        out = tmp_path / "report"
        assert run(tmp_path, "analyze", "--counts", counts, "--seed", 5,
                   "--out", out, "--no-figures") == 0
        report = json.loads((out / "witness.json").read_text())
        mu = report["witness"]["mu"]
        stderr = report["witness"]["stderr"]
        assert abs(mu - 4.0) < 4 * stderr
        assert (out / "plot_vertices.csv").exists()
        assert (out / "plot_signaling.csv").exists()

    def test_seeded_reports_are_byte_identical(self, tmp_path):
        counts = tmp_path / "counts.csv"
        run(tmp_path, "simulate", "--n", 3, "--noiseless", "--shots", 20_000,
            "--seed", 9, "--out", counts)
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        run(tmp_path, "analyze", "--counts", counts, "--seed", 9,
            "--out", out1, "--no-figures", "--groups", 25)
        run(tmp_path, "analyze", "--counts", counts, "--seed", 9,
            "--out", out2, "--no-figures", "--groups", 25)
        assert (out1 / "witness.json").read_bytes() == \
            (out2 / "witness.json").read_bytes()

    def test_fixture_analysis(self, tmp_path):
        out = tmp_path / "fix"
        assert run(tmp_path, "analyze", "--fixture", "paper", "--out", out,
                   "--no-figures") == 0
        report = json.loads((out / "witness.json").read_text())
        assert 3.81 <= report["witness"]["mu"] <= 3.83
        assert report["witness"]["ratio"] >= 1.27
        assert 40 <= report["witness"]["sigma_deviation"] <= 100
        assert 0.010 <= report["signaling"]["mean_abs_eps_prime"] <= 0.0135
        assert report["fixture_checksums"]
        assert report["config_hash"]

    def test_bundle_ingestion(self, tmp_path, reference):
        from ctxcert import analysis

        bundle = analysis.analytic_bundle(reference.rays, reference.state,
                                          reference.edges)
        bpath = tmp_path / "bundle.json"
        serialize.write_json(serialize.bundle_to_dict(bundle), bpath)
        out = tmp_path / "bundle_report"
        assert run(tmp_path, "analyze", "--bundle", bpath, "--out", out,
                   "--no-figures") == 0
        report = json.loads((out / "witness.json").read_text())
        assert report["witness"]["mu"] == 4.0
        assert report["witness"]["sigma_deviation"] is None

    def test_plan_override(self, tmp_path):
        plan_path = tmp_path / "plan.json"
        plan_path.write_text(json.dumps(
            [{"prep": "psi", "meas": 0},
             {"prep": {"ray": 0, "outcome": 0}, "meas": 1}]))
        counts = tmp_path / "tiny.csv"
        assert run(tmp_path, "simulate", "--n", 3, "--plan", plan_path,
                   "--shots", 1000, "--out", counts) == 0
        table = serialize.counts_from_csv(counts)
        assert set(table.records) == {("psi", "v1"), ("post0:v1", "v2")}

    def test_unknown_fixture(self, tmp_path, capsys):
        assert run(tmp_path, "analyze", "--fixture", "nope",
                   "--out", tmp_path / "x") == 1

    def test_requires_exactly_one_input(self, tmp_path):
        assert run(tmp_path, "analyze", "--out", tmp_path / "x") == 1

    def test_malformed_counts_reports_line(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("prep_id,meas_id,count_1,count_0\npsi,v1,xx,3\n")
        assert run(tmp_path, "analyze", "--counts", bad,
                   "--out", tmp_path / "x") == 1
        assert "line 2" in capsys.readouterr().err


class TestEnvironment:
    def test_output_dir_from_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CTXCERT_OUTDIR", str(tmp_path / "envout"))
        assert run(tmp_path, "mabk", "--n", 3) == 0
        assert (tmp_path / "envout" / "certificate.json").exists()

    def test_missing_output_location(self, tmp_path, monkeypatch, capsys):
        monkeypatch.delenv("CTXCERT_OUTDIR", raising=False)
        assert run(tmp_path, "mabk", "--n", 3) == 1
        assert "output" in capsys.readouterr().err
