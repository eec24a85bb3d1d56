"""CLI behaviour: config handling, CSV output, validation runs, exit codes,
byte-level determinism."""
import json
import os
import subprocess
import sys
import time
from pathlib import Path

import pytest

from ris_secrecy.cli import (
    ConfigError,
    RunConfig,
    SweepSpec,
    build_run_config,
    config_to_dict,
    main,
)
from ris_secrecy.secrecy import Model

REPO_ROOT = Path(__file__).resolve().parent.parent
RECIPES = REPO_ROOT / "recipes"


def _write(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def _v2v_doc(**overrides):
    doc = {"base": {"model": "v2v_ris_ap"}, "outputs": ["asc_approx"]}
    doc.update(overrides)
    return doc


def _read_csv(path):
    lines = Path(path).read_text().strip().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


class TestConfigParsing:
    def test_minimal_config(self, tmp_path):
        cfg = build_run_config({"base": {"model": "v2v_ris_ap"}})
        assert cfg.base.model is Model.V2V_RIS_AP
        assert cfg.base.p_s == 10.0 and cfg.base.n_cells == 16
        assert cfg.outputs == ("asc_exact", "asc_approx", "sop_corrected")
        assert cfg.c_th == 1.0
        assert cfg.mc is None

    def test_relay_gets_default_r_s(self):
        cfg = build_run_config({"base": {"model": "vanet_ris_relay"}})
        assert cfg.base.r_s == 10.0

    @pytest.mark.parametrize(
        "doc",
        [
            {},
            {"base": {"model": "warp_drive"}},
            {"base": {"model": "v2v_ris_ap"}, "outputs": []},
            {"base": {"model": "v2v_ris_ap"}, "outputs": ["asc_exact", "nope"]},
            {"base": {"model": "v2v_ris_ap"}, "outputs": ["mc_asc"]},
            {"base": {"model": "v2v_ris_ap", "r_s": 10.0}},
            {"base": {"model": "v2v_ris_ap"}, "typo_key": 1},
            {"base": {"model": "v2v_ris_ap", "p_s": -3.0}},
            {"base": {"model": "v2v_ris_ap"}, "c_th": 0.0},
            {"base": {"model": "v2v_ris_ap"},
             "sweep": {"param": "r_s", "start": 5, "stop": 20, "steps": 4}},
            {"base": {"model": "v2v_ris_ap"},
             "sweep": {"param": "p_s", "start": 5, "stop": 2, "steps": 4}},
            {"base": {"model": "v2v_ris_ap"},
             "sweep": {"param": "p_s", "start": 1, "stop": 2, "steps": 1}},
            {"base": {"model": "v2v_ris_ap"},
             "sweep": {"param": "n_0", "start": 0.0, "stop": 2, "steps": 4, "scale": "log"}},
            {"base": {"model": "v2v_ris_ap"}, "mc": {"trials": 0}},
        ],
    )
    def test_rejects_bad_documents(self, doc):
        with pytest.raises(ConfigError):
            build_run_config(doc)

    def test_round_trip(self):
        doc = {
            "base": {"model": "vanet_ris_relay", "p_s": 25.0, "r_s": 12.0},
            "sweep": {"param": "c_th", "start": 0.5, "stop": 2.5, "steps": 9, "scale": "linear"},
            "c_th": 1.5,
            "mc": {"trials": 5000, "seed": 7, "batch": 1000},
            "outputs": ["sop_corrected", "mc_sop"],
        }
        cfg = build_run_config(doc)
        assert build_run_config(config_to_dict(cfg)) == cfg

    def test_sweep_values_log_scale(self):
        sw = SweepSpec(param="p_s", start=1.0, stop=100.0, steps=3, scale="log")
        assert sw.values() == pytest.approx([1.0, 10.0, 100.0], rel=1e-12)

    def test_sweep_values_cell_counts_are_integers(self):
        sw = SweepSpec(param="n_cells", start=4.0, stop=32.0, steps=8)
        vals = sw.values()
        assert all(isinstance(v, int) and v >= 1 for v in vals)


class TestEval:
    def test_table_contains_documented_default(self, tmp_path, capsys):
        cfg = _write(tmp_path, _v2v_doc())
        assert main(["eval", "--config", cfg]) == 0
        out = capsys.readouterr().out
        assert "asc_approx" in out
        assert "1.85937081" in out

    def test_csv_row(self, tmp_path):
        cfg = _write(tmp_path, _v2v_doc())
        out = tmp_path / "row.csv"
        assert main(["eval", "--config", cfg, "--csv", "--out", str(out)]) == 0
        header, rows = _read_csv(out)
        assert header == ["asc_approx"]
        assert float(rows[0][0]) == pytest.approx(1.8593708133970917, rel=1e-15)

    def test_missing_config_file(self, tmp_path):
        assert main(["eval", "--config", str(tmp_path / "nope.json")]) == 2

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["eval", "--config", str(path)]) == 2

    def test_bad_config_exit_code(self, tmp_path):
        cfg = _write(tmp_path, _v2v_doc(outputs=[]))
        assert main(["eval", "--config", cfg]) == 2

    def test_mc_output_without_mc_block(self, tmp_path):
        cfg = _write(tmp_path, _v2v_doc(outputs=["mc_asc"]))
        assert main(["eval", "--config", cfg]) == 2

    def test_bad_seed_override(self, tmp_path):
        cfg = _write(tmp_path, _v2v_doc())
        assert main(["eval", "--config", cfg, "--seed", "-5"]) == 2

    def test_dump_config_round_trips_and_is_stable(self, tmp_path):
        cfg_path = _write(tmp_path, _v2v_doc(mc={"trials": 1000}))
        dump1 = tmp_path / "resolved1.json"
        dump2 = tmp_path / "resolved2.json"
        assert main(["eval", "--config", cfg_path, "--dump-config", str(dump1)]) == 0
        resolved = json.loads(dump1.read_text())
        cfg = build_run_config(resolved)
        assert cfg == build_run_config(json.loads(Path(cfg_path).read_text()))
        # dumping the resolved config again must be byte-identical
        cfg_path2 = _write(tmp_path, resolved, name="resolved_as_input.json")
        assert main(["eval", "--config", cfg_path2, "--dump-config", str(dump2)]) == 0
        assert dump1.read_bytes() == dump2.read_bytes()


class TestSweep:
    def test_requires_sweep_section(self, tmp_path):
        cfg = _write(tmp_path, _v2v_doc())
        assert main(["sweep", "--config", cfg]) == 2

    def test_asc_columns_non_decreasing_in_power(self, tmp_path):
        doc = _v2v_doc(outputs=["asc_exact", "asc_approx"],
                       sweep={"param": "p_s", "start": 1.0, "stop": 50.0, "steps": 25})
        out = tmp_path / "sweep.csv"
        assert main(["sweep", "--config", _write(tmp_path, doc), "--out", str(out)]) == 0
        header, rows = _read_csv(out)
        assert header == ["p_s", "asc_exact", "asc_approx"]
        assert len(rows) == 25
        for col in (1, 2):
            vals = [float(r[col]) for r in rows]
            assert all(a <= b for a, b in zip(vals, vals[1:]))

    def test_sop_non_decreasing_in_threshold_for_relay(self, tmp_path):
        doc = {
            "base": {"model": "vanet_ris_relay", "p_s": 1000.0},
            "sweep": {"param": "c_th", "start": 0.5, "stop": 2.5, "steps": 9},
            "outputs": ["sop_corrected"],
        }
        out = tmp_path / "sweep.csv"
        assert main(["sweep", "--config", _write(tmp_path, doc), "--out", str(out)]) == 0
        _, rows = _read_csv(out)
        vals = [float(r[1]) for r in rows]
        assert all(a <= b for a, b in zip(vals, vals[1:]))

    def test_sop_rises_steeply_with_source_distance(self, tmp_path):
        # outage goes from small to near-certain within a few metres
        doc = {
            "base": {"model": "vanet_ris_relay", "p_s": 1000.0, "r_s": 10.0},
            "sweep": {"param": "r_s", "start": 5.0, "stop": 20.0, "steps": 31},
            "outputs": ["sop_corrected"],
        }
        out = tmp_path / "sweep.csv"
        assert main(["sweep", "--config", _write(tmp_path, doc), "--out", str(out)]) == 0
        _, rows = _read_csv(out)
        pts = [(float(r[0]), float(r[1])) for r in rows]
        vals = [v for _, v in pts]
        assert all(a <= b for a, b in zip(vals, vals[1:]))
        lo = max((r for r, v in pts if v < 0.15), default=None)
        hi = min((r for r, v in pts if v > 0.85), default=None)
        assert lo is not None and hi is not None and hi - lo < 5.0

    def test_byte_identical_reruns_and_thread_independence(self, tmp_path, monkeypatch):
        doc = _v2v_doc(outputs=["asc_approx", "mc_asc", "mc_sop"],
                       sweep={"param": "p_s", "start": 2.0, "stop": 20.0, "steps": 5},
                       mc={"trials": 20_000, "seed": 42})
        cfg = _write(tmp_path, doc)
        outs = []
        for name, threads, batch in (("a.csv", "1", None), ("b.csv", "1", None),
                                     ("c.csv", "4", None), ("d.csv", "2", 2000)):
            if batch is not None:
                doc2 = dict(doc)
                doc2["mc"] = {"trials": 20_000, "seed": 42, "batch": batch}
                cfg_path = _write(tmp_path, doc2, name=f"cfg_{name}.json")
            else:
                cfg_path = cfg
            monkeypatch.setenv("RIS_SECRECY_THREADS", threads)
            out = tmp_path / name
            assert main(["sweep", "--config", cfg_path, "--out", str(out)]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1] == outs[2] == outs[3]

    def test_seed_override_changes_mc_columns_only(self, tmp_path):
        doc = _v2v_doc(outputs=["asc_approx", "mc_asc"],
                       sweep={"param": "p_s", "start": 2.0, "stop": 10.0, "steps": 3},
                       mc={"trials": 10_000, "seed": 1})
        cfg = _write(tmp_path, doc)
        out1, out2 = tmp_path / "s1.csv", tmp_path / "s2.csv"
        assert main(["sweep", "--config", cfg, "--out", str(out1)]) == 0
        assert main(["sweep", "--config", cfg, "--out", str(out2), "--seed", "99"]) == 0
        h1, rows1 = _read_csv(out1)
        h2, rows2 = _read_csv(out2)
        assert h1 == h2
        for r1, r2 in zip(rows1, rows2):
            assert r1[1] == r2[1]          # analytic column unchanged
            assert r1[2] != r2[2]          # mc column reseeded


class TestValidate:
    def test_passes_at_defaults_model1(self, tmp_path, capsys):
        doc = _v2v_doc(outputs=["asc_exact"], mc={"trials": 40_000, "seed": 42})
        assert main(["validate", "--config", _write(tmp_path, doc)]) == 0
        out = capsys.readouterr().out
        assert "VALIDATION: PASS" in out

    def test_flags_tiny_sample_sizes(self, tmp_path, capsys):
        doc = _v2v_doc(outputs=["asc_exact"], mc={"trials": 10, "seed": 42})
        assert main(["validate", "--config", _write(tmp_path, doc)]) == 1
        out = capsys.readouterr().out
        assert "INCONCLUSIVE" in out
        assert "std error" in out

    def test_paper_literal_mode_fails_for_relay_interior_point(self, tmp_path, capsys):
        doc = {
            "base": {"model": "vanet_ris_relay", "p_s": 1000.0},
            "outputs": ["asc_exact"],
            "mc": {"trials": 40_000, "seed": 42},
        }
        code = main(["validate", "--config", _write(tmp_path, doc), "--mode", "paper-literal"])
        out = capsys.readouterr().out
        assert code == 1
        assert "sop[paper_literal]" in out and "FAIL" in out

    def test_relay_report_prints_both_variance_candidates(self, tmp_path, capsys):
        doc = {
            "base": {"model": "vanet_ris_relay"},
            "outputs": ["asc_exact"],
            "mc": {"trials": 60_000, "seed": 42},
        }
        assert main(["validate", "--config", _write(tmp_path, doc)]) == 0
        out = capsys.readouterr().out
        assert "gain-sum variance" in out
        assert "corrected=65.98" in out
        assert "paper_literal=96.50" in out

    def test_requires_mc_block(self, tmp_path):
        doc = _v2v_doc(outputs=["asc_exact"])
        assert main(["validate", "--config", _write(tmp_path, doc)]) == 2


class TestRecipes:
    @pytest.mark.parametrize("name", ["fig4", "fig5", "fig6", "fig7", "fig8", "fig9"])
    def test_recipe_parses(self, name):
        doc = json.loads((RECIPES / f"{name}.json").read_text())
        cfg = build_run_config(doc)
        assert isinstance(cfg, RunConfig)
        assert cfg.sweep is not None

    @pytest.mark.parametrize("name", ["fig4", "fig5", "fig6", "fig7", "fig8", "fig9"])
    def test_recipe_runs_end_to_end_within_a_minute(self, name, tmp_path):
        out = tmp_path / f"{name}.csv"
        start = time.perf_counter()
        assert main(["sweep", "--config", str(RECIPES / f"{name}.json"), "--out", str(out)]) == 0
        elapsed = time.perf_counter() - start
        assert elapsed < 60.0
        header, rows = _read_csv(out)
        cfg = build_run_config(json.loads((RECIPES / f"{name}.json").read_text()))
        assert header[0] == cfg.sweep.param
        assert len(rows) == cfg.sweep.steps

    def test_module_entry_point_runs_a_recipe(self, tmp_path):
        out = tmp_path / "fig7.csv"
        env = dict(os.environ)
        env["PYTHONPATH"] = str(REPO_ROOT / "src") + os.pathsep + env.get("PYTHONPATH", "")
        proc = subprocess.run(
            [sys.executable, "-m", "ris_secrecy", "sweep",
             "--config", str(RECIPES / "fig7.json"), "--out", str(out)],
            env=env, capture_output=True, text=True, timeout=120,
        )
        assert proc.returncode == 0, proc.stderr
        header, rows = _read_csv(out)
        assert header[0] == "p_s"
        assert len(rows) == 25
