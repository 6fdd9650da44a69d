import json

import pytest

from core.errors import BadParameterRange
from features.experiments.router import list_runs, run_experiment, show_run


def test_report_constants_run(make_config):
    config = make_config("report-constants", "--N", "100", "--lambda", "0.5", "--seed", "3")
    result = run_experiment(config)

    assert result.exit_code == 0
    assert result.verdicts == []
    names = sorted(path.name for path in result.files)
    assert names == [
        "report-constants_100_3_constants.csv",
        "report-constants_100_3_summary.csv",
        "run.json",
    ]

    manifest = json.loads((result.output_dir / "run.json").read_text())
    assert manifest["command"] == "report-constants"
    assert manifest["master_seed"] == "3"
    assert manifest["config"]["lambda"] == 0.5
    assert "numpy" in manifest["versions"]

    rows = dict(
        line.split(",")
        for line in (result.output_dir / "report-constants_100_3_constants.csv")
        .read_text()
        .splitlines()[1:]
    )
    assert float(rows["c0"]) == pytest.approx(0.2573434, abs=1e-6)
    assert float(rows["a_N"]) == pytest.approx(2 * (1 / (2 * 3.141592653589793)) ** 0.5 * 0.5 * 4.605170186, rel=1e-8)


def test_runs_are_recorded(make_config):
    result = run_experiment(make_config("run-walk", "--N", "8", "--t", "4", "--replicas", "40"))

    rows = list_runs()
    assert [row[0] for row in rows] == [result.run_id]
    assert rows[0][1] == "run-walk"

    run, verdicts = show_run(result.run_id)
    assert run.status == ("passed" if result.passed else "failed")
    assert run.master_seed == "0"
    assert {v[0] for v in verdicts} == {
        "walk-mean-local-time",
        "walk-excursion-count",
        "walk-excursion-dispersion",
    }


def test_failed_run_is_recorded_as_error(make_config):
    with pytest.raises(BadParameterRange):
        run_experiment(make_config("thick-points", "--N", "8", "--lambda", "1.5"))

    (row,) = list_runs()
    assert row[4] == "error"
    assert row[5] == 3


def test_same_seed_same_bytes(make_config, tmp_path, monkeypatch):
    from config.settings import settings

    monkeypatch.setattr(settings, "chunk_size", 8)
    outputs = []
    for threads in ("1", "3"):
        config = make_config(
            "run-walk", "--N", "8", "--t", "3", "--replicas", "20", "--seed", "42",
            "--threads", threads, "--output-dir", str(tmp_path / f"run-{threads}"),
        )
        outputs.append(run_experiment(config, record=False))

    first, second = outputs
    csvs = sorted(p.name for p in first.files if p.suffix in (".csv", ".pgm"))
    assert csvs == sorted(p.name for p in second.files if p.suffix in (".csv", ".pgm"))
    for name in csvs:
        assert (first.output_dir / name).read_bytes() == (second.output_dir / name).read_bytes()


def test_visit_count_runs_only_report_diagnostics(make_config):
    result = run_experiment(
        make_config("run-walk", "--N", "8", "--t", "4", "--replicas", "20", "--mode", "visit-count")
    )
    assert result.verdicts == []
    assert result.exit_code == 0

    summary = (result.output_dir / "run-walk_8_0_summary.csv").read_text()
    assert "diagnostic:walk-mean-local-time" in summary
    assert "diagnostic:walk-excursion-count" in summary

    _, verdicts = show_run(result.run_id)
    assert verdicts == []


def test_light_points_visit_count_keeps_exact_bound_only(make_config):
    result = run_experiment(
        make_config(
            "light-points", "--N", "8", "--t", "2", "--b", "1", "--replicas", "10",
            "--mode", "visit-count",
        )
    )
    assert [v.check for v in result.verdicts] == ["light-point-bound"]
    summary = (result.output_dir / "light-points_8_0_summary.csv").read_text()
    assert "diagnostic:light-first-moment" in summary


def test_verify_isomorphism_covers_single_site_walk_and_every_clt_time(make_config):
    result = run_experiment(
        make_config("verify-isomorphism", "--N", "4", "--replicas", "400", "--probes", "1", "--seed", "9")
    )
    by_check = {v.check: v for v in result.verdicts}
    assert "exp-moment-single-site" in by_check
    single = by_check["exp-moment-single-site-walk"]
    assert single.target == pytest.approx(4 / 3)
    assert single.sigma > 0

    rows = dict(
        line.split(",")
        for line in (result.output_dir / "verify-isomorphism_4_9_summary.csv").read_text().splitlines()[1:]
    )
    skews = [float(rows[f"clt_skewness_t{t}"]) for t in (4, 16, 64)]
    steps = [later - earlier for earlier, later in zip(skews, skews[1:])]
    assert by_check["clt-skewness"].value == pytest.approx(max(steps))
    assert by_check["clt-skewness"].passed == all(step < 0 for step in steps)
