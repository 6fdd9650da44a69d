import pytest
from typer.testing import CliRunner

from cli import app

runner = CliRunner()


@pytest.fixture
def out(isolated_catalog):
    return str(isolated_catalog)


def test_constants_prints_scale_constants():
    result = runner.invoke(app, ["constants", "--N", "100", "--lambda", "0.5"])
    assert result.exit_code == 0
    values = dict(line.split("\t") for line in result.stdout.splitlines() if "\t" in line)
    assert float(values["g"]) == pytest.approx(0.15915494309189535)
    assert "K_N" in values


def test_constants_rejects_bad_lambda():
    result = runner.invoke(app, ["constants", "--N", "100", "--lambda", "2"])
    assert result.exit_code == 3


def test_run_passes(out):
    result = runner.invoke(
        app, ["run", "report-constants", "--N", "64", "--theta", "0.5", "--output-dir", out]
    )
    assert result.exit_code == 0
    assert "✓ report-constants run" in result.stdout


def test_config_error_exit_code(out):
    result = runner.invoke(app, ["run", "light-points", "--N", "16", "--output-dir", out])
    assert result.exit_code == 2


def test_unknown_command(out):
    result = runner.invoke(app, ["run", "draw-pictures", "--N", "16"])
    assert result.exit_code == 2


def test_runtime_error_exit_code(out):
    result = runner.invoke(
        app, ["run", "thick-points", "--N", "8", "--lambda", "1.5", "--output-dir", out]
    )
    assert result.exit_code == 3


def test_config_file_and_catalog(out, tmp_path):
    path = tmp_path / "walk.cfg"
    path.write_text("N=8\nt=2\nreplicas=30\nseed=5\n")
    result = runner.invoke(app, ["run", "run-walk", "--config", str(path), "--output-dir", out])
    assert result.exit_code in (0, 1)

    listing = runner.invoke(app, ["catalog", "list"])
    assert listing.exit_code == 0
    assert "run-walk" in listing.stdout
    run_id = next(
        line.split()[1]
        for line in listing.stdout.splitlines()
        if "run-walk" in line and line.strip()[:1] in ("✓", "✗")
    )

    shown = runner.invoke(app, ["catalog", "show", run_id])
    assert shown.exit_code == 0
    assert "walk-mean-local-time" in shown.stdout

    missing = runner.invoke(app, ["catalog", "show", "01ARZ3NDEKTSV4RRFFQ69G5FAV"])
    assert missing.exit_code == 1


def test_catalog_status(out):
    runner.invoke(app, ["catalog", "migrate"])
    result = runner.invoke(app, ["catalog", "status"])
    assert result.exit_code == 0
    assert "✓ applied  0002_create_runs_table" in result.stdout
