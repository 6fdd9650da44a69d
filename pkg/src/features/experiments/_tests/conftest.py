import pytest

from features.experiments.models.config import load_run_config


@pytest.fixture
def make_config(isolated_catalog):
    """RunConfig factory writing under the isolated output directory."""

    def make(command: str, *overrides: str, path=None):
        return load_run_config(command, path, ["--output-dir", str(isolated_catalog), *overrides])

    return make
