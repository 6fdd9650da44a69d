import pytest


@pytest.fixture
def isolated_catalog(tmp_path, monkeypatch):
    """Run catalog and output directory under tmp_path; returns the output directory."""
    from config.settings import settings
    from core.storage.database import DB

    monkeypatch.setattr(settings, "database_path", str(tmp_path / "catalog.db"))
    monkeypatch.setattr(settings, "output_dir", str(tmp_path / "runs"))
    DB.disconnect()

    yield tmp_path / "runs"

    DB.disconnect()
