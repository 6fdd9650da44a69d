import tomllib
from importlib import metadata
from pathlib import Path

MANIFEST_PACKAGES = ("numpy", "scipy", "numba", "duckdb", "pydantic")


def get_version_from_pyproject() -> str:
    try:
        root_dir = Path(__file__).resolve().parents[2]
        pyproject_path = root_dir / "pyproject.toml"

        with open(pyproject_path, "rb") as f:
            data = tomllib.load(f)

            return data["project"]["version"]
    except Exception:
        return "0.1.0"


def get_package_versions() -> dict[str, str]:
    """Versions of the numerical stack, echoed into every run manifest."""
    versions = {"gfflab": get_version_from_pyproject()}
    for name in MANIFEST_PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "absent"
    return versions
