"""Grid-world navigation among movable obstacles with interval-based
decision making under observation, model, action, and blockage uncertainty."""

from importlib import resources
from pathlib import Path

__version__ = "0.1.0"


def scenario_path(name: str) -> Path:
    """Path to a bundled scenario file (map or YAML config)."""
    ref = resources.files(__package__) / "scenarios" / name
    path = Path(str(ref))
    if not path.exists():
        raise FileNotFoundError(f"no bundled scenario {name!r}")
    return path
