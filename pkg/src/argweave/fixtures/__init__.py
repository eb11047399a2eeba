"""Bundled corpus and taxonomy fixtures.

The debate corpus here is small but exercises every scheme, every critical
question evaluator, and the query surface. Tests and demos load it through
:func:`fixture_path` so callers never hardcode install locations.
"""

from pathlib import Path

_HERE = Path(__file__).resolve().parent


def fixture_path(name: str) -> Path:
    """Return the absolute path of a bundled fixture file.

    Raises FileNotFoundError for names that are not shipped with the package.
    """
    path = _HERE / name
    if not path.is_file():
        raise FileNotFoundError(f"no bundled fixture named {name!r}")
    return path


def fixture_names() -> list[str]:
    """List bundled fixture file names, sorted."""
    return sorted(p.name for p in _HERE.glob("*.json"))
