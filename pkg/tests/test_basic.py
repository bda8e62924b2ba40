"""Basic tests for the lfwave package."""

import lfwave
from lfwave import __version__


class TestVersion:
    """Test version is accessible."""

    def test_version_exists(self):
        """Version string should be defined."""
        assert __version__ is not None
        assert isinstance(__version__, str)
        assert len(__version__) > 0


class TestExports:
    """Test the top-level namespace."""

    def test_all_names_resolve(self):
        """Every name in __all__ is importable from the package."""
        for name in lfwave.__all__:
            assert hasattr(lfwave, name), name

    def test_default_window(self):
        """Exhaustive checks default to depth 4."""
        assert lfwave.DEFAULT_WINDOW == 4
        assert lfwave.MAX_FIELD_ORDER == 256
