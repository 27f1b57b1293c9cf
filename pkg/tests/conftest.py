"""Shared fixtures: a session-wide form cache in a temporary directory."""

import pytest

from zetaforge.reducer import FormCache


@pytest.fixture(scope="session")
def form_cache(tmp_path_factory) -> FormCache:
    return FormCache(tmp_path_factory.mktemp("forms"))
