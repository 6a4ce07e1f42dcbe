from __future__ import annotations

import pytest

from eymsym.eym import run_case
from eymsym.liecat import catalog_load


@pytest.fixture(scope="session")
def catalog():
    return catalog_load()


@pytest.fixture(scope="session")
def reports(catalog):
    """One full pipeline run per case, shared by the whole suite."""
    return {entry.pair.case_id: run_case(entry) for entry in catalog.entries}
