from pathlib import Path

import pytest

from suspind.fixtures import reference_device


@pytest.fixture
def ref_spec():
    """Canonical 10-turn airgap device (100/10/2 um, X-beam)."""
    return reference_device()


@pytest.fixture(scope="session")
def fixtures_dir():
    return Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def configs_dir():
    return Path(__file__).parent.parent / "configs"
