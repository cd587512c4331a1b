import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from localcausal import load_bif
from localcausal.assets import asset_path


@pytest.fixture(scope="session")
def trace_net():
    return load_bif(asset_path("trace"))


@pytest.fixture(scope="session")
def collider_chain_net():
    return load_bif(asset_path("collider_chain"))


@pytest.fixture(scope="session")
def alarm_net():
    return load_bif(asset_path("alarm"))
