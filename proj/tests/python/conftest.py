import os
import pathlib

import pytest

SOURCE_DIR = pathlib.Path(os.environ.get("TRADESHOCK_SOURCE_DIR", pathlib.Path(__file__).parents[2]))


@pytest.fixture
def demo_dir():
    return SOURCE_DIR / "data" / "demo"


@pytest.fixture
def cli():
    path = os.environ.get("TRADESHOCK_CLI")
    if not path:
        pytest.skip("TRADESHOCK_CLI not set")
    return path
