import os

import pytest

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture(scope="session")
def fixture_images():
    paths = [
        os.path.join(FIXTURES, name)
        for name in ("camera_128.pgm", "moon_128.pgm", "coins_128.pgm")
    ]
    for p in paths:
        assert os.path.exists(p), "missing fixture %s" % p
    return paths
