import os

import pytest


@pytest.fixture
def extended_precision(monkeypatch):
    """Run the body under the extended (>=113-bit) numeric kernel."""
    monkeypatch.setenv("THETASURF_PRECISION", "extended")
    yield
