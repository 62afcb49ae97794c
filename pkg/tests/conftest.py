from __future__ import annotations

import pytest

from microstyle.styles import default_config

from support import DATA


@pytest.fixture
def fa_config():
    return default_config(["formality", "arousal"])


@pytest.fixture
def fab_config():
    return default_config(["formality", "bias", "arousal"])


@pytest.fixture
def data_dir():
    return DATA
