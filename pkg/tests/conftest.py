import os
from pathlib import Path

import hypothesis
import pytest

from subjfusion.lexicon import fixture_lexicon

hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=20, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def l0():
    return fixture_lexicon()


@pytest.fixture
def fixtures_dir():
    return FIXTURES
