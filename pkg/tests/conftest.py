import pytest
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

TEST_ENV = {
    "MDS_LOG_LEVEL": "WARNING",
    "MDS_JOBS": "1",
    "MDS_WINDOW_SLACK": "8",
}


def pytest_addoption(parser):
    parser.addoption("--slow", action="store_true", default=False, help="run slow tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running exhaustive checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def setup_test_environment(monkeypatch):
    """Setup test environment variables"""
    from libs import config

    for key, value in TEST_ENV.items():
        monkeypatch.setenv(key, value)

    # libs.config reads the environment once at import
    monkeypatch.setattr(config, "LOG_LEVEL", TEST_ENV["MDS_LOG_LEVEL"])
    monkeypatch.setattr(config, "JOBS", int(TEST_ENV["MDS_JOBS"]))
    monkeypatch.setattr(config, "WINDOW_SLACK", int(TEST_ENV["MDS_WINDOW_SLACK"]))

    yield


@pytest.fixture
def gf8():
    from libs.gf import default_field
    return default_field(3)


@pytest.fixture
def gf16():
    from libs.gf import default_field
    return default_field(4)
