from pathlib import Path

import pytest


@pytest.fixture(scope="session")
def repo_root() -> Path:
    return Path(__file__).resolve().parents[1]


@pytest.fixture(scope="session")
def scenes_dir(repo_root) -> Path:
    return repo_root / "scenes"


@pytest.fixture(scope="session")
def configs_dir(repo_root) -> Path:
    return repo_root / "configs"
