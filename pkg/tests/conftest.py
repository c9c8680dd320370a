import pathlib

import pytest

CORPUS = pathlib.Path(__file__).parent / "corpus"


@pytest.fixture(scope="session")
def corpus_dir() -> pathlib.Path:
    return CORPUS


@pytest.fixture()
def client():
    from fastapi.testclient import TestClient

    from sascalc.service.app import app

    with TestClient(app) as c:
        yield c
