import json

import pytest
from click.testing import CliRunner

import catalog
from app import create_app
from schema import load_document


def problem(name):
    return load_document(catalog.document(name))


@pytest.fixture
def sl2():
    return problem("sl2")


@pytest.fixture
def sl2_z2():
    return problem("sl2-z2")


@pytest.fixture
def solvable_z2():
    return problem("solvable2-z2")


@pytest.fixture
def abelian_swap():
    return problem("abelian2-swap")


@pytest.fixture
def cli():
    return create_app("testing")


@pytest.fixture
def run(cli):
    runner = CliRunner()

    def invoke(*args):
        result = runner.invoke(cli, list(args), catch_exceptions=False)
        return result

    return invoke


@pytest.fixture
def write_doc(tmp_path):
    def write(doc, name="input.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        return str(path)

    return write
