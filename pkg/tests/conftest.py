import pytest
from click.testing import CliRunner

from cliquelab.graph import complete, cycle


@pytest.fixture
def k4():
    return complete(4)


@pytest.fixture
def c5():
    return cycle(5)


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


@pytest.fixture
def cli_app():
    from main import create_cli

    return create_cli()
