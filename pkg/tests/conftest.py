import json

import pytest

from twistedk3 import (
    charge_params,
    default_scenario,
    scenario_to_json,
)


@pytest.fixture(scope="session")
def sc():
    return default_scenario()


@pytest.fixture(scope="session")
def params(sc):
    return charge_params(sc)


@pytest.fixture()
def scenario_file(tmp_path):
    """Write a scenario JSON (optionally patched) and return its path."""

    def write(**overrides):
        data = scenario_to_json(default_scenario())
        data.update(overrides)
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps(data))
        return str(path)

    return write
