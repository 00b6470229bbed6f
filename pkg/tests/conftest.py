import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

import pytest
from click.testing import CliRunner

from src.config import config
from src.models.function_spec import Family, FunctionSpec
from src.models.sweep import FpiConfig


@pytest.fixture
def cfg():
    return config['testing']


@pytest.fixture
def fpi(cfg):
    return FpiConfig.from_config(cfg)


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def sine_spec():
    """0F1(;3/2;-t) = sin(2 sqrt t) / (2 sqrt t)"""
    return FunctionSpec(Family.F01, c=1.5)
