#!/usr/bin/env python3

"""
A configuration module, where "Config" is a default configuration and the other
classes are different configuration profiles overriding default settings.
"""

import os

from accsim.util import boolean

_DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


class Config(object):
    DEBUG = False
    TESTING = False
    SCENARIOS_PATH = os.environ.get("ACCSIM_SCENARIOS", default="scenarios.d")
    OUTPUT_DIR = os.environ.get("ACCSIM_OUTPUT", default="output")
    VT_MICRO_COEFFICIENTS = os.environ.get(
        "ACCSIM_VT_MICRO", default=os.path.join(_DATA_DIR, "vt_micro_ldv.txt")
    )
    DEFAULT_JOBS = 1
    WRITE_SVG = boolean(os.environ.get("ACCSIM_SVG", default="false"))


class DevelopmentConfig(Config):
    DEBUG = True


class TestingConfig(Config):
    TESTING = True
    SCENARIOS_PATH = "tests/scenarios.d"
    OUTPUT_DIR = "tests/output"


class TestingNoScenariosConfig(TestingConfig):
    SCENARIOS_PATH = "tests/notfound.d"
