#!/usr/bin/env python3

from __future__ import annotations

import logging
import os

from flask import Flask

logging.basicConfig()
logger = logging.getLogger("accsim")
logger.setLevel(level=logging.INFO)


def create_app(config_name: str | None = None) -> Flask:
    """Create a Flask app holding the accsim settings, used by the CLI."""

    app = Flask(__name__)
    config_name = _get_config_name(config_name)
    logger.debug(f"creating flask app with configuration {config_name}")
    app.config.from_object(config_name)
    app.config.from_envvar("ACCSIM_SETTINGS", silent=True)
    return app


def _get_config_name(config_name: str | None) -> str:
    if config_name is None:
        config_name = os.environ.get("ACCSIM_CONFIG")
    if config_name is None:
        config_name = "accsim.default_config.Config"
    return config_name
