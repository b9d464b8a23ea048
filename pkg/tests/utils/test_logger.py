"""
Tests for logger utility
"""
import logging

import pytest

from src.utils.logger import level_from_name, setup_logger


def test_setup_logger_adds_one_handler():
    logger = setup_logger("tiletree-test", logging.DEBUG)
    again = setup_logger("tiletree-test", logging.DEBUG)

    assert logger is again
    assert len(logger.handlers) == 1
    assert logger.level == logging.DEBUG


@pytest.mark.parametrize("name,level", [("debug", logging.DEBUG), (" Warning ", logging.WARNING), ("ERROR", logging.ERROR)])
def test_level_from_name(name, level):
    assert level_from_name(name) == level


def test_unknown_level():
    with pytest.raises(ValueError, match="Unknown log level"):
        level_from_name("chatty")
