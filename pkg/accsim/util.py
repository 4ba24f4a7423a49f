"""Utility functions for accsim"""

from __future__ import annotations

import os
import os.path
import tempfile
from typing import Any, Callable

from accsim import logger

# significant digits used for every number written to CSV output
CSV_DIGITS = 9


def atomic_save(
    obj: Any, dirname: str, filename: str, method: Callable[[Any, str], None]
) -> None:
    """Save the given object into the given directory with the given filename
    using the given method, writing to a temporary file first and renaming the
    temporary file to the final name."""

    prefix, suffix = os.path.splitext(filename)
    prefix = "tmp-" + prefix
    tempfd, tempfilename = tempfile.mkstemp(prefix=prefix, suffix=suffix, dir=dirname)
    os.close(tempfd)
    logger.debug("saving %s to temporary file %s", filename, tempfilename)
    method(obj, tempfilename)
    newname = os.path.join(dirname, filename)
    logger.debug("renaming temporary file %s to %s", tempfilename, newname)
    os.replace(tempfilename, newname)


def format_number(value: float) -> str:
    """Format a number with a fixed count of significant digits so that
    output files diff cleanly between runs."""
    return f"{value:.{CSV_DIGITS}g}"


def boolean(val: Any) -> bool:
    """Convert the given value to a boolean True/False value, if it isn't already.
    True values are '1', 'yes', 'true', and 'on' (case insensitive), everything
    else is False."""

    return str(val).lower() in ("1", "yes", "true", "on")


def parse_window(value: Any, name: str) -> tuple[float, float]:
    """Convert a two-element sequence into a (start, end) tuple of floats,
    raising ValueError if it does not describe an increasing interval."""

    try:
        start, end = (float(v) for v in value)
    except (TypeError, ValueError):
        raise ValueError(f"{name} must be a pair of numbers, got {value!r}")
    if not start < end:
        raise ValueError(f"{name} start {start} must be before its end {end}")
    return start, end
