"""
Centralized logging configuration for curvtype.
"""
import logging
import os
import sys
from datetime import datetime
from typing import Optional, TextIO

DEFAULT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logger(name: str, log_file: Optional[str] = None, level=logging.INFO,
                 stream: Optional[TextIO] = None, fmt: str = DEFAULT_FORMAT) -> logging.Logger:
    """
    Set up a logger with a console and optional file handler.

    Args:
        name: Logger name ("src" configures the whole package)
        log_file: Optional path to a log file
        level: Logging level (int or name)
        stream: Console stream; stderr by default so stdout stays free for reports
        fmt: Record format

    Returns:
        logging.Logger: Configured logger
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO

    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Handlers are attached once; repeated calls only adjust the level
    if getattr(logger, "_curvtype_configured", False):
        return logger

    formatter = logging.Formatter(fmt)

    console_handler = logging.StreamHandler(stream or sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        os.makedirs(os.path.dirname(log_file) or ".", exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    logger.propagate = False
    logger._curvtype_configured = True
    return logger


def get_default_log_path(module_name: str, log_dir: str = "logs") -> str:
    """
    Get the default log file path for a module: <project root>/<log_dir>/<module>_<YYYYMMDD>.log
    """
    base_dir = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    logs_dir = os.path.join(base_dir, log_dir)
    os.makedirs(logs_dir, exist_ok=True)
    timestamp = datetime.now().strftime("%Y%m%d")
    return os.path.join(logs_dir, f"{module_name}_{timestamp}.log")
