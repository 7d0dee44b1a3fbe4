"""
Logger Configuration

Configures the Loguru logger for the CLI and benchmark scripts.
"""

import sys
from typing import Optional

from loguru import logger

from panolayout.config import PanoLayoutConfig


CONSOLE_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
)


def setup_logging(config: Optional[PanoLayoutConfig] = None, verbose: bool = False) -> None:
    """
    Configure logging based on configuration.
    """
    # Remove default handler
    logger.remove()

    logger.add(
        sys.stderr,
        format=CONSOLE_FORMAT,
        level="DEBUG" if verbose else "INFO",
    )

    # File handler lives next to the run outputs
    if config:
        log_path = config.get_output_path() / "panolayout.log"
        logger.add(
            log_path,
            rotation="10 MB",
            retention="1 week",
            level="DEBUG" if config.debug_mode else "INFO",
        )
