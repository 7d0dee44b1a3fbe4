"""
PanoLayout Utilities

Helper modules for logging and timing.
"""

from panolayout.utils.logger import setup_logging
from panolayout.utils.timing import StageTimer
