"""
PanoLayout Main Entry Point

``python -m panolayout`` runs the command line interface.
"""

import os
import sys


def main():
    """Force UTF-8 output on Windows terminals, then hand over to the CLI."""
    if os.name == "nt":
        for stream in (sys.stdout, sys.stderr):
            if hasattr(stream, "reconfigure"):
                stream.reconfigure(encoding="utf-8")

    from panolayout.cli import main as run_cli
    run_cli()


if __name__ == "__main__":
    main()
