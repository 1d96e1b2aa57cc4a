"""
Main entry point for the tree groups toolkit
"""

import logging
import sys
from pathlib import Path

# Add src to path for imports
sys.path.append(str(Path(__file__).parent / "src"))

from src.cli import run
from src.config import LOGGING_CONFIG


def setup_logging():
    """Set up logging configuration."""
    # Create logs directory if it doesn't exist
    log_file = Path(LOGGING_CONFIG["file_path"])
    log_file.parent.mkdir(exist_ok=True)

    # stdout is reserved for command results
    logging.basicConfig(
        level=getattr(logging, LOGGING_CONFIG["level"]),
        format=LOGGING_CONFIG["format"],
        handlers=[
            logging.StreamHandler(sys.stderr),
            logging.FileHandler(log_file)
        ]
    )


def main():
    """Run one subcommand, e.g. ``python main.py act --omega "(012)" --vertex 01 a``."""
    setup_logging()
    try:
        sys.exit(run(sys.argv[1:]))
    except KeyboardInterrupt:
        print("\n⏹️  Interrupted by user", file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    main()
