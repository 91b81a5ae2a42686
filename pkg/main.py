"""
Main entry point voor UCD
"""
import logging
import os
import sys
from typing import Optional, Sequence

from dotenv import load_dotenv

from src.cli import UcdCommandLine, build_parser


def setup_logging(level: str = "INFO", log_file: Optional[str] = None):
    """Setup logging configuratie"""
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stdout)]
    if log_file:
        handlers.insert(0, logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main functie"""
    # UCD_LOG_LEVEL en UCD_LOG_FILE mogen uit een .env komen
    load_dotenv()
    args = build_parser().parse_args(argv)

    level = "DEBUG" if args.verbose else os.getenv("UCD_LOG_LEVEL", "INFO")
    setup_logging(level, os.getenv("UCD_LOG_FILE"))

    logger = logging.getLogger(__name__)
    logger.info(f"Starting UCD command '{args.command}'")
    return UcdCommandLine().run(args)


if __name__ == "__main__":
    sys.exit(main())
