"""Entry point for the pattern-oracle command line."""

import sys

from src.cli.app import main

if __name__ == "__main__":
  sys.exit(main())
