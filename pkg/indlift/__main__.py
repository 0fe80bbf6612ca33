"""Main entry point for the indlift command line."""
import sys

from indlift.frontend.cli import main

if __name__ == "__main__":
    sys.exit(main())
