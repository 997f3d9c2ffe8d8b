"""
Entry point for running Cuspidal Tables as a module
"""

import sys

from cuspidal_tables.cli import main

if __name__ == "__main__":
    sys.exit(main())
