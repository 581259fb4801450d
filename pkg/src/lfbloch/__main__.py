"""Allow `python -m lfbloch` as an alias for the console script."""

import sys

from lfbloch.cli import main

sys.exit(main())
