import sys

from decoy_lm05.cli import main

sys.exit(main())
