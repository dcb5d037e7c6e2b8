import sys

from chronolex.cli import main

sys.exit(main())
