import sys

from trsreach.cli import main

sys.exit(main())
