import sys

from openmap.cli import main

sys.exit(main())
