import sys

from innerfn.cli import main

sys.exit(main())
