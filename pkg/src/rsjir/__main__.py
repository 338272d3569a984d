import sys

from rsjir.cli import main

sys.exit(main())
