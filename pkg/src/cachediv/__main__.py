import sys

from cachediv.cli import main

sys.exit(main())
