import sys

from hl2lab.cli import main

sys.exit(main())
