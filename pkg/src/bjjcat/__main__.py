import sys

from bjjcat.cli import main

sys.exit(main())
