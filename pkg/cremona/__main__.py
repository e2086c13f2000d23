import sys

from cremona.cli import main

sys.exit(main())
