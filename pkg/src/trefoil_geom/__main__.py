import sys

from trefoil_geom.cli import main

sys.exit(main())
