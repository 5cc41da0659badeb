import sys

from qopmat.cli import main

sys.exit(main())
